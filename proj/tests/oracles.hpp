// Test-side oracles, independent of the library implementation paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

// Plain recursive adaptive Simpson.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 48) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// K_nu(z) from the integral representation int_0^inf e^{-z cosh t} cosh(nu t) dt,
// via adaptive quadrature on a truncated interval.
inline double besselk_integral_form(double nu, double z, double tol = 1e-13) {
  auto integrand = [nu, z](double t) { return std::exp(-z * std::cosh(t)) * std::cosh(nu * t); };
  double tmax = 1.0;
  while (z * std::cosh(tmax) - std::abs(nu) * tmax < z + 60.0 && tmax < 300.0) tmax += 0.5;
  return adaptive_simpson(integrand, 0.0, tmax, tol * std::exp(-z));
}

inline double central_difference(const std::function<double(double)>& f, double x,
                                 double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

inline double second_difference(const std::function<double(double)>& f, double x,
                                double step) {
  return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    v[i] = std::exp(llo + (lhi - llo) * i / (count - 1.0));
  return v;
}

// O(M^2) discrete Fourier transform, the reference for the fast transform.
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t m = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const double ang = sign * 2.0 * 3.14159265358979323846 *
                         static_cast<double>(j * k % m) / static_cast<double>(m);
      acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / static_cast<double>(m) : acc;
  }
  return out;
}

}  // namespace oracles
