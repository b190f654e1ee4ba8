#include "dtheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dtheat {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // the roundoff floor keeps the recursion from exploding when the requested
  // tolerance sits below what double arithmetic can resolve
  const double floor = 1e-15 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, floor))
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, std::max(0.5 * tol, 0.1 * floor),
                     depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, std::max(0.5 * tol, 0.1 * floor),
                     depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  // seed with a 16-panel composite pass so narrow features are not missed,
  // and to set the absolute tolerance scale
  const int seed = 16;
  const double hstep = (b - a) / seed;
  std::vector<double> fs(seed + 1);
  double rough = 0.0;
  for (int i = 0; i <= seed; ++i) {
    fs[i] = f(a + i * hstep);
    rough += std::abs(fs[i]) * hstep;
  }
  const double abs_tol = std::max(rough, 1e-300) * rel_tol / seed;
  double total = 0.0;
  for (int i = 0; i < seed; ++i) {
    const double x0 = a + i * hstep, x1 = x0 + hstep;
    const double fm = f(0.5 * (x0 + x1));
    const double whole = hstep / 6.0 * (fs[i] + 4.0 * fm + fs[i + 1]);
    total += simpson_rec(f, x0, x1, fs[i], fm, fs[i + 1], whole, abs_tol, max_depth);
  }
  return total;
}

double radial_integral(const std::function<double(double)>& log_f, int dim,
                       double r_scale, double rel_tol) {
  if (!(r_scale > 0.0)) throw std::invalid_argument("radial_integral: r_scale > 0");
  auto g = [&](double u) { return log_f(std::exp(u)) + dim * u; };

  const double uc = std::log(r_scale);
  // bracket the peak of g on a coarse grid
  double upeak = uc, gpeak = -std::numeric_limits<double>::infinity();
  for (int i = -160; i <= 80; ++i) {
    const double u = uc + 0.125 * i;
    const double gu = g(u);
    if (std::isfinite(gu) && gu > gpeak) {
      gpeak = gu;
      upeak = u;
    }
  }
  if (!std::isfinite(gpeak)) return 0.0;

  // integrand below 1e-19 of the peak is dropped
  const double cut = gpeak - 45.0;
  double ulo = upeak, uhi = upeak;
  double step = 0.25;
  while (g(ulo) > cut) {
    ulo -= step;
    if (upeak - ulo > 400.0)
      throw std::runtime_error("radial_integral: integrand not decaying toward r = 0");
  }
  while (g(uhi) > cut) {
    uhi += step;
    if (uhi - upeak > 400.0)
      throw std::runtime_error("radial_integral: integrand not decaying at infinity");
  }

  auto integrand = [&](double u) {
    const double gu = g(u);
    return std::isfinite(gu) ? std::exp(gu - gpeak) : 0.0;
  };
  return std::exp(gpeak) * adaptive_simpson(integrand, ulo, uhi, rel_tol);
}

double radial_sup(const std::function<double(double)>& log_f, double r_lo, double r_hi,
                  int scan_points) {
  const double llo = std::log(r_lo), lhi = std::log(r_hi);
  double best = -std::numeric_limits<double>::infinity();
  double ubest = llo;
  for (int i = 0; i <= scan_points; ++i) {
    const double u = llo + (lhi - llo) * i / scan_points;
    const double v = log_f(std::exp(u));
    if (std::isfinite(v) && v > best) {
      best = v;
      ubest = u;
    }
  }
  // golden-section refinement on the bracketing interval
  const double gr = 0.61803398874989485;
  double a = ubest - (lhi - llo) / scan_points;
  double b = ubest + (lhi - llo) / scan_points;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = log_f(std::exp(x1)), f2 = log_f(std::exp(x2));
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = log_f(std::exp(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = log_f(std::exp(x1));
    }
  }
  return std::exp(std::max({best, f1, f2}));
}

}  // namespace dtheat
