#include "dtheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dtheat/gauss_laguerre.hpp"
#include "dtheat/quadrature.hpp"
#include "dtheat/special_functions.hpp"

namespace dtheat {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this MacDonald order the Gauss-Laguerre weight no longer controls the
// s -> 0 essential singularity and the reflected fold takes over.
constexpr double kReflectedOrderMax = 9.5;

void require_positive_radius(double r, const char* fn) {
  if (!(r > 0.0)) throw std::domain_error(std::string(fn) + ": requires r > 0");
}

double log_prefactor(const KernelParams& p) {
  return std::log(2.0) - sf::log_gamma(p.n) - 0.5 * p.dim * std::log(4.0 * kPi * p.h);
}

}  // namespace

void KernelParams::validate() const {
  if (n < 1) throw std::domain_error("KernelParams: n >= 1 required");
  if (!(h > 0.0)) throw std::domain_error("KernelParams: h > 0 required");
  if (dim < 1) throw std::domain_error("KernelParams: dim >= 1 required");
}

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::exp(sf::log_gamma(0.5 * dim));
}

double log_eval_closed_form(const KernelParams& params, double r) {
  params.validate();
  require_positive_radius(r, "log_eval_closed_form");
  const double z = r / std::sqrt(params.h);
  return log_prefactor(params) + params.nu() * std::log(0.5 * z) +
         sf::log_bessel_k(params.nu(), z);
}

double eval_closed_form(const KernelParams& params, double r) {
  params.validate();
  if (r < 0.0) throw std::domain_error("eval_closed_form: r >= 0 required");
  if (r == 0.0) {
    if (params.nu() <= 0.0)
      throw SingularAtOrigin("G_{n,h} diverges at the origin for n <= N/2");
    return std::exp(sf::log_gamma(params.nu()) - sf::log_gamma(params.n) -
                    0.5 * params.dim * std::log(4.0 * kPi * params.h));
  }
  return std::exp(log_eval_closed_form(params, r));
}

QuadratureResult eval_quadrature_checked(const KernelParams& params, double r,
                                         const QuadratureSpec& spec) {
  params.validate();
  if (spec.nodes < 8) throw std::domain_error("eval_quadrature: nodes >= 8 required");
  if (spec.alpha != params.n - 1.0)
    throw std::domain_error("eval_quadrature: spec.alpha must equal n - 1");
  if (r == 0.0 && params.nu() <= 0.0)
    throw std::domain_error("eval_quadrature: r = 0 with n <= N/2 diverges");
  require_positive_radius(r, "eval_quadrature");

  const int N = params.dim;
  const double mu = params.nu();
  const double c = r * r / (4.0 * params.h);

  QuadratureResult out;
  out.accuracy_warning = c < QuadratureSpec::kSmallExponentWarning;

  if (mu >= kReflectedOrderMax) {
    // G = (1/Gamma(n)) sum w_i G_{h s_i}(r) over the s^{n-1} e^{-s} rule;
    // normalized weights already carry the 1/Gamma(n).
    const auto& rule = gauss_laguerre_rule(spec.nodes, spec.alpha);
    double acc = 0.0;
    for (int i = 0; i < spec.nodes; ++i) {
      const double s = rule.nodes[i];
      acc += rule.weights[i] *
             std::exp(-0.5 * N * std::log(4.0 * kPi * params.h * s) - c / s);
    }
    out.value = acc;
    return out;
  }

  // Small-order regime: fold the integral by the exact reflection s <-> c/s,
  //   int_0^inf s^{mu-1} e^{-s-c/s} ds
  //     = int_{sqrt c}^inf [s^{mu-1} + c^mu s^{-mu-1}] e^{-s-c/s} ds,
  // which removes the essential singularity at s = 0, then integrate against
  // the alpha = 0 Laguerre weight shifted to sqrt(c). More nodes are used as
  // c shrinks (the integrand's branch point sits at distance sqrt(c) behind
  // the left endpoint).
  int m = spec.nodes;
  if (c < 0.05)
    m = std::max(m, 384);
  else if (c < 0.3)
    m = std::max(m, 192);
  const auto& rule = gauss_laguerre_rule(m, 0.0);
  const double sc = std::sqrt(c);
  const double lc = std::log(c);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double s = sc + rule.nodes[i];
    const double ls = std::log(s);
    const double f = std::exp((mu - 1.0) * ls - c / s) +
                     std::exp(mu * lc - (mu + 1.0) * ls - c / s);
    acc += rule.weights[i] * f;
  }
  const double log_value = -0.5 * N * std::log(4.0 * kPi * params.h) -
                           sf::log_gamma(params.n) - sc + std::log(acc);
  out.value = std::exp(log_value);
  return out;
}

double eval_quadrature(const KernelParams& params, double r, const QuadratureSpec& spec) {
  return eval_quadrature_checked(params, r, spec).value;
}

double fourier_symbol(const KernelParams& params, double xi_norm) {
  params.validate();
  if (xi_norm < 0.0) throw std::domain_error("fourier_symbol: xi_norm >= 0 required");
  return std::exp(-params.n * std::log1p(params.h * xi_norm * xi_norm));
}

double log_eval_gradient_magnitude(const KernelParams& params, double r) {
  params.validate();
  require_positive_radius(r, "eval_gradient_magnitude");
  const double z = r / std::sqrt(params.h);
  return log_prefactor(params) - 0.5 * std::log(params.h) +
         params.nu() * std::log(0.5 * z) + sf::log_bessel_k(params.nu() - 1.0, z);
}

double eval_gradient_magnitude(const KernelParams& params, double r) {
  return std::exp(log_eval_gradient_magnitude(params, r));
}

namespace {

// (e^a - e^b)/h without forming either exponential at full scale.
double log_space_difference(double a, double b, double h) {
  if (a == b) return 0.0;
  const double hi = std::max(a, b), lo = std::min(a, b);
  const double mag = std::exp(hi + std::log1p(-std::exp(lo - hi))) / h;
  return a > b ? mag : -mag;
}

}  // namespace

double eval_time_difference(const KernelParams& params, double r) {
  params.validate();
  if (params.n < 2) throw std::domain_error("eval_time_difference: n >= 2 required");
  require_positive_radius(r, "eval_time_difference");
  KernelParams prev = params;
  prev.n -= 1;
  return log_space_difference(log_eval_closed_form(params, r),
                              log_eval_closed_form(prev, r), params.h);
}

// Same quantity through the Laplacian identity
//   (G_n - G_{n-1})/h = Delta G_n = (A/h)(z/2)^nu [K_{nu-2} - (N/z) K_{nu-1}],
// which avoids the O(1/n) cancellation of the direct difference; the norm
// integrals at large n need this form. Returns ln of the magnitude.
double log_abs_time_difference(const KernelParams& params, double r) {
  params.validate();
  if (params.n < 2) throw std::domain_error("time difference: n >= 2 required");
  require_positive_radius(r, "time difference");
  const double z = r / std::sqrt(params.h);
  const double nu = params.nu();
  const double lpref = log_prefactor(params) + nu * std::log(0.5 * z) - std::log(params.h);
  const double lt1 = sf::log_bessel_k(nu - 2.0, z);
  const double lt2 = std::log(params.dim / z) + sf::log_bessel_k(nu - 1.0, z);
  if (lt1 == lt2) return -kInf;
  const double hi = std::max(lt1, lt2), lo = std::min(lt1, lt2);
  return lpref + hi + std::log1p(-std::exp(lo - hi));
}

double moment(const KernelParams& params, int order) {
  params.validate();
  switch (order) {
    case 0: return 1.0;
    case 1: return 0.0;
    case 2: return 2.0 * params.dim * params.nh();
    default: throw std::domain_error("moment: order must be 0, 1 or 2");
  }
}

namespace {

// Theorem-style integrability margin n - (N/2)(1 - 1/p); the gradient and
// time-difference displays require it above 1/2 and 1 respectively.
double integrability_margin(const KernelParams& params, double p) {
  const double inv_p = p == kInf ? 0.0 : 1.0 / p;
  return params.n - 0.5 * params.dim * (1.0 - inv_p);
}

// shared engine for the three radial L^p norms
double radial_lp(const KernelParams& params, double p,
                 const std::function<double(double)>& log_abs_f, double sup_limit_at_0,
                 bool limit_finite, double rel_tol, double required_margin,
                 const char* what) {
  params.validate();
  if (!(p >= 1.0)) throw std::domain_error("lp_norm: p >= 1 required");
  const int N = params.dim;

  if (!(integrability_margin(params, p) > required_margin)) {
    // confirm numerically that the integrand is not integrable at 0 before refusing
    const double scale = std::sqrt(params.nh());
    const double pp = p == kInf ? 1.0 : p;
    const double g1 = pp * log_abs_f(1e-8 * scale) + N * std::log(1e-8 * scale);
    const double g2 = pp * log_abs_f(1e-10 * scale) + N * std::log(1e-10 * scale);
    if (g2 >= g1 - 2.0 || p == kInf)
      throw DivergentNorm(std::string(what) + ": outside n - (N/2)(1 - 1/p) > " +
                          std::to_string(required_margin));
  }

  if (p == kInf) {
    const double scale = std::sqrt(params.nh());
    double sup = radial_sup(log_abs_f, 1e-4 * scale, 60.0 * scale + 60.0 * params.nh());
    if (limit_finite) sup = std::max(sup, sup_limit_at_0);
    return sup;
  }

  auto log_integrand = [&](double r) { return p * log_abs_f(r); };
  const double integral =
      unit_sphere_area(N) * radial_integral(log_integrand, N, std::sqrt(params.nh()), rel_tol);
  return std::pow(integral, 1.0 / p);
}

}  // namespace

double lp_norm(const KernelParams& params, double p, double rel_tol) {
  params.validate();
  const double at0 = params.nu() > 0.0 ? eval_closed_form(params, 0.0) : kInf;
  return radial_lp(
      params, p, [&](double r) { return log_eval_closed_form(params, r); }, at0,
      params.nu() > 0.0, rel_tol, 0.0, "lp_norm");
}

double gradient_lp_norm(const KernelParams& params, double p, double rel_tol) {
  return radial_lp(
      params, p, [&](double r) { return log_eval_gradient_magnitude(params, r); }, 0.0,
      false, rel_tol, 0.5, "gradient_lp_norm");
}

double time_difference_lp_norm(const KernelParams& params, double p, double rel_tol) {
  if (params.n < 2) throw std::domain_error("time_difference_lp_norm: n >= 2 required");
  KernelParams prev = params;
  prev.n -= 1;
  const bool finite0 = params.nu() > 1.0;
  double at0 = kInf;
  if (finite0)
    at0 = std::abs(eval_closed_form(params, 0.0) - eval_closed_form(prev, 0.0)) / params.h;
  return radial_lp(
      params, p, [&](double r) { return log_abs_time_difference(params, r); }, at0,
      finite0, rel_tol, 1.0, "time_difference_lp_norm");
}

RadialProfile sample_radial_profile(const KernelParams& params, double r_min,
                                    double r_max, int count) {
  params.validate();
  if (!(0.0 < r_min && r_min < r_max))
    throw std::domain_error("sample_radial_profile: 0 < r_min < r_max required");
  if (count < 2) throw std::domain_error("sample_radial_profile: count >= 2 required");

  RadialProfile prof;
  prof.params = params;
  prof.radii.resize(count);
  prof.values.resize(count);
  prof.log_values.resize(count);
  const double llo = std::log(r_min), lhi = std::log(r_max);
  for (int i = 0; i < count; ++i) {
    const double r = std::exp(llo + (lhi - llo) * i / (count - 1.0));
    prof.radii[i] = r;
    prof.log_values[i] = log_eval_closed_form(params, r);
    prof.values[i] = std::exp(prof.log_values[i]);
  }
  return prof;
}

}  // namespace dtheat
