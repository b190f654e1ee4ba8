#pragma once

#include <vector>

#include "dtheat/errors.hpp"

namespace dtheat {

// One discrete kernel G_{n,h}: time-step index n, mesh width h, dimension N.
struct KernelParams {
  int n = 1;
  double h = 1.0;
  int dim = 1;

  void validate() const;
  double nu() const { return n - 0.5 * dim; }  // MacDonald order
  double nh() const { return n * h; }
};

struct QuadratureSpec {
  int nodes = 96;
  double alpha = 0.0;  // must equal n - 1 of the params it is used with

  // heuristic degradation flag raised by eval_quadrature (not an error)
  static constexpr double kSmallExponentWarning = 2.5e-3;
};

// Radial sampling of G_{n,h}; log_values stay finite where values underflow.
struct RadialProfile {
  KernelParams params;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> log_values;
};

// ln G_{n,h}(r), r > 0 — the log-space path everything else consumes.
double log_eval_closed_form(const KernelParams& params, double r);

// G_{n,h}(r) via the MacDonald closed form; r = 0 returns the finite limit
// when n > N/2 and throws SingularAtOrigin otherwise.
double eval_closed_form(const KernelParams& params, double r);

struct QuadratureResult {
  double value = 0.0;
  bool accuracy_warning = false;
};

// Independent route: Gauss-Laguerre discretization of the integral
// representation; never touches the MacDonald evaluation.
QuadratureResult eval_quadrature_checked(const KernelParams& params, double r,
                                         const QuadratureSpec& spec);
double eval_quadrature(const KernelParams& params, double r, const QuadratureSpec& spec);

// (1 + h |xi|^2)^{-n}
double fourier_symbol(const KernelParams& params, double xi_norm);

// |grad G_{n,h}| at radius r > 0.
double eval_gradient_magnitude(const KernelParams& params, double r);
double log_eval_gradient_magnitude(const KernelParams& params, double r);

// (G_{n,h} - G_{n-1,h})/h at radius r > 0, n >= 2. Signed, computed as the
// log-space-safe difference of the two kernels.
double eval_time_difference(const KernelParams& params, double r);
// ln |same quantity|, evaluated through the Laplacian-identity closed form,
// which stays accurate at large n where the direct difference cancels.
double log_abs_time_difference(const KernelParams& params, double r);

// order 0, 1, 2 -> 1, 0, 2*N*n*h
double moment(const KernelParams& params, int order);

// ||G_{n,h}||_p by adaptive radial quadrature (p = infinity allowed).
// Throws DivergentNorm outside n - (N/2)(1 - 1/p) > 0.
double lp_norm(const KernelParams& params, double p, double rel_tol = 1e-8);

// analogous radial L^p norms of the gradient / time-difference displays
double gradient_lp_norm(const KernelParams& params, double p, double rel_tol = 1e-8);
double time_difference_lp_norm(const KernelParams& params, double p, double rel_tol = 1e-8);

RadialProfile sample_radial_profile(const KernelParams& params, double r_min,
                                    double r_max, int count);

// surface area of the unit sphere in R^dim
double unit_sphere_area(int dim);

}  // namespace dtheat
