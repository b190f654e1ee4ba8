#pragma once

#include <functional>

namespace dtheat {

// Adaptive Simpson on [a, b]. rel_tol is relative to the accumulated integral
// scale; caller supplies an absolute floor via scale_hint when the integral
// can legitimately be tiny.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, int max_depth = 40);

// integral over (0, inf) of exp(log_f(r)) * r^{dim-1} dr, done in u = ln r.
// log_f must be the log of a nonnegative integrand; r_scale sets where the
// mass lives (the integrator brackets the peak from there).
double radial_integral(const std::function<double(double)>& log_f, int dim,
                       double r_scale, double rel_tol);

// sup over r in [r_lo, r_hi] of exp(log_f(r)): log-spaced scan plus golden
// section refinement around the best sample.
double radial_sup(const std::function<double(double)>& log_f, double r_lo, double r_hi,
                  int scan_points = 600);

}  // namespace dtheat
