#pragma once

#include <cstdint>

namespace dtheat::sf {

// Tolerance knobs for the series evaluations. rel_tol in (0,1), max_terms >= 1.
struct EvalPrecision {
  double rel_tol = 1e-15;
  int max_terms = 700;
};

// ln Gamma(z) for z > 0. Relative error below 1e-13 on [1e-3, 1e6].
double log_gamma(double z);

// Gamma(z + alpha) / Gamma(z), requires z > 0 and z + alpha > 0.
double gamma_ratio(double z, double alpha);

// Modified Bessel function of the first kind, nu >= 0, 0 < z <= 700.
// Throws std::overflow_error past z = 700 (no scaled variant is provided).
double bessel_i(double nu, double z, EvalPrecision prec = {});

// MacDonald function K_nu(z), z > 0, any real nu (K_nu = K_{-nu} structurally).
// Silent underflow to 0 for huge z with small nu.
double bessel_k(double nu, double z);

// e^z K_nu(z); stays representable where K itself underflows.
double bessel_k_scaled(double nu, double z);

// ln K_nu(z); the form every kernel-facing path consumes.
double log_bessel_k(double nu, double z);

namespace detail {

// Orders above this go through the uniform large-order expansion.
inline constexpr double kUniformOrderThreshold = 150.0;
// Integer-order seeds switch from the ascending series to the
// Thompson-Barnett continued fraction at this argument.
inline constexpr double kSeedSeriesMax = 2.0;
// bessel_i switches from the ascending series to the large-argument
// expansion where the latter reaches full accuracy.
double bessel_i_asym_threshold(double nu);

// Individual routes, exposed so the seam tests can pit them against each other.
double log_bessel_k_half_integer(int m, double z);       // nu = m + 1/2, m >= 0
double log_bessel_k_integer(int nu, double z);           // nu >= 0
double log_bessel_k_uniform_asym(double nu, double z);   // large nu
double bessel_i_series(double nu, double z, EvalPrecision prec);
double bessel_i_asymptotic(double nu, double z);

}  // namespace detail

}  // namespace dtheat::sf
