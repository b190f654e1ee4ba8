#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <vector>

#include "dtheat/errors.hpp"

namespace dtheat {

// Uniform periodic box [-L/2, L/2)^dim with M points per axis, M a power of two.
struct Grid {
  int dim = 1;
  double extent = 1.0;       // L
  int points_per_axis = 8;   // M

  void validate() const;
  double spacing() const { return extent / points_per_axis; }
  std::size_t size() const;
  // node coordinate along one axis
  double coord(int i) const { return -0.5 * extent + spacing() * i; }
  // angular wavenumber of mode index k along one axis
  double wavenumber(int k) const;
  bool operator==(const Grid& o) const = default;
};

struct Field {
  Grid grid;
  std::vector<double> values;

  void validate() const;
  double mean() const;
};

// g(jh, .) for j = 1..J, with the declared L1-decay exponent gamma.
struct ForcingSchedule {
  Grid grid;
  std::vector<Field> steps;
  double gamma = 1.0;

  void validate() const;
  // smallest C with ||g(jh)||_1 <= C j^{-gamma} over the supplied steps
  double decay_constant() const;
};

enum class SolveRoute { resolvent_recursion, direct_kernel };

struct SolutionTrace {
  double h = 0.0;
  int dim = 0;
  SolveRoute route = SolveRoute::resolvent_recursion;
  std::map<int, Field> fields_by_step;
  // relative L2 gap against the other route at the last recorded step
  std::optional<double> route_disagreement;
};

// Frequency-side view of a Field; the workhorse behind both solve routes.
class SpectralField {
 public:
  static SpectralField forward(const Field& f);
  Field inverse() const;

  // multiply by (1 + h |xi|^2)^{-n}
  void apply_symbol_power(int n, double h);
  // u <- (u + h g_scale g) / (1 + h |xi|^2); g may be null
  void resolvent_step(double h, const SpectralField* g, double g_scale = 1.0);
  // u += scale * (1 + h |xi|^2)^{-n} * g
  void add_scaled_symbol_power(const SpectralField& g, int n, double h, double scale);

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  std::vector<std::complex<double>> modes_;
};

Field spectral_resolvent_step(const Field& state, double h, const Field* forcing = nullptr);

Field apply_kernel_spectral(const Field& f, int n, double h);

struct DirectApplyResult {
  Field field;
  double tail_over_peak = 0.0;  // sampled kernel boundary value over its peak
  bool tail_warning = false;    // raised when the tail exceeds 1e-12 of the peak
};

// Real-space circular convolution with the sampled kernel; O(size^2), the
// independent route for acceptance checks (intended for dim = 1 grids).
DirectApplyResult apply_kernel_direct(const Field& f, int n, double h);

// Duhamel solution u(nh) = G_{n,h}*f + h sum_j G_{n-j+1,h}*g(jh).
// record_steps defaults to {n_max}; when cross_check is set the other route is
// evaluated at the last recorded step and the relative L2 gap stored.
SolutionTrace solve(const Field& f, const ForcingSchedule* forcing, double h, int n_max,
                    SolveRoute route, std::vector<int> record_steps = {},
                    bool cross_check = true);

double field_lp_norm(const Field& f, double p);

struct FieldMoments {
  double mass = 0.0;
  std::array<double, 3> first{0.0, 0.0, 0.0};
  double second = 0.0;
  bool boundary_warning = false;
};

FieldMoments field_moments(const Field& f);

// G_{n,h} sampled at the grid nodes (radially, distances from the box center).
Field sample_kernel_field(const Grid& grid, int n, double h);

// max |f| on the boundary shell divided by max |f| overall
double boundary_over_peak(const Field& f);

}  // namespace dtheat
