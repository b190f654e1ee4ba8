#include "dtheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dtheat/fft.hpp"
#include "dtheat/kernel.hpp"

namespace dtheat {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// visit every mode with its |xi|^2
template <typename F>
void for_each_mode(const Grid& g, F&& fn) {
  const int m = g.points_per_axis;
  std::vector<double> xi2(m);
  for (int k = 0; k < m; ++k) {
    const double w = g.wavenumber(k);
    xi2[k] = w * w;
  }
  std::size_t idx = 0;
  switch (g.dim) {
    case 1:
      for (int i = 0; i < m; ++i) fn(idx++, xi2[i]);
      break;
    case 2:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) fn(idx++, xi2[i] + xi2[j]);
      break;
    default:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) fn(idx++, xi2[i] + xi2[j] + xi2[k]);
  }
}

// visit every node with its coordinates
template <typename F>
void for_each_node(const Grid& g, F&& fn) {
  const int m = g.points_per_axis;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t idx = 0;
  switch (g.dim) {
    case 1:
      for (int i = 0; i < m; ++i) {
        x[0] = g.coord(i);
        fn(idx++, x);
      }
      break;
    case 2:
      for (int i = 0; i < m; ++i) {
        x[0] = g.coord(i);
        for (int j = 0; j < m; ++j) {
          x[1] = g.coord(j);
          fn(idx++, x);
        }
      }
      break;
    default:
      for (int i = 0; i < m; ++i) {
        x[0] = g.coord(i);
        for (int j = 0; j < m; ++j) {
          x[1] = g.coord(j);
          for (int k = 0; k < m; ++k) {
            x[2] = g.coord(k);
            fn(idx++, x);
          }
        }
      }
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": grids differ");
}

}  // namespace

void Grid::validate() const {
  if (dim < 1 || dim > 3) throw std::domain_error("Grid: dim must be 1..3");
  if (!(extent > 0.0)) throw std::domain_error("Grid: extent must be positive");
  if (points_per_axis < 8 || !is_pow2(points_per_axis))
    throw std::domain_error("Grid: points_per_axis must be a power of two >= 8");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

double Grid::wavenumber(int k) const {
  const int m = points_per_axis;
  const int signed_k = k < m / 2 ? k : k - m;
  return 2.0 * kPi * signed_k / extent;
}

void Field::validate() const {
  grid.validate();
  if (values.size() != grid.size()) throw std::domain_error("Field: size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw std::domain_error("Field: non-finite value");
}

double Field::mean() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

void ForcingSchedule::validate() const {
  grid.validate();
  if (!(gamma > 0.0)) throw std::domain_error("ForcingSchedule: gamma must be positive");
  for (const auto& f : steps) {
    f.validate();
    require_same_grid(grid, f.grid, "ForcingSchedule");
  }
}

double ForcingSchedule::decay_constant() const {
  double c = 0.0;
  for (std::size_t j = 0; j < steps.size(); ++j)
    c = std::max(c, field_lp_norm(steps[j], 1.0) * std::pow(double(j + 1), gamma));
  return c;
}

SpectralField SpectralField::forward(const Field& f) {
  f.validate();
  SpectralField s;
  s.grid_ = f.grid;
  s.modes_.assign(f.values.begin(), f.values.end());
  fft_nd_inplace(s.modes_, f.grid.dim, f.grid.points_per_axis, false);
  return s;
}

Field SpectralField::inverse() const {
  auto tmp = modes_;
  fft_nd_inplace(tmp, grid_.dim, grid_.points_per_axis, true);
  Field f;
  f.grid = grid_;
  f.values.resize(tmp.size());
  for (std::size_t i = 0; i < tmp.size(); ++i) f.values[i] = tmp[i].real();
  return f;
}

void SpectralField::apply_symbol_power(int n, double h) {
  if (n < 1) throw std::domain_error("apply_symbol_power: n >= 1 required");
  for_each_mode(grid_, [&](std::size_t i, double xi2) {
    modes_[i] *= std::exp(-double(n) * std::log1p(h * xi2));
  });
}

void SpectralField::resolvent_step(double h, const SpectralField* g, double g_scale) {
  if (g) require_same_grid(grid_, g->grid_, "resolvent_step");
  const double hs = h * g_scale;
  for_each_mode(grid_, [&](std::size_t i, double xi2) {
    const std::complex<double> rhs = g ? modes_[i] + hs * g->modes_[i] : modes_[i];
    modes_[i] = rhs / (1.0 + h * xi2);
  });
}

void SpectralField::add_scaled_symbol_power(const SpectralField& g, int n, double h,
                                            double scale) {
  require_same_grid(grid_, g.grid_, "add_scaled_symbol_power");
  for_each_mode(grid_, [&](std::size_t i, double xi2) {
    modes_[i] += scale * std::exp(-double(n) * std::log1p(h * xi2)) * g.modes_[i];
  });
}


Field spectral_resolvent_step(const Field& state, double h, const Field* forcing) {
  if (!(h > 0.0)) throw std::domain_error("spectral_resolvent_step: h > 0 required");
  if (forcing) require_same_grid(state.grid, forcing->grid, "spectral_resolvent_step");
  auto s = SpectralField::forward(state);
  if (forcing) {
    const auto g = SpectralField::forward(*forcing);
    s.resolvent_step(h, &g);
  } else {
    s.resolvent_step(h, nullptr);
  }
  return s.inverse();
}

Field apply_kernel_spectral(const Field& f, int n, double h) {
  if (n < 1) throw std::domain_error("apply_kernel_spectral: n >= 1 required");
  if (!(h > 0.0)) throw std::domain_error("apply_kernel_spectral: h > 0 required");
  auto s = SpectralField::forward(f);
  s.apply_symbol_power(n, h);
  return s.inverse();
}

Field sample_kernel_field(const Grid& grid, int n, double h) {
  grid.validate();
  const KernelParams params{n, h, grid.dim};
  Field out;
  out.grid = grid;
  out.values.resize(grid.size());
  for_each_node(grid, [&](std::size_t i, const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) r2 += x[d] * x[d];
    out.values[i] = eval_closed_form(params, std::sqrt(r2));
  });
  return out;
}

DirectApplyResult apply_kernel_direct(const Field& f, int n, double h) {
  f.validate();
  const Grid& g = f.grid;
  const int m = g.points_per_axis;
  const Field kern = sample_kernel_field(g, n, h);

  DirectApplyResult out;
  out.tail_over_peak = boundary_over_peak(kern);
  out.tail_warning = out.tail_over_peak > 1e-12;
  out.field.grid = g;
  out.field.values.assign(g.size(), 0.0);

  const double cell = std::pow(g.spacing(), g.dim);
  // circular convolution via min-image index differences; kernel is centered
  // at the node closest to the box center, index m/2 along each axis
  const auto wrap = [m](int d) {
    int w = d % m;
    if (w < 0) w += m;
    return w;
  };
  if (g.dim == 1) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j)
        acc += kern.values[wrap(i - j + m / 2)] * f.values[j];
      out.field.values[i] = acc * cell;
    }
  } else if (g.dim == 2) {
    for (int i0 = 0; i0 < m; ++i0)
      for (int i1 = 0; i1 < m; ++i1) {
        double acc = 0.0;
        for (int j0 = 0; j0 < m; ++j0)
          for (int j1 = 0; j1 < m; ++j1)
            acc += kern.values[std::size_t(wrap(i0 - j0 + m / 2)) * m +
                               wrap(i1 - j1 + m / 2)] *
                   f.values[std::size_t(j0) * m + j1];
        out.field.values[std::size_t(i0) * m + i1] = acc * cell;
      }
  } else {
    throw std::domain_error("apply_kernel_direct: dim 3 convolution not supported");
  }
  return out;
}

SolutionTrace solve(const Field& f, const ForcingSchedule* forcing, double h, int n_max,
                    SolveRoute route, std::vector<int> record_steps, bool cross_check) {
  f.validate();
  if (!(h > 0.0)) throw std::domain_error("solve: h > 0 required");
  if (n_max < 1) throw std::domain_error("solve: n_max >= 1 required");
  if (forcing) {
    forcing->validate();
    require_same_grid(f.grid, forcing->grid, "solve");
    if (static_cast<int>(forcing->steps.size()) < n_max)
      throw std::domain_error("solve: forcing steps must cover j = 1..n_max");
  }
  if (record_steps.empty()) record_steps = {n_max};
  std::sort(record_steps.begin(), record_steps.end());
  for (int r : record_steps)
    if (r < 1 || r > n_max) throw std::domain_error("solve: record step out of range");

  SolutionTrace trace;
  trace.h = h;
  trace.dim = f.grid.dim;
  trace.route = route;

  std::vector<SpectralField> forcing_modes;
  if (forcing) {
    forcing_modes.reserve(n_max);
    for (int j = 0; j < n_max; ++j)
      forcing_modes.push_back(SpectralField::forward(forcing->steps[j]));
  }
  const auto f_hat = SpectralField::forward(f);

  auto direct_at = [&](int n) {
    auto acc = f_hat;
    acc.apply_symbol_power(n, h);
    for (int j = 1; j <= n && forcing; ++j)
      acc.add_scaled_symbol_power(forcing_modes[j - 1], n - j + 1, h, h);
    return acc.inverse();
  };

  if (route == SolveRoute::resolvent_recursion) {
    auto state = f_hat;
    std::size_t next = 0;
    for (int j = 1; j <= n_max; ++j) {
      state.resolvent_step(h, forcing ? &forcing_modes[j - 1] : nullptr);
      while (next < record_steps.size() && record_steps[next] == j) {
        trace.fields_by_step.emplace(j, state.inverse());
        ++next;
      }
    }
  } else {
    for (int n : record_steps) trace.fields_by_step.emplace(n, direct_at(n));
  }

  if (cross_check) {
    const int last = record_steps.back();
    Field other;
    if (route == SolveRoute::resolvent_recursion) {
      other = direct_at(last);
    } else {
      auto state = f_hat;
      for (int j = 1; j <= last; ++j)
        state.resolvent_step(h, forcing ? &forcing_modes[j - 1] : nullptr);
      other = state.inverse();
    }
    const Field& mine = trace.fields_by_step.at(last);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < mine.values.size(); ++i) {
      const double d = mine.values[i] - other.values[i];
      num += d * d;
      den += mine.values[i] * mine.values[i];
    }
    trace.route_disagreement = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return trace;
}

double field_lp_norm(const Field& f, double p) {
  f.validate();
  if (!(p >= 1.0)) throw std::domain_error("field_lp_norm: p >= 1 required");
  if (p == std::numeric_limits<double>::infinity()) {
    double mx = 0.0;
    for (double v : f.values) mx = std::max(mx, std::abs(v));
    return mx;
  }
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * std::pow(f.grid.spacing(), f.grid.dim), 1.0 / p);
}

double boundary_over_peak(const Field& f) {
  const int m = f.grid.points_per_axis;
  double peak = 0.0, shell = 0.0;
  for_each_node(f.grid, [&](std::size_t i, const std::array<double, 3>& x) {
    const double v = std::abs(f.values[i]);
    peak = std::max(peak, v);
    for (int d = 0; d < f.grid.dim; ++d) {
      // first/last plane along any axis
      if (x[d] == f.grid.coord(0) || x[d] == f.grid.coord(m - 1)) {
        shell = std::max(shell, v);
        break;
      }
    }
  });
  return peak > 0.0 ? shell / peak : 0.0;
}

FieldMoments field_moments(const Field& f) {
  f.validate();
  FieldMoments mom;
  const double cell = std::pow(f.grid.spacing(), f.grid.dim);
  double mass = 0.0, second = 0.0;
  std::array<double, 3> first{0.0, 0.0, 0.0};
  for_each_node(f.grid, [&](std::size_t i, const std::array<double, 3>& x) {
    const double v = f.values[i];
    mass += v;
    double r2 = 0.0;
    for (int d = 0; d < f.grid.dim; ++d) {
      first[d] += x[d] * v;
      r2 += x[d] * x[d];
    }
    second += r2 * v;
  });
  mom.mass = mass * cell;
  for (int d = 0; d < 3; ++d) mom.first[d] = first[d] * cell;
  mom.second = second * cell;
  mom.boundary_warning = boundary_over_peak(f) > 1e-10;
  return mom;
}

}  // namespace dtheat
