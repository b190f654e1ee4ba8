#include "dtheat/profiles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dtheat/fft.hpp"

namespace dtheat {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename F>
Field build(const Grid& grid, F&& value_at) {
  grid.validate();
  Field f;
  f.grid = grid;
  f.values.resize(grid.size());
  const int m = grid.points_per_axis;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t idx = 0;
  if (grid.dim == 1) {
    for (int i = 0; i < m; ++i) {
      x[0] = grid.coord(i);
      f.values[idx++] = value_at(x);
    }
  } else if (grid.dim == 2) {
    for (int i = 0; i < m; ++i) {
      x[0] = grid.coord(i);
      for (int j = 0; j < m; ++j) {
        x[1] = grid.coord(j);
        f.values[idx++] = value_at(x);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      x[0] = grid.coord(i);
      for (int j = 0; j < m; ++j) {
        x[1] = grid.coord(j);
        for (int k = 0; k < m; ++k) {
          x[2] = grid.coord(k);
          f.values[idx++] = value_at(x);
        }
      }
    }
  }
  return f;
}

}  // namespace

Field gaussian_bump(const Grid& grid, double mass, double sigma,
                    std::array<double, 3> center) {
  if (!(sigma > 0.0)) throw std::domain_error("gaussian_bump: sigma > 0 required");
  const double norm = mass / std::pow(2.0 * kPi * sigma * sigma, 0.5 * grid.dim);
  return build(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      const double dx = x[d] - center[d];
      r2 += dx * dx;
    }
    return norm * std::exp(-0.5 * r2 / (sigma * sigma));
  });
}

Field box_profile(const Grid& grid, double mass, double side,
                  std::array<double, 3> center) {
  if (!(side > 0.0)) throw std::domain_error("box_profile: side > 0 required");
  const double height = mass / std::pow(side, grid.dim);
  // half-open faces keep the Riemann mass exact when side is a multiple of
  // the grid spacing
  return build(grid, [&](const std::array<double, 3>& x) {
    for (int d = 0; d < grid.dim; ++d) {
      const double dx = x[d] - center[d];
      if (dx < -0.5 * side || dx >= 0.5 * side) return 0.0;
    }
    return height;
  });
}

Field two_bump_dipole(const Grid& grid, double separation, double sigma) {
  std::array<double, 3> cp{0.5 * separation, 0.0, 0.0};
  std::array<double, 3> cm{-0.5 * separation, 0.0, 0.0};
  auto plus = gaussian_bump(grid, 1.0, sigma, cp);
  const auto minus = gaussian_bump(grid, 1.0, sigma, cm);
  for (std::size_t i = 0; i < plus.values.size(); ++i) plus.values[i] -= minus.values[i];
  return plus;
}

Field shifted_bump(const Grid& grid, double mass, double sigma, double offset) {
  return gaussian_bump(grid, mass, sigma, {offset, 0.0, 0.0});
}

Field delta_spike(const Grid& grid) {
  grid.validate();
  Field f;
  f.grid = grid;
  f.values.assign(grid.size(), 0.0);
  const int m = grid.points_per_axis;
  std::size_t idx = 0;
  for (int d = 0; d < grid.dim; ++d) idx = idx * m + m / 2;
  f.values[idx] = 1.0 / std::pow(grid.spacing(), grid.dim);
  return f;
}

Field band_limited_noise(const Grid& grid, double cutoff_frac, std::uint64_t seed) {
  grid.validate();
  if (!(cutoff_frac > 0.0 && cutoff_frac <= 1.0))
    throw std::domain_error("band_limited_noise: cutoff_frac in (0, 1] required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Field white;
  white.grid = grid;
  white.values.resize(grid.size());
  for (auto& v : white.values) v = gauss(rng);

  // zero out all modes above the cutoff
  std::vector<std::complex<double>> modes(white.values.begin(), white.values.end());
  fft_nd_inplace(modes, grid.dim, grid.points_per_axis, false);
  const int m = grid.points_per_axis;
  const int kmax = std::max(1, static_cast<int>(cutoff_frac * (m / 2)));
  auto keep = [&](int k) {
    const int sk = k < m / 2 ? k : k - m;
    return std::abs(sk) <= kmax;
  };
  std::size_t idx = 0;
  if (grid.dim == 1) {
    for (int i = 0; i < m; ++i, ++idx)
      if (!keep(i)) modes[idx] = 0.0;
  } else if (grid.dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j, ++idx)
        if (!keep(i) || !keep(j)) modes[idx] = 0.0;
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k, ++idx)
          if (!keep(i) || !keep(j) || !keep(k)) modes[idx] = 0.0;
  }
  fft_nd_inplace(modes, grid.dim, grid.points_per_axis, true);
  Field f;
  f.grid = grid;
  f.values.resize(grid.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = modes[i].real();
  return f;
}

double ProfileSpec::analytic_mass() const {
  if (name == "two_bump_dipole") return 0.0;
  if (name == "noise") return 0.0;  // not analytic; callers measure on the grid
  return mass;
}

std::array<double, 3> ProfileSpec::analytic_first_moment() const {
  if (name == "two_bump_dipole") return {separation, 0.0, 0.0};  // (+1)(s/2) - (-1)(-s/2)
  if (name == "noise") return {0.0, 0.0, 0.0};
  return {mass * center[0], mass * center[1], mass * center[2]};
}

Field make_profile(const Grid& grid, const ProfileSpec& spec) {
  if (spec.name == "gaussian_bump") return gaussian_bump(grid, spec.mass, spec.width, spec.center);
  if (spec.name == "box") return box_profile(grid, spec.mass, spec.width, spec.center);
  if (spec.name == "two_bump_dipole")
    return two_bump_dipole(grid, spec.separation, spec.width);
  if (spec.name == "shifted_bump")
    return shifted_bump(grid, spec.mass, spec.width, spec.center[0]);
  if (spec.name == "delta_spike") return delta_spike(grid);
  if (spec.name == "noise") return band_limited_noise(grid, spec.cutoff_frac, spec.seed);
  throw std::domain_error("make_profile: unknown profile '" + spec.name + "'");
}

ForcingSchedule power_decay_forcing(const Field& shape, double gamma, int steps) {
  shape.validate();
  if (steps < 1) throw std::domain_error("power_decay_forcing: steps >= 1 required");
  ForcingSchedule fs;
  fs.grid = shape.grid;
  fs.gamma = gamma;
  fs.steps.reserve(steps);
  for (int j = 1; j <= steps; ++j) {
    Field g = shape;
    const double scale = std::pow(double(j), -gamma);
    for (auto& v : g.values) v *= scale;
    fs.steps.push_back(std::move(g));
  }
  return fs;
}

}  // namespace dtheat
