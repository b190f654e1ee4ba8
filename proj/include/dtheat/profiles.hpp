#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "dtheat/grid.hpp"

namespace dtheat {

// Named initial-data profiles with analytically known mass and first moment,
// so theorem hypotheses are checkable by construction.
struct ProfileSpec {
  std::string name = "gaussian_bump";  // gaussian_bump | box | two_bump_dipole |
                                       // shifted_bump | delta_spike | noise
  double mass = 1.0;
  double width = 1.0;                        // sigma (or box side)
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double separation = 4.0;                   // two_bump_dipole only
  std::uint64_t seed = 1;                    // noise only
  double cutoff_frac = 0.125;                // noise: fraction of Nyquist kept

  // analytic moments (noise reports measured-on-grid values instead)
  double analytic_mass() const;
  std::array<double, 3> analytic_first_moment() const;
};

Field make_profile(const Grid& grid, const ProfileSpec& spec);

Field gaussian_bump(const Grid& grid, double mass, double sigma,
                    std::array<double, 3> center = {0.0, 0.0, 0.0});
Field box_profile(const Grid& grid, double mass, double side,
                  std::array<double, 3> center = {0.0, 0.0, 0.0});
// masses +1 and -1 at +-separation/2 along the first axis; total mass 0
Field two_bump_dipole(const Grid& grid, double separation, double sigma);
Field shifted_bump(const Grid& grid, double mass, double sigma, double offset);
// unit mass concentrated on the node closest to the box center
Field delta_spike(const Grid& grid);
// smooth band-limited noise, deterministic in the seed
Field band_limited_noise(const Grid& grid, double cutoff_frac, std::uint64_t seed);

// g(jh,.) = shape * j^{-gamma}, j = 1..steps
ForcingSchedule power_decay_forcing(const Field& shape, double gamma, int steps);

}  // namespace dtheat
