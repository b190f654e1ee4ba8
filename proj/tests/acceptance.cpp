// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dtheat/asymptotics.hpp"
#include "dtheat/grid.hpp"
#include "dtheat/kernel.hpp"
#include "dtheat/profiles.hpp"
#include "dtheat/report_io.hpp"
#include "dtheat/special_functions.hpp"
#include "oracles.hpp"

using namespace dtheat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << (detail.str().empty() ? "" : "; ") << "FAILED: " << what;
    }
  }
  void note(const std::string& what) {
    detail << (detail.str().empty() ? "" : "; ") << what;
  }
};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1(Criterion& c) {
  // (P1) integral representation vs the implementation
  double worst_p1 = 0.0;
  for (double nu : {0.0, 1.0, 2.0}) {
    for (double z : {0.5, 1.0, 5.0}) {
      const double quad = oracles::besselk_integral_form(nu, z);
      worst_p1 = std::max(worst_p1, rel_err(sf::bessel_k(nu, z), quad));
    }
  }
  c.require(worst_p1 <= 1e-8, "P1 integral agreement, worst " + fmt(worst_p1));
  c.note("P1 worst rel " + fmt(worst_p1));

  // (P6) exact symmetry
  bool sym = true;
  for (double nu : {0.5, 1.0, 3.0, 7.5, 20.0})
    for (double z : {0.3, 1.0, 12.0, 80.0})
      sym = sym && sf::bessel_k(nu, z) == sf::bessel_k(-nu, z);
  c.require(sym, "P6 bit-for-bit symmetry");

  // (P7) recurrence residual over the grid
  double worst_p7 = 0.0;
  std::vector<double> orders = {0.0, 0.5, 1.0, 1.5};
  for (double nu = 2.0; nu <= 20.0; nu += 0.5) orders.push_back(nu);
  for (double nu : orders) {
    for (double z : oracles::log_spaced(0.1, 50.0, 12)) {
      const double km = sf::bessel_k(nu - 1.0, z);
      const double kp = sf::bessel_k(nu + 1.0, z);
      const double k0 = sf::bessel_k(nu, z);
      const double resid = std::abs(z * km - z * kp + 2.0 * nu * k0);
      const double scale = std::max({z * km, z * kp, std::abs(2.0 * nu * k0)});
      worst_p7 = std::max(worst_p7, resid / scale);
    }
  }
  c.require(worst_p7 <= 1e-8, "P7 recurrence residual, worst " + fmt(worst_p7));
  c.note("P7 worst rel " + fmt(worst_p7));

  // (P4) small-argument law
  for (double nu : {1.0, 2.0, 3.0, 0.5, 2.5}) {
    const double z = 1e-4 * std::sqrt(nu + 1.0);
    const double lead =
        std::exp(sf::log_gamma(nu) - std::log(2.0) + nu * std::log(2.0 / z));
    const double ratio = sf::bessel_k(nu, z) / lead;
    c.require(ratio >= 0.99 && ratio <= 1.01,
              "P4 envelope at nu=" + fmt(nu) + ", ratio " + fmt(ratio));
  }

  // (P5) large-argument envelope of the scaled variant
  for (double nu : {0.0, 0.5, 1.0, 2.0}) {
    for (double z : {50.0, 120.0, 400.0}) {
      const double dev =
          std::abs(sf::bessel_k_scaled(nu, z) / std::sqrt(3.14159265358979323846 / (2.0 * z)) - 1.0);
      c.require(dev <= 5.0 / z, "P5 envelope at nu=" + fmt(nu) + " z=" + fmt(z));
    }
  }
}

void criterion_2(Criterion& c) {
  double worst = 0.0;
  int points = 0;
  for (int n : {1, 2, 5, 20, 100}) {
    for (double h : {0.1, 1.0}) {
      for (int N : {1, 2, 3}) {
        const KernelParams params{n, h, N};
        const QuadratureSpec spec{96, n - 1.0};
        for (double R : {0.05, 0.5, 1.0, 4.0, 16.0}) {
          const double r = std::sqrt(R * n * h);
          worst = std::max(worst, rel_err(eval_quadrature(params, r, spec),
                                          eval_closed_form(params, r)));
          ++points;
        }
      }
    }
  }
  c.require(worst <= AcceptanceThresholds::kRouteAgreement,
            "route agreement worst " + fmt(worst));
  c.note(std::to_string(points) + " grid points, worst rel " + fmt(worst));
}

void criterion_3(Criterion& c) {
  double worst_radial = 0.0, worst_grid_mass = 0.0, worst_second = 0.0;
  for (int N : {1, 2}) {
    for (int n : {5, 50}) {
      for (double h : {0.1, 0.5}) {
        const KernelParams params{n, h, N};
        worst_radial = std::max(worst_radial, std::abs(lp_norm(params, 1.0) - 1.0));

        // box sized past the r ~ n sqrt(h) tail crossover, with e^{-30} headroom
        const double L = std::max(16.0 * std::sqrt(n * h), 2.0 * std::sqrt(h) * (n + 30.0));
        const Grid g{N, L, N == 1 ? 2048 : 1024};
        const auto mom = field_moments(sample_kernel_field(g, n, h));
        worst_grid_mass = std::max(worst_grid_mass, std::abs(mom.mass - 1.0));
        worst_second =
            std::max(worst_second, std::abs(mom.second / (2.0 * N * n * h) - 1.0));
      }
    }
  }
  c.require(worst_radial <= 1e-8, "radial mass, worst dev " + fmt(worst_radial));
  c.require(worst_grid_mass <= 1e-6, "grid mass, worst dev " + fmt(worst_grid_mass));
  c.require(worst_second <= 0.01, "second moment, worst rel " + fmt(worst_second));

  // second-moment growth law along solutions
  double worst_growth = 0.0;
  for (const auto& [N, n, h, M, L] : std::vector<std::tuple<int, int, double, int, double>>{
           {1, 50, 0.5, 2048, 160.0}, {2, 50, 0.1, 512, 48.0}, {2, 5, 0.5, 512, 32.0}}) {
    const Grid g{N, L, M};
    const Field f = gaussian_bump(g, 1.0, 1.0);
    const auto trace = solve(f, nullptr, h, n, SolveRoute::resolvent_recursion, {n});
    const double growth =
        field_moments(trace.fields_by_step.at(n)).second - field_moments(f).second;
    worst_growth = std::max(worst_growth, std::abs(growth / (2.0 * N * n * h) - 1.0));
  }
  c.require(worst_growth <= 0.01, "solution second-moment growth " + fmt(worst_growth));
  c.note("radial " + fmt(worst_radial) + ", grid " + fmt(worst_grid_mass) + ", moment " +
         fmt(worst_second) + ", growth " + fmt(worst_growth));
}

void criterion_4(Criterion& c) {
  // spectral composition is exact to 1e-12
  const Grid g{1, 64.0, 1024};
  const Field f = band_limited_noise(g, 0.25, 2024);
  double worst = 0.0;
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{{5, 9}, {17, 40}}) {
    const Field ab = apply_kernel_spectral(apply_kernel_spectral(f, m, 0.4), n, 0.4);
    const Field once = apply_kernel_spectral(f, m + n, 0.4);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ab.values.size(); ++i) {
      num += (ab.values[i] - once.values[i]) * (ab.values[i] - once.values[i]);
      den += once.values[i] * once.values[i];
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  c.require(worst <= 1e-12, "spectral composition, worst L2 rel " + fmt(worst));

  // sampled-kernel composition at the peak (N=1, M=512)
  const Grid g2{1, 48.0, 512};
  const double h = 0.25;
  const Field gm = sample_kernel_field(g2, 4, h);
  const auto conv = apply_kernel_direct(gm, 4, h);
  const Field gnm = sample_kernel_field(g2, 8, h);
  std::size_t pk = 0;
  for (std::size_t i = 0; i < gnm.values.size(); ++i)
    if (gnm.values[i] > gnm.values[pk]) pk = i;
  const double dev = rel_err(conv.field.values[pk], gnm.values[pk]);
  c.require(dev <= 1e-6, "sampled composition at peak, rel " + fmt(dev));
  c.note("spectral " + fmt(worst) + ", sampled peak " + fmt(dev));
}

void criterion_5(Criterion& c) {
  double worst_kernel = 0.0, worst_derived = 0.0, worst_trivial = 0.0;
  for (int N : {1, 2, 3}) {
    for (double p : {1.0, 2.0, kInf}) {
      SweepConfig cfg;
      cfg.dim = N;
      cfg.h = 0.25;
      cfg.p = p;
      cfg.q = 1.0;
      cfg.n_values = log_spaced_steps(64, 4096, 12);

      const auto kr = kernel_decay_sweep(cfg, KernelQuantity::kernel);
      if (p == 1.0) {
        for (const auto& pt : kr.points)
          c.require(std::abs(pt.value - 1.0) <= 1e-8, "L1 mass in sweep");
        worst_trivial = std::max(worst_trivial, std::abs(kr.fitted_slope));
        c.require(std::abs(kr.fitted_slope) <= AcceptanceThresholds::kKernelTrivialSlopeTol,
                  "trivial slope N=" + std::to_string(N) + " reads " +
                      fmt(kr.fitted_slope));
      } else {
        worst_kernel = std::max(worst_kernel, std::abs(kr.fitted_slope - kr.theory_slope));
        c.require(std::abs(kr.fitted_slope - kr.theory_slope) <=
                      AcceptanceThresholds::kKernelSlopeTol,
                  "kernel slope N=" + std::to_string(N) + " p=" + fmt(p) + " dev " +
                      fmt(std::abs(kr.fitted_slope - kr.theory_slope)));
      }

      for (const auto quantity :
           {KernelQuantity::gradient, KernelQuantity::time_difference}) {
        const auto rep = kernel_decay_sweep(cfg, quantity);
        const double dev = std::abs(rep.fitted_slope - rep.theory_slope);
        worst_derived = std::max(worst_derived, dev);
        c.require(dev <= AcceptanceThresholds::kDerivedSlopeTol,
                  std::string(quantity == KernelQuantity::gradient ? "gradient"
                                                                   : "time-difference") +
                      " slope N=" + std::to_string(N) + " p=" + fmt(p) + " dev " + fmt(dev));
      }
    }
  }
  c.note("kernel worst dev " + fmt(worst_kernel) + ", derived worst " + fmt(worst_derived) +
         ", trivial worst " + fmt(worst_trivial));
}

void criterion_6(Criterion& c) {
  // homogeneous-solution decay
  for (const auto& [N, p] : std::vector<std::pair<int, double>>{{1, 2.0}, {1, kInf}, {2, 2.0}}) {
    SweepConfig cfg;
    cfg.dim = N;
    cfg.h = 0.25;
    cfg.p = p;
    cfg.q = 1.0;
    cfg.initial_data = ProfileSpec{};  // unit gaussian bump
    if (N == 1) {
      cfg.points_per_axis = 8192;
      cfg.extent = 1000.0;
      cfg.n_values = log_spaced_steps(64, 4096, 12);
    } else {
      cfg.points_per_axis = 1024;
      cfg.extent = 400.0;
      cfg.n_values = log_spaced_steps(64, 2048, 10);
    }
    const auto rep = solution_decay_sweep(cfg);
    const double dev = std::abs(rep.fitted_slope - rep.theory_slope);
    c.require(dev <= AcceptanceThresholds::kSolutionSlopeTol,
              "solution slope N=" + std::to_string(N) + " p=" + fmt(p) + " dev " + fmt(dev));
    c.require(!rep.diagnostics.adequacy_warning, "solution sweep adequacy");
    c.note("u_c N=" + std::to_string(N) + " p=" + fmt(p) + " dev " + fmt(dev));
  }

  // generic (non-logarithmic) forced case
  {
    SweepConfig cfg;
    cfg.dim = 1;
    cfg.h = 0.25;
    cfg.p = kInf;
    cfg.q = 1.0;
    cfg.points_per_axis = 8192;
    cfg.extent = 820.0;
    cfg.n_values = log_spaced_steps(16, 4096, 14);
    cfg.forcing = ForcingSpec{ProfileSpec{}, 2.0};
    const auto rep = duhamel_decay_sweep(cfg);
    const double dev = std::abs(rep.fitted_slope - rep.theory_slope);
    c.require(!rep.log_compensated && dev <= AcceptanceThresholds::kDuhamelSlopeTol,
              "duhamel gamma=2 slope dev " + fmt(dev));
    c.note("u_p gamma=2 dev " + fmt(dev));
  }

  // first log-critical case: gamma = 1, N = 1
  {
    SweepConfig cfg;
    cfg.dim = 1;
    cfg.h = 1.0;
    cfg.p = kInf;
    cfg.q = 1.0;
    cfg.points_per_axis = 8192;
    cfg.extent = 820.0;
    cfg.n_values = log_spaced_steps(16, 4096, 16);
    cfg.forcing = ForcingSpec{ProfileSpec{}, 1.0};
    const auto rep = duhamel_decay_sweep(cfg);
    c.require(rep.log_compensated &&
                  rep.compensated_spread <= AcceptanceThresholds::kLogSpreadTol,
              "log case (gamma=1) spread " + fmt(rep.compensated_spread));
    c.note("log(ii) spread " + fmt(rep.compensated_spread));
  }

  // doubly log-critical case: gamma = 1 and (N/2)(1/q - 1/p) = 1, N = 2
  {
    SweepConfig cfg;
    cfg.dim = 2;
    cfg.h = 1.0;
    cfg.p = kInf;
    cfg.q = 1.0;
    cfg.points_per_axis = 1024;
    cfg.extent = 560.0;
    cfg.n_values = log_spaced_steps(16, 2048, 12);
    ProfileSpec shape;
    shape.width = 1.5;
    cfg.forcing = ForcingSpec{shape, 1.0};
    const auto rep = duhamel_decay_sweep(cfg);
    c.require(rep.log_compensated &&
                  rep.compensated_spread <= AcceptanceThresholds::kLogSpreadTol,
              "log case (gamma=1, ratio=1) spread " + fmt(rep.compensated_spread));
    c.note("log(iv) spread " + fmt(rep.compensated_spread));
  }
}

void criterion_7(Criterion& c) {
  for (double p : {1.0, 2.0}) {
    SweepConfig cfg;
    cfg.dim = 1;
    cfg.h = 0.25;
    cfg.p = p;
    cfg.q = 1.0;
    cfg.points_per_axis = 8192;
    cfg.extent = 400.0;
    cfg.n_values = log_spaced_steps(16, 1600, 14);  // nh in [4, 400]
    cfg.initial_data.name = "shifted_bump";
    cfg.initial_data.center = {3.0, 0.0, 0.0};
    const auto rep = profile_convergence_sweep(cfg, true);
    c.require(rep.top_decade_decreasing, "scaled discrepancy decreasing, p=" + fmt(p));
    c.require(rep.reduction >= AcceptanceThresholds::kConvergenceReduction,
              "reduction p=" + fmt(p) + " is " + fmt(rep.reduction));
    c.require(std::abs(rep.fitted_slope + 0.5) <= AcceptanceThresholds::kConvergenceSlopeTol,
              "moment-condition slope p=" + fmt(p) + " reads " + fmt(rep.fitted_slope));
    c.note("p=" + fmt(p) + " slope " + fmt(rep.fitted_slope) + " reduction " +
           fmt(rep.reduction));
  }

  // u_p analogue with h M_p under a gamma = 2 forcing
  {
    SweepConfig cfg;
    cfg.dim = 1;
    cfg.h = 0.25;
    cfg.p = 2.0;
    cfg.q = 1.0;
    cfg.points_per_axis = 8192;
    cfg.extent = 400.0;
    cfg.n_values = log_spaced_steps(16, 1600, 12);
    cfg.forcing = ForcingSpec{ProfileSpec{}, 2.0};
    const auto rep = profile_convergence_sweep(cfg, false);
    c.require(rep.top_decade_decreasing, "u_p analogue decreasing");
    c.require(rep.reduction >= AcceptanceThresholds::kConvergenceReduction,
              "u_p analogue reduction " + fmt(rep.reduction));
    c.note("u_p reduction " + fmt(rep.reduction));
  }
}

void criterion_8(Criterion& c) {
  for (int N : {1, 2}) {
    SweepConfig cfg;
    cfg.dim = N;
    cfg.h = 0.25;
    cfg.n_values = log_spaced_steps(4, 4000, 14);  // nh in [1, 1000]
    if (N == 1) {
      cfg.points_per_axis = 8192;
      cfg.extent = 1000.0;
      cfg.initial_data.width = 0.75;
    } else {
      cfg.points_per_axis = 1024;
      cfg.extent = 400.0;
      cfg.initial_data.name = "box";
      cfg.initial_data.width = 2.0;
    }
    const auto rep = l2_optimality_sweep(cfg);
    const double dev = std::abs(rep.fitted_slope - rep.theory_slope);
    c.require(dev <= AcceptanceThresholds::kL2SlopeTol,
              "L2 slope N=" + std::to_string(N) + " dev " + fmt(dev));
    c.require(rep.band_ratio <= AcceptanceThresholds::kL2BandRatio,
              "two-sided band N=" + std::to_string(N) + " ratio " + fmt(rep.band_ratio));
    c.note("N=" + std::to_string(N) + " dev " + fmt(dev) + " band " + fmt(rep.band_ratio));
  }
}

void criterion_9(Criterion& c) {
  std::vector<int> ns;
  for (int n = 1; n <= 1024; n *= 2) ns.push_back(n);
  const auto rep = yosida_convergence_sweep(1.0, ns, 1);
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i)
    decreasing = decreasing && rep.points[i + 1].value < rep.points[i].value;
  c.require(decreasing, "L1 distance strictly decreasing");
  c.require(rep.points.back().value < AcceptanceThresholds::kYosidaFinalL1,
            "final L1 " + fmt(rep.points.back().value));
  c.require(rep.points.back().scaled_value < AcceptanceThresholds::kYosidaFourierGap,
            "Fourier sup gap " + fmt(rep.points.back().scaled_value));
  c.note("final L1 " + fmt(rep.points.back().value) + ", Fourier gap " +
         fmt(rep.points.back().scaled_value) + ", empirical slope " + fmt(rep.fitted_slope));
}

void criterion_10(Criterion& c) {
  const KernelParams p11{1, 1.0, 1};
  double worst = 0.0;
  for (double r : oracles::log_spaced(0.01, 30.0, 60))
    worst = std::max(worst, rel_err(eval_closed_form(p11, r), std::exp(-r) / 2.0));
  c.require(worst <= 1e-12, "1-D resolvent anchor, worst rel " + fmt(worst));

  double worst0 = 0.0;
  for (const auto& [n, h, N] : std::vector<std::tuple<int, double, int>>{
           {2, 1.0, 2}, {5, 0.1, 3}, {50, 0.5, 1}, {1000, 0.25, 3}, {4096, 0.25, 2}}) {
    const KernelParams params{n, h, N};
    const double want =
        std::exp(sf::log_gamma(n - 0.5 * N) - sf::log_gamma(double(n)) -
                 0.5 * N * std::log(4.0 * 3.14159265358979323846 * h));
    worst0 = std::max(worst0, rel_err(eval_closed_form(params, 0.0), want));
  }
  c.require(worst0 <= 1e-12, "origin limit anchor, worst rel " + fmt(worst0));
  c.note("e^{-|x|}/2 worst " + fmt(worst) + ", origin worst " + fmt(worst0));
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"special-function property suite (P1/P4/P5/P6/P7)", criterion_1},
      {"kernel route agreement, closed form vs quadrature", criterion_2},
      {"conservation laws: mass and second moments", criterion_3},
      {"semigroup: spectral and sampled composition", criterion_4},
      {"kernel decay exponents (with gradient and time-difference variants)", criterion_5},
      {"solution and forced-part decay exponents", criterion_6},
      {"large-time convergence to M G_{n,h}", criterion_7},
      {"optimal L2 decay, two-sided", criterion_8},
      {"Yosida convergence to the Gaussian", criterion_9},
      {"closed-form anchors", criterion_10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    c.id = static_cast<int>(i) + 1;
    c.title = criteria[i].first;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s [%6.2f s] %s — %s\n", c.id, c.pass ? "PASS" : "FAIL",
                secs, c.title.c_str(), c.detail.str().c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  else
    std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures;
}
