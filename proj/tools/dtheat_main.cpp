// Batch experiment runner for the discrete-in-time heat kernel library.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "dtheat/report_io.hpp"

using nlohmann::json;

namespace {

int run_kind(const std::string& kind, const std::string& config_path,
             const std::string& out_override, int threads, std::int64_t seed,
             bool seed_set) {
  try {
    dtheat::ExperimentConfig config = dtheat::load_config(config_path);
    if (!config.kind.empty() && config.kind != kind) {
      std::cerr << json{{"status", "error"},
                        {"message", "config kind '" + config.kind +
                                        "' does not match subcommand '" + kind + "'"}}
                       .dump()
                << "\n";
      return 1;
    }
    config.kind = kind;
    if (!out_override.empty()) config.output_dir = out_override;
    if (threads > 0) config.threads = threads;
    if (seed_set) config.seed = static_cast<std::uint64_t>(seed);

    const json summary = dtheat::run(config);
    std::cout << summary.dump(2) << "\n";
    return 0;
  } catch (const dtheat::ValidationRefused& e) {
    std::cerr << json{{"status", "refused"}, {"violations", e.violations()}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"status", "error"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete-in-time heat kernel experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int threads = 0;
  std::int64_t seed = 0;
  bool seed_set = false;

  const std::vector<std::string> kinds = {"kernel-eval", "kernel-check", "solve", "decay",
                                          "converge", "l2opt", "yosida", "figures"};
  for (const auto& kind : kinds) {
    auto* sub = app.add_subcommand(kind);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_override, "override output directory");
    sub->add_option("--threads", threads, "worker threads for sweep points");
    sub->add_option("--seed", seed, "seed for noise-bearing profiles")
        ->each([&](const std::string&) { seed_set = true; });
  }
  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("--config", config_path, "experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  const auto* sub = app.get_subcommands().front();
  if (sub->get_name() == "validate") {
    try {
      const auto config = dtheat::load_config(config_path);
      const auto violations = dtheat::validate(config);
      std::cout << json(violations).dump(2) << "\n";
      return violations.empty() ? 0 : 2;
    } catch (const std::exception& e) {
      std::cerr << json{{"status", "error"}, {"message", e.what()}}.dump() << "\n";
      return 1;
    }
  }
  return run_kind(sub->get_name(), config_path, out_override, threads, seed, seed_set);
}
