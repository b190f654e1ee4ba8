#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtheat/asymptotics.hpp"

namespace dtheat {

// The one table every pass/fail judgment reads from.
struct AcceptanceThresholds {
  static constexpr double kRouteAgreement = 1e-7;
  static constexpr double kKernelSlopeTol = 0.02;
  static constexpr double kKernelTrivialSlopeTol = 1e-10;
  static constexpr double kDerivedSlopeTol = 0.03;   // gradient / time difference
  static constexpr double kSolutionSlopeTol = 0.03;
  static constexpr double kDuhamelSlopeTol = 0.05;
  static constexpr double kLogSpreadTol = 0.15;      // +-15% over the top decade
  static constexpr double kConvergenceSlopeTol = 0.07;
  static constexpr double kConvergenceReduction = 0.80;
  static constexpr double kL2SlopeTol = 0.03;
  static constexpr double kL2BandRatio = 10.0;
  static constexpr double kYosidaFinalL1 = 1e-2;
  static constexpr double kYosidaFourierGap = 1e-3;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string kind;  // kernel-eval | kernel-check | solve | decay | converge |
                     // l2opt | yosida | figures
  nlohmann::json parameters;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
};

ExperimentConfig load_config(const std::string& path);

// pure precondition check; empty result iff run() would start
std::vector<std::string> validate(const ExperimentConfig& config);

// thrown by run() when validate() is nonempty; nothing is written in that case
class ValidationRefused : public std::runtime_error {
 public:
  explicit ValidationRefused(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// executes the experiment, writing config echo, CSVs and summary JSON into
// output_dir; returns the summary. Throws on runtime failure. Holds a lock
// directory in output_dir for the duration.
nlohmann::json run(const ExperimentConfig& config);

// CSV with a fixed header, comma separators, LF endings, 17-significant-digit floats
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_decay_report_csv(const std::string& path, const DecayReport& report);
nlohmann::json decay_report_summary(const DecayReport& report);

}  // namespace dtheat
