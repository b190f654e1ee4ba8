#include "dtheat/gauss_laguerre.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dtheat {

namespace {

GaussLaguerreRule build_rule(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("gauss_laguerre_rule: m >= 1 required");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_laguerre_rule: alpha > -1 required");

  Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
  for (int k = 0; k < m; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(k * (k + alpha));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_laguerre_rule: eigensolver failed");

  GaussLaguerreRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;  // normalized: total measure Gamma(alpha+1) divided out
  }
  return rule;
}

}  // namespace

const GaussLaguerreRule& gauss_laguerre_rule(int m, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::unique_ptr<GaussLaguerreRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, alpha}];
  if (!slot) slot = std::make_unique<GaussLaguerreRule>(build_rule(m, alpha));
  return *slot;
}

}  // namespace dtheat
