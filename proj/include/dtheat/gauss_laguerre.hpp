#pragma once

#include <vector>

namespace dtheat {

// Nodes and weights for the measure s^alpha e^{-s} ds on (0, inf), with the
// weights normalized so they sum to 1 (i.e. divided by Gamma(alpha+1)).
struct GaussLaguerreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Golub-Welsch on the Jacobi matrix. m >= 1, alpha > -1.
// Results are cached per (m, alpha); safe to call concurrently.
const GaussLaguerreRule& gauss_laguerre_rule(int m, double alpha);

}  // namespace dtheat
