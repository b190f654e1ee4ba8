#pragma once

#include <stdexcept>
#include <string>

namespace dtheat {

// Kernel value requested at r = 0 where the closed form diverges (n <= N/2).
class SingularAtOrigin : public std::domain_error {
 public:
  explicit SingularAtOrigin(const std::string& what) : std::domain_error(what) {}
};

// L^p norm requested outside the integrability region n - (N/2)(1 - 1/p) > 0.
class DivergentNorm : public std::domain_error {
 public:
  explicit DivergentNorm(const std::string& what) : std::domain_error(what) {}
};

class GridMismatch : public std::invalid_argument {
 public:
  explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dtheat
