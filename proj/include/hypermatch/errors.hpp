#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hypermatch {

// Argument and precondition violations are reported with std::invalid_argument.
// The types below name the domain-specific failures.

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t lower_bound, std::uint64_t upper_bound)
      : std::runtime_error(what), lower_bound_(lower_bound), upper_bound_(upper_bound) {}

  /// Partial bounds known without running the search.
  std::uint64_t lower_bound() const { return lower_bound_; }
  std::uint64_t upper_bound() const { return upper_bound_; }

 private:
  std::uint64_t lower_bound_;
  std::uint64_t upper_bound_;
};

class ConstructionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ReductionInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AmbiguousMembership : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypermatch
