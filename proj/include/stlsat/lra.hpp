#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stlsat/formula.hpp"

namespace stlsat {

/// Conjunction of linear constraints; relations restricted to
/// Gt/Ge/Eq (disequalities are split away during normalization).
using ConstraintSet = std::vector<LinearConstraint>;

struct LraResult {
  bool consistent = false;
  /// Exact satisfying assignment, present iff consistent. Every
  /// variable occurring in the constraint set is mapped.
  std::map<std::string, Rational> model;
};

/// Decides consistency over the rationals and produces a model.
/// Strict inequalities are handled with symbolic infinitesimals
/// (delta-rationals) inside an exact simplex.
LraResult check_consistent(const ConstraintSet& constraints);

/// Equivalent to check_consistent(base + delta).
LraResult check_incremental(const ConstraintSet& base, const std::vector<LinearConstraint>& delta);

/// Consistency-oracle interface; the built-in simplex is the default
/// implementation, but an external solver can be swapped in.
class ConsistencyOracle {
 public:
  virtual ~ConsistencyOracle() = default;
  virtual LraResult check(const ConstraintSet& constraints) = 0;
};

class SimplexOracle final : public ConsistencyOracle {
 public:
  LraResult check(const ConstraintSet& constraints) override {
    return check_consistent(constraints);
  }
};

}  // namespace stlsat
