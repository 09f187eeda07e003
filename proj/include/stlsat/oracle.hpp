#pragma once

#include <stdexcept>
#include <vector>

#include "stlsat/formula.hpp"
#include "stlsat/tableau.hpp"
#include "stlsat/witness.hpp"

namespace stlsat {

/// Ground-truth checker used by the tests: it shares only the formula
/// type and the LRA solver with the tableau, nothing of the search.

class OracleCapExceeded : public std::runtime_error {
 public:
  explicit OracleCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Propositional combination of time-indexed constraint atoms.
struct GroundFormula {
  enum class GKind { True, False, Atom, Not, And, Or };
  GKind kind = GKind::True;
  Time time = 0;            // Atom
  LinearConstraint atom;    // Atom
  std::vector<GroundFormula> kids;

  static GroundFormula constant(bool value) {
    return {value ? GKind::True : GKind::False, 0, {}, {}};
  }
};

/// Truth of f over signal w at time t, evaluated directly from the
/// semantic clauses (including U/R/sU/sR). Throws out_of_range when
/// the signal is shorter than t + horizon(f) + 1.
bool evaluate(const Formula& f, const Signal& w, Time t);

/// Unrolls all temporal operators of f (from time 0) into a finite
/// propositional combination of indexed atoms; h must be at least
/// horizon(f).
GroundFormula ground_expand(const Formula& f, Time h);

/// Brute-force satisfiability below the horizon cap. Boolean-encoded
/// formulas enumerate {0,1} signals; real-valued ones go through a
/// DNF of the ground expansion with one LRA call per conjunct
/// (aborting past 2^18 conjuncts).
Status brute_force_check(const Formula& f, Time cap = 14);

}  // namespace stlsat
