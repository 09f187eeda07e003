#pragma once

#include <map>
#include <string>
#include <vector>

#include "stlsat/tableau.hpp"

namespace stlsat {

/// Finite discrete-time signal: one rational per variable per instant.
/// Variables never constrained by the solver default to 0.
struct Signal {
  Time length = 0;
  std::vector<std::string> vars;  // sorted
  std::vector<std::map<std::string, Rational>> rows;

  /// Value at time t; 0 for unknown variables. Throws out_of_range
  /// past the end of the signal.
  Rational value(const std::string& var, Time t) const;

  /// Copy extended to `length` instants, repeating defaults (0) for
  /// the unconstrained tail.
  Signal extended_to(Time new_length) const;
};

/// Builds a satisfying signal from an accepted branch: one LRA model
/// per poised node, with instants skipped by JUMP repeating the
/// pre-jump assignment.
Signal reconstruct(const std::vector<NodePtr>& branch, ConsistencyOracle& lra);

/// CSV trace: header "time,<vars...>", one row per instant; values
/// print as decimals when exact, p/q otherwise.
std::string trace_csv(const Signal& s);

/// {"length": n, "vars": [...], "rows": [[...]]}
std::string trace_json(const Signal& s);

/// Writes to `path`, picking JSON when its extension is .json.
void write_trace(const Signal& s, const std::string& path);

}  // namespace stlsat
