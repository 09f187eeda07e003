#pragma once

#include <string>

#include "stlsat/formula.hpp"

namespace stlsat {

/// Bounded SMT-LIB2 encoding of the formula: one real constant per
/// (variable, time) pair up to the horizon, the ground expansion as a
/// single assertion, then (check-sat). Byte-deterministic.
std::string emit_smtlib(const Formula& f);

}  // namespace stlsat
