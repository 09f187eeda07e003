#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace stlsat {

// Exact rational arithmetic. mpq_class keeps values canonical
// (reduced, positive denominator), which is all we require.
using Rational = mpq_class;

/// Parses "12", "-3.25" or "7/2". Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

/// "6", "-1", "0.5" when the denominator is a product of 2s and 5s,
/// otherwise "p/q".
std::string format_rational(const Rational& q);

}  // namespace stlsat
