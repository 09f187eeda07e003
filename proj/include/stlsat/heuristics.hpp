#pragma once

#include <optional>
#include <vector>

#include "stlsat/formula.hpp"

namespace stlsat {

/// G[a,b] F[c,d] phi unrolled by two time units:
///   (F[a+c+1,a+d] phi | (G[a+c,a+c] phi & G[a+d+1,a+d+1] phi)) & G[a+2,b] F[c,d] phi
/// Applicable when a+2 <= b and c < d; nullopt otherwise.
std::optional<Formula> unroll_g_f(const Formula& f);

/// One recursive pass applying unroll_g_f to every applicable
/// occurrence; emitted residuals are not revisited.
Formula unroll_g_f_all(const Formula& f);

/// Merges unmarked G/F operators over the same argument with
/// overlapping intervals:
///   G[a,b] phi, G[c,d] phi -> G[a,d] phi   if a <= c <= b <= d
///   F[a,b] phi, F[c,d] phi -> F[c,d] phi   if a <= c and d <= b
/// Applied to a fixpoint; never grows the label.
std::vector<Formula> merge_redundant(std::vector<Formula> label);

/// Raises the interval of an operator whose arguments are (one level
/// deep) all temporal by their minimum lower bound, lowering the
/// nested intervals by the same amount; innermost first. Preserves
/// the horizon, e.g. G[3,50] F[5,20] phi -> G[8,55] F[0,15] phi.
Formula shift_nested_intervals(const Formula& f);

}  // namespace stlsat
