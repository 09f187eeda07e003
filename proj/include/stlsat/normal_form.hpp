#pragma once

#include "stlsat/formula.hpp"

namespace stlsat {

struct NormalizeOpts {
  /// Keep G/F as first-class operators (specialized expansion rules);
  /// when false they are rewritten into sR/sU.
  bool keep_gf = true;
  /// Keep implications for the specialized implication expansion rule;
  /// when false they desugar to !a | b.
  bool keep_implies = true;
};

/// Rewrites into strict normal form: only And/Or/sU/sR in positive
/// form (plus G/F/Implies per opts), terms, and true. U and R are
/// eliminated through their sU/sR identities; negation is pushed to
/// the atoms, where != and negated == split into strict inequalities.
Formula to_strict_normal_form(const Formula& f, NormalizeOpts opts = {});

/// Normal form of the negation of an already-normalized formula.
Formula negate_normalized(const Formula& f, NormalizeOpts opts = {});

bool is_strict_normal_form(const Formula& f, NormalizeOpts opts = {});

}  // namespace stlsat
