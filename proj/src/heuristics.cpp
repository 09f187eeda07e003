#include "stlsat/heuristics.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace stlsat {

std::optional<Formula> unroll_g_f(const Formula& f) {
  if (!f.is_temporal() || f.op() != TOp::G || f.marked()) return std::nullopt;
  const Formula& inner = f.arg();
  if (!inner.is_temporal() || inner.op() != TOp::F || inner.marked()) return std::nullopt;
  Time a = f.interval().lo, b = f.interval().hi;
  Time c = inner.interval().lo, d = inner.interval().hi;
  if (a + 2 > b || c >= d) return std::nullopt;
  const Formula& phi = inner.arg();
  const ParentInterval deco = f.parent_interval();
  Formula overlap = Formula::temporal(TOp::F, {a + c + 1, a + d}, phi, deco);
  Formula endpoints =
      Formula::conj(Formula::temporal(TOp::G, {a + c, a + c}, phi, deco),
                    Formula::temporal(TOp::G, {a + d + 1, a + d + 1}, phi, deco));
  Formula residual = Formula::temporal(TOp::G, {a + 2, b}, inner, deco);
  return Formula::conj(Formula::disj(std::move(overlap), std::move(endpoints)),
                       std::move(residual));
}

Formula unroll_g_f_all(const Formula& f) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::Atom:
      return f;
    case Kind::Not:
      return Formula::negation(unroll_g_f_all(f.arg()));
    case Kind::And:
      return Formula::conj(unroll_g_f_all(f.arg(0)), unroll_g_f_all(f.arg(1)));
    case Kind::Or:
      return Formula::disj(unroll_g_f_all(f.arg(0)), unroll_g_f_all(f.arg(1)));
    case Kind::Implies:
      return Formula::implies(unroll_g_f_all(f.arg(0)), unroll_g_f_all(f.arg(1)));
    case Kind::Temporal: {
      if (f.op() == TOp::G && f.arg().is_temporal() && f.arg().op() == TOp::F) {
        Formula inner = f.arg();
        Formula rebuilt = Formula::temporal(
            TOp::G, f.interval(),
            Formula::temporal(TOp::F, inner.interval(), unroll_g_f_all(inner.arg())));
        if (auto unrolled = unroll_g_f(rebuilt)) return *unrolled;
        return rebuilt;
      }
      if (is_unary(f.op()))
        return Formula::temporal(f.op(), f.interval(), unroll_g_f_all(f.arg()));
      return Formula::temporal(f.op(), f.interval(), unroll_g_f_all(f.arg(0)),
                               unroll_g_f_all(f.arg(1)));
    }
  }
  return f;
}

namespace {

std::optional<Formula> try_merge(const Formula& x, const Formula& y) {
  if (!x.is_temporal() || !y.is_temporal()) return std::nullopt;
  if (x.op() != y.op() || !is_unary(x.op())) return std::nullopt;
  if (x.marked() || y.marked()) return std::nullopt;
  if (!(x.parent_interval() == y.parent_interval())) return std::nullopt;
  if (!(x.arg() == y.arg())) return std::nullopt;
  Time a = x.interval().lo, b = x.interval().hi;
  Time c = y.interval().lo, d = y.interval().hi;
  if (x.op() == TOp::G) {
    if (a <= c && c <= b && b <= d) return x.with_interval({a, d});
    if (c <= a && a <= d && d <= b) return x.with_interval({c, b});
  } else {
    if (a <= c && d <= b) return y;  // the contained F implies the wider one
    if (c <= a && b <= d) return x;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Formula> merge_redundant(std::vector<Formula> label) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < label.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < label.size() && !changed; ++j) {
        if (auto merged = try_merge(label[i], label[j])) {
          label[i] = *merged;
          label.erase(label.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
    }
  }
  return label;
}

namespace {

/// Rebuilds `arg` with each of its pcl members' top-level intervals
/// lowered by `shift`. Members are guaranteed temporal by the caller.
Formula lower_members(const Formula& arg, Time shift) {
  switch (arg.kind()) {
    case Kind::And:
      return Formula::conj(lower_members(arg.arg(0), shift), lower_members(arg.arg(1), shift));
    case Kind::Or:
      return Formula::disj(lower_members(arg.arg(0), shift), lower_members(arg.arg(1), shift));
    case Kind::Implies:
      return Formula::implies(lower_members(arg.arg(0), shift),
                              lower_members(arg.arg(1), shift));
    case Kind::Temporal:
      return arg.with_interval({arg.interval().lo - shift, arg.interval().hi - shift});
    default:
      assert(false && "non-temporal pcl member");
      return arg;
  }
}

bool all_members_temporal(const Formula& arg, Time& min_lo) {
  for (const Formula& psi : pcl(arg)) {
    if (!psi.is_temporal()) return false;
    min_lo = std::min(min_lo, psi.interval().lo);
  }
  return true;
}

}  // namespace

Formula shift_nested_intervals(const Formula& f) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::Atom:
      return f;
    case Kind::Not:
      return Formula::negation(shift_nested_intervals(f.arg()));
    case Kind::And:
      return Formula::conj(shift_nested_intervals(f.arg(0)), shift_nested_intervals(f.arg(1)));
    case Kind::Or:
      return Formula::disj(shift_nested_intervals(f.arg(0)), shift_nested_intervals(f.arg(1)));
    case Kind::Implies:
      return Formula::implies(shift_nested_intervals(f.arg(0)),
                              shift_nested_intervals(f.arg(1)));
    case Kind::Temporal: {
      Formula out = f;
      if (is_unary(f.op())) {
        out = Formula::temporal(f.op(), f.interval(), shift_nested_intervals(f.arg()),
                                f.parent_interval(), f.marked());
      } else {
        out = Formula::temporal(f.op(), f.interval(), shift_nested_intervals(f.arg(0)),
                                shift_nested_intervals(f.arg(1)), f.parent_interval(),
                                f.marked());
      }
      Time min_lo = std::numeric_limits<Time>::max();
      bool applicable = true;
      for (std::size_t i = 0; i < out.arity(); ++i)
        applicable = applicable && all_members_temporal(out.arg(i), min_lo);
      if (!applicable || min_lo <= 0) return out;
      Interval raised{out.interval().lo + min_lo, out.interval().hi + min_lo};
      if (is_unary(out.op()))
        return Formula::temporal(out.op(), raised, lower_members(out.arg(), min_lo),
                                 out.parent_interval(), out.marked());
      return Formula::temporal(out.op(), raised, lower_members(out.arg(0), min_lo),
                               lower_members(out.arg(1), min_lo), out.parent_interval(),
                               out.marked());
    }
  }
  return f;
}

}  // namespace stlsat
