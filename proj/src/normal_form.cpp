#include "stlsat/normal_form.hpp"

#include <cassert>

namespace stlsat {

namespace {

LinearConstraint negated_terms(const LinearConstraint& lc, Cmp cmp) {
  LinearConstraint out;
  out.cmp = cmp;
  out.bound = -lc.bound;
  for (const auto& [var, coeff] : lc.terms) out.terms[var] = -coeff;
  return out;
}

/// (f > k) | (-f > -k), i.e. f != k as a disjunction of strict
/// inequalities; keeps the LRA constraint sets convex per branch.
Formula split_disequality(const LinearConstraint& lc) {
  LinearConstraint above = lc;
  above.cmp = Cmp::Gt;
  return Formula::disj(Formula::atom(above), Formula::atom(negated_terms(lc, Cmp::Gt)));
}

struct Normalizer {
  NormalizeOpts opts;

  Formula finally(Interval ivl, Formula arg) const {
    if (opts.keep_gf) return Formula::temporal(TOp::F, ivl, std::move(arg));
    return Formula::temporal(TOp::SU, ivl, Formula::tt(), std::move(arg));
  }

  Formula globally(Interval ivl, Formula arg) const {
    if (opts.keep_gf) return Formula::temporal(TOp::G, ivl, std::move(arg));
    return Formula::temporal(TOp::SR, ivl, Formula::negation(Formula::tt()), std::move(arg));
  }

  Formula run(const Formula& f, bool positive) const {
    switch (f.kind()) {
      case Kind::True:
        return positive ? Formula::tt() : Formula::negation(Formula::tt());
      case Kind::Atom: {
        const LinearConstraint& lc = f.constraint();
        if (positive) {
          if (lc.cmp == Cmp::Neq) return split_disequality(lc);
          return f;
        }
        switch (lc.cmp) {
          case Cmp::Gt: return Formula::atom(negated_terms(lc, Cmp::Ge));
          case Cmp::Ge: return Formula::atom(negated_terms(lc, Cmp::Gt));
          case Cmp::Eq: return split_disequality(lc);
          case Cmp::Neq: {
            LinearConstraint eq = lc;
            eq.cmp = Cmp::Eq;
            return Formula::atom(eq);
          }
        }
        return f;
      }
      case Kind::Not:
        return run(f.arg(), !positive);
      case Kind::And:
        if (positive) return Formula::conj(run(f.arg(0), true), run(f.arg(1), true));
        return Formula::disj(run(f.arg(0), false), run(f.arg(1), false));
      case Kind::Or:
        if (positive) return Formula::disj(run(f.arg(0), true), run(f.arg(1), true));
        return Formula::conj(run(f.arg(0), false), run(f.arg(1), false));
      case Kind::Implies:
        if (!positive) return Formula::conj(run(f.arg(0), true), run(f.arg(1), false));
        if (opts.keep_implies) return Formula::implies(run(f.arg(0), true), run(f.arg(1), true));
        return Formula::disj(run(f.arg(0), false), run(f.arg(1), true));
      case Kind::Temporal:
        return run_temporal(f, positive);
    }
    return f;
  }

  Formula run_temporal(const Formula& f, bool positive) const {
    const Interval ivl = f.interval();
    switch (f.op()) {
      case TOp::F:
        if (positive) return finally(ivl, run(f.arg(), true));
        return globally(ivl, run(f.arg(), false));
      case TOp::G:
        if (positive) return globally(ivl, run(f.arg(), true));
        return finally(ivl, run(f.arg(), false));
      case TOp::SU: {
        TOp op = positive ? TOp::SU : TOp::SR;
        return Formula::temporal(op, ivl, run(f.arg(0), positive), run(f.arg(1), positive));
      }
      case TOp::SR: {
        TOp op = positive ? TOp::SR : TOp::SU;
        return Formula::temporal(op, ivl, run(f.arg(0), positive), run(f.arg(1), positive));
      }
      case TOp::U: {
        // U[a,b](p,q) == G[0,a] p & sU[a,b](p, p & q)
        Formula p = f.arg(0), q = f.arg(1);
        Formula raw = Formula::conj(
            Formula::temporal(TOp::G, {0, ivl.lo}, p),
            Formula::temporal(TOp::SU, ivl, p, Formula::conj(p, q)));
        return run(raw, positive);
      }
      case TOp::R: {
        // R[a,b](p,q) == F[0,a] p | sR[a,b](p & q, q)
        Formula p = f.arg(0), q = f.arg(1);
        Formula raw = Formula::disj(
            Formula::temporal(TOp::F, {0, ivl.lo}, p),
            Formula::temporal(TOp::SR, ivl, Formula::conj(p, q), q));
        return run(raw, positive);
      }
    }
    return f;
  }
};

}  // namespace

Formula to_strict_normal_form(const Formula& f, NormalizeOpts opts) {
  return Normalizer{opts}.run(f, true);
}

Formula negate_normalized(const Formula& f, NormalizeOpts opts) {
  return Normalizer{opts}.run(f, false);
}

bool is_strict_normal_form(const Formula& f, NormalizeOpts opts) {
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::Atom:
      return f.constraint().cmp != Cmp::Neq;
    case Kind::Not:
      return f.arg().kind() == Kind::True;
    case Kind::And:
    case Kind::Or:
      return is_strict_normal_form(f.arg(0), opts) && is_strict_normal_form(f.arg(1), opts);
    case Kind::Implies:
      return opts.keep_implies && is_strict_normal_form(f.arg(0), opts) &&
             is_strict_normal_form(f.arg(1), opts);
    case Kind::Temporal:
      if (f.marked()) return false;
      if (f.op() == TOp::U || f.op() == TOp::R) return false;
      if (is_unary(f.op()) && !opts.keep_gf) return false;
      for (std::size_t i = 0; i < f.arity(); ++i)
        if (!is_strict_normal_form(f.arg(i), opts)) return false;
      return true;
  }
  return false;
}

}  // namespace stlsat
