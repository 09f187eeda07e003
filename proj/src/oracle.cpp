#include "stlsat/oracle.hpp"

#include <cassert>
#include <optional>

#include "stlsat/lra.hpp"

namespace stlsat {

bool evaluate(const Formula& f, const Signal& w, Time t) {
  if (t + horizon(f) >= w.length) throw std::out_of_range("signal too short");
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::Atom: {
      const auto& row = w.rows[static_cast<std::size_t>(t)];
      return f.constraint().holds(row);
    }
    case Kind::Not:
      return !evaluate(f.arg(), w, t);
    case Kind::And:
      return evaluate(f.arg(0), w, t) && evaluate(f.arg(1), w, t);
    case Kind::Or:
      return evaluate(f.arg(0), w, t) || evaluate(f.arg(1), w, t);
    case Kind::Implies:
      return !evaluate(f.arg(0), w, t) || evaluate(f.arg(1), w, t);
    case Kind::Temporal: {
      Time a = f.interval().lo, b = f.interval().hi;
      switch (f.op()) {
        case TOp::F:
          for (Time s = t + a; s <= t + b; ++s)
            if (evaluate(f.arg(), w, s)) return true;
          return false;
        case TOp::G:
          for (Time s = t + a; s <= t + b; ++s)
            if (!evaluate(f.arg(), w, s)) return false;
          return true;
        case TOp::U:
          for (Time s = t + a; s <= t + b; ++s) {
            if (!evaluate(f.arg(1), w, s)) continue;
            bool all = true;
            for (Time r = t; r <= s && all; ++r) all = evaluate(f.arg(0), w, r);
            if (all) return true;
          }
          return false;
        case TOp::R:
          for (Time s = t + a; s <= t + b; ++s) {
            if (evaluate(f.arg(1), w, s)) continue;
            bool released = false;
            for (Time r = t; r <= s && !released; ++r) released = evaluate(f.arg(0), w, r);
            if (!released) return false;
          }
          return true;
        case TOp::SU:
          for (Time s = t + a; s <= t + b; ++s) {
            if (!evaluate(f.arg(1), w, s)) continue;
            bool all = true;
            for (Time r = t + a; r < s && all; ++r) all = evaluate(f.arg(0), w, r);
            if (all) return true;
          }
          return false;
        case TOp::SR:
          for (Time s = t + a; s <= t + b; ++s) {
            if (evaluate(f.arg(1), w, s)) continue;
            bool released = false;
            for (Time r = t + a; r < s && !released; ++r) released = evaluate(f.arg(0), w, r);
            if (!released) return false;
          }
          return true;
      }
    }
  }
  return false;
}

namespace {

GroundFormula gand(std::vector<GroundFormula> kids) {
  std::vector<GroundFormula> keep;
  for (auto& k : kids) {
    if (k.kind == GroundFormula::GKind::False) return GroundFormula::constant(false);
    if (k.kind != GroundFormula::GKind::True) keep.push_back(std::move(k));
  }
  if (keep.empty()) return GroundFormula::constant(true);
  if (keep.size() == 1) return std::move(keep.front());
  return {GroundFormula::GKind::And, 0, {}, std::move(keep)};
}

GroundFormula gor(std::vector<GroundFormula> kids) {
  std::vector<GroundFormula> keep;
  for (auto& k : kids) {
    if (k.kind == GroundFormula::GKind::True) return GroundFormula::constant(true);
    if (k.kind != GroundFormula::GKind::False) keep.push_back(std::move(k));
  }
  if (keep.empty()) return GroundFormula::constant(false);
  if (keep.size() == 1) return std::move(keep.front());
  return {GroundFormula::GKind::Or, 0, {}, std::move(keep)};
}

GroundFormula gnot(GroundFormula g) {
  if (g.kind == GroundFormula::GKind::True) return GroundFormula::constant(false);
  if (g.kind == GroundFormula::GKind::False) return GroundFormula::constant(true);
  return {GroundFormula::GKind::Not, 0, {}, {std::move(g)}};
}

GroundFormula expand_at(const Formula& f, Time t) {
  switch (f.kind()) {
    case Kind::True:
      return GroundFormula::constant(true);
    case Kind::Atom:
      return {GroundFormula::GKind::Atom, t, f.constraint(), {}};
    case Kind::Not:
      return gnot(expand_at(f.arg(), t));
    case Kind::And:
      return gand({expand_at(f.arg(0), t), expand_at(f.arg(1), t)});
    case Kind::Or:
      return gor({expand_at(f.arg(0), t), expand_at(f.arg(1), t)});
    case Kind::Implies:
      return gor({gnot(expand_at(f.arg(0), t)), expand_at(f.arg(1), t)});
    case Kind::Temporal: {
      Time a = f.interval().lo, b = f.interval().hi;
      std::vector<GroundFormula> parts;
      switch (f.op()) {
        case TOp::F:
          for (Time s = t + a; s <= t + b; ++s) parts.push_back(expand_at(f.arg(), s));
          return gor(std::move(parts));
        case TOp::G:
          for (Time s = t + a; s <= t + b; ++s) parts.push_back(expand_at(f.arg(), s));
          return gand(std::move(parts));
        case TOp::U:
          for (Time s = t + a; s <= t + b; ++s) {
            std::vector<GroundFormula> conj{expand_at(f.arg(1), s)};
            for (Time r = t; r <= s; ++r) conj.push_back(expand_at(f.arg(0), r));
            parts.push_back(gand(std::move(conj)));
          }
          return gor(std::move(parts));
        case TOp::R:
          for (Time s = t + a; s <= t + b; ++s) {
            std::vector<GroundFormula> disj{expand_at(f.arg(1), s)};
            for (Time r = t; r <= s; ++r) disj.push_back(expand_at(f.arg(0), r));
            parts.push_back(gor(std::move(disj)));
          }
          return gand(std::move(parts));
        case TOp::SU:
          for (Time s = t + a; s <= t + b; ++s) {
            std::vector<GroundFormula> conj{expand_at(f.arg(1), s)};
            for (Time r = t + a; r < s; ++r) conj.push_back(expand_at(f.arg(0), r));
            parts.push_back(gand(std::move(conj)));
          }
          return gor(std::move(parts));
        case TOp::SR:
          for (Time s = t + a; s <= t + b; ++s) {
            std::vector<GroundFormula> disj{expand_at(f.arg(1), s)};
            for (Time r = t + a; r < s; ++r) disj.push_back(expand_at(f.arg(0), r));
            parts.push_back(gor(std::move(disj)));
          }
          return gand(std::move(parts));
      }
    }
  }
  return GroundFormula::constant(false);
}

Time max_atom_time(const GroundFormula& g) {
  Time t = 0;
  if (g.kind == GroundFormula::GKind::Atom) t = g.time;
  for (const GroundFormula& k : g.kids) t = std::max(t, max_atom_time(k));
  return t;
}

}  // namespace

GroundFormula ground_expand(const Formula& f, Time h) {
  (void)h;
  assert(h >= horizon(f));
  GroundFormula g = expand_at(f, 0);
  assert(max_atom_time(g) <= h);
  (void)max_atom_time;
  return g;
}

namespace {

bool boolean_encoded(const Formula& f) {
  switch (f.kind()) {
    case Kind::Atom: {
      const LinearConstraint& lc = f.constraint();
      return lc.terms.size() == 1 && lc.terms.begin()->second == 1 && lc.cmp == Cmp::Eq &&
             lc.bound == 1;
    }
    default:
      for (std::size_t i = 0; i < f.arity(); ++i)
        if (!boolean_encoded(f.arg(i))) return false;
      return true;
  }
}

using TimedVar = std::pair<Time, std::string>;

std::optional<TimedVar> first_atom(const GroundFormula& g) {
  if (g.kind == GroundFormula::GKind::Atom)
    return TimedVar{g.time, g.atom.terms.begin()->first};
  for (const GroundFormula& k : g.kids)
    if (auto tv = first_atom(k)) return tv;
  return std::nullopt;
}

/// Constant-folds g under var@time := value (value in {0,1}).
GroundFormula reduce(const GroundFormula& g, const TimedVar& tv, bool value) {
  switch (g.kind) {
    case GroundFormula::GKind::True:
    case GroundFormula::GKind::False:
      return g;
    case GroundFormula::GKind::Atom: {
      if (g.time != tv.first || g.atom.terms.begin()->first != tv.second) return g;
      std::map<std::string, Rational> assign{{tv.second, Rational(value ? 1 : 0)}};
      return GroundFormula::constant(g.atom.holds(assign));
    }
    case GroundFormula::GKind::Not:
      return gnot(reduce(g.kids[0], tv, value));
    case GroundFormula::GKind::And: {
      std::vector<GroundFormula> kids;
      kids.reserve(g.kids.size());
      for (const GroundFormula& k : g.kids) kids.push_back(reduce(k, tv, value));
      return gand(std::move(kids));
    }
    case GroundFormula::GKind::Or: {
      std::vector<GroundFormula> kids;
      kids.reserve(g.kids.size());
      for (const GroundFormula& k : g.kids) kids.push_back(reduce(k, tv, value));
      return gor(std::move(kids));
    }
  }
  return g;
}

/// Enumerates {0,1} signal values one timed variable at a time,
/// constant-folding after each choice.
bool boolean_sat(const GroundFormula& g) {
  if (g.kind == GroundFormula::GKind::True) return true;
  if (g.kind == GroundFormula::GKind::False) return false;
  auto tv = first_atom(g);
  assert(tv.has_value());
  return boolean_sat(reduce(g, *tv, true)) || boolean_sat(reduce(g, *tv, false));
}

constexpr std::uint64_t kDnfCap = 1ULL << 18;

struct DnfSearch {
  std::uint64_t conjuncts = 0;
  bool found = false;

  void run(std::vector<const GroundFormula*> pending, std::vector<bool> polarity,
           ConstraintSet conj) {
    if (found) return;
    while (!pending.empty()) {
      const GroundFormula* g = pending.back();
      bool pos = polarity.back();
      pending.pop_back();
      polarity.pop_back();
      switch (g->kind) {
        case GroundFormula::GKind::True:
          if (!pos) return;  // branch contains falsehood
          continue;
        case GroundFormula::GKind::False:
          if (pos) return;
          continue;
        case GroundFormula::GKind::Not:
          pending.push_back(&g->kids[0]);
          polarity.push_back(!pos);
          continue;
        case GroundFormula::GKind::And:
        case GroundFormula::GKind::Or: {
          bool conjunctive = (g->kind == GroundFormula::GKind::And) == pos;
          if (conjunctive) {
            for (const GroundFormula& k : g->kids) {
              pending.push_back(&k);
              polarity.push_back(pos);
            }
            continue;
          }
          // Disjunctive: branch per child.
          for (const GroundFormula& k : g->kids) {
            auto next = pending;
            auto next_pol = polarity;
            next.push_back(&k);
            next_pol.push_back(pos);
            run(std::move(next), std::move(next_pol), conj);
            if (found) return;
          }
          return;
        }
        case GroundFormula::GKind::Atom: {
          LinearConstraint lc = timed_atom(*g);
          if (pos) {
            if (lc.cmp == Cmp::Neq) {  // split into two strict branches
              branch_two_strict(lc, pending, polarity, conj);
              return;
            }
            conj.push_back(std::move(lc));
            continue;
          }
          switch (lc.cmp) {
            case Cmp::Gt:
              conj.push_back(negate_constraint(lc, Cmp::Ge));
              continue;
            case Cmp::Ge:
              conj.push_back(negate_constraint(lc, Cmp::Gt));
              continue;
            case Cmp::Eq:
              branch_two_strict(lc, pending, polarity, conj);
              return;
            case Cmp::Neq:
              lc.cmp = Cmp::Eq;
              conj.push_back(std::move(lc));
              continue;
          }
        }
      }
    }
    if (++conjuncts > kDnfCap)
      throw OracleCapExceeded("DNF conjunct cap exceeded in brute-force oracle");
    if (check_consistent(conj).consistent) found = true;
  }

 private:
  static LinearConstraint timed_atom(const GroundFormula& g) {
    LinearConstraint lc;
    lc.cmp = g.atom.cmp;
    lc.bound = g.atom.bound;
    for (const auto& [var, coeff] : g.atom.terms)
      lc.terms[var + "@" + std::to_string(g.time)] = coeff;
    return lc;
  }

  static LinearConstraint negate_constraint(const LinearConstraint& lc, Cmp cmp) {
    LinearConstraint out;
    out.cmp = cmp;
    out.bound = -lc.bound;
    for (const auto& [var, coeff] : lc.terms) out.terms[var] = -coeff;
    return out;
  }

  void branch_two_strict(const LinearConstraint& lc,
                         const std::vector<const GroundFormula*>& pending,
                         const std::vector<bool>& polarity, const ConstraintSet& conj) {
    // lc as a disequality: (f > k) or (-f > -k).
    LinearConstraint above = lc;
    above.cmp = Cmp::Gt;
    LinearConstraint below = negate_constraint(lc, Cmp::Gt);
    for (const LinearConstraint& side : {above, below}) {
      if (found) return;
      auto with = conj;
      with.push_back(side);
      run(pending, polarity, std::move(with));
    }
  }
};

}  // namespace

Status brute_force_check(const Formula& f, Time cap) {
  Time h = horizon(f);
  if (h > cap)
    throw OracleCapExceeded("formula horizon " + std::to_string(h) +
                            " exceeds the oracle cap " + std::to_string(cap));
  GroundFormula g = ground_expand(f, h);
  if (boolean_encoded(f)) return boolean_sat(g) ? Status::Sat : Status::Unsat;

  DnfSearch search;
  search.run({&g}, {true}, {});
  return search.found ? Status::Sat : Status::Unsat;
}

}  // namespace stlsat
