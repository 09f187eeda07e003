#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stlsat/rational.hpp"

namespace stlsat {

using Time = long long;

/// Comparison relations of linear-constraint atoms. Parsing and
/// negation only ever produce these four; normalization removes Neq.
enum class Cmp { Gt, Ge, Eq, Neq };

/// A linear function over signal variables compared against a
/// rational bound: sum(coeff_i * var_i) <cmp> bound.
struct LinearConstraint {
  std::map<std::string, Rational> terms;  // no zero coefficients
  Cmp cmp = Cmp::Gt;
  Rational bound = 0;

  bool operator==(const LinearConstraint& other) const;
  std::string str() const;
  /// Evaluates the relation under an exact variable assignment.
  /// Missing variables count as 0.
  bool holds(const std::map<std::string, Rational>& assignment) const;
};

int compare(const LinearConstraint& a, const LinearConstraint& b);

struct Interval {
  Time lo = 0;
  Time hi = 0;

  bool contains(Time t) const { return lo <= t && t <= hi; }
  bool operator==(const Interval& other) const = default;
};

/// Interval of the operator a nested operator was extracted from.
/// [-1,-1] means top level (no parent).
struct ParentInterval {
  Time lo = -1;
  Time hi = -1;

  bool none() const { return lo == -1 && hi == -1; }
  bool contains(Time t) const { return !none() && lo <= t && t <= hi; }
  bool operator==(const ParentInterval& other) const = default;
};

enum class Kind { True, Atom, Not, And, Or, Implies, Temporal };
enum class TOp { F, G, U, R, SU, SR };

bool is_unary(TOp op);
const char* top_name(TOp op);

class Formula;

struct FNode {
  Kind kind = Kind::True;
  // Atom payload
  LinearConstraint constraint;
  // Temporal payload
  TOp op = TOp::F;
  Interval interval;
  ParentInterval parent;
  bool marked = false;
  // Subformulas (1 for Not and unary temporals, 2 for binary)
  std::vector<Formula> kids;
  std::size_t hash = 0;
};

/// Immutable formula value; cheap to copy and safe to share across
/// threads once constructed.
class Formula {
 public:
  Formula() = default;

  static Formula tt();
  static Formula atom(LinearConstraint lc);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula temporal(TOp op, Interval ivl, Formula arg,
                          ParentInterval parent = {}, bool marked = false);
  static Formula temporal(TOp op, Interval ivl, Formula lhs, Formula rhs,
                          ParentInterval parent = {}, bool marked = false);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  const LinearConstraint& constraint() const { return node_->constraint; }
  TOp op() const { return node_->op; }
  const Interval& interval() const { return node_->interval; }
  const ParentInterval& parent_interval() const { return node_->parent; }
  bool marked() const { return node_->marked; }
  const Formula& arg(std::size_t i = 0) const { return node_->kids[i]; }
  std::size_t arity() const { return node_->kids.size(); }
  std::size_t hash() const { return node_->hash; }

  bool is_temporal() const { return kind() == Kind::Temporal; }
  /// Terms are the non-expandable propositional pieces: true, atoms,
  /// and their negations.
  bool is_term() const;

  Formula with_mark(bool marked) const;
  Formula with_interval(Interval ivl) const;
  Formula with_parent(ParentInterval parent) const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  std::string str() const;

 private:
  explicit Formula(std::shared_ptr<const FNode> node) : node_(std::move(node)) {}
  static Formula make(FNode node);

  std::shared_ptr<const FNode> node_;
};

/// Total structural order (used for canonical label sorting).
int compare(const Formula& a, const Formula& b);

struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};

/// Propositional closure: {arg} for negations, both arguments for
/// binary connectives, {f} for temporal operators and terms.
std::vector<Formula> pcl(const Formula& f);

/// Time horizon: how far into the future the formula can constrain a
/// signal (0 for terms, b + max of arguments for B[a,b]).
Time horizon(const Formula& f);

/// Shifts the intervals of top-level temporal operators by +t. When
/// `parent` is set, also decorates them with it (jump mode); passing
/// nullptr leaves decorations untouched (basic mode).
Formula temporal_expansion(const Formula& f, Time t, const ParentInterval* parent);

/// Canonical printing; parse_stl(format(f)) round-trips for any
/// user-constructible formula. Marks print as a trailing '*' and
/// parent decorations as '^[lo,hi]' (debug only, not parseable).
std::string format(const Formula& f);

std::vector<std::string> collect_variables(const Formula& f);

}  // namespace stlsat
