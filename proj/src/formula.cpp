#include "stlsat/formula.hpp"

#include <cassert>
#include <functional>
#include <sstream>

namespace stlsat {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  return std::hash<std::string>{}(q.get_str());
}

std::size_t hash_constraint(const LinearConstraint& lc) {
  std::size_t h = static_cast<std::size_t>(lc.cmp);
  for (const auto& [var, coeff] : lc.terms) {
    h = hash_combine(h, std::hash<std::string>{}(var));
    h = hash_combine(h, hash_rational(coeff));
  }
  return hash_combine(h, hash_rational(lc.bound));
}

const char* cmp_symbol(Cmp c) {
  switch (c) {
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    case Cmp::Eq: return "==";
    case Cmp::Neq: return "!=";
  }
  return "?";
}

}  // namespace

bool LinearConstraint::operator==(const LinearConstraint& other) const {
  return cmp == other.cmp && bound == other.bound && terms == other.terms;
}

std::string LinearConstraint::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [var, coeff] : terms) {
    Rational mag = abs(coeff);
    if (first) {
      if (coeff < 0) out << "-";
      first = false;
    } else {
      out << (coeff < 0 ? " - " : " + ");
    }
    if (mag != 1) out << format_rational(mag) << "*";
    out << var;
  }
  out << " " << cmp_symbol(cmp) << " " << format_rational(bound);
  return out.str();
}

bool LinearConstraint::holds(const std::map<std::string, Rational>& assignment) const {
  Rational lhs = 0;
  for (const auto& [var, coeff] : terms) {
    auto it = assignment.find(var);
    if (it != assignment.end()) lhs += coeff * it->second;
  }
  switch (cmp) {
    case Cmp::Gt: return lhs > bound;
    case Cmp::Ge: return lhs >= bound;
    case Cmp::Eq: return lhs == bound;
    case Cmp::Neq: return lhs != bound;
  }
  return false;
}

int compare(const LinearConstraint& a, const LinearConstraint& b) {
  if (a.cmp != b.cmp) return a.cmp < b.cmp ? -1 : 1;
  if (a.bound != b.bound) return a.bound < b.bound ? -1 : 1;
  auto ia = a.terms.begin(), ib = b.terms.begin();
  for (; ia != a.terms.end() && ib != b.terms.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
  }
  if (ia != a.terms.end()) return 1;
  if (ib != b.terms.end()) return -1;
  return 0;
}

bool is_unary(TOp op) { return op == TOp::F || op == TOp::G; }

const char* top_name(TOp op) {
  switch (op) {
    case TOp::F: return "F";
    case TOp::G: return "G";
    case TOp::U: return "U";
    case TOp::R: return "R";
    case TOp::SU: return "sU";
    case TOp::SR: return "sR";
  }
  return "?";
}

Formula Formula::make(FNode node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x100000001b3ULL;
  switch (node.kind) {
    case Kind::Atom:
      h = hash_combine(h, hash_constraint(node.constraint));
      break;
    case Kind::Temporal:
      h = hash_combine(h, static_cast<std::size_t>(node.op));
      h = hash_combine(h, static_cast<std::size_t>(node.interval.lo));
      h = hash_combine(h, static_cast<std::size_t>(node.interval.hi));
      h = hash_combine(h, static_cast<std::size_t>(node.parent.lo));
      h = hash_combine(h, static_cast<std::size_t>(node.parent.hi));
      h = hash_combine(h, node.marked ? 0x9e37u : 0x79b9u);
      break;
    default:
      break;
  }
  for (const Formula& kid : node.kids) h = hash_combine(h, kid.hash());
  node.hash = h;
  return Formula(std::make_shared<const FNode>(std::move(node)));
}

Formula Formula::tt() {
  static const Formula instance = make(FNode{});
  return instance;
}

Formula Formula::atom(LinearConstraint lc) {
  assert(!lc.terms.empty());
  FNode node;
  node.kind = Kind::Atom;
  node.constraint = std::move(lc);
  return make(std::move(node));
}

Formula Formula::negation(Formula f) {
  FNode node;
  node.kind = Kind::Not;
  node.kids = {std::move(f)};
  return make(std::move(node));
}

Formula Formula::conj(Formula a, Formula b) {
  FNode node;
  node.kind = Kind::And;
  node.kids = {std::move(a), std::move(b)};
  return make(std::move(node));
}

Formula Formula::disj(Formula a, Formula b) {
  FNode node;
  node.kind = Kind::Or;
  node.kids = {std::move(a), std::move(b)};
  return make(std::move(node));
}

Formula Formula::implies(Formula a, Formula b) {
  FNode node;
  node.kind = Kind::Implies;
  node.kids = {std::move(a), std::move(b)};
  return make(std::move(node));
}

Formula Formula::temporal(TOp op, Interval ivl, Formula arg, ParentInterval parent, bool marked) {
  assert(is_unary(op));
  assert(ivl.lo >= 0 && ivl.lo <= ivl.hi);
  FNode node;
  node.kind = Kind::Temporal;
  node.op = op;
  node.interval = ivl;
  node.parent = parent;
  node.marked = marked;
  node.kids = {std::move(arg)};
  return make(std::move(node));
}

Formula Formula::temporal(TOp op, Interval ivl, Formula lhs, Formula rhs, ParentInterval parent,
                          bool marked) {
  assert(!is_unary(op));
  assert(ivl.lo >= 0 && ivl.lo <= ivl.hi);
  FNode node;
  node.kind = Kind::Temporal;
  node.op = op;
  node.interval = ivl;
  node.parent = parent;
  node.marked = marked;
  node.kids = {std::move(lhs), std::move(rhs)};
  return make(std::move(node));
}

bool Formula::is_term() const {
  switch (kind()) {
    case Kind::True:
    case Kind::Atom:
      return true;
    case Kind::Not:
      return arg().kind() == Kind::True || arg().kind() == Kind::Atom;
    default:
      return false;
  }
}

Formula Formula::with_mark(bool marked) const {
  assert(is_temporal());
  if (node_->marked == marked) return *this;
  FNode copy = *node_;
  copy.marked = marked;
  return make(std::move(copy));
}

Formula Formula::with_interval(Interval ivl) const {
  assert(is_temporal());
  FNode copy = *node_;
  copy.interval = ivl;
  return make(std::move(copy));
}

Formula Formula::with_parent(ParentInterval parent) const {
  assert(is_temporal());
  if (node_->parent == parent) return *this;
  FNode copy = *node_;
  copy.parent = parent;
  return make(std::move(copy));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  if (node_->hash != other.node_->hash) return false;
  return compare(*this, other) == 0;
}

int compare(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::True:
      return 0;
    case Kind::Atom:
      return compare(a.constraint(), b.constraint());
    case Kind::Temporal: {
      if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
      if (a.marked() != b.marked()) return a.marked() < b.marked() ? -1 : 1;
      if (a.interval().lo != b.interval().lo) return a.interval().lo < b.interval().lo ? -1 : 1;
      if (a.interval().hi != b.interval().hi) return a.interval().hi < b.interval().hi ? -1 : 1;
      if (a.parent_interval().lo != b.parent_interval().lo)
        return a.parent_interval().lo < b.parent_interval().lo ? -1 : 1;
      if (a.parent_interval().hi != b.parent_interval().hi)
        return a.parent_interval().hi < b.parent_interval().hi ? -1 : 1;
      break;
    }
    default:
      break;
  }
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    int c = compare(a.arg(i), b.arg(i));
    if (c != 0) return c;
  }
  return 0;
}

std::vector<Formula> pcl(const Formula& f) {
  switch (f.kind()) {
    case Kind::Not:
      return {f.arg()};
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return {f.arg(0), f.arg(1)};
    default:
      return {f};
  }
}

Time horizon(const Formula& f) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::Atom:
      return 0;
    case Kind::Not:
      return horizon(f.arg());
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return std::max(horizon(f.arg(0)), horizon(f.arg(1)));
    case Kind::Temporal: {
      Time h = 0;
      for (std::size_t i = 0; i < f.arity(); ++i) h = std::max(h, horizon(f.arg(i)));
      return f.interval().hi + h;
    }
  }
  return 0;
}

Formula temporal_expansion(const Formula& f, Time t, const ParentInterval* parent) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::Atom:
      return f;
    case Kind::Not:
      return Formula::negation(temporal_expansion(f.arg(), t, parent));
    case Kind::And:
      return Formula::conj(temporal_expansion(f.arg(0), t, parent),
                           temporal_expansion(f.arg(1), t, parent));
    case Kind::Or:
      return Formula::disj(temporal_expansion(f.arg(0), t, parent),
                           temporal_expansion(f.arg(1), t, parent));
    case Kind::Implies:
      return Formula::implies(temporal_expansion(f.arg(0), t, parent),
                              temporal_expansion(f.arg(1), t, parent));
    case Kind::Temporal: {
      Formula shifted = f.with_interval({f.interval().lo + t, f.interval().hi + t});
      if (parent != nullptr) shifted = shifted.with_parent(*parent);
      return shifted;
    }
  }
  return f;
}

namespace {

void format_into(const Formula& f, std::ostringstream& out) {
  switch (f.kind()) {
    case Kind::True:
      out << "true";
      return;
    case Kind::Atom:
      out << f.constraint().str();
      return;
    case Kind::Not:
      out << "!(";
      format_into(f.arg(), out);
      out << ")";
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies: {
      const char* sym = f.kind() == Kind::And ? "&" : f.kind() == Kind::Or ? "|" : "->";
      out << "(";
      format_into(f.arg(0), out);
      out << ") " << sym << " (";
      format_into(f.arg(1), out);
      out << ")";
      return;
    }
    case Kind::Temporal: {
      auto emit_op = [&](std::size_t lhs_count) {
        out << top_name(f.op());
        if (f.marked()) out << "*";
        if (!f.parent_interval().none())
          out << "^[" << f.parent_interval().lo << "," << f.parent_interval().hi << "]";
        out << "[" << f.interval().lo << "," << f.interval().hi << "]";
        (void)lhs_count;
      };
      if (is_unary(f.op())) {
        emit_op(0);
        out << " (";
        format_into(f.arg(), out);
        out << ")";
      } else {
        out << "(";
        format_into(f.arg(0), out);
        out << ") ";
        emit_op(1);
        out << " (";
        format_into(f.arg(1), out);
        out << ")";
      }
      return;
    }
  }
}

}  // namespace

std::string format(const Formula& f) {
  std::ostringstream out;
  format_into(f, out);
  return out.str();
}

std::string Formula::str() const { return format(*this); }

namespace {

void collect_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Kind::Atom) {
    for (const auto& [var, coeff] : f.constraint().terms) out.insert(var);
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_vars(f.arg(i), out);
}

}  // namespace

std::vector<std::string> collect_variables(const Formula& f) {
  std::set<std::string> vars;
  collect_vars(f, vars);
  return {vars.begin(), vars.end()};
}

}  // namespace stlsat
