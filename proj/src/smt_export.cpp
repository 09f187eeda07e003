#include "stlsat/smt_export.hpp"

#include <sstream>

#include "stlsat/oracle.hpp"

namespace stlsat {

namespace {

std::string smt_literal(const Rational& q) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  std::string body =
      den == 1 ? mpz_class(abs(num)).get_str()
               : "(/ " + mpz_class(abs(num)).get_str() + " " + den.get_str() + ")";
  return num < 0 ? "(- " + body + ")" : body;
}

std::string smt_var(const std::string& var, Time t) { return var + "_" + std::to_string(t); }

std::string smt_sum(const LinearConstraint& lc, Time t) {
  std::vector<std::string> parts;
  for (const auto& [var, coeff] : lc.terms) {
    if (coeff == 1) parts.push_back(smt_var(var, t));
    else parts.push_back("(* " + smt_literal(coeff) + " " + smt_var(var, t) + ")");
  }
  if (parts.size() == 1) return parts.front();
  std::string sum = "(+";
  for (const std::string& p : parts) sum += " " + p;
  return sum + ")";
}

void emit_ground(const GroundFormula& g, std::ostream& out) {
  using GKind = GroundFormula::GKind;
  switch (g.kind) {
    case GKind::True:
      out << "true";
      return;
    case GKind::False:
      out << "false";
      return;
    case GKind::Atom: {
      const LinearConstraint& lc = g.atom;
      const char* rel = lc.cmp == Cmp::Gt ? ">" : lc.cmp == Cmp::Ge ? ">=" : "=";
      if (lc.cmp == Cmp::Neq) out << "(not (= " << smt_sum(lc, g.time) << " "
                                  << smt_literal(lc.bound) << "))";
      else out << "(" << rel << " " << smt_sum(lc, g.time) << " " << smt_literal(lc.bound)
               << ")";
      return;
    }
    case GKind::Not:
      out << "(not ";
      emit_ground(g.kids[0], out);
      out << ")";
      return;
    case GKind::And:
    case GKind::Or:
      out << (g.kind == GKind::And ? "(and" : "(or");
      for (const GroundFormula& k : g.kids) {
        out << " ";
        emit_ground(k, out);
      }
      out << ")";
      return;
  }
}

}  // namespace

std::string emit_smtlib(const Formula& f) {
  Time h = horizon(f);
  std::ostringstream out;
  out << "(set-logic QF_LRA)\n";
  for (const std::string& var : collect_variables(f))
    for (Time t = 0; t <= h; ++t)
      out << "(declare-const " << smt_var(var, t) << " Real)\n";
  out << "(assert ";
  emit_ground(ground_expand(f, h), out);
  out << ")\n(check-sat)\n";
  return out.str();
}

}  // namespace stlsat
