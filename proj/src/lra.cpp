#include "stlsat/lra.hpp"

#include <cassert>

namespace stlsat {

namespace {

/// real + delta * d, with an infinitesimal delta > 0. Ordered
/// lexicographically.
struct DeltaRational {
  Rational real = 0;
  Rational delta = 0;

  bool operator==(const DeltaRational& o) const { return real == o.real && delta == o.delta; }
  bool operator<(const DeltaRational& o) const {
    if (real != o.real) return real < o.real;
    return delta < o.delta;
  }
  bool operator<=(const DeltaRational& o) const { return *this < o || *this == o; }

  DeltaRational& operator+=(const DeltaRational& o) {
    real += o.real;
    delta += o.delta;
    return *this;
  }
  DeltaRational operator-(const DeltaRational& o) const { return {real - o.real, delta - o.delta}; }
  DeltaRational scaled(const Rational& c) const { return {real * c, delta * c}; }
};

class Simplex {
 public:
  bool solve(const ConstraintSet& constraints, std::map<std::string, Rational>* model_out) {
    // Ground constraints (no variables) are decided immediately.
    for (const LinearConstraint& lc : constraints) {
      assert(lc.cmp != Cmp::Neq);
      if (!lc.terms.empty()) continue;
      Rational zero = 0;
      bool ok = lc.cmp == Cmp::Gt ? zero > lc.bound
                : lc.cmp == Cmp::Ge ? zero >= lc.bound
                                    : zero == lc.bound;
      if (!ok) return false;
    }

    build(constraints);
    if (!assert_all(constraints)) return false;
    if (!check()) return false;
    if (model_out) extract_model(constraints, *model_out);
    return true;
  }

 private:
  int var_id(const std::string& name) {
    auto it = var_index_.find(name);
    if (it != var_index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    var_index_.emplace(name, id);
    names_.push_back(name);
    return id;
  }

  void build(const ConstraintSet& constraints) {
    for (const LinearConstraint& lc : constraints)
      for (const auto& [var, coeff] : lc.terms) var_id(var);
    num_structural_ = static_cast<int>(names_.size());

    // One slack variable per distinct multi-variable linear form,
    // defined by a tableau row slack = sum(coeff * var).
    for (const LinearConstraint& lc : constraints) {
      if (lc.terms.size() < 2) continue;
      if (slack_of_.count(lc.terms)) continue;
      int slack = static_cast<int>(names_.size());
      names_.push_back("$s" + std::to_string(slack_of_.size()));
      slack_of_.emplace(lc.terms, slack);
    }

    int n = static_cast<int>(names_.size());
    beta_.assign(n, {});
    lower_.assign(n, std::nullopt);
    upper_.assign(n, std::nullopt);
    row_of_.assign(n, -1);
    for (const auto& [terms, slack] : slack_of_) {
      std::vector<Rational> row(n, Rational(0));
      for (const auto& [var, coeff] : terms) row[var_index_.at(var)] = coeff;
      row_of_[slack] = static_cast<int>(rows_.size());
      basic_.push_back(slack);
      rows_.push_back(std::move(row));
    }
  }

  bool assert_all(const ConstraintSet& constraints) {
    for (const LinearConstraint& lc : constraints) {
      if (lc.terms.empty()) continue;
      int v;
      Rational scale = 1;
      if (lc.terms.size() == 1) {
        v = var_index_.at(lc.terms.begin()->first);
        scale = lc.terms.begin()->second;
      } else {
        v = slack_of_.at(lc.terms);
      }
      // scale * v  cmp  bound   =>   v  cmp'  bound / scale
      Rational value = lc.bound / scale;
      bool flipped = scale < 0;
      switch (lc.cmp) {
        case Cmp::Gt: {
          DeltaRational b{value, Rational(1) / abs(scale)};
          if (flipped) {
            b.delta = -b.delta;
            if (!assert_upper(v, b)) return false;
          } else {
            if (!assert_lower(v, b)) return false;
          }
          break;
        }
        case Cmp::Ge: {
          DeltaRational b{value, 0};
          if (flipped ? !assert_upper(v, b) : !assert_lower(v, b)) return false;
          break;
        }
        case Cmp::Eq: {
          DeltaRational b{value, 0};
          if (!assert_lower(v, b) || !assert_upper(v, b)) return false;
          break;
        }
        case Cmp::Neq:
          assert(false && "disequalities must be eliminated upstream");
          return false;
      }
    }
    return true;
  }

  bool assert_lower(int v, const DeltaRational& b) {
    if (upper_[v] && *upper_[v] < b) return false;
    if (lower_[v] && b <= *lower_[v]) return true;
    lower_[v] = b;
    if (row_of_[v] < 0 && beta_[v] < b) update(v, b);
    return true;
  }

  bool assert_upper(int v, const DeltaRational& b) {
    if (lower_[v] && b < *lower_[v]) return false;
    if (upper_[v] && *upper_[v] <= b) return true;
    upper_[v] = b;
    if (row_of_[v] < 0 && b < beta_[v]) update(v, b);
    return true;
  }

  void update(int nonbasic, const DeltaRational& value) {
    DeltaRational diff = value - beta_[nonbasic];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational& c = rows_[r][nonbasic];
      if (c != 0) beta_[basic_[r]] += diff.scaled(c);
    }
    beta_[nonbasic] = value;
  }

  bool check() {
    while (true) {
      int bvar = -1;
      bool below = false;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        int v = basic_[r];
        if (lower_[v] && beta_[v] < *lower_[v]) {
          if (bvar < 0 || v < bvar) {
            bvar = v;
            below = true;
          }
        } else if (upper_[v] && *upper_[v] < beta_[v]) {
          if (bvar < 0 || v < bvar) {
            bvar = v;
            below = false;
          }
        }
      }
      if (bvar < 0) return true;

      int r = row_of_[bvar];
      int pivot_var = -1;
      for (int v = 0; v < static_cast<int>(names_.size()); ++v) {
        if (row_of_[v] >= 0 || v == bvar) continue;
        const Rational& a = rows_[r][v];
        if (a == 0) continue;
        bool can_increase = !upper_[v] || beta_[v] < *upper_[v];
        bool can_decrease = !lower_[v] || *lower_[v] < beta_[v];
        bool suitable = below ? (a > 0 ? can_increase : can_decrease)
                              : (a > 0 ? can_decrease : can_increase);
        if (suitable) {
          pivot_var = v;
          break;  // Bland's rule: smallest suitable index
        }
      }
      if (pivot_var < 0) return false;
      pivot_and_update(r, bvar, pivot_var, below ? *lower_[bvar] : *upper_[bvar]);
    }
  }

  void pivot_and_update(int r, int xi, int xj, const DeltaRational& target) {
    Rational a = rows_[r][xj];
    DeltaRational theta = (target - beta_[xi]).scaled(1 / a);
    beta_[xi] = target;
    beta_[xj] += theta;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (static_cast<int>(k) == r) continue;
      const Rational& c = rows_[k][xj];
      if (c != 0) beta_[basic_[k]] += theta.scaled(c);
    }
    pivot(r, xi, xj);
  }

  void pivot(int r, int xi, int xj) {
    // Re-express row r as a definition of xj, then eliminate xj from
    // every other row.
    Rational a = rows_[r][xj];
    std::vector<Rational>& row = rows_[r];
    row[xj] = 0;
    row[xi] = -1;
    for (Rational& c : row) c /= -a;

    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (static_cast<int>(k) == r) continue;
      Rational c = rows_[k][xj];
      if (c == 0) continue;
      rows_[k][xj] = 0;
      for (int v = 0; v < static_cast<int>(names_.size()); ++v)
        if (row[v] != 0) rows_[k][v] += c * row[v];
    }
    basic_[r] = xj;
    row_of_[xj] = r;
    row_of_[xi] = -1;
  }

  void extract_model(const ConstraintSet& constraints, std::map<std::string, Rational>& model) {
    // Pick a concrete positive value for delta small enough that every
    // strict constraint stays satisfied after substitution.
    std::optional<Rational> cap;
    for (const LinearConstraint& lc : constraints) {
      if (lc.terms.empty()) continue;
      DeltaRational lhs;
      for (const auto& [var, coeff] : lc.terms)
        lhs += beta_[var_index_.at(var)].scaled(coeff);
      Rational margin = lhs.real - lc.bound;
      assert(margin >= 0 || lc.cmp == Cmp::Eq);
      if (margin > 0 && lhs.delta < 0) {
        Rational threshold = margin / -lhs.delta;
        if (!cap || threshold < *cap) cap = threshold;
      }
    }
    Rational delta = cap ? *cap / 2 : Rational(1);
    for (int v = 0; v < num_structural_; ++v)
      model[names_[v]] = beta_[v].real + beta_[v].delta * delta;
  }

  std::map<std::string, int> var_index_;
  std::vector<std::string> names_;
  std::map<std::map<std::string, Rational>, int> slack_of_;
  int num_structural_ = 0;

  std::vector<std::vector<Rational>> rows_;
  std::vector<int> basic_;
  std::vector<int> row_of_;
  std::vector<DeltaRational> beta_;
  std::vector<std::optional<DeltaRational>> lower_;
  std::vector<std::optional<DeltaRational>> upper_;
};

}  // namespace

LraResult check_consistent(const ConstraintSet& constraints) {
  LraResult result;
  Simplex simplex;
  result.consistent = simplex.solve(constraints, &result.model);
  if (!result.consistent) result.model.clear();
  return result;
}

LraResult check_incremental(const ConstraintSet& base,
                            const std::vector<LinearConstraint>& delta) {
  ConstraintSet all = base;
  all.insert(all.end(), delta.begin(), delta.end());
  return check_consistent(all);
}

}  // namespace stlsat
