#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stlsat/formula.hpp"
#include "stlsat/lra.hpp"
#include "stlsat/normal_form.hpp"

namespace stlsat {

enum class RuleTag {
  Root, AndRule, OrLeft, OrRight, ImpliesNeg, ImpliesPos,
  FNow, FLater, GRule, SUNow, SULater, SRNow, SRLater,
  Unroll, Step, Jump, Easy,
};

const char* rule_name(RuleTag tag);

struct TableauNode {
  std::vector<Formula> label;  // set semantics, insertion-ordered
  Time time = 0;
  std::shared_ptr<const TableauNode> parent;
  RuleTag rule = RuleTag::Root;
  bool fresh_atoms = false;  // expansion added atoms (early-check cue)
  std::uint64_t id = 0;
};

using NodePtr = std::shared_ptr<const TableauNode>;

/// All optimizations default on; each maps to a --no-* CLI toggle.
struct Options {
  bool jump = true;
  bool gf_rules = true;
  bool implication_rule = true;
  bool gf_unrolling = true;
  bool merge_redundant = true;
  bool interval_shift = true;
  bool early_check = true;
  bool memoization = true;
  bool easy_first = true;
  double timeout_seconds = 120.0;
  bool trace = false;

  NormalizeOpts normalize_opts() const { return {gf_rules, implication_rule}; }
};

struct Stats {
  std::uint64_t nodes = 0;
  std::uint64_t poised = 0;
  std::uint64_t jumps = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t lra_calls = 0;
  std::uint64_t jump_distance = 0;
  Time max_node_time = 0;
};

enum class Status { Sat, Unsat, Timeout };

const char* status_name(Status s);

struct Verdict {
  Status status = Status::Unsat;
  /// Accepted branch from the root to the accepting node (Sat only).
  std::optional<std::vector<NodePtr>> branch;
  Stats stats;
};

ConstraintSet label_atoms(const std::vector<Formula>& label);

bool is_poised(const TableauNode& u);

/// Children of the first expandable formula (category P before S/J),
/// already in visit order; empty when the node is poised.
std::vector<NodePtr> expand(const NodePtr& u, const Options& opts, Stats* stats = nullptr);

struct Termination {
  enum class What { Accepted, Rejected, Continue } what;
  const char* rule;  // FALSE, LOCALLY-UNSAT, UNTIL, EMPTY
};

/// Applied to poised nodes right before STEP/JUMP.
Termination check_termination(const TableauNode& u, ConsistencyOracle& lra,
                              std::uint64_t* lra_calls = nullptr);

enum class Advance { Step, Jump };

/// Jump-mode choice between STEP and JUMP: STEP is forced while some
/// top-level marked operator still has unexplored expansion
/// combinations (t = b, or a nested operator of its recurrent
/// argument not yet exhausted); otherwise JUMP.
Advance select_advance(const TableauNode& u);

NodePtr step(const NodePtr& u, Stats* stats = nullptr);

/// Next time bound reachable by JUMP; nullopt means STEP must be used.
std::optional<Time> jump_target(const TableauNode& u);
NodePtr jump_to(const NodePtr& u, Time target, Stats* stats = nullptr);
/// JUMP with the STEP fallback when no bound lies ahead.
NodePtr jump(const NodePtr& u);

/// Easy-operators-first split: a node whose label mixes nested and
/// non-nested operators spawns a sibling restricted to the non-nested
/// ones, checked first.
bool easy_split_applicable(const TableauNode& u);
NodePtr make_easy(const NodePtr& u, Stats* stats = nullptr);

/// Canonicalized rejected labels (time-relative, term-free).
class MemoStore {
 public:
  bool implies_rejected(const TableauNode& n) const;
  void insert_rejected(const TableauNode& n);
  std::size_t size() const { return entries_.size(); }

  struct CanonFormula {
    TOp op;
    Time lo, hi;        // interval, relative to node time
    Time plo, phi;      // parent decoration, relative ([-1,-1] kept)
    std::string args;   // formatted argument fingerprint
  };

 private:
  struct Entry {
    std::vector<CanonFormula> formulas;
    std::uint64_t shape_mask;
  };

  std::unordered_set<std::string> exact_;
  std::vector<Entry> entries_;
};

Verdict solve(const Formula& f, const Options& opts = {});
Verdict solve(const Formula& f, const Options& opts, std::string* trace_dot);

}  // namespace stlsat
