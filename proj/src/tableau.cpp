#include "stlsat/tableau.hpp"

#include <pthread.h>

#include <algorithm>
#include <cassert>
#include <chrono>
#include <exception>
#include <functional>
#include <sstream>

#include "stlsat/heuristics.hpp"

namespace stlsat {

const char* rule_name(RuleTag tag) {
  switch (tag) {
    case RuleTag::Root: return "ROOT";
    case RuleTag::AndRule: return "AND";
    case RuleTag::OrLeft: return "OR-1";
    case RuleTag::OrRight: return "OR-2";
    case RuleTag::ImpliesNeg: return "IMP-1";
    case RuleTag::ImpliesPos: return "IMP-2";
    case RuleTag::FNow: return "F";
    case RuleTag::FLater: return "F";
    case RuleTag::GRule: return "G";
    case RuleTag::SUNow: return "sU";
    case RuleTag::SULater: return "sU";
    case RuleTag::SRNow: return "sR";
    case RuleTag::SRLater: return "sR";
    case RuleTag::Unroll: return "GF-UNROLL";
    case RuleTag::Step: return "STEP";
    case RuleTag::Jump: return "JUMP";
    case RuleTag::Easy: return "EASY";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Timeout: return "timeout";
  }
  return "?";
}

namespace {

bool label_contains(const std::vector<Formula>& label, const Formula& f) {
  for (const Formula& g : label)
    if (g == f) return true;
  return false;
}

std::uint64_t assign_id(Stats* stats) { return stats ? ++stats->nodes : 0; }

/// The recurrent argument of an operator: the one its expansion rule
/// re-extracts on the postponing branch (left of sU, right of sR, the
/// argument of G; F recurs on true).
const Formula* recurrent_argument(const Formula& f) {
  switch (f.op()) {
    case TOp::SU: return &f.arg(0);
    case TOp::SR: return &f.arg(1);
    case TOp::G: return &f.arg(0);
    case TOp::F: return nullptr;
    default: return nullptr;
  }
}

}  // namespace

ConstraintSet label_atoms(const std::vector<Formula>& label) {
  ConstraintSet cs;
  for (const Formula& f : label) {
    if (f.kind() != Kind::Atom) continue;
    assert(f.constraint().cmp != Cmp::Neq);
    cs.push_back(f.constraint());
  }
  return cs;
}

bool is_poised(const TableauNode& u) {
  for (const Formula& f : u.label) {
    if (f.is_term()) continue;
    if (f.is_temporal() && (f.marked() || f.interval().lo > u.time)) continue;
    return false;
  }
  return true;
}

namespace {

struct ChildBuilder {
  const NodePtr& parent;
  const Options& opts;
  Stats* stats;

  NodePtr make(RuleTag rule, std::size_t drop_index, std::vector<Formula> additions) const {
    auto node = std::make_shared<TableauNode>();
    node->time = parent->time;
    node->parent = parent;
    node->rule = rule;
    node->id = assign_id(stats);
    node->label.reserve(parent->label.size() + additions.size());
    for (std::size_t i = 0; i < parent->label.size(); ++i)
      if (i != drop_index) node->label.push_back(parent->label[i]);
    for (Formula& f : additions) {
      if (label_contains(node->label, f)) continue;
      if (f.kind() == Kind::Atom) node->fresh_atoms = true;
      node->label.push_back(std::move(f));
    }
    if (opts.merge_redundant) node->label = merge_redundant(std::move(node->label));
    return node;
  }
};

}  // namespace

std::vector<NodePtr> expand(const NodePtr& u, const Options& opts, Stats* stats) {
  ChildBuilder child{u, opts, stats};
  const Time t = u->time;

  // Category P first, in label-insertion order.
  for (std::size_t i = 0; i < u->label.size(); ++i) {
    const Formula& f = u->label[i];
    switch (f.kind()) {
      case Kind::And:
        return {child.make(RuleTag::AndRule, i, {f.arg(0), f.arg(1)})};
      case Kind::Or:
        return {child.make(RuleTag::OrLeft, i, {f.arg(0)}),
                child.make(RuleTag::OrRight, i, {f.arg(1)})};
      case Kind::Implies: {
        assert(opts.implication_rule && "implications are desugared when the rule is off");
        NodePtr deny = child.make(RuleTag::ImpliesNeg, i,
                                  {negate_normalized(f.arg(0), opts.normalize_opts())});
        NodePtr assert_both = child.make(RuleTag::ImpliesPos, i, {f.arg(0), f.arg(1)});
        // Asserting antecedent and consequent first pays off when the
        // antecedent is already in the label.
        if (label_contains(u->label, f.arg(0))) return {assert_both, deny};
        return {deny, assert_both};
      }
      default:
        break;
    }
  }

  // Categories S (basic) and J (jump): temporal expansions, which
  // decorate extracted operators with the parent interval in jump mode.
  for (std::size_t i = 0; i < u->label.size(); ++i) {
    const Formula& f = u->label[i];
    if (!f.is_temporal() || f.marked() || !f.interval().contains(t)) continue;
    // An active G-F pair is unrolled two steps at a time instead of
    // being expanded, so the ladder of derived F operators never forms.
    if (opts.gf_unrolling) {
      if (auto unrolled = unroll_g_f(f)) return {child.make(RuleTag::Unroll, i, {*unrolled})};
    }
    ParentInterval deco{f.interval().lo, f.interval().hi};
    const ParentInterval* parent_ivl = opts.jump ? &deco : nullptr;
    auto exp = [&](const Formula& arg) { return temporal_expansion(arg, t, parent_ivl); };
    switch (f.op()) {
      case TOp::F:
        return {child.make(RuleTag::FNow, i, {exp(f.arg())}),
                child.make(RuleTag::FLater, i, {f.with_mark(true)})};
      case TOp::G:
        return {child.make(RuleTag::GRule, i, {exp(f.arg()), f.with_mark(true)})};
      case TOp::SU:
        return {child.make(RuleTag::SUNow, i, {exp(f.arg(1))}),
                child.make(RuleTag::SULater, i, {exp(f.arg(0)), f.with_mark(true)})};
      case TOp::SR:
        return {child.make(RuleTag::SRNow, i, {exp(Formula::conj(f.arg(0), f.arg(1)))}),
                child.make(RuleTag::SRLater, i, {exp(f.arg(1)), f.with_mark(true)})};
      default:
        assert(false && "U/R do not survive normalization");
    }
  }
  return {};
}

Termination check_termination(const TableauNode& u, ConsistencyOracle& lra,
                              std::uint64_t* lra_calls) {
  for (const Formula& f : u.label)
    if (f.kind() == Kind::Not && f.arg().kind() == Kind::True)
      return {Termination::What::Rejected, "FALSE"};

  ConstraintSet cs = label_atoms(u.label);
  if (!cs.empty()) {
    if (lra_calls) ++*lra_calls;
    if (!lra.check(cs).consistent) return {Termination::What::Rejected, "LOCALLY-UNSAT"};
  }

  bool has_temporal = false;
  for (const Formula& f : u.label) {
    if (!f.is_temporal()) continue;
    has_temporal = true;
    if (f.marked() && (f.op() == TOp::SU || f.op() == TOp::F) && f.interval().hi == u.time)
      return {Termination::What::Rejected, "UNTIL"};
  }
  if (!has_temporal) return {Termination::What::Accepted, "EMPTY"};
  return {Termination::What::Continue, ""};
}

Advance select_advance(const TableauNode& u) {
  for (const Formula& f : u.label) {
    if (!f.is_temporal() || !f.marked()) continue;
    if (f.parent_interval().contains(u.time)) continue;
    if (u.time == f.interval().hi) return Advance::Step;
    if (const Formula* rec = recurrent_argument(f)) {
      for (const Formula& psi : pcl(*rec))
        if (psi.is_temporal() && u.time < f.interval().lo + psi.interval().hi)
          return Advance::Step;
    }
  }
  return Advance::Jump;
}

NodePtr step(const NodePtr& u, Stats* stats) {
  auto node = std::make_shared<TableauNode>();
  node->time = u->time + 1;
  node->parent = u;
  node->rule = RuleTag::Step;
  node->id = assign_id(stats);
  for (const Formula& f : u->label) {
    if (!f.is_temporal()) continue;  // terms are dropped
    if (!f.marked()) {
      node->label.push_back(f);
    } else if (u->time < f.interval().hi) {
      Formula unmarked = f.with_mark(false);
      if (!label_contains(node->label, unmarked)) node->label.push_back(std::move(unmarked));
    }
  }
  return node;
}

std::optional<Time> jump_target(const TableauNode& u) {
  std::optional<Time> best;
  for (const Formula& f : u.label) {
    if (!f.is_temporal() || f.parent_interval().contains(u.time)) continue;
    for (Time bound : {f.interval().lo, f.interval().hi})
      if (bound > u.time && (!best || bound < *best)) best = bound;
  }
  return best;
}

NodePtr jump_to(const NodePtr& u, Time target, Stats* stats) {
  assert(target > u->time);
  Time k = target - u->time;
  auto node = std::make_shared<TableauNode>();
  node->time = target;
  node->parent = u;
  node->rule = RuleTag::Jump;
  node->id = assign_id(stats);
  for (const Formula& f : u->label) {
    if (!f.is_temporal()) continue;
    bool derived = f.parent_interval().contains(u->time);
    Formula out = f;
    if (f.marked()) {
      if (f.interval().hi <= u->time) continue;  // obligation discharged
      out = f.with_mark(false);
    }
    if (derived) out = out.with_interval({out.interval().lo + k, out.interval().hi + k});
    if (!label_contains(node->label, out)) node->label.push_back(std::move(out));
  }
  return node;
}

NodePtr jump(const NodePtr& u) {
  if (auto target = jump_target(*u)) return jump_to(u, *target, nullptr);
  return step(u);
}

namespace {

bool nested_operator(const Formula& f) {
  if (!f.is_temporal()) return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    for (const Formula& psi : pcl(f.arg(i)))
      if (psi.is_temporal()) return true;
  return false;
}

}  // namespace

bool easy_split_applicable(const TableauNode& u) {
  bool nested = false, plain = false;
  for (const Formula& f : u.label) {
    if (!f.is_temporal()) continue;
    (nested_operator(f) ? nested : plain) = true;
  }
  return nested && plain;
}

NodePtr make_easy(const NodePtr& u, Stats* stats) {
  auto node = std::make_shared<TableauNode>();
  node->time = u->time;
  node->parent = u->parent;
  node->rule = RuleTag::Easy;
  node->id = assign_id(stats);
  for (const Formula& f : u->label)
    if (!f.is_temporal() || !nested_operator(f)) node->label.push_back(f);
  return node;
}

namespace {

std::string canon_args(const Formula& f) {
  std::string key = format(f.arg(0));
  if (f.arity() > 1) {
    key += '|';
    key += format(f.arg(1));
  }
  return key;
}

std::uint64_t shape_bit(const MemoStore::CanonFormula& c) {
  std::size_t h = std::hash<std::string>{}(c.args);
  h = h * 31 + static_cast<std::size_t>(c.op);
  h = h * 31 + static_cast<std::size_t>(c.plo + 1);
  h = h * 31 + static_cast<std::size_t>(c.phi + 1);
  return 1ULL << (h % 64);
}

bool canon_implies(const MemoStore::CanonFormula& g, const MemoStore::CanonFormula& r) {
  if (g.op != r.op || g.plo != r.plo || g.phi != r.phi || g.args != r.args) return false;
  switch (g.op) {
    case TOp::G: return g.lo <= r.lo && r.hi <= g.hi;
    case TOp::F: return r.lo <= g.lo && g.hi <= r.hi;
    case TOp::SR: return g.lo == r.lo && r.hi <= g.hi;
    case TOp::SU: return g.lo == r.lo && g.hi <= r.hi;
    default: return false;
  }
}

std::vector<MemoStore::CanonFormula> canonicalize(const TableauNode& n) {
  std::vector<MemoStore::CanonFormula> out;
  out.reserve(n.label.size());
  for (const Formula& f : n.label) {
    assert(f.is_temporal() && !f.marked() && "advance outputs carry only unmarked operators");
    MemoStore::CanonFormula c;
    c.op = f.op();
    c.lo = f.interval().lo - n.time;
    c.hi = f.interval().hi - n.time;
    if (f.parent_interval().none()) {
      c.plo = c.phi = -1;
    } else {
      c.plo = f.parent_interval().lo - n.time;
      c.phi = f.parent_interval().hi - n.time;
    }
    c.args = canon_args(f);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.op, a.args, a.plo, a.phi, a.lo, a.hi) <
           std::tie(b.op, b.args, b.plo, b.phi, b.lo, b.hi);
  });
  return out;
}

std::string canon_key(const std::vector<MemoStore::CanonFormula>& canon) {
  std::ostringstream key;
  for (const auto& c : canon)
    key << static_cast<int>(c.op) << ':' << c.lo << ',' << c.hi << '^' << c.plo << ',' << c.phi
        << '(' << c.args << ");";
  return key.str();
}

}  // namespace

bool MemoStore::implies_rejected(const TableauNode& n) const {
  auto canon = canonicalize(n);
  if (exact_.count(canon_key(canon))) return true;

  std::uint64_t mask = 0;
  for (const auto& c : canon) mask |= shape_bit(c);
  for (const Entry& entry : entries_) {
    if ((entry.shape_mask & ~mask) != 0) continue;
    bool all = true;
    for (const CanonFormula& r : entry.formulas) {
      bool found = false;
      for (const CanonFormula& g : canon)
        if (canon_implies(g, r)) {
          found = true;
          break;
        }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

void MemoStore::insert_rejected(const TableauNode& n) {
  auto canon = canonicalize(n);
  std::string key = canon_key(canon);
  if (!exact_.insert(std::move(key)).second) return;
  Entry entry;
  entry.shape_mask = 0;
  for (const auto& c : canon) entry.shape_mask |= shape_bit(c);
  entry.formulas = std::move(canon);
  entries_.push_back(std::move(entry));
}

namespace {

struct TimeoutReached {};

/// Labels repeat heavily across the tree, so consistency verdicts are
/// cached by canonical constraint-set key. Models are not cached; the
/// search never needs them.
class CachingOracle final : public ConsistencyOracle {
 public:
  LraResult check(const ConstraintSet& cs) override {
    std::vector<std::string> parts;
    parts.reserve(cs.size());
    for (const LinearConstraint& c : cs) parts.push_back(c.str());
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (const std::string& p : parts) {
      key += p;
      key += ';';
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return {it->second, {}};
    bool consistent = check_consistent(cs).consistent;
    cache_.emplace(std::move(key), consistent);
    return {consistent, {}};
  }

 private:
  std::unordered_map<std::string, bool> cache_;
};

struct TraceRecord {
  std::uint64_t id;
  std::uint64_t parent_id;
  RuleTag rule;
  std::string text;
  Time time;
  std::string note;
};

class Searcher {
 public:
  Searcher(const Options& opts, Time horizon_bound)
      : opts_(opts),
        hbound_(horizon_bound),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(opts.timeout_seconds))) {}

  Verdict run(const Formula& root_formula, std::string* trace_dot) {
    tracing_ = opts_.trace && trace_dot != nullptr;
    auto root = std::make_shared<TableauNode>();
    root->label = {root_formula};
    root->fresh_atoms = root_formula.kind() == Kind::Atom;
    root->id = assign_id(&stats_);
    record(root);

    Verdict verdict;
    try {
      verdict.status = dfs(root, 0) == Result::Accepted ? Status::Sat : Status::Unsat;
    } catch (const TimeoutReached&) {
      verdict.status = Status::Timeout;
    }
    if (verdict.status == Status::Sat) {
      std::vector<NodePtr> branch;
      for (NodePtr n = accepted_; n; n = n->parent) branch.push_back(n);
      std::reverse(branch.begin(), branch.end());
      verdict.branch = std::move(branch);
    }
    verdict.stats = stats_;
    if (tracing_) *trace_dot = render_trace();
    return verdict;
  }

 private:
  enum class Result { Accepted, Rejected };

  Result dfs(const NodePtr& u, int probe_depth) {
    if (std::chrono::steady_clock::now() >= deadline_) throw TimeoutReached{};
    stats_.max_node_time = std::max(stats_.max_node_time, u->time);
    assert(u->time <= hbound_ && "node time within the root horizon");

    if (!is_poised(*u)) {
      if (opts_.early_check && u->fresh_atoms) {
        ConstraintSet cs = label_atoms(u->label);
        if (!cs.empty()) {
          ++stats_.lra_calls;
          if (!lra_.check(cs).consistent) {
            note(u, "x EARLY-UNSAT");
            return Result::Rejected;
          }
        }
      }
      std::vector<NodePtr> children = expand(u, opts_, &stats_);
      assert(!children.empty());
      for (const NodePtr& c : children) {
        record(c);
        if (dfs(c, probe_depth) == Result::Accepted) return Result::Accepted;
      }
      return Result::Rejected;
    }

    ++stats_.poised;
    Termination term = check_termination(*u, lra_, &stats_.lra_calls);
    if (term.what == Termination::What::Accepted) return accept(u, probe_depth, term.rule);
    if (term.what == Termination::What::Rejected) {
      note(u, std::string("x ") + term.rule);
      return Result::Rejected;
    }

    NodePtr next;
    if (opts_.jump && select_advance(*u) == Advance::Jump) {
      if (auto target = jump_target(*u)) {
        next = jump_to(u, *target, &stats_);
        ++stats_.jumps;
        stats_.jump_distance += static_cast<std::uint64_t>(*target - u->time);
      }
    }
    if (!next) next = step(u, &stats_);
    // All remaining obligations were discharged at this very instant.
    if (next->label.empty()) return accept(u, probe_depth, "EMPTY");
    record(next);

    if (opts_.memoization && memo_.implies_rejected(*next)) {
      ++stats_.memo_hits;
      note(next, "x MEMO");
      return Result::Rejected;
    }

    if (opts_.easy_first && easy_split_applicable(*next)) {
      NodePtr easy = make_easy(next, &stats_);
      record(easy);
      if (opts_.memoization && memo_.implies_rejected(*easy)) {
        ++stats_.memo_hits;
        note(easy, "x MEMO");
        if (opts_.memoization) memo_.insert_rejected(*next);
        return Result::Rejected;
      }
      if (dfs(easy, probe_depth + 1) == Result::Rejected) {
        if (opts_.memoization) {
          memo_.insert_rejected(*easy);
          memo_.insert_rejected(*next);
        }
        note(next, "x EASY-SIBLING");
        return Result::Rejected;
      }
    }

    Result result = dfs(next, probe_depth);
    if (result == Result::Rejected && opts_.memoization) memo_.insert_rejected(*next);
    return result;
  }

  Result accept(const NodePtr& u, int probe_depth, const char* rule) {
    note(u, std::string("v ") + rule);
    if (probe_depth == 0 && !accepted_) accepted_ = u;
    return Result::Accepted;
  }

  void record(const NodePtr& n) {
    if (!tracing_) return;
    std::string text;
    for (const Formula& f : n->label) {
      if (!text.empty()) text += ", ";
      text += format(f);
    }
    trace_.push_back({n->id, n->parent ? n->parent->id : 0, n->rule, text, n->time, ""});
    trace_index_[n->id] = trace_.size() - 1;
  }

  void note(const NodePtr& n, const std::string& message) {
    if (!tracing_) return;
    auto it = trace_index_.find(n->id);
    if (it != trace_index_.end()) trace_[it->second].note = message;
  }

  std::string render_trace() const {
    std::ostringstream out;
    out << "digraph tableau {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const TraceRecord& r : trace_) {
      out << "  n" << r.id << " [label=\"";
      for (char c : r.text) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
      }
      out << " | " << r.time;
      if (!r.note.empty()) out << "\\n" << r.note;
      out << "\"];\n";
      if (r.id != trace_.front().id)
        out << "  n" << r.parent_id << " -> n" << r.id << " [label=\"" << rule_name(r.rule)
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
  }

  const Options& opts_;
  Time hbound_;
  std::chrono::steady_clock::time_point deadline_;
  Stats stats_;
  MemoStore memo_;
  CachingOracle lra_;
  NodePtr accepted_;
  bool tracing_ = false;
  std::vector<TraceRecord> trace_;
  std::map<std::uint64_t, std::size_t> trace_index_;
};

struct SolveTask {
  const Formula* formula;
  const Options* opts;
  std::string* trace_dot;
  Verdict verdict;
  std::exception_ptr error;
};

void* solve_entry(void* arg) {
  auto* task = static_cast<SolveTask*>(arg);
  try {
    Formula f = to_strict_normal_form(*task->formula, task->opts->normalize_opts());
    if (task->opts->interval_shift) f = shift_nested_intervals(f);
    Searcher searcher(*task->opts, horizon(f));
    task->verdict = searcher.run(f, task->trace_dot);
  } catch (...) {
    task->error = std::current_exception();
  }
  return nullptr;
}

}  // namespace

Verdict solve(const Formula& f, const Options& opts, std::string* trace_dot) {
  // Deep branches (long horizons with JUMP disabled) need more stack
  // than the default thread gets.
  SolveTask task{&f, &opts, trace_dot, {}, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, std::size_t{512} << 20);
  pthread_t tid;
  if (pthread_create(&tid, &attr, solve_entry, &task) != 0) {
    pthread_attr_destroy(&attr);
    solve_entry(&task);  // fall back to the caller's stack
  } else {
    pthread_join(tid, nullptr);
    pthread_attr_destroy(&attr);
  }
  if (task.error) std::rethrow_exception(task.error);
  return task.verdict;
}

Verdict solve(const Formula& f, const Options& opts) { return solve(f, opts, nullptr); }

}  // namespace stlsat
