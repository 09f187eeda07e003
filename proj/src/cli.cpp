#include "stlsat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stlsat/oracle.hpp"
#include "stlsat/parser.hpp"
#include "stlsat/smt_export.hpp"
#include "stlsat/tableau.hpp"
#include "stlsat/witness.hpp"

namespace stlsat {

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitError = 2;
constexpr int kExitTimeout = 3;

bool mltl_dialect(const std::string& path, const std::string& dialect) {
  if (dialect == "mltl") return true;
  if (dialect == "stl") return false;
  return std::filesystem::path(path).extension() == ".mltl";
}

struct ToggleSpec {
  const char* flag;
  const char* name;
  bool Options::*member;
};

constexpr ToggleSpec kToggles[] = {
    {"--no-jump", "jump", &Options::jump},
    {"--no-gf-rules", "gf-rules", &Options::gf_rules},
    {"--no-implication-rule", "implication-rule", &Options::implication_rule},
    {"--no-gf-unroll", "gf-unroll", &Options::gf_unrolling},
    {"--no-merge", "merge", &Options::merge_redundant},
    {"--no-shift", "shift", &Options::interval_shift},
    {"--no-early-check", "early-check", &Options::early_check},
    {"--no-memo", "memo", &Options::memoization},
    {"--no-easy-first", "easy-first", &Options::easy_first},
};

std::string options_fingerprint(const Options& opts) {
  std::string off;
  for (const ToggleSpec& t : kToggles) {
    if (opts.*t.member) continue;
    if (!off.empty()) off += "+";
    off += "no-";
    off += t.name;
  }
  return off.empty() ? "all" : off;
}

void add_toggles(CLI::App* cmd, Options& opts) {
  for (const ToggleSpec& t : kToggles) {
    bool Options::*member = t.member;
    cmd->add_flag_callback(
        t.flag, [&opts, member] { opts.*member = false; },
        std::string("disable the ") + t.name + " optimization");
  }
  cmd->add_option("--timeout", opts.timeout_seconds, "solver timeout in seconds");
}

struct BenchRow {
  std::string name;
  std::string result;
  double seconds = 0;
  Stats stats;
  std::string options;
};

void print_bench_row(std::ostream& out, const BenchRow& row) {
  out << row.name << "," << row.result << "," << std::fixed << std::setprecision(3)
      << row.seconds << "," << row.stats.nodes << "," << row.stats.poised << ","
      << row.stats.jumps << "," << row.stats.memo_hits << "," << row.stats.lra_calls << ","
      << row.options << "\n";
}

BenchRow run_one(const std::string& path, const std::string& dialect, const Options& opts) {
  BenchRow row;
  row.name = std::filesystem::path(path).stem().string();
  row.options = options_fingerprint(opts);
  auto start = std::chrono::steady_clock::now();
  try {
    Formula f = load_requirements(path, dialect);
    Verdict verdict = solve(f, opts);
    row.result = status_name(verdict.status);
    row.stats = verdict.stats;
  } catch (const std::exception&) {
    row.result = "error";
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

int cmd_check(const std::string& path, const std::string& dialect, Options& opts,
              const std::string& witness_path, const std::string& trace_path, std::ostream& out,
              std::ostream& err) {
  Formula f;
  try {
    f = load_requirements(path, dialect);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  opts.trace = !trace_path.empty();
  std::string trace_dot;
  Verdict verdict = solve(f, opts, opts.trace ? &trace_dot : nullptr);
  out << status_name(verdict.status) << "\n";
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    tf << trace_dot;
  }
  if (verdict.status == Status::Sat && !witness_path.empty()) {
    SimplexOracle lra;
    write_trace(reconstruct(*verdict.branch, lra), witness_path);
  }
  switch (verdict.status) {
    case Status::Sat: return kExitSat;
    case Status::Unsat: return kExitUnsat;
    case Status::Timeout: return kExitTimeout;
  }
  return kExitError;
}

int cmd_bench(const std::string& dir, const std::string& dialect, const Options& opts,
              bool ablate, std::ostream& out, std::ostream& err) {
  std::vector<std::string> files;
  try {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension();
      if (ext == ".stl" || ext == ".mltl") files.push_back(entry.path().string());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::sort(files.begin(), files.end());

  out << "name,result,time_s,nodes,poised,jumps,memo_hits,lra_calls,options\n";
  for (const std::string& file : files) {
    print_bench_row(out, run_one(file, dialect, opts));
    if (!ablate) continue;
    for (const ToggleSpec& t : kToggles) {
      Options ablated = opts;
      ablated.*t.member = false;
      print_bench_row(out, run_one(file, dialect, ablated));
    }
  }
  return kExitSat;
}

int cmd_emit_smt(const std::string& path, const std::string& dialect, std::ostream& out,
                 std::ostream& err) {
  try {
    out << emit_smtlib(load_requirements(path, dialect));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitSat;
}

int cmd_oracle(const std::string& path, const std::string& dialect, Time cap, std::ostream& out,
               std::ostream& err) {
  try {
    Status status = brute_force_check(load_requirements(path, dialect), cap);
    out << status_name(status) << "\n";
    return status == Status::Sat ? kExitSat : kExitUnsat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

Formula load_requirements(const std::string& path, const std::string& dialect) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  bool mltl = mltl_dialect(path, dialect);
  Formula conjunction;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    Formula f = mltl ? parse_mltl(line) : parse_stl(line);
    conjunction = conjunction.valid() ? Formula::conj(conjunction, f) : f;
  }
  if (!conjunction.valid()) throw std::runtime_error("no formulas in " + path);
  return conjunction;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satisfiability checker for discrete-time STL/MLTL requirement sets"};
  app.require_subcommand(1);

  std::string path, dialect = "auto", witness_path, trace_path;
  Options opts;
  bool ablate = false;
  Time oracle_cap = 14;

  auto add_format = [&dialect](CLI::App* cmd) {
    cmd->add_option("--format", dialect, "input dialect: stl or mltl (default: by extension)")
        ->check(CLI::IsMember({"auto", "stl", "mltl"}));
  };

  CLI::App* check = app.add_subcommand("check", "decide consistency of a requirement file");
  check->add_option("file", path, "formula or requirement-set file")->required();
  add_format(check);
  add_toggles(check, opts);
  check->add_option("--witness", witness_path, "write a satisfying signal (CSV or .json)");
  check->add_option("--trace", trace_path, "write the explored tableau as DOT");

  CLI::App* bench = app.add_subcommand("bench", "run every .stl/.mltl file in a directory");
  bench->add_option("dir", path, "benchmark directory")->required();
  add_format(bench);
  add_toggles(bench, opts);
  bench->add_flag("--ablate", ablate, "also run each single-optimization-off configuration");

  CLI::App* emit = app.add_subcommand("emit-smt", "print the bounded SMT-LIB2 encoding");
  emit->add_option("file", path, "formula or requirement-set file")->required();
  add_format(emit);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force verdict (horizon-capped)");
  oracle->add_option("file", path, "formula or requirement-set file")->required();
  add_format(oracle);
  oracle->add_option("--oracle-cap", oracle_cap, "maximum admissible horizon");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitSat;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (check->parsed()) return cmd_check(path, dialect, opts, witness_path, trace_path, out, err);
  if (bench->parsed()) return cmd_bench(path, dialect, opts, ablate, out, err);
  if (emit->parsed()) return cmd_emit_smt(path, dialect, out, err);
  if (oracle->parsed()) return cmd_oracle(path, dialect, oracle_cap, out, err);
  return kExitError;
}

}  // namespace stlsat
