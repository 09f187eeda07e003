#include "stlsat/witness.hpp"

#include <cassert>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stlsat {

Rational Signal::value(const std::string& var, Time t) const {
  if (t < 0 || t >= length) throw std::out_of_range("signal too short");
  const auto& row = rows[static_cast<std::size_t>(t)];
  auto it = row.find(var);
  return it == row.end() ? Rational(0) : it->second;
}

Signal Signal::extended_to(Time new_length) const {
  Signal out = *this;
  while (out.length < new_length) {
    std::map<std::string, Rational> row;
    for (const std::string& var : out.vars) row[var] = 0;
    out.rows.push_back(std::move(row));
    ++out.length;
  }
  return out;
}

Signal reconstruct(const std::vector<NodePtr>& branch, ConsistencyOracle& lra) {
  std::vector<std::pair<Time, std::map<std::string, Rational>>> models;
  for (const NodePtr& node : branch) {
    if (!is_poised(*node)) continue;
    LraResult result = lra.check(label_atoms(node->label));
    assert(result.consistent && "accepted branches have consistent poised nodes");
    models.emplace_back(node->time, std::move(result.model));
  }
  assert(!models.empty() && models.front().first == 0);

  Signal signal;
  std::set<std::string> vars;
  for (const auto& [t, model] : models)
    for (const auto& [var, value] : model) vars.insert(var);
  signal.vars.assign(vars.begin(), vars.end());
  signal.length = models.back().first + 1;

  signal.rows.resize(static_cast<std::size_t>(signal.length));
  for (std::size_t i = 0; i < models.size(); ++i) {
    Time until = i + 1 < models.size() ? models[i + 1].first : models[i].first + 1;
    for (Time t = models[i].first; t < until; ++t) {
      auto& row = signal.rows[static_cast<std::size_t>(t)];
      for (const std::string& var : signal.vars) {
        auto it = models[i].second.find(var);
        row[var] = it == models[i].second.end() ? Rational(0) : it->second;
      }
    }
  }
  return signal;
}

std::string trace_csv(const Signal& s) {
  std::ostringstream out;
  out << "time";
  for (const std::string& var : s.vars) out << "," << var;
  for (Time t = 0; t < s.length; ++t) {
    out << "\n" << t;
    for (const std::string& var : s.vars)
      out << "," << format_rational(s.rows[static_cast<std::size_t>(t)].at(var));
  }
  return out.str();
}

std::string trace_json(const Signal& s) {
  nlohmann::json doc;
  doc["length"] = s.length;
  doc["vars"] = s.vars;
  auto rows = nlohmann::json::array();
  for (Time t = 0; t < s.length; ++t) {
    auto row = nlohmann::json::array();
    for (const std::string& var : s.vars)
      row.push_back(format_rational(s.rows[static_cast<std::size_t>(t)].at(var)));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

void write_trace(const Signal& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  out << (json ? trace_json(s) : trace_csv(s)) << "\n";
}

}  // namespace stlsat
