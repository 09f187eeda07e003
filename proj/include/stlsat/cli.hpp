#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stlsat/formula.hpp"

namespace stlsat {

/// Exit codes: 0 sat/consistent, 1 unsat/inconsistent, 2 usage or
/// parse error, 3 timeout.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// A requirement set: one formula per line ('#' comments and blank
/// lines allowed), checked as the conjunction of all lines. Dialect
/// "auto" picks MLTL for .mltl files and STL otherwise.
Formula load_requirements(const std::string& path, const std::string& dialect = "auto");

}  // namespace stlsat
