#pragma once

#include <stdexcept>
#include <string>

#include "stlsat/formula.hpp"

namespace stlsat {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line(line),
        column(column) {}

  int line;
  int column;
};

/// STL dialect: atoms are linear constraints over signal variables.
Formula parse_stl(const std::string& text);

/// MLTL dialect: atoms are bare propositions p, encoded as p == 1.
Formula parse_mltl(const std::string& text);

}  // namespace stlsat
