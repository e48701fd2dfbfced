#pragma once

#include <functional>
#include <string>

#include "slgeo/types.hpp"

namespace slgeo {

struct ParseError : Error {
  size_t position;
  ParseError(const std::string& msg, size_t pos) : Error(msg), position(pos) {}
};

// Compiles a small expression over x and y into an evaluator. Grammar:
// numbers, x, y, pi, + - * / ^ (right-associative power), parentheses, and
// the functions sin, cos, exp. Reports the offending position on error.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace slgeo
