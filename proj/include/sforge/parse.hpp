#pragma once

#include <string>

#include "sforge/ordinal.hpp"

namespace sforge {

// Ordinal text grammar (whitespace insignificant):
//   ordinal := "eps0" | term ("+" term)*
//   term    := nat | pow ("*" nat)?
//   pow     := "w" ("^" atom)?
//   atom    := nat | "w" | "(" ordinal ")"
// Rejects non-CNF input (non-decreasing exponents, zero coefficients) with a
// position-carrying parse error.
Ordinal parse_ordinal(const std::string& text);

}  // namespace sforge
