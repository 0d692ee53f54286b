#pragma once

#include <string>
#include <string_view>

#include "curvindex/operator.hpp"

namespace curvindex {

// Grammar (whitespace is insignificant):
//   expr := term { "(+)" term }
//   term := "shift(" int ")"
//         | "wshift([" [float {"," float}] "];" float ")"
//         | "iso(k=" int ",m=" int ",seed=" int ")"
//         | "unitary(m=" int ",seed=" int ")"
//         | "adj(" term ")"
// "(+)" is left-associative: a (+) b (+) c is (a (+) b) (+) c.

/// Throws ParseError with the offending position, or the constructor's error.
Operator parse_operator_spec(std::string_view text);

/// Shortest round-trip decimal form, locale independent.
std::string format_number(double value);

}  // namespace curvindex
