#pragma once

#include "stackel/scalar_field.hpp"

#include <string_view>

namespace stk {

/// Parses the expression grammar
///
///   expr   := ('-')? term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | ident | '(' expr ')' | func '(' expr ')'
///   func   := sin | cos | exp | sqrt          (numeric backend only)
///
/// Numbers are unsigned decimal literals ("3", "1.25"); rationals like 1/2
/// arise through division, which is exact under the exact backend.
/// Identifiers must be chart coordinate names. Throws ParseError with the
/// offending position; transcendental functions under the exact backend are
/// rejected the same way.
ScalarField parse_expression(std::string_view text, const Chart& chart, Backend backend);

} // namespace stk
