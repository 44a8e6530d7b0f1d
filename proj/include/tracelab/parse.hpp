#pragma once

#include <string>

#include "tracelab/syntax.hpp"

namespace tracelab {

// Program files (.rec): `proc NAME { STMT }` declarations followed by
// `main { STMT }`. `//` starts a line comment. `while b do S` is sugar and is
// desugared into a fresh tail-recursive procedure; `diverge` (and `abort()`)
// become a call to the reserved procedure `abort`, declared on demand.
Program parse_program(const std::string& text);

// Formula files (.tfl): one formula, same comment convention.
// Throws on unbound recursion variables unless require_closed is false.
FormulaPtr parse_formula(const std::string& text, bool require_closed = true);

// Statement syntax shared with .rec bodies; `$NAME` statement variables are
// accepted only when allow_svar is set (proof files use them).
StmtPtr parse_statement(const std::string& text, bool allow_svar = false);

BExpPtr parse_bexp(const std::string& text);
AExpPtr parse_aexp(const std::string& text);

}  // namespace tracelab
