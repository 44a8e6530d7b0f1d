#pragma once

#include <string>

#include "tracelab/syntax.hpp"

namespace tracelab {

// Printers emit the concrete syntax the parsers accept; parse(print(t))
// reproduces t node for node.
std::string to_string(const AExpPtr& a);
std::string to_string(const BExpPtr& b);
std::string to_string(const StmtPtr& s);
std::string to_string(const FormulaPtr& f);
std::string to_string(const Program& p);

}  // namespace tracelab
