#pragma once

#include <string>

#include "tracelab/calculus.hpp"

namespace tracelab {

// Proof trees serialize to a versioned JSON tree; statements and formulas are
// embedded in their concrete syntax, states as {"var": value} objects.
std::string proof_to_json(const ProofPtr& t);
ProofPtr proof_from_json(const std::string& text);

}  // namespace tracelab
