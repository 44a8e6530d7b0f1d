#pragma once

#include <map>
#include <string>

#include "tracelab/trace.hpp"

namespace tracelab {

// Interpretation of statement variables (total on those occurring in the
// statement under evaluation).
using SvarInterp = std::map<std::string, TraceSet>;

// Optional record of fixed-point approximant chains, for the monotonicity
// properties.
struct EvalTrace {
  std::vector<std::map<std::string, TraceSet>> proc_chain;
  std::vector<std::vector<TraceSet>> mu_chains;  // one chain per mu evaluation
};

// Bounded denotational semantics of a statement: exactly the traces of S with
// first state in bounds.initial_states and at most bounds.max_len states.
// Procedure environments are iterated to a fixed point from the empty
// interpretation; calls read the environment, never the body.
TraceSet eval_stm(const StmtPtr& s, const ProcTable& table, const Bounds& bounds,
                  const SvarInterp& svars = {}, EvalTrace* trace = nullptr);

// Bounded enumeration of a formula's denotation. Only defined on the reduced
// grammar (Id, Sb, X, p /\ phi, \/, ^, mu); other atoms denote infinitely many
// traces per initial state and are rejected.
TraceSet eval_formula_enum(const FormulaPtr& f, const Bounds& bounds,
                           EvalTrace* trace = nullptr);

// Exact membership of one trace in a formula's denotation; full grammar,
// including bare state predicates, Dec and named relations. Decided by
// labelling the contiguous subtrace intervals of t bottom-up; fixed points
// are iterated in the (finite) interval lattice.
bool models(const Trace& t, const FormulaPtr& f);

}  // namespace tracelab
