#pragma once

#include <string>
#include <vector>

#include "tracelab/syntax.hpp"

namespace tracelab {

// The strongest trace formula of a statement: a closed formula in the reduced
// grammar whose denotation is exactly the statement's trace semantics. The
// first call of each procedure opens a mu binder named X_<proc>; further
// calls become the recursion variable.
FormulaPtr strongest_trace_formula(const StmtPtr& s, const ProcTable& table);

// A formula with its mu binders flattened into named equations. The root and
// all right-hand sides are open formulas over the equation variables.
struct ModalEquationSystem {
  FormulaPtr root;
  std::vector<std::pair<std::string, FormulaPtr>> equations;
};

// Requires uniquely named binders (rename_recursion_vars first if needed).
ModalEquationSystem modal_equation_system(const FormulaPtr& f);

// Rebuilds a closed formula from a modal equation system; semantics-preserving.
FormulaPtr resubstitute(const ModalEquationSystem& mes);

}  // namespace tracelab
