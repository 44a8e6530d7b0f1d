#pragma once

#include <cstddef>
#include <vector>

#include "tracelab/trace.hpp"

namespace tracelab {

// Intermediate configuration <S, s>, or final state when stmt is null.
struct Configuration {
  StmtPtr stmt;
  State state;
  bool final() const { return !stmt; }
};

bool equal(const Configuration& a, const Configuration& b);

// Exact successor set of an intermediate configuration. Deterministic
// statements yield a singleton; nondeterministic choice yields up to two
// (coinciding successors are counted once).
std::vector<Configuration> step(const Configuration& c, const ProcTable& table);

struct RunStats {
  std::size_t pruned_runs = 0;  // runs cut off by the length budget
};

// All terminating runs from the initial states, as traces of at most
// bounds.max_len states. Runs exceeding the budget are pruned silently and
// counted in stats.
TraceSet run_traces(const StmtPtr& s, const ProcTable& table, const Bounds& bounds,
                    RunStats* stats = nullptr);

}  // namespace tracelab
