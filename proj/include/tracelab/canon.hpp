#pragma once

#include <optional>

#include "tracelab/eval.hpp"
#include "tracelab/trace.hpp"

namespace tracelab {

// The canonical program of a closed formula in the reduced grammar with
// uniquely named binders: Id -> skip, Sb -> assignment, p /\ phi -> guarded
// else-diverge, \/ -> nondeterministic choice, ^ -> sequencing, mu X -> a
// fresh procedure m_X. Its trace semantics equals the formula's modulo
// stuttering.
Program canonical_program(const FormulaPtr& f);

bool stutter_equal(const TraceSet& a, const TraceSet& b);

// Bounded comparison of two denotations modulo stuttering: both sides are
// assumed enumerated to the raw budget max_len; only normalized traces of
// length <= max_len/3 are compared, since program-side operators insert a
// bounded number of stutter states per step. Returns a normalized trace on
// one side only, if any.
std::optional<Trace> stutter_diff_bounded(const TraceSet& a, const TraceSet& b, int max_len);

struct RefinementVerdict {
  bool holds = false;
  std::optional<Trace> witness;  // trace of the left side missing on the right
  Bounds bounds;
};

// Every trace of (s1,t1) over bounds is among the traces of (s2,t2); with
// modulo_stutter both sides are normalized and the comparison is cut at
// normalized length max_len/3.
RefinementVerdict refines_bounded(const StmtPtr& s1, const ProcTable& t1, const StmtPtr& s2,
                                  const ProcTable& t2, const Bounds& bounds,
                                  bool modulo_stutter);

struct GaloisReport {
  bool entails_holds = false;            // stf(S) entails phi, modulo stuttering
  std::optional<Trace> entails_witness;
  bool refines_holds = false;            // S refines canon(phi), modulo stuttering
  std::optional<Trace> refines_witness;
  bool agree() const { return entails_holds == refines_holds; }
};

// Both directions of the adjunction for one (statement, formula) pair.
GaloisReport galois_check(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                          const Bounds& bounds);

}  // namespace tracelab
