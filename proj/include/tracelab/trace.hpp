#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tracelab/syntax.hpp"

namespace tracelab {

// The variable universe of one analysis: the variables occurring in the
// program/formula pair under study, in a fixed (sorted) order. All states of
// an analysis share one VarOrder; state equality compares exactly this set.
class VarOrder {
 public:
  static std::shared_ptr<const VarOrder> make(const std::set<std::string>& names);
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& name) const;  // -1 when absent
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
};

using VarOrderPtr = std::shared_ptr<const VarOrder>;

class State {
 public:
  State() = default;
  State(VarOrderPtr order, std::vector<Int> vals);
  static State zero(VarOrderPtr order);

  Int get(const std::string& var) const;
  State with(const std::string& var, Int v) const;
  const VarOrderPtr& order() const { return order_; }
  const std::vector<Int>& values() const { return vals_; }

  bool operator==(const State& o) const { return vals_ == o.vals_; }
  bool operator!=(const State& o) const { return vals_ != o.vals_; }
  bool operator<(const State& o) const { return vals_ < o.vals_; }

  std::string str() const;  // {x=3,y=0}

 private:
  VarOrderPtr order_;
  std::vector<Int> vals_;
};

using Trace = std::vector<State>;   // non-empty
using TraceSet = std::set<Trace>;   // lexicographic order gives stable dumps

struct Bounds {
  std::vector<State> initial_states;
  int max_len = 32;  // raw trace-length budget, in states; >= 2
};

// Expression evaluation over states.
Int eval_aexp(const AExpPtr& a, const State& s);
bool eval_bexp(const BExpPtr& b, const State& s);
// Named-relation bodies: unprimed variables read from s, primed from s2.
bool eval_bexp_pair(const BExpPtr& b, const State& s, const State& s2);

// ---------------------------------------------------------------------------
// Trace-set algebra
// ---------------------------------------------------------------------------

// { sA . s . sB  |  sA . s in a,  s . sB in b } — the shared state appears once.
TraceSet chop_sets(const TraceSet& a, const TraceSet& b);

// Keeps traces whose first state satisfies b.
TraceSet restrict_set(const TraceSet& a, const BExpPtr& b);

// Duplicates the first state of every trace.
TraceSet sharp(const TraceSet& a);

// Collapses maximal runs of equal adjacent states to one state.
Trace stutter_normalize(const Trace& t);
TraceSet stutter_normalize(const TraceSet& a);

std::string to_string(const Trace& t);
std::string dump(const TraceSet& a);  // one trace per line, sorted

}  // namespace tracelab
