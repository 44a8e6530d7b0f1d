#pragma once

#include <functional>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "tracelab/calculus.hpp"
#include "tracelab/canon.hpp"
#include "tracelab/eval.hpp"
#include "tracelab/parse.hpp"
#include "tracelab/print.hpp"
#include "tracelab/sos.hpp"
#include "tracelab/stf.hpp"
#include "tracelab/trace.hpp"

namespace tt {

using namespace tracelab;

inline VarOrderPtr order(std::initializer_list<std::string> vars) {
  return VarOrder::make(std::set<std::string>(vars));
}

inline State st(const VarOrderPtr& o, std::vector<Int> vals) {
  return State(o, std::move(vals));
}

inline Trace tr(const VarOrderPtr& o, std::vector<std::vector<Int>> states) {
  Trace t;
  for (auto& v : states) t.push_back(State(o, std::move(v)));
  return t;
}

// Cartesian product of per-variable ranges, in the order's variable order.
inline Bounds grid(const VarOrderPtr& o, std::vector<std::pair<Int, Int>> ranges, int max_len) {
  Bounds b;
  b.max_len = max_len;
  std::vector<State> frontier{State::zero(o)};
  for (size_t i = 0; i < o->names().size(); ++i) {
    std::vector<State> next;
    for (const auto& s : frontier)
      for (Int v = ranges[i].first; v <= ranges[i].second; ++v)
        next.push_back(s.with(o->names()[i], v));
    frontier = std::move(next);
  }
  b.initial_states = std::move(frontier);
  return b;
}

// ---------------------------------------------------------------------------
// Random AST / trace generators (deterministic, seed per test)
// ---------------------------------------------------------------------------

struct Gen {
  std::mt19937 rng;
  std::vector<std::string> vars{"x", "y"};

  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  Int small_int() { return std::uniform_int_distribution<Int>(0, 3)(rng); }
  std::string var() { return vars[pick(static_cast<int>(vars.size()))]; }

  AExpPtr aexp(int depth) {
    if (depth <= 0 || pick(3) == 0)
      return pick(2) ? AExp::lit_(small_int()) : AExp::var_(var());
    switch (pick(3)) {
      case 0: return AExp::add(aexp(depth - 1), aexp(depth - 1));
      case 1: return AExp::sub(aexp(depth - 1), aexp(depth - 1));
      default: return AExp::mul(aexp(depth - 1), aexp(depth - 1));
    }
  }

  BExpPtr bexp(int depth) {
    if (depth <= 0 || pick(3) == 0) {
      static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                                  CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
      return BExp::cmp(ops[pick(6)], aexp(depth - 1), aexp(depth - 1));
    }
    switch (pick(5)) {
      case 0: return BExp::tru();
      case 1: return BExp::fls();
      case 2: return BExp::band(bexp(depth - 1), bexp(depth - 1));
      case 3: return BExp::bor(bexp(depth - 1), bexp(depth - 1));
      default: return BExp::bnot(bexp(depth - 1));
    }
  }

  StmtPtr stmt(int depth, const std::vector<std::string>& procs) {
    if (depth <= 0 || pick(4) == 0) {
      int c = pick(procs.empty() ? 2 : 3);
      if (c == 0) return Statement::skip();
      if (c == 1) return Statement::assign(var(), aexp(2));
      return Statement::call(procs[static_cast<size_t>(pick(static_cast<int>(procs.size())))]);
    }
    switch (pick(4)) {
      case 0: return Statement::seq(stmt(depth - 1, procs), stmt(depth - 1, procs));
      case 1: return Statement::if_(bexp(1), stmt(depth - 1, procs), stmt(depth - 1, procs));
      case 2: return Statement::if_star(stmt(depth - 1, procs), stmt(depth - 1, procs));
      default: return Statement::seq(stmt(depth - 1, procs), stmt(depth - 1, procs));
    }
  }

  Program program(int depth) {
    std::vector<std::string> procs;
    int n = pick(3);  // 0..2 procedures
    for (int i = 0; i < n; ++i) procs.push_back("p" + std::to_string(i + 1));
    Program p;
    for (const auto& name : procs) p.table.emplace_back(name, stmt(depth - 1, procs));
    p.main = stmt(depth, procs);
    return p;
  }

  // closed formula in the reduced grammar; mu binders usable below themselves
  FormulaPtr restricted_formula(int depth, std::vector<std::string> bound = {},
                                int* next_binder = nullptr) {
    int local_counter = 1;
    if (!next_binder) next_binder = &local_counter;
    if (depth <= 0 || pick(4) == 0) {
      int c = pick(bound.empty() ? 2 : 3);
      if (c == 0) return Formula::rel_id();
      if (c == 1) return Formula::rel_sb(var(), aexp(1));
      return Formula::rvar(bound[static_cast<size_t>(pick(static_cast<int>(bound.size())))]);
    }
    switch (pick(4)) {
      case 0:
        return Formula::and_(Formula::state_pred(bexp(1)),
                             restricted_formula(depth - 1, bound, next_binder));
      case 1:
        return Formula::or_(restricted_formula(depth - 1, bound, next_binder),
                            restricted_formula(depth - 1, bound, next_binder));
      case 2:
        return Formula::chop(restricted_formula(depth - 1, bound, next_binder),
                             restricted_formula(depth - 1, bound, next_binder));
      default: {
        std::string name = "R" + std::to_string((*next_binder)++);
        bound.push_back(name);
        return Formula::mu(name, restricted_formula(depth - 1, bound, next_binder));
      }
    }
  }

  // full grammar, still closed (adds atoms the enumerator rejects)
  FormulaPtr full_formula(int depth, std::vector<std::string> bound = {},
                          int* next_binder = nullptr) {
    int local_counter = 1;
    if (!next_binder) next_binder = &local_counter;
    if (depth <= 0 || pick(4) == 0) {
      switch (pick(bound.empty() ? 4 : 5)) {
        case 0: return Formula::rel_id();
        case 1: return Formula::rel_sb(var(), aexp(1));
        case 2: return Formula::state_pred(bexp(1));
        case 3: return Formula::rel_dec(AExp::var_(var()));
        default:
          return Formula::rvar(bound[static_cast<size_t>(pick(static_cast<int>(bound.size())))]);
      }
    }
    switch (pick(4)) {
      case 0:
        return Formula::and_(full_formula(depth - 1, bound, next_binder),
                             full_formula(depth - 1, bound, next_binder));
      case 1:
        return Formula::or_(full_formula(depth - 1, bound, next_binder),
                            full_formula(depth - 1, bound, next_binder));
      case 2:
        return Formula::chop(full_formula(depth - 1, bound, next_binder),
                             full_formula(depth - 1, bound, next_binder));
      default: {
        std::string name = "R" + std::to_string((*next_binder)++);
        bound.push_back(name);
        return Formula::mu(name, full_formula(depth - 1, bound, next_binder));
      }
    }
  }

  Trace trace(const VarOrderPtr& o, int max_states, Int lo, Int hi) {
    int n = 1 + pick(max_states);
    Trace t;
    for (int i = 0; i < n; ++i) {
      std::vector<Int> vals;
      for (size_t k = 0; k < o->size(); ++k)
        vals.push_back(std::uniform_int_distribution<Int>(lo, hi)(rng));
      t.push_back(State(o, std::move(vals)));
    }
    return t;
  }

  TraceSet trace_set(const VarOrderPtr& o, int max_traces, int max_states, Int lo, Int hi) {
    TraceSet out;
    int n = pick(max_traces + 1);
    for (int i = 0; i < n; ++i) out.insert(trace(o, max_states, lo, hi));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Shared corpus
// ---------------------------------------------------------------------------

inline const char* kSkipDec = "main { skip; x := x - 1 }";

inline const char* kEvenOdd =
    "proc even { if x = 0 then y := 1 else x := x - 1; odd() }\n"
    "proc odd { if x = 0 then y := 0 else x := x - 1; even() }\n"
    "main { even() }\n";

inline const char* kDown =
    "proc down { if x > 0 then x := x - 2; down() else skip }\n"
    "main { down() }\n";

inline const char* kAssignDown =
    "proc down { if x > 0 then x := x - 2; down() else skip }\n"
    "main { x := 2; down() }\n";

inline const char* kIfStar1 = "main { if * then x := 1 else skip }";

inline const char* kIfStar2 =
    "proc up { if * then skip else x := x + 1; up() }\n"
    "main { up() }\n";

inline const char* kWhile = "main { while x > 0 do x := x - 1 }";

inline const char* kCountFormula = "Sb[y:=0] ^ mu X. (Id \\/ Sb[y:=y+1] ^ X)";

}  // namespace tt
