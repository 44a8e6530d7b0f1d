#include "tracelab/sos.hpp"

namespace tracelab {

bool equal(const Configuration& a, const Configuration& b) {
  if (a.final() != b.final()) return false;
  if (!(a.state == b.state)) return false;
  return a.final() || equal(a.stmt, b.stmt);
}

static void push_unique(std::vector<Configuration>& out, Configuration c) {
  for (const auto& e : out)
    if (equal(e, c)) return;
  out.push_back(std::move(c));
}

std::vector<Configuration> step(const Configuration& c, const ProcTable& table) {
  if (c.final()) throw EvalError("step on a final configuration");
  const Statement& s = *c.stmt;
  std::vector<Configuration> out;
  switch (s.kind) {
    case SKind::Skip:
      out.push_back({nullptr, c.state});
      break;
    case SKind::Assign:
      out.push_back({nullptr, c.state.with(s.name, eval_aexp(s.expr, c.state))});
      break;
    case SKind::Seq: {
      auto firsts = step({s.s1, c.state}, table);
      for (auto& f : firsts) {
        if (f.final())
          push_unique(out, {s.s2, f.state});
        else
          push_unique(out, {Statement::seq(f.stmt, s.s2), f.state});
      }
      break;
    }
    case SKind::If:
      out.push_back({eval_bexp(s.guard, c.state) ? s.s1 : s.s2, c.state});
      break;
    case SKind::IfStar:
      push_unique(out, {s.s1, c.state});
      push_unique(out, {s.s2, c.state});
      break;
    case SKind::Call: {
      const StmtPtr* body = lookup_proc(table, s.name);
      if (!body) throw EvalError("call to undeclared procedure: " + s.name);
      out.push_back({*body, c.state});
      break;
    }
    case SKind::SVar:
      throw EvalError("no transition for statement variable: " + s.name);
  }
  return out;
}

TraceSet run_traces(const StmtPtr& s, const ProcTable& table, const Bounds& bounds,
                    RunStats* stats) {
  TraceSet out;
  RunStats local;
  struct Item {
    Configuration cfg;
    Trace trace;
  };
  for (const auto& init : bounds.initial_states) {
    std::vector<Item> stack;
    stack.push_back({{s, init}, {init}});
    while (!stack.empty()) {
      Item it = std::move(stack.back());
      stack.pop_back();
      for (auto& succ : step(it.cfg, table)) {
        Trace t = it.trace;
        t.push_back(succ.state);
        if (succ.final()) {
          if (static_cast<int>(t.size()) <= bounds.max_len)
            out.insert(std::move(t));
          else
            local.pruned_runs++;
        } else {
          if (static_cast<int>(t.size()) < bounds.max_len)
            stack.push_back({std::move(succ), std::move(t)});
          else
            local.pruned_runs++;
        }
      }
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace tracelab
