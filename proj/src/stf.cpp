#include "tracelab/stf.hpp"

#include <set>

namespace tracelab {

namespace {

FormulaPtr stf_rec(const StmtPtr& s, const ProcTable& table, std::set<std::string> visited) {
  switch (s->kind) {
    case SKind::Skip:
      return Formula::rel_id();
    case SKind::Assign:
      return Formula::rel_sb(s->name, s->expr);
    case SKind::Seq:
      return Formula::chop(stf_rec(s->s1, table, visited), stf_rec(s->s2, table, visited));
    case SKind::If:
      return Formula::or_(
          Formula::and_(Formula::state_pred(s->guard),
                        Formula::chop(Formula::rel_id(), stf_rec(s->s1, table, visited))),
          Formula::and_(Formula::state_pred(negate_bexp(s->guard)),
                        Formula::chop(Formula::rel_id(), stf_rec(s->s2, table, visited))));
    case SKind::IfStar:
      return Formula::or_(
          Formula::chop(Formula::rel_id(), stf_rec(s->s1, table, visited)),
          Formula::chop(Formula::rel_id(), stf_rec(s->s2, table, visited)));
    case SKind::Call: {
      std::string x = "X_" + s->name;
      if (visited.count(s->name))
        return Formula::chop(Formula::rel_id(), Formula::rvar(x));
      const StmtPtr* body = lookup_proc(table, s->name);
      if (!body) throw EvalError("call to undeclared procedure: " + s->name);
      visited.insert(s->name);
      return Formula::chop(Formula::rel_id(),
                           Formula::mu(x, stf_rec(*body, table, visited)));
    }
    case SKind::SVar:
      throw EvalError("no trace formula for statement variable: " + s->name);
  }
  throw EvalError("bad statement");
}

FormulaPtr mes_rec(const FormulaPtr& f, ModalEquationSystem& out) {
  switch (f->kind) {
    case FKind::Mu: {
      FormulaPtr rhs = mes_rec(f->lhs, out);
      out.equations.emplace_back(f->name, rhs);
      return Formula::rvar(f->name);
    }
    case FKind::And: {
      auto a = mes_rec(f->lhs, out);
      return Formula::and_(a, mes_rec(f->rhs, out));
    }
    case FKind::Or: {
      auto a = mes_rec(f->lhs, out);
      return Formula::or_(a, mes_rec(f->rhs, out));
    }
    case FKind::Chop: {
      auto a = mes_rec(f->lhs, out);
      return Formula::chop(a, mes_rec(f->rhs, out));
    }
    default:
      return f;
  }
}

void check_unique_binders(const FormulaPtr& f, std::set<std::string>& seen) {
  if (!f) return;
  if (f->kind == FKind::Mu && !seen.insert(f->name).second)
    throw EvalError("duplicate recursion-variable name: " + f->name);
  if (f->lhs) check_unique_binders(f->lhs, seen);
  if (f->rhs) check_unique_binders(f->rhs, seen);
}

FormulaPtr rebuild(const FormulaPtr& f, const ModalEquationSystem& mes,
                   std::set<std::string>& open) {
  switch (f->kind) {
    case FKind::RVar: {
      if (open.count(f->name)) return f;  // bound by a mu being rebuilt
      for (const auto& [name, rhs] : mes.equations)
        if (name == f->name) {
          open.insert(name);
          FormulaPtr body = rebuild(rhs, mes, open);
          open.erase(name);
          return Formula::mu(name, body);
        }
      return f;
    }
    case FKind::And: {
      auto a = rebuild(f->lhs, mes, open);
      return Formula::and_(a, rebuild(f->rhs, mes, open));
    }
    case FKind::Or: {
      auto a = rebuild(f->lhs, mes, open);
      return Formula::or_(a, rebuild(f->rhs, mes, open));
    }
    case FKind::Chop: {
      auto a = rebuild(f->lhs, mes, open);
      return Formula::chop(a, rebuild(f->rhs, mes, open));
    }
    case FKind::Mu: {
      open.insert(f->name);
      FormulaPtr body = rebuild(f->lhs, mes, open);
      open.erase(f->name);
      return Formula::mu(f->name, body);
    }
    default:
      return f;
  }
}

}  // namespace

FormulaPtr strongest_trace_formula(const StmtPtr& s, const ProcTable& table) {
  return stf_rec(s, table, {});
}

ModalEquationSystem modal_equation_system(const FormulaPtr& f) {
  std::set<std::string> seen;
  check_unique_binders(f, seen);
  ModalEquationSystem out;
  out.root = mes_rec(f, out);
  return out;
}

FormulaPtr resubstitute(const ModalEquationSystem& mes) {
  std::set<std::string> open;
  return rebuild(mes.root, mes, open);
}

}  // namespace tracelab
