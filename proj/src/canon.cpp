#include "tracelab/canon.hpp"

#include <set>

#include "tracelab/print.hpp"

namespace tracelab {

namespace {

struct CanonPiece {
  StmtPtr stmt;
  ProcTable table;
  bool uses_diverge = false;
};

CanonPiece canon_rec(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Rel:
      if (f->rel == RelKind::Id) return {Statement::skip(), {}, false};
      if (f->rel == RelKind::Sb) return {Statement::assign(f->var, f->expr), {}, false};
      break;
    case FKind::And: {
      if (f->lhs->kind != FKind::StatePred) break;
      CanonPiece inner = canon_rec(f->rhs);
      return {Statement::if_(f->lhs->pred, inner.stmt, Statement::call(kAbortProc)),
              std::move(inner.table), true};
    }
    case FKind::Or: {
      CanonPiece a = canon_rec(f->lhs);
      CanonPiece b = canon_rec(f->rhs);
      ProcTable table = std::move(a.table);
      table.insert(table.end(), b.table.begin(), b.table.end());
      return {Statement::if_star(a.stmt, b.stmt), std::move(table),
              a.uses_diverge || b.uses_diverge};
    }
    case FKind::Chop: {
      CanonPiece a = canon_rec(f->lhs);
      CanonPiece b = canon_rec(f->rhs);
      ProcTable table = std::move(a.table);
      table.insert(table.end(), b.table.begin(), b.table.end());
      return {Statement::seq(a.stmt, b.stmt), std::move(table),
              a.uses_diverge || b.uses_diverge};
    }
    case FKind::Mu: {
      CanonPiece body = canon_rec(f->lhs);
      ProcTable table = std::move(body.table);
      table.emplace_back("m_" + f->name, body.stmt);
      return {Statement::call("m_" + f->name), std::move(table), body.uses_diverge};
    }
    case FKind::RVar:
      return {Statement::call("m_" + f->name), {}, false};
    default:
      break;
  }
  throw EvalError("no canonical program for: " + to_string(f));
}

TraceSet normalize_cut(const TraceSet& a, int max_len) {
  int cut = max_len / 3;
  TraceSet out;
  for (const auto& t : a) {
    Trace n = stutter_normalize(t);
    if (static_cast<int>(n.size()) <= cut) out.insert(std::move(n));
  }
  return out;
}

}  // namespace

Program canonical_program(const FormulaPtr& f) {
  if (!closed(f)) throw EvalError("canonical programs require closed formulas");
  auto r = check_restricted(f);
  if (!r.ok)
    throw EvalError("formula is outside the reduced grammar at: " + to_string(r.offending));
  CanonPiece piece = canon_rec(f);  // throws on duplicate binder names below
  Program p{piece.stmt, std::move(piece.table)};
  std::set<std::string> names;
  for (const auto& [n, body] : p.table)
    if (!names.insert(n).second)
      throw EvalError("duplicate recursion-variable name: " + n.substr(2));
  if (piece.uses_diverge) p.table.emplace_back(kAbortProc, Statement::call(kAbortProc));
  if (auto err = well_formedness_error(p)) throw EvalError(*err);
  return p;
}

bool stutter_equal(const TraceSet& a, const TraceSet& b) {
  return stutter_normalize(a) == stutter_normalize(b);
}

std::optional<Trace> stutter_diff_bounded(const TraceSet& a, const TraceSet& b, int max_len) {
  TraceSet na = normalize_cut(a, max_len);
  TraceSet nb = normalize_cut(b, max_len);
  for (const auto& t : na)
    if (!nb.count(t)) return t;
  for (const auto& t : nb)
    if (!na.count(t)) return t;
  return std::nullopt;
}

RefinementVerdict refines_bounded(const StmtPtr& s1, const ProcTable& t1, const StmtPtr& s2,
                                  const ProcTable& t2, const Bounds& bounds,
                                  bool modulo_stutter) {
  RefinementVerdict v;
  v.bounds = bounds;
  TraceSet a = eval_stm(s1, t1, bounds);
  TraceSet b = eval_stm(s2, t2, bounds);
  if (modulo_stutter) {
    TraceSet na = normalize_cut(a, bounds.max_len);
    TraceSet nb = stutter_normalize(b);
    for (const auto& t : na)
      if (!nb.count(t)) {
        v.witness = t;
        return v;
      }
  } else {
    for (const auto& t : a)
      if (!b.count(t)) {
        v.witness = t;
        return v;
      }
  }
  v.holds = true;
  return v;
}

GaloisReport galois_check(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                          const Bounds& bounds) {
  GaloisReport rep;
  // stf(S) and S have identical denotations, so entailment modulo stuttering
  // is checked on the statement's traces directly.
  TraceSet left = normalize_cut(eval_stm(s, table, bounds), bounds.max_len);
  TraceSet right = stutter_normalize(eval_formula_enum(phi, bounds));
  rep.entails_holds = true;
  for (const auto& t : left)
    if (!right.count(t)) {
      rep.entails_holds = false;
      rep.entails_witness = t;
      break;
    }
  Program can = canonical_program(phi);
  RefinementVerdict rv = refines_bounded(s, table, can.main, can.table, bounds, true);
  rep.refines_holds = rv.holds;
  rep.refines_witness = rv.witness;
  return rep;
}

}  // namespace tracelab
