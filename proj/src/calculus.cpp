#include "tracelab/calculus.hpp"

#include <algorithm>
#include <map>

#include "tracelab/print.hpp"
#include "tracelab/stf.hpp"

namespace tracelab {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Skip: return "Skip";
    case Rule::Assign: return "Assign";
    case Rule::Seq: return "Seq";
    case Rule::If: return "If";
    case Rule::IfStar: return "IfStar";
    case Rule::Unfold: return "Unfold";
    case Rule::Cons: return "Cons";
    case Rule::Call: return "Call";
    case Rule::Axiom: return "Axiom";
    case Rule::OrIntro: return "OrIntro";
    case Rule::While: return "While";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  static const std::map<std::string, Rule> table = {
      {"Skip", Rule::Skip},     {"Assign", Rule::Assign}, {"Seq", Rule::Seq},
      {"If", Rule::If},         {"IfStar", Rule::IfStar}, {"Unfold", Rule::Unfold},
      {"Cons", Rule::Cons},     {"Call", Rule::Call},     {"Axiom", Rule::Axiom},
      {"OrIntro", Rule::OrIntro}, {"While", Rule::While}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

std::string svar_for(const std::string& proc) { return "Y_" + proc; }

// Antecedents are sets of (statement variable : formula) pairs.
bool antecedent_eq(const std::vector<Judgment>& a, const std::vector<Judgment>& b) {
  if (a.size() != b.size()) return false;
  auto key = [](const Judgment& j) { return j.subject->name; };
  auto sorted = [&](std::vector<Judgment> v) {
    std::sort(v.begin(), v.end(),
              [&](const Judgment& x, const Judgment& y) { return key(x) < key(y); });
    return v;
  };
  auto sa = sorted(a), sb = sorted(b);
  for (size_t i = 0; i < sa.size(); ++i) {
    if (sa[i].subject->name != sb[i].subject->name) return false;
    if (!equal(sa[i].spec, sb[i].spec)) return false;
  }
  return true;
}

bool antecedent_has(const std::vector<Judgment>& g, const std::string& svar,
                    const FormulaPtr& spec) {
  for (const auto& j : g)
    if (j.subject->name == svar && equal(j.spec, spec)) return true;
  return false;
}

std::map<std::string, std::string> call_subst_map(const std::vector<Judgment>& antecedent) {
  std::map<std::string, std::string> m;
  for (const auto& j : antecedent) {
    const std::string& y = j.subject->name;
    if (y.rfind("Y_", 0) == 0) m[y.substr(2)] = y;
  }
  return m;
}

// The while-shaped body `if b then S; w() else skip`; yields (b, S).
bool match_while_body(const StmtPtr& body, const std::string& proc, BExpPtr& guard,
                      StmtPtr& inner) {
  if (body->kind != SKind::If) return false;
  if (body->s2->kind != SKind::Skip) return false;
  if (body->s1->kind != SKind::Seq) return false;
  if (body->s1->s2->kind != SKind::Call || body->s1->s2->name != proc) return false;
  guard = body->guard;
  inner = body->s1->s1;
  return true;
}

struct Checker {
  const ProcTable& table;
  std::string error;

  bool fail(const std::string& where, const std::string& what) {
    error = where + ": " + what;
    return false;
  }

  bool arity(const ProofTree& n, size_t want, const std::string& where) {
    if (n.premises.size() == want) return true;
    return fail(where, rule_name(n.rule) + " expects " + std::to_string(want) +
                           " premises, found " + std::to_string(n.premises.size()));
  }

  // premise must share the antecedent of the conclusion
  bool premise_ctx(const ProofTree& n, size_t i, const std::string& where) {
    if (antecedent_eq(n.premises[i]->conclusion.antecedent, n.conclusion.antecedent))
      return true;
    return fail(where, "premise " + std::to_string(i) + " changes the antecedent");
  }

  bool check(const ProofPtr& t, const std::string& where) {
    const ProofTree& n = *t;
    const Judgment& j = n.conclusion.succedent;
    switch (n.rule) {
      case Rule::Skip: {
        if (!arity(n, 0, where)) return false;
        if (j.subject->kind != SKind::Skip) return fail(where, "subject is not skip");
        if (!equal(j.spec, Formula::rel_id())) return fail(where, "formula is not Id");
        return true;
      }
      case Rule::Assign: {
        if (!arity(n, 0, where)) return false;
        if (j.subject->kind != SKind::Assign) return fail(where, "subject is not an assignment");
        auto want = Formula::rel_sb(j.subject->name, j.subject->expr);
        if (!equal(j.spec, want))
          return fail(where, "formula is not the substitution relation of the assignment");
        return true;
      }
      case Rule::Seq: {
        if (!arity(n, 2, where)) return false;
        if (j.subject->kind != SKind::Seq) return fail(where, "subject is not a sequence");
        if (j.spec->kind != FKind::Chop) return fail(where, "formula is not a chop");
        const auto& p1 = n.premises[0]->conclusion.succedent;
        const auto& p2 = n.premises[1]->conclusion.succedent;
        if (!equal(p1.subject, j.subject->s1) || !equal(p2.subject, j.subject->s2))
          return fail(where, "premise subjects do not split the sequence");
        if (!equal(p1.spec, j.spec->lhs) || !equal(p2.spec, j.spec->rhs))
          return fail(where, "premise formulas do not split the chop");
        if (!premise_ctx(n, 0, where) || !premise_ctx(n, 1, where)) return false;
        break;
      }
      case Rule::If: {
        if (!arity(n, 2, where)) return false;
        if (j.subject->kind != SKind::If) return fail(where, "subject is not a conditional");
        const auto& p1 = n.premises[0]->conclusion.succedent;
        const auto& p2 = n.premises[1]->conclusion.succedent;
        auto want1 = Statement::seq(Statement::skip(), j.subject->s1);
        auto want2 = Statement::seq(Statement::skip(), j.subject->s2);
        if (!equal(p1.subject, want1) || !equal(p2.subject, want2))
          return fail(where, "premise subjects are not skip;branch");
        auto neg = [&](const FormulaPtr& f, const BExpPtr& b) {
          return equal(f, Formula::or_(Formula::state_pred(negate_bexp(b)), j.spec)) ||
                 equal(f, Formula::or_(Formula::state_pred(BExp::bnot(b)), j.spec));
        };
        if (!neg(p1.spec, j.subject->guard))
          return fail(where, "left premise formula is not !b \\/ phi");
        if (!equal(p2.spec, Formula::or_(Formula::state_pred(j.subject->guard), j.spec)))
          return fail(where, "right premise formula is not b \\/ phi");
        if (!premise_ctx(n, 0, where) || !premise_ctx(n, 1, where)) return false;
        break;
      }
      case Rule::IfStar: {
        if (!arity(n, 2, where)) return false;
        if (j.subject->kind != SKind::IfStar)
          return fail(where, "subject is not a nondeterministic choice");
        for (size_t i = 0; i < 2; ++i) {
          const auto& p = n.premises[i]->conclusion.succedent;
          auto want = Statement::seq(Statement::skip(), i == 0 ? j.subject->s1 : j.subject->s2);
          if (!equal(p.subject, want)) return fail(where, "premise subject is not skip;branch");
          if (!equal(p.spec, j.spec)) return fail(where, "premise formula differs");
          if (!premise_ctx(n, i, where)) return false;
        }
        break;
      }
      case Rule::Unfold: {
        if (!arity(n, 1, where)) return false;
        if (j.spec->kind != FKind::Mu) return fail(where, "formula is not a fixed point");
        const auto& p = n.premises[0]->conclusion.succedent;
        if (!equal(p.subject, j.subject)) return fail(where, "premise changes the subject");
        if (!equal(p.spec, unfold(j.spec)))
          return fail(where, "premise formula is not the unfolding");
        if (!premise_ctx(n, 0, where)) return false;
        break;
      }
      case Rule::Cons: {
        if (!arity(n, 1, where)) return false;
        if (!n.cert) return fail(where, "missing entailment certificate");
        const auto& p = n.premises[0]->conclusion.succedent;
        if (!equal(p.subject, j.subject)) return fail(where, "premise changes the subject");
        if (!equal(n.cert->lhs, p.spec) || !equal(n.cert->rhs, j.spec))
          return fail(where, "certificate claim does not match the step");
        OracleCertificate replay;
        try {
          replay = entails_bounded(n.cert->lhs, n.cert->rhs, n.cert->bounds);
        } catch (const EvalError& e) {
          return fail(where, std::string("certificate replay failed: ") + e.what());
        }
        if (!replay.accepted) {
          std::string msg = "certificate refuted";
          if (replay.witness) msg += " by " + to_string(*replay.witness);
          return fail(where, msg);
        }
        if (!premise_ctx(n, 0, where)) return false;
        break;
      }
      case Rule::Call: {
        if (!arity(n, 1, where)) return false;
        if (j.subject->kind != SKind::Call || j.subject->name != n.proc)
          return fail(where, "subject is not a call to " + n.proc);
        const StmtPtr* body = lookup_proc(table, n.proc);
        if (!body) return fail(where, "procedure not declared: " + n.proc);
        if (j.spec->kind != FKind::Chop || !equal(j.spec->lhs, Formula::rel_id()))
          return fail(where, "formula is not Id ^ phi");
        FormulaPtr phi_m = j.spec->rhs;
        std::string y = svar_for(n.proc);
        if (antecedent_has(n.conclusion.antecedent, y, phi_m))
          return fail(where, "contract for " + y + " is already assumed");
        const auto& prem = n.premises[0]->conclusion;
        std::vector<Judgment> want_ctx = n.conclusion.antecedent;
        want_ctx.push_back({Statement::svar(y), phi_m});
        if (!antecedent_eq(prem.antecedent, want_ctx))
          return fail(where, "premise antecedent is not extended by " + y);
        StmtPtr want_subject = subst_calls(*body, call_subst_map(want_ctx));
        if (!equal(prem.succedent.subject, want_subject))
          return fail(where, "premise subject is not the substituted body");
        if (!equal(prem.succedent.spec, phi_m))
          return fail(where, "premise formula is not the call contract");
        break;
      }
      case Rule::Axiom: {
        if (!arity(n, 0, where)) return false;
        if (j.subject->kind != SKind::SVar)
          return fail(where, "axiom subject is not a statement variable");
        if (!antecedent_has(n.conclusion.antecedent, j.subject->name, j.spec))
          return fail(where, "judgment is not among the assumptions");
        return true;
      }
      case Rule::OrIntro: {
        if (!arity(n, 1, where)) return false;
        if (j.spec->kind != FKind::Or) return fail(where, "formula is not a disjunction");
        const auto& p = n.premises[0]->conclusion.succedent;
        if (!equal(p.subject, j.subject)) return fail(where, "premise changes the subject");
        if (!equal(p.spec, j.spec->lhs) && !equal(p.spec, j.spec->rhs))
          return fail(where, "premise formula is not one of the disjuncts");
        if (!premise_ctx(n, 0, where)) return false;
        break;
      }
      case Rule::While: {
        if (!arity(n, 2, where)) return false;
        if (j.subject->kind != SKind::Call || j.subject->name != n.proc)
          return fail(where, "subject is not a call to " + n.proc);
        const StmtPtr* body = lookup_proc(table, n.proc);
        if (!body) return fail(where, "procedure not declared: " + n.proc);
        BExpPtr guard;
        StmtPtr inner;
        if (!match_while_body(*body, n.proc, guard, inner))
          return fail(where, "procedure body is not loop-shaped");
        if (j.spec->kind != FKind::Chop || !equal(j.spec->lhs, Formula::rel_id()))
          return fail(where, "formula is not Id ^ phi");
        FormulaPtr phi = j.spec->rhs;
        std::string y = svar_for(n.proc);
        if (antecedent_has(n.conclusion.antecedent, y, phi))
          return fail(where, "contract for " + y + " is already assumed");
        // exit premise: skip;skip : b \/ phi under the unchanged antecedent
        const auto& exit = n.premises[0]->conclusion;
        if (!antecedent_eq(exit.antecedent, n.conclusion.antecedent))
          return fail(where, "exit premise changes the antecedent");
        if (!equal(exit.succedent.subject, Statement::seq(Statement::skip(), Statement::skip())))
          return fail(where, "exit premise subject is not skip;skip");
        if (!equal(exit.succedent.spec, Formula::or_(Formula::state_pred(guard), phi)))
          return fail(where, "exit premise formula is not b \\/ phi");
        // step premise: skip;S';skip;Y : !b \/ phi under the extended antecedent
        const auto& stepp = n.premises[1]->conclusion;
        std::vector<Judgment> want_ctx = n.conclusion.antecedent;
        want_ctx.push_back({Statement::svar(y), phi});
        if (!antecedent_eq(stepp.antecedent, want_ctx))
          return fail(where, "step premise antecedent is not extended by " + y);
        StmtPtr inner_sub = subst_calls(inner, call_subst_map(want_ctx));
        StmtPtr want_subject = Statement::seq(
            Statement::skip(),
            Statement::seq(inner_sub, Statement::seq(Statement::skip(), Statement::svar(y))));
        if (!equal(stepp.succedent.subject, want_subject))
          return fail(where, "step premise subject is not skip;body;skip;" + y);
        bool ok_neg =
            equal(stepp.succedent.spec,
                  Formula::or_(Formula::state_pred(negate_bexp(guard)), phi)) ||
            equal(stepp.succedent.spec, Formula::or_(Formula::state_pred(BExp::bnot(guard)), phi));
        if (!ok_neg) return fail(where, "step premise formula is not !b \\/ phi");
        break;
      }
    }
    for (size_t i = 0; i < n.premises.size(); ++i)
      if (!check(n.premises[i], where + "." + std::to_string(i))) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Canonical proof generation
// ---------------------------------------------------------------------------

struct Generator {
  const ProcTable& table;
  Bounds bounds;

  // env maps finished procedures to their closed contracts; the procedure
  // currently being opened maps to its own recursion variable.
  FormulaPtr closed_stf(const StmtPtr& s, const std::map<std::string, FormulaPtr>& env) {
    switch (s->kind) {
      case SKind::Skip: return Formula::rel_id();
      case SKind::Assign: return Formula::rel_sb(s->name, s->expr);
      case SKind::Seq:
        return Formula::chop(closed_stf(s->s1, env), closed_stf(s->s2, env));
      case SKind::If:
        return Formula::or_(
            Formula::and_(Formula::state_pred(s->guard),
                          Formula::chop(Formula::rel_id(), closed_stf(s->s1, env))),
            Formula::and_(Formula::state_pred(negate_bexp(s->guard)),
                          Formula::chop(Formula::rel_id(), closed_stf(s->s2, env))));
      case SKind::IfStar:
        return Formula::or_(Formula::chop(Formula::rel_id(), closed_stf(s->s1, env)),
                            Formula::chop(Formula::rel_id(), closed_stf(s->s2, env)));
      case SKind::Call: {
        auto it = env.find(s->name);
        if (it != env.end()) return Formula::chop(Formula::rel_id(), it->second);
        const StmtPtr* body = lookup_proc(table, s->name);
        if (!body) throw EvalError("call to undeclared procedure: " + s->name);
        auto inner = env;
        inner[s->name] = Formula::rvar("X_" + s->name);
        return Formula::chop(Formula::rel_id(),
                             Formula::mu("X_" + s->name, closed_stf(*body, inner)));
      }
      case SKind::SVar:
        throw EvalError("no trace formula for statement variable: " + s->name);
    }
    throw EvalError("bad statement");
  }

  std::vector<Judgment> antecedent_of(const std::map<std::string, FormulaPtr>& gamma) {
    std::vector<Judgment> out;
    for (const auto& [proc, phi] : gamma)
      out.push_back({Statement::svar(svar_for(proc)), phi});
    return out;
  }

  std::map<std::string, std::string> subst_of(const std::map<std::string, FormulaPtr>& gamma) {
    std::map<std::string, std::string> m;
    for (const auto& [proc, phi] : gamma) m[proc] = svar_for(proc);
    return m;
  }

  ProofPtr leaf(Rule r, Sequent concl) {
    auto n = std::make_shared<ProofTree>();
    n->rule = r;
    n->conclusion = std::move(concl);
    return n;
  }

  ProofPtr node(Rule r, Sequent concl, std::vector<ProofPtr> prem, std::string proc = "",
                std::optional<OracleCertificate> cert = std::nullopt) {
    auto n = std::make_shared<ProofTree>();
    n->rule = r;
    n->conclusion = std::move(concl);
    n->premises = std::move(prem);
    n->proc = std::move(proc);
    n->cert = std::move(cert);
    return n;
  }

  OracleCertificate discharge(const FormulaPtr& lhs, const FormulaPtr& rhs) {
    OracleCertificate c = entails_bounded(lhs, rhs, bounds);
    if (!c.accepted) {
      std::string msg = "entailment certificate refuted: " + to_string(lhs) +
                        " |= " + to_string(rhs) + " (bounds too small?)";
      if (c.witness) msg += " witness " + to_string(*c.witness);
      throw EvalError(msg);
    }
    return c;
  }

  // Proves Gamma |- skip;sigma(S) : Id ^ closed_stf(S), the shape every
  // guarded branch premise starts from.
  ProofPtr skip_then(const StmtPtr& s, const std::map<std::string, FormulaPtr>& gamma) {
    auto ctx = antecedent_of(gamma);
    StmtPtr subj = Statement::seq(Statement::skip(), subst_calls(s, subst_of(gamma)));
    FormulaPtr cl = closed_stf(s, gamma);
    ProofPtr skip_leaf =
        leaf(Rule::Skip, {ctx, {Statement::skip(), Formula::rel_id()}});
    return node(Rule::Seq, {ctx, {subj, Formula::chop(Formula::rel_id(), cl)}},
                {skip_leaf, gen(s, gamma)});
  }

  ProofPtr gen(const StmtPtr& s, const std::map<std::string, FormulaPtr>& gamma) {
    auto ctx = antecedent_of(gamma);
    StmtPtr subj = subst_calls(s, subst_of(gamma));
    switch (s->kind) {
      case SKind::Skip:
        return leaf(Rule::Skip, {ctx, {subj, Formula::rel_id()}});
      case SKind::Assign:
        return leaf(Rule::Assign, {ctx, {subj, Formula::rel_sb(s->name, s->expr)}});
      case SKind::Seq: {
        FormulaPtr spec = closed_stf(s, gamma);
        return node(Rule::Seq, {ctx, {subj, spec}}, {gen(s->s1, gamma), gen(s->s2, gamma)});
      }
      case SKind::If: {
        FormulaPtr spec = closed_stf(s, gamma);
        FormulaPtr left_goal =
            Formula::or_(Formula::state_pred(negate_bexp(s->guard)), spec);
        FormulaPtr right_goal = Formula::or_(Formula::state_pred(s->guard), spec);
        ProofPtr l_inner = skip_then(s->s1, gamma);
        ProofPtr r_inner = skip_then(s->s2, gamma);
        auto l_cert = discharge(l_inner->conclusion.succedent.spec, left_goal);
        auto r_cert = discharge(r_inner->conclusion.succedent.spec, right_goal);
        ProofPtr l = node(Rule::Cons, {ctx, {l_inner->conclusion.succedent.subject, left_goal}},
                          {l_inner}, "", l_cert);
        ProofPtr r = node(Rule::Cons, {ctx, {r_inner->conclusion.succedent.subject, right_goal}},
                          {r_inner}, "", r_cert);
        return node(Rule::If, {ctx, {subj, spec}}, {l, r});
      }
      case SKind::IfStar: {
        FormulaPtr spec = closed_stf(s, gamma);
        ProofPtr l_inner = skip_then(s->s1, gamma);
        ProofPtr r_inner = skip_then(s->s2, gamma);
        ProofPtr l = node(Rule::OrIntro,
                          {ctx, {l_inner->conclusion.succedent.subject, spec}}, {l_inner});
        ProofPtr r = node(Rule::OrIntro,
                          {ctx, {r_inner->conclusion.succedent.subject, spec}}, {r_inner});
        return node(Rule::IfStar, {ctx, {subj, spec}}, {l, r});
      }
      case SKind::Call: {
        auto it = gamma.find(s->name);
        if (it != gamma.end()) {
          // assumed contract: skip;Y_m : Id ^ phi_m via Seq + Axiom
          std::string y = svar_for(s->name);
          ProofPtr skip_leaf = leaf(Rule::Skip, {ctx, {Statement::skip(), Formula::rel_id()}});
          ProofPtr ax = leaf(Rule::Axiom, {ctx, {Statement::svar(y), it->second}});
          return node(Rule::Seq,
                      {ctx, {subj, Formula::chop(Formula::rel_id(), it->second)}},
                      {skip_leaf, ax});
        }
        const StmtPtr* body = lookup_proc(table, s->name);
        if (!body) throw EvalError("call to undeclared procedure: " + s->name);
        auto open_env = gamma;
        open_env[s->name] = Formula::rvar("X_" + s->name);
        FormulaPtr phi_m =
            Formula::mu("X_" + s->name, closed_stf(*body, open_env));
        auto inner_gamma = gamma;
        inner_gamma[s->name] = phi_m;
        ProofPtr body_proof = gen(*body, inner_gamma);
        Sequent unfold_concl{antecedent_of(inner_gamma),
                             {body_proof->conclusion.succedent.subject, phi_m}};
        ProofPtr unf = node(Rule::Unfold, unfold_concl, {body_proof});
        return node(Rule::Call,
                    {ctx, {subj, Formula::chop(Formula::rel_id(), phi_m)}}, {unf},
                    s->name);
      }
      case SKind::SVar:
        throw EvalError("statement variables have no canonical proof");
    }
    throw EvalError("bad statement");
  }
};

}  // namespace

CheckResult check_proof(const ProofPtr& t, const ProcTable& table) {
  Checker c{table, {}};
  if (c.check(t, "root")) return {true, ""};
  return {false, c.error};
}

OracleCertificate entails_bounded(const FormulaPtr& lhs, const FormulaPtr& rhs,
                                  const Bounds& bounds) {
  OracleCertificate cert;
  cert.lhs = lhs;
  cert.rhs = rhs;
  cert.bounds = bounds;
  TraceSet traces = eval_formula_enum(lhs, bounds);  // throws if not enumerable
  for (const auto& t : traces) {
    if (!models(t, rhs)) {
      cert.accepted = false;
      cert.witness = t;
      return cert;
    }
  }
  cert.accepted = true;
  return cert;
}

Verdict valid_judgment_bounded(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                               const Bounds& bounds) {
  if (contains_svar(s))
    throw EvalError("bounded validity is only decided for closed subjects");
  Verdict v;
  for (const auto& t : eval_stm(s, table, bounds)) {
    if (!models(t, phi)) {
      v.accepted = false;
      v.witness = t;
      return v;
    }
  }
  v.accepted = true;
  return v;
}

ProofPtr prove_stf(const StmtPtr& s, const ProcTable& table, const Bounds& bounds) {
  Generator g{table, bounds};
  return g.gen(s, {});
}

ProofPtr prove_via_cons(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                        const Bounds& bounds) {
  Generator g{table, bounds};
  ProofPtr base = prove_stf(s, table, bounds);
  OracleCertificate cert =
      entails_bounded(base->conclusion.succedent.spec, phi, bounds);
  auto n = std::make_shared<ProofTree>();
  n->rule = Rule::Cons;
  n->conclusion = {{}, {s, phi}};
  n->premises = {base};
  n->cert = cert;
  return n;
}

std::size_t count_rule(const ProofPtr& t, Rule r) {
  std::size_t n = t->rule == r ? 1 : 0;
  for (const auto& p : t->premises) n += count_rule(p, r);
  return n;
}

}  // namespace tracelab
