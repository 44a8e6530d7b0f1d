#include "tracelab/syntax.hpp"

#include <algorithm>

namespace tracelab {

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

AExpPtr AExp::lit_(Int v) {
  auto n = std::make_shared<AExp>();
  n->kind = AKind::Lit;
  n->lit = v;
  return n;
}

AExpPtr AExp::var_(std::string name) {
  auto n = std::make_shared<AExp>();
  n->kind = AKind::Var;
  n->var = std::move(name);
  return n;
}

static AExpPtr abin(AKind k, AExpPtr a, AExpPtr b) {
  auto n = std::make_shared<AExp>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

AExpPtr AExp::add(AExpPtr a, AExpPtr b) { return abin(AKind::Add, std::move(a), std::move(b)); }
AExpPtr AExp::sub(AExpPtr a, AExpPtr b) { return abin(AKind::Sub, std::move(a), std::move(b)); }
AExpPtr AExp::mul(AExpPtr a, AExpPtr b) { return abin(AKind::Mul, std::move(a), std::move(b)); }

BExpPtr BExp::tru() {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::True;
  return n;
}

BExpPtr BExp::fls() {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::False;
  return n;
}

BExpPtr BExp::cmp(CmpOp op, AExpPtr a, AExpPtr b) {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::Cmp;
  n->op = op;
  n->a1 = std::move(a);
  n->a2 = std::move(b);
  return n;
}

BExpPtr BExp::band(BExpPtr a, BExpPtr b) {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::And;
  n->b1 = std::move(a);
  n->b2 = std::move(b);
  return n;
}

BExpPtr BExp::bor(BExpPtr a, BExpPtr b) {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::Or;
  n->b1 = std::move(a);
  n->b2 = std::move(b);
  return n;
}

BExpPtr BExp::bnot(BExpPtr a) {
  auto n = std::make_shared<BExp>();
  n->kind = BKind::Not;
  n->b1 = std::move(a);
  return n;
}

StmtPtr Statement::skip() {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::Skip;
  return n;
}

StmtPtr Statement::assign(std::string var, AExpPtr e) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::Assign;
  n->name = std::move(var);
  n->expr = std::move(e);
  return n;
}

StmtPtr Statement::seq(StmtPtr a, StmtPtr b) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::Seq;
  n->s1 = std::move(a);
  n->s2 = std::move(b);
  return n;
}

StmtPtr Statement::if_(BExpPtr b, StmtPtr then_, StmtPtr else_) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::If;
  n->guard = std::move(b);
  n->s1 = std::move(then_);
  n->s2 = std::move(else_);
  return n;
}

StmtPtr Statement::if_star(StmtPtr a, StmtPtr b) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::IfStar;
  n->s1 = std::move(a);
  n->s2 = std::move(b);
  return n;
}

StmtPtr Statement::call(std::string proc) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::Call;
  n->name = std::move(proc);
  return n;
}

StmtPtr Statement::svar(std::string name) {
  auto n = std::make_shared<Statement>();
  n->kind = SKind::SVar;
  n->name = std::move(name);
  return n;
}

FormulaPtr Formula::state_pred(BExpPtr b) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::StatePred;
  n->pred = std::move(b);
  return n;
}

FormulaPtr Formula::rel_id() {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::Rel;
  n->rel = RelKind::Id;
  return n;
}

FormulaPtr Formula::rel_sb(std::string var, AExpPtr e) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::Rel;
  n->rel = RelKind::Sb;
  n->var = std::move(var);
  n->expr = std::move(e);
  return n;
}

FormulaPtr Formula::rel_dec(AExpPtr e) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::Rel;
  n->rel = RelKind::Dec;
  n->expr = std::move(e);
  return n;
}

FormulaPtr Formula::rel_named(std::string label, BExpPtr body) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::Rel;
  n->rel = RelKind::Named;
  n->rel_name = std::move(label);
  n->rel_body = std::move(body);
  return n;
}

FormulaPtr Formula::rvar(std::string name) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::RVar;
  n->name = std::move(name);
  return n;
}

static FormulaPtr fbin(FKind k, FormulaPtr a, FormulaPtr b) {
  auto n = std::make_shared<Formula>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

FormulaPtr Formula::and_(FormulaPtr a, FormulaPtr b) { return fbin(FKind::And, std::move(a), std::move(b)); }
FormulaPtr Formula::or_(FormulaPtr a, FormulaPtr b) { return fbin(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr Formula::chop(FormulaPtr a, FormulaPtr b) { return fbin(FKind::Chop, std::move(a), std::move(b)); }

FormulaPtr Formula::mu(std::string name, FormulaPtr body) {
  auto n = std::make_shared<Formula>();
  n->kind = FKind::Mu;
  n->name = std::move(name);
  n->lhs = std::move(body);
  return n;
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool equal(const AExpPtr& a, const AExpPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case AKind::Lit: return a->lit == b->lit;
    case AKind::Var: return a->var == b->var;
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const BExpPtr& a, const BExpPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BKind::True:
    case BKind::False: return true;
    case BKind::Cmp: return a->op == b->op && equal(a->a1, b->a1) && equal(a->a2, b->a2);
    case BKind::Not: return equal(a->b1, b->b1);
    default: return equal(a->b1, b->b1) && equal(a->b2, b->b2);
  }
}

bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SKind::Skip: return true;
    case SKind::Assign: return a->name == b->name && equal(a->expr, b->expr);
    case SKind::Seq:
    case SKind::IfStar: return equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case SKind::If:
      return equal(a->guard, b->guard) && equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case SKind::Call:
    case SKind::SVar: return a->name == b->name;
  }
  return false;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FKind::StatePred: return equal(a->pred, b->pred);
    case FKind::Rel:
      if (a->rel != b->rel) return false;
      switch (a->rel) {
        case RelKind::Id: return true;
        case RelKind::Sb: return a->var == b->var && equal(a->expr, b->expr);
        case RelKind::Dec: return equal(a->expr, b->expr);
        case RelKind::Named: return a->rel_name == b->rel_name && equal(a->rel_body, b->rel_body);
      }
      return false;
    case FKind::RVar: return a->name == b->name;
    case FKind::Mu: return a->name == b->name && equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

// ---------------------------------------------------------------------------
// Negation normalization
// ---------------------------------------------------------------------------

BExpPtr negate_bexp(const BExpPtr& b) {
  switch (b->kind) {
    case BKind::True: return BExp::fls();
    case BKind::False: return BExp::tru();
    case BKind::Not: return b->b1;
    case BKind::And: return BExp::bor(negate_bexp(b->b1), negate_bexp(b->b2));
    case BKind::Or: return BExp::band(negate_bexp(b->b1), negate_bexp(b->b2));
    case BKind::Cmp: {
      CmpOp op;
      switch (b->op) {
        case CmpOp::Eq: op = CmpOp::Ne; break;
        case CmpOp::Ne: op = CmpOp::Eq; break;
        case CmpOp::Lt: op = CmpOp::Ge; break;
        case CmpOp::Ge: op = CmpOp::Lt; break;
        case CmpOp::Le: op = CmpOp::Gt; break;
        case CmpOp::Gt: op = CmpOp::Le; break;
        default: op = CmpOp::Eq; break;
      }
      return BExp::cmp(op, b->a1, b->a2);
    }
  }
  return BExp::bnot(b);
}

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

const StmtPtr* lookup_proc(const ProcTable& table, const std::string& name) {
  for (const auto& [n, body] : table)
    if (n == name) return &body;
  return nullptr;
}

static void collect_calls(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  if (s->kind == SKind::Call) out.insert(s->name);
  collect_calls(s->s1, out);
  collect_calls(s->s2, out);
}

std::optional<std::string> well_formedness_error(const Program& p) {
  std::set<std::string> names;
  for (const auto& [n, body] : p.table) {
    if (!names.insert(n).second) return "duplicate procedure declaration: " + n;
  }
  std::set<std::string> calls;
  collect_calls(p.main, calls);
  for (const auto& [n, body] : p.table) collect_calls(body, calls);
  for (const auto& c : calls)
    if (!names.count(c)) return "call to undeclared procedure: " + c;
  return std::nullopt;
}

bool contains_svar(const StmtPtr& s) {
  if (!s) return false;
  if (s->kind == SKind::SVar) return true;
  return contains_svar(s->s1) || contains_svar(s->s2);
}

StmtPtr subst_calls(const StmtPtr& s, const std::map<std::string, std::string>& proc_to_svar) {
  switch (s->kind) {
    case SKind::Call: {
      auto it = proc_to_svar.find(s->name);
      if (it == proc_to_svar.end()) return s;
      return Statement::seq(Statement::skip(), Statement::svar(it->second));
    }
    case SKind::Seq:
      return Statement::seq(subst_calls(s->s1, proc_to_svar), subst_calls(s->s2, proc_to_svar));
    case SKind::If:
      return Statement::if_(s->guard, subst_calls(s->s1, proc_to_svar),
                            subst_calls(s->s2, proc_to_svar));
    case SKind::IfStar:
      return Statement::if_star(subst_calls(s->s1, proc_to_svar), subst_calls(s->s2, proc_to_svar));
    default:
      return s;
  }
}

// ---------------------------------------------------------------------------
// Formula utilities
// ---------------------------------------------------------------------------

static void free_rvars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                           std::set<std::string>& out) {
  switch (f->kind) {
    case FKind::RVar:
      if (!bound.count(f->name)) out.insert(f->name);
      return;
    case FKind::Mu: {
      bool fresh = bound.insert(f->name).second;
      free_rvars_rec(f->lhs, bound, out);
      if (fresh) bound.erase(f->name);
      return;
    }
    case FKind::And:
    case FKind::Or:
    case FKind::Chop:
      free_rvars_rec(f->lhs, bound, out);
      free_rvars_rec(f->rhs, bound, out);
      return;
    default:
      return;
  }
}

std::set<std::string> free_rvars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  free_rvars_rec(f, bound, out);
  return out;
}

static void binder_names(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == FKind::Mu) out.insert(f->name);
  if (f->lhs) binder_names(f->lhs, out);
  if (f->rhs) binder_names(f->rhs, out);
}

FormulaPtr subst_rvar(const FormulaPtr& f, const std::string& name, const FormulaPtr& g) {
  switch (f->kind) {
    case FKind::RVar:
      return f->name == name ? g : f;
    case FKind::Mu: {
      if (f->name == name) return f;  // shadowed
      if (free_rvars(g).count(f->name)) {
        // capture: rename this binder away from g's free variables
        std::set<std::string> avoid = free_rvars(g);
        std::set<std::string> used;
        binder_names(f->lhs, used);
        avoid.insert(used.begin(), used.end());
        avoid.insert(name);
        std::string fresh = f->name;
        int i = 1;
        while (avoid.count(fresh)) fresh = f->name + "_" + std::to_string(i++);
        auto renamed = subst_rvar(f->lhs, f->name, Formula::rvar(fresh));
        return Formula::mu(fresh, subst_rvar(renamed, name, g));
      }
      return Formula::mu(f->name, subst_rvar(f->lhs, name, g));
    }
    case FKind::And: return Formula::and_(subst_rvar(f->lhs, name, g), subst_rvar(f->rhs, name, g));
    case FKind::Or: return Formula::or_(subst_rvar(f->lhs, name, g), subst_rvar(f->rhs, name, g));
    case FKind::Chop: return Formula::chop(subst_rvar(f->lhs, name, g), subst_rvar(f->rhs, name, g));
    default:
      return f;
  }
}

FormulaPtr unfold(const FormulaPtr& phi) {
  if (phi->kind != FKind::Mu) throw EvalError("unfold: not a fixed-point formula");
  return subst_rvar(phi->lhs, phi->name, phi);
}

namespace {
struct Renamer {
  int next = 1;
  FormulaPtr run(const FormulaPtr& f, std::map<std::string, std::string>& env) {
    switch (f->kind) {
      case FKind::RVar: {
        auto it = env.find(f->name);
        return it == env.end() ? f : Formula::rvar(it->second);
      }
      case FKind::Mu: {
        std::string fresh = "X" + std::to_string(next++);
        auto saved = env;
        env[f->name] = fresh;
        auto body = run(f->lhs, env);
        env = saved;
        return Formula::mu(fresh, body);
      }
      case FKind::And: {
        auto a = run(f->lhs, env);
        return Formula::and_(a, run(f->rhs, env));
      }
      case FKind::Or: {
        auto a = run(f->lhs, env);
        return Formula::or_(a, run(f->rhs, env));
      }
      case FKind::Chop: {
        auto a = run(f->lhs, env);
        return Formula::chop(a, run(f->rhs, env));
      }
      default:
        return f;
    }
  }
};
}  // namespace

FormulaPtr rename_recursion_vars(const FormulaPtr& f) {
  Renamer r;
  std::map<std::string, std::string> env;
  return r.run(f, env);
}

FormulaPtr drop_unused_binders(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Mu: {
      auto body = drop_unused_binders(f->lhs);
      if (!free_rvars(body).count(f->name)) return body;
      return Formula::mu(f->name, body);
    }
    case FKind::And: return Formula::and_(drop_unused_binders(f->lhs), drop_unused_binders(f->rhs));
    case FKind::Or: return Formula::or_(drop_unused_binders(f->lhs), drop_unused_binders(f->rhs));
    case FKind::Chop:
      return Formula::chop(drop_unused_binders(f->lhs), drop_unused_binders(f->rhs));
    default:
      return f;
  }
}

static bool restricted_rec(const FormulaPtr& f, FormulaPtr& offending) {
  switch (f->kind) {
    case FKind::StatePred:
      offending = f;  // bare state predicate is excluded
      return false;
    case FKind::Rel:
      if (f->rel == RelKind::Id || f->rel == RelKind::Sb) return true;
      offending = f;
      return false;
    case FKind::RVar:
      return true;
    case FKind::And:
      if (f->lhs->kind != FKind::StatePred) {
        offending = f;
        return false;
      }
      return restricted_rec(f->rhs, offending);
    case FKind::Or:
    case FKind::Chop:
      return restricted_rec(f->lhs, offending) && restricted_rec(f->rhs, offending);
    case FKind::Mu:
      return restricted_rec(f->lhs, offending);
  }
  return false;
}

RestrictedCheck check_restricted(const FormulaPtr& f) {
  RestrictedCheck r;
  r.ok = restricted_rec(f, r.offending);
  return r;
}

// ---------------------------------------------------------------------------
// Variable collection
// ---------------------------------------------------------------------------

void collect_vars(const AExpPtr& a, std::set<std::string>& out) {
  if (!a) return;
  if (a->kind == AKind::Var) {
    // primed names (inside named relations) contribute their base variable
    std::string v = a->var;
    if (!v.empty() && v.back() == '\'') v.pop_back();
    out.insert(v);
  }
  collect_vars(a->lhs, out);
  collect_vars(a->rhs, out);
}

void collect_vars(const BExpPtr& b, std::set<std::string>& out) {
  if (!b) return;
  collect_vars(b->a1, out);
  collect_vars(b->a2, out);
  collect_vars(b->b1, out);
  collect_vars(b->b2, out);
}

void collect_vars(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  if (s->kind == SKind::Assign) out.insert(s->name);
  collect_vars(s->expr, out);
  collect_vars(s->guard, out);
  collect_vars(s->s1, out);
  collect_vars(s->s2, out);
}

void collect_vars(const Program& p, std::set<std::string>& out) {
  collect_vars(p.main, out);
  for (const auto& [n, body] : p.table) collect_vars(body, out);
}

void collect_vars(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  collect_vars(f->pred, out);
  collect_vars(f->expr, out);
  if (f->rel_body) collect_vars(f->rel_body, out);
  if (f->kind == FKind::Rel && f->rel == RelKind::Sb) out.insert(f->var);
  collect_vars(f->lhs, out);
  collect_vars(f->rhs, out);
}

}  // namespace tracelab
