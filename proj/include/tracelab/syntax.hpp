#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tracelab {

using Int = std::int64_t;

// ---------------------------------------------------------------------------
// Arithmetic expressions
// ---------------------------------------------------------------------------

enum class AKind { Lit, Var, Add, Sub, Mul };

struct AExp;
using AExpPtr = std::shared_ptr<const AExp>;

struct AExp {
  AKind kind;
  Int lit = 0;         // Lit
  std::string var;     // Var
  AExpPtr lhs, rhs;    // binary

  static AExpPtr lit_(Int v);
  static AExpPtr var_(std::string name);
  static AExpPtr add(AExpPtr a, AExpPtr b);
  static AExpPtr sub(AExpPtr a, AExpPtr b);
  static AExpPtr mul(AExpPtr a, AExpPtr b);
};

bool equal(const AExpPtr& a, const AExpPtr& b);

// ---------------------------------------------------------------------------
// Boolean expressions
// ---------------------------------------------------------------------------

enum class BKind { True, False, Cmp, And, Or, Not };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BExp;
using BExpPtr = std::shared_ptr<const BExp>;

struct BExp {
  BKind kind;
  CmpOp op = CmpOp::Eq;  // Cmp
  AExpPtr a1, a2;        // Cmp
  BExpPtr b1, b2;        // And/Or; Not uses b1

  static BExpPtr tru();
  static BExpPtr fls();
  static BExpPtr cmp(CmpOp op, AExpPtr a, AExpPtr b);
  static BExpPtr band(BExpPtr a, BExpPtr b);
  static BExpPtr bor(BExpPtr a, BExpPtr b);
  static BExpPtr bnot(BExpPtr a);
};

bool equal(const BExpPtr& a, const BExpPtr& b);

// Negation pushed into comparisons and connectives, so negated guards print
// the way one writes them by hand (!(x > 0) becomes x <= 0).
BExpPtr negate_bexp(const BExpPtr& b);

// ---------------------------------------------------------------------------
// Statements and programs
// ---------------------------------------------------------------------------

enum class SKind { Skip, Assign, Seq, If, IfStar, Call, SVar };

struct Statement;
using StmtPtr = std::shared_ptr<const Statement>;

struct Statement {
  SKind kind;
  std::string name;  // Assign target / Call proc / SVar name
  AExpPtr expr;      // Assign rhs
  BExpPtr guard;     // If
  StmtPtr s1, s2;    // Seq / If / IfStar

  static StmtPtr skip();
  static StmtPtr assign(std::string var, AExpPtr e);
  static StmtPtr seq(StmtPtr a, StmtPtr b);
  static StmtPtr if_(BExpPtr b, StmtPtr then_, StmtPtr else_);
  static StmtPtr if_star(StmtPtr a, StmtPtr b);
  static StmtPtr call(std::string proc);
  static StmtPtr svar(std::string name);
};

bool equal(const StmtPtr& a, const StmtPtr& b);

using ProcTable = std::vector<std::pair<std::string, StmtPtr>>;

struct Program {
  StmtPtr main;
  ProcTable table;
};

// Procedure name reserved for the diverge encoding.
inline const std::string kAbortProc = "abort";

const StmtPtr* lookup_proc(const ProcTable& table, const std::string& name);

// Empty result means well-formed; otherwise a description of the violation
// (duplicate declaration or undeclared call).
std::optional<std::string> well_formedness_error(const Program& p);

bool contains_svar(const StmtPtr& s);

// Replaces calls per the Call proof rule: every call to a procedure in the
// map becomes `skip; $Y` for the mapped statement variable.
StmtPtr subst_calls(const StmtPtr& s, const std::map<std::string, std::string>& proc_to_svar);

// ---------------------------------------------------------------------------
// Trace formulas
// ---------------------------------------------------------------------------

enum class FKind { StatePred, Rel, RVar, And, Or, Chop, Mu };
enum class RelKind { Id, Sb, Dec, Named };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  BExpPtr pred;         // StatePred
  RelKind rel = RelKind::Id;
  std::string var;      // Sb target
  AExpPtr expr;         // Sb rhs / Dec argument
  std::string rel_name; // Named label (may be empty)
  BExpPtr rel_body;     // Named body over unprimed and primed variables
  std::string name;     // RVar / Mu binder
  FormulaPtr lhs, rhs;  // And/Or/Chop; Mu body in lhs

  static FormulaPtr state_pred(BExpPtr b);
  static FormulaPtr rel_id();
  static FormulaPtr rel_sb(std::string var, AExpPtr e);
  static FormulaPtr rel_dec(AExpPtr e);
  static FormulaPtr rel_named(std::string label, BExpPtr body);
  static FormulaPtr rvar(std::string name);
  static FormulaPtr and_(FormulaPtr a, FormulaPtr b);
  static FormulaPtr or_(FormulaPtr a, FormulaPtr b);
  static FormulaPtr chop(FormulaPtr a, FormulaPtr b);
  static FormulaPtr mu(std::string name, FormulaPtr body);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> free_rvars(const FormulaPtr& f);
inline bool closed(const FormulaPtr& f) { return free_rvars(f).empty(); }

// Capture-avoiding substitution of a formula for a free recursion variable.
FormulaPtr subst_rvar(const FormulaPtr& f, const std::string& name, const FormulaPtr& g);

// phi must be a Mu node; returns body[phi/X].
FormulaPtr unfold(const FormulaPtr& phi);

// Alpha-renames every binder to a globally fresh X1, X2, ... in traversal
// order. Deterministic, hence idempotent on its own output.
FormulaPtr rename_recursion_vars(const FormulaPtr& f);

// Drops mu binders whose variable does not occur free in the body.
FormulaPtr drop_unused_binders(const FormulaPtr& f);

struct RestrictedCheck {
  bool ok = true;
  FormulaPtr offending;  // first node outside the reduced grammar
};

// The reduced grammar: Id | Sb | X | p /\ phi | phi \/ psi | phi ^ psi | mu X. phi
RestrictedCheck check_restricted(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Variable collection
// ---------------------------------------------------------------------------

void collect_vars(const AExpPtr& a, std::set<std::string>& out);
void collect_vars(const BExpPtr& b, std::set<std::string>& out);
void collect_vars(const StmtPtr& s, std::set<std::string>& out);
void collect_vars(const Program& p, std::set<std::string>& out);
void collect_vars(const FormulaPtr& f, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(std::string msg, int line_, int col_)
      : std::runtime_error(std::move(msg)), line(line_), col(col_) {}
};

struct WellFormedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tracelab
