#include "tracelab/print.hpp"

#include <sstream>

namespace tracelab {

namespace {

// AExp precedence: additive 1, multiplicative 2.
int aprec(const AExpPtr& a) {
  switch (a->kind) {
    case AKind::Add:
    case AKind::Sub: return 1;
    case AKind::Mul: return 2;
    default: return 3;
  }
}

void print_aexp(std::ostringstream& os, const AExpPtr& a, int ctx) {
  int p = aprec(a);
  bool paren = p < ctx;
  if (paren) os << "(";
  switch (a->kind) {
    case AKind::Lit: os << a->lit; break;
    case AKind::Var: os << a->var; break;
    case AKind::Add:
      print_aexp(os, a->lhs, 1);
      os << " + ";
      print_aexp(os, a->rhs, 2);
      break;
    case AKind::Sub:
      print_aexp(os, a->lhs, 1);
      os << " - ";
      print_aexp(os, a->rhs, 2);
      break;
    case AKind::Mul:
      print_aexp(os, a->lhs, 2);
      os << " * ";
      print_aexp(os, a->rhs, 3);
      break;
  }
  if (paren) os << ")";
}

const char* cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

// BExp precedence: || 1, && 2, ! 3, atoms 4.
int bprec(const BExpPtr& b) {
  switch (b->kind) {
    case BKind::Or: return 1;
    case BKind::And: return 2;
    case BKind::Not: return 3;
    default: return 4;
  }
}

void print_bexp(std::ostringstream& os, const BExpPtr& b, int ctx) {
  int p = bprec(b);
  bool paren = p < ctx;
  if (paren) os << "(";
  switch (b->kind) {
    case BKind::True: os << "true"; break;
    case BKind::False: os << "false"; break;
    case BKind::Cmp:
      print_aexp(os, b->a1, 1);
      os << " " << cmp_str(b->op) << " ";
      print_aexp(os, b->a2, 1);
      break;
    case BKind::Not:
      os << "!";
      print_bexp(os, b->b1, 4);
      break;
    case BKind::And:
      print_bexp(os, b->b1, 2);
      os << " && ";
      print_bexp(os, b->b2, 3);
      break;
    case BKind::Or:
      print_bexp(os, b->b1, 1);
      os << " || ";
      print_bexp(os, b->b2, 2);
      break;
  }
  if (paren) os << ")";
}

// A statement needs braces when it sits left of `;` and would greedily
// swallow the rest (if / if* / seq).
bool needs_braces_in_seq_head(const StmtPtr& s) {
  return s->kind == SKind::Seq || s->kind == SKind::If || s->kind == SKind::IfStar;
}

void print_stmt(std::ostringstream& os, const StmtPtr& s) {
  switch (s->kind) {
    case SKind::Skip: os << "skip"; break;
    case SKind::Assign:
      os << s->name << " := ";
      print_aexp(os, s->expr, 1);
      break;
    case SKind::Seq:
      if (needs_braces_in_seq_head(s->s1)) {
        os << "{ ";
        print_stmt(os, s->s1);
        os << " }";
      } else {
        print_stmt(os, s->s1);
      }
      os << "; ";
      print_stmt(os, s->s2);
      break;
    case SKind::If:
      os << "if ";
      print_bexp(os, s->guard, 1);
      os << " then ";
      print_stmt(os, s->s1);
      os << " else ";
      print_stmt(os, s->s2);
      break;
    case SKind::IfStar:
      os << "if * then ";
      print_stmt(os, s->s1);
      os << " else ";
      print_stmt(os, s->s2);
      break;
    case SKind::Call:
      if (s->name == kAbortProc) os << "diverge";
      else os << s->name << "()";
      break;
    case SKind::SVar:
      os << "$" << s->name;
      break;
  }
}

// Formula precedence: \/ 1, /\ 2, ^ 3, atoms/mu 4 (mu bodies are always
// parenthesized, so mu itself never needs outer parens).
int fprec(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Chop: return 3;
    default: return 4;
  }
}

void print_formula(std::ostringstream& os, const FormulaPtr& f, int ctx) {
  int p = fprec(f);
  bool paren = p < ctx;
  if (paren) os << "(";
  switch (f->kind) {
    case FKind::StatePred:
      os << "{";
      print_bexp(os, f->pred, 1);
      os << "}";
      break;
    case FKind::Rel:
      switch (f->rel) {
        case RelKind::Id: os << "Id"; break;
        case RelKind::Sb:
          os << "Sb[" << f->var << ":=";
          print_aexp(os, f->expr, 1);
          os << "]";
          break;
        case RelKind::Dec:
          os << "Dec(";
          print_aexp(os, f->expr, 1);
          os << ")";
          break;
        case RelKind::Named:
          os << "[";
          if (!f->rel_name.empty()) os << f->rel_name << ": ";
          print_bexp(os, f->rel_body, 1);
          os << "]";
          break;
      }
      break;
    case FKind::RVar: os << f->name; break;
    case FKind::And:
      print_formula(os, f->lhs, 3);
      os << " /\\ ";
      print_formula(os, f->rhs, 2);
      break;
    case FKind::Or:
      print_formula(os, f->lhs, 2);
      os << " \\/ ";
      print_formula(os, f->rhs, 1);
      break;
    case FKind::Chop:
      print_formula(os, f->lhs, 4);
      os << " ^ ";
      print_formula(os, f->rhs, 3);
      break;
    case FKind::Mu:
      os << "mu " << f->name << ". (";
      print_formula(os, f->lhs, 1);
      os << ")";
      break;
  }
  if (paren) os << ")";
}

}  // namespace

std::string to_string(const AExpPtr& a) {
  std::ostringstream os;
  print_aexp(os, a, 1);
  return os.str();
}

std::string to_string(const BExpPtr& b) {
  std::ostringstream os;
  print_bexp(os, b, 1);
  return os.str();
}

std::string to_string(const StmtPtr& s) {
  std::ostringstream os;
  print_stmt(os, s);
  return os.str();
}

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula(os, f, 1);
  return os.str();
}

std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const auto& [name, body] : p.table) {
    if (name == kAbortProc) continue;  // implicit, re-created on parse
    os << "proc " << name << " { ";
    print_stmt(os, body);
    os << " }\n";
  }
  os << "main { ";
  print_stmt(os, p.main);
  os << " }\n";
  return os.str();
}

}  // namespace tracelab
