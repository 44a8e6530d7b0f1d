#include "tracelab/trace.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace tracelab {

std::shared_ptr<const VarOrder> VarOrder::make(const std::set<std::string>& names) {
  auto o = std::make_shared<VarOrder>();
  o->names_.assign(names.begin(), names.end());
  return o;
}

int VarOrder::index(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

State::State(VarOrderPtr order, std::vector<Int> vals)
    : order_(std::move(order)), vals_(std::move(vals)) {
  if (vals_.size() != order_->size()) throw EvalError("state/order size mismatch");
}

State State::zero(VarOrderPtr order) {
  std::vector<Int> v(order->size(), 0);
  return State(std::move(order), std::move(v));
}

Int State::get(const std::string& var) const {
  int i = order_ ? order_->index(var) : -1;
  if (i < 0) throw EvalError("unknown variable: " + var);
  return vals_[static_cast<size_t>(i)];
}

State State::with(const std::string& var, Int v) const {
  int i = order_ ? order_->index(var) : -1;
  if (i < 0) throw EvalError("unknown variable: " + var);
  State s = *this;
  s.vals_[static_cast<size_t>(i)] = v;
  return s;
}

std::string State::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < vals_.size(); ++i) {
    if (i) os << ",";
    os << order_->names()[i] << "=" << vals_[i];
  }
  os << "}";
  return os.str();
}

Int eval_aexp(const AExpPtr& a, const State& s) {
  switch (a->kind) {
    case AKind::Lit: return a->lit;
    case AKind::Var: return s.get(a->var);
    case AKind::Add: return eval_aexp(a->lhs, s) + eval_aexp(a->rhs, s);
    case AKind::Sub: return eval_aexp(a->lhs, s) - eval_aexp(a->rhs, s);
    case AKind::Mul: return eval_aexp(a->lhs, s) * eval_aexp(a->rhs, s);
  }
  throw EvalError("bad arithmetic expression");
}

static bool cmp_eval(CmpOp op, Int a, Int b) {
  switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
  }
  return false;
}

bool eval_bexp(const BExpPtr& b, const State& s) {
  switch (b->kind) {
    case BKind::True: return true;
    case BKind::False: return false;
    case BKind::Cmp: return cmp_eval(b->op, eval_aexp(b->a1, s), eval_aexp(b->a2, s));
    case BKind::And: return eval_bexp(b->b1, s) && eval_bexp(b->b2, s);
    case BKind::Or: return eval_bexp(b->b1, s) || eval_bexp(b->b2, s);
    case BKind::Not: return !eval_bexp(b->b1, s);
  }
  return false;
}

static Int eval_aexp_pair(const AExpPtr& a, const State& s, const State& s2) {
  switch (a->kind) {
    case AKind::Lit: return a->lit;
    case AKind::Var:
      if (!a->var.empty() && a->var.back() == '\'')
        return s2.get(a->var.substr(0, a->var.size() - 1));
      return s.get(a->var);
    case AKind::Add: return eval_aexp_pair(a->lhs, s, s2) + eval_aexp_pair(a->rhs, s, s2);
    case AKind::Sub: return eval_aexp_pair(a->lhs, s, s2) - eval_aexp_pair(a->rhs, s, s2);
    case AKind::Mul: return eval_aexp_pair(a->lhs, s, s2) * eval_aexp_pair(a->rhs, s, s2);
  }
  throw EvalError("bad arithmetic expression");
}

bool eval_bexp_pair(const BExpPtr& b, const State& s, const State& s2) {
  switch (b->kind) {
    case BKind::True: return true;
    case BKind::False: return false;
    case BKind::Cmp:
      return cmp_eval(b->op, eval_aexp_pair(b->a1, s, s2), eval_aexp_pair(b->a2, s, s2));
    case BKind::And: return eval_bexp_pair(b->b1, s, s2) && eval_bexp_pair(b->b2, s, s2);
    case BKind::Or: return eval_bexp_pair(b->b1, s, s2) || eval_bexp_pair(b->b2, s, s2);
    case BKind::Not: return !eval_bexp_pair(b->b1, s, s2);
  }
  return false;
}

TraceSet chop_sets(const TraceSet& a, const TraceSet& b) {
  // group b by first state so each a-trace only meets matching junctions
  std::map<State, std::vector<const Trace*>> by_first;
  for (const auto& t : b) by_first[t.front()].push_back(&t);
  TraceSet out;
  for (const auto& ta : a) {
    auto it = by_first.find(ta.back());
    if (it == by_first.end()) continue;
    for (const Trace* tb : it->second) {
      Trace joined = ta;
      joined.insert(joined.end(), tb->begin() + 1, tb->end());
      out.insert(std::move(joined));
    }
  }
  return out;
}

TraceSet restrict_set(const TraceSet& a, const BExpPtr& b) {
  TraceSet out;
  for (const auto& t : a)
    if (eval_bexp(b, t.front())) out.insert(t);
  return out;
}

TraceSet sharp(const TraceSet& a) {
  TraceSet out;
  for (const auto& t : a) {
    Trace d;
    d.reserve(t.size() + 1);
    d.push_back(t.front());
    d.insert(d.end(), t.begin(), t.end());
    out.insert(std::move(d));
  }
  return out;
}

Trace stutter_normalize(const Trace& t) {
  Trace out;
  for (const auto& s : t)
    if (out.empty() || !(out.back() == s)) out.push_back(s);
  return out;
}

TraceSet stutter_normalize(const TraceSet& a) {
  TraceSet out;
  for (const auto& t : a) out.insert(stutter_normalize(t));
  return out;
}

std::string to_string(const Trace& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) os << "->";
    os << t[i].str();
  }
  return os.str();
}

std::string dump(const TraceSet& a) {
  std::ostringstream os;
  for (const auto& t : a) os << to_string(t) << "\n";
  return os.str();
}

}  // namespace tracelab
