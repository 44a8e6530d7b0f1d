#include "tracelab/eval.hpp"

#include <algorithm>
#include <cstdint>

#include "tracelab/print.hpp"

namespace tracelab {

namespace {

using StateSet = std::set<State>;

// per-state budget requests; merging keeps the largest budget seen
using ReqMap = std::map<State, int>;

bool merge_request(ReqMap& req, const State& s, int budget) {
  auto [it, inserted] = req.try_emplace(s, budget);
  if (!inserted && it->second >= budget) return false;
  it->second = budget;
  return true;
}

TraceSet filter(const TraceSet& a, const StateSet& init, int budget) {
  TraceSet out;
  for (const auto& t : a)
    if (static_cast<int>(t.size()) <= budget && init.count(t.front())) out.insert(t);
  return out;
}

int min_len(const TraceSet& a) {
  int m = INT32_MAX;
  for (const auto& t : a) m = std::min<int>(m, static_cast<int>(t.size()));
  return m;
}

StateSet last_states(const TraceSet& a) {
  StateSet out;
  for (const auto& t : a) out.insert(t.back());
  return out;
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

class StmEvaluator {
 public:
  StmEvaluator(const ProcTable& table, int max_len, const SvarInterp& svars, EvalTrace* tr)
      : table_(table), max_len_(max_len), svars_(svars), trace_(tr) {}

  TraceSet run(const StmtPtr& s, const StateSet& init) {
    for (const auto& [name, body] : table_) env_[name];
    TraceSet result;
    while (true) {
      new_request_ = false;
      result = eval(s, init, max_len_);
      std::map<std::string, TraceSet> next;
      for (const auto& [name, body] : table_) {
        ReqMap reqs = requests_[name];  // snapshot; recording continues live
        TraceSet acc;
        for (const auto& [entry, budget] : reqs) {
          TraceSet body_traces = eval(body, {entry}, budget - 1);
          for (auto& t : sharp(body_traces)) acc.insert(t);
        }
        next[name] = std::move(acc);
      }
      bool changed = next != env_;
      env_ = std::move(next);
      if (trace_) trace_->proc_chain.push_back(env_);
      if (!changed && !new_request_) break;
    }
    return result;
  }

 private:
  const ProcTable& table_;
  int max_len_;
  const SvarInterp& svars_;
  EvalTrace* trace_;
  std::map<std::string, TraceSet> env_;
  std::map<std::string, ReqMap> requests_;
  bool new_request_ = false;

  TraceSet eval(const StmtPtr& s, const StateSet& init, int budget) {
    if (init.empty() || budget < 1) return {};
    // only statement-variable interpretations may hold single-state traces
    if (budget < 2 && s->kind != SKind::SVar) return {};
    switch (s->kind) {
      case SKind::Skip: {
        TraceSet out;
        for (const auto& st : init) out.insert({st, st});
        return out;
      }
      case SKind::Assign: {
        TraceSet out;
        for (const auto& st : init)
          out.insert({st, st.with(s->name, eval_aexp(s->expr, st))});
        return out;
      }
      case SKind::Seq: {
        // every statement denotes traces of >= 2 states, except statement
        // variables whose interpretation may hold single-state traces
        int reserve = contains_svar(s->s2) ? 0 : 1;
        TraceSet a = eval(s->s1, init, budget - reserve);
        if (a.empty()) return {};
        StateSet junction = last_states(a);
        TraceSet b = eval(s->s2, junction, budget - (min_len(a) - 1));
        TraceSet joined = chop_sets(a, b);
        TraceSet out;
        for (auto& t : joined)
          if (static_cast<int>(t.size()) <= budget) out.insert(t);
        return out;
      }
      case SKind::If: {
        StateSet then_init, else_init;
        for (const auto& st : init)
          (eval_bexp(s->guard, st) ? then_init : else_init).insert(st);
        TraceSet out = sharp(eval(s->s1, then_init, budget - 1));
        for (auto& t : sharp(eval(s->s2, else_init, budget - 1))) out.insert(t);
        return out;
      }
      case SKind::IfStar: {
        TraceSet out = sharp(eval(s->s1, init, budget - 1));
        for (auto& t : sharp(eval(s->s2, init, budget - 1))) out.insert(t);
        return out;
      }
      case SKind::Call: {
        if (!lookup_proc(table_, s->name))
          throw EvalError("call to undeclared procedure: " + s->name);
        ReqMap& req = requests_[s->name];
        for (const auto& st : init)
          if (merge_request(req, st, budget)) new_request_ = true;
        return filter(env_[s->name], init, budget);
      }
      case SKind::SVar: {
        auto it = svars_.find(s->name);
        if (it == svars_.end())
          throw EvalError("unbound statement variable: " + s->name);
        return filter(it->second, init, budget);
      }
    }
    return {};
  }
};

// ---------------------------------------------------------------------------
// Formulas (bounded enumeration, reduced grammar)
// ---------------------------------------------------------------------------

class FormulaEnumerator {
 public:
  FormulaEnumerator(int max_len, EvalTrace* tr) : max_len_(max_len), trace_(tr) {}

  TraceSet run(const FormulaPtr& f, const StateSet& init) {
    return eval(f, init, max_len_);
  }

 private:
  struct MuState {
    ReqMap requests;
    TraceSet gamma;
    bool new_request = false;
  };

  int max_len_;
  EvalTrace* trace_;
  std::map<std::string, std::vector<MuState*>> scopes_;

  [[noreturn]] static void reject(const FormulaPtr& f) {
    throw EvalError("formula is not enumerable here: " + to_string(f));
  }

  TraceSet eval(const FormulaPtr& f, const StateSet& init, int budget) {
    if (budget < 2 || init.empty()) return {};
    switch (f->kind) {
      case FKind::Rel:
        if (f->rel == RelKind::Id) {
          TraceSet out;
          for (const auto& st : init) out.insert({st, st});
          return out;
        }
        if (f->rel == RelKind::Sb) {
          TraceSet out;
          for (const auto& st : init)
            out.insert({st, st.with(f->var, eval_aexp(f->expr, st))});
          return out;
        }
        reject(f);  // Dec / named relations have unbounded denotations
      case FKind::And:
        if (f->lhs->kind != FKind::StatePred) reject(f);
        {
          StateSet pass;
          for (const auto& st : init)
            if (eval_bexp(f->lhs->pred, st)) pass.insert(st);
          return eval(f->rhs, pass, budget);
        }
      case FKind::Or: {
        TraceSet out = eval(f->lhs, init, budget);
        for (auto& t : eval(f->rhs, init, budget)) out.insert(t);
        return out;
      }
      case FKind::Chop: {
        TraceSet a = eval(f->lhs, init, budget - 1);
        if (a.empty()) return {};
        TraceSet b = eval(f->rhs, last_states(a), budget - (min_len(a) - 1));
        TraceSet out;
        for (auto& t : chop_sets(a, b))
          if (static_cast<int>(t.size()) <= budget) out.insert(t);
        return out;
      }
      case FKind::Mu: {
        MuState mu;
        scopes_[f->name].push_back(&mu);
        size_t chain_index = 0;
        if (trace_) {
          trace_->mu_chains.emplace_back();
          chain_index = trace_->mu_chains.size() - 1;
        }
        while (true) {
          mu.new_request = false;
          TraceSet next = eval(f->lhs, init, budget);
          ReqMap reqs = mu.requests;  // snapshot
          for (const auto& [entry, b] : reqs)
            for (auto& t : eval(f->lhs, {entry}, b)) next.insert(t);
          bool changed = next != mu.gamma || mu.new_request;
          mu.gamma = std::move(next);
          if (trace_) trace_->mu_chains[chain_index].push_back(mu.gamma);
          if (!changed) break;
        }
        scopes_[f->name].pop_back();
        return filter(mu.gamma, init, budget);
      }
      case FKind::RVar: {
        auto it = scopes_.find(f->name);
        if (it == scopes_.end() || it->second.empty())
          throw EvalError("unbound recursion variable: " + f->name);
        MuState* mu = it->second.back();
        for (const auto& st : init)
          if (merge_request(mu->requests, st, budget)) mu->new_request = true;
        return filter(mu->gamma, init, budget);
      }
      case FKind::StatePred:
        reject(f);  // bare state predicates denote State+ restricted: unbounded
    }
    return {};
  }
};

// ---------------------------------------------------------------------------
// Membership (interval labelling)
// ---------------------------------------------------------------------------

// Set of intervals [i..j] (0 <= i <= j < n) of one trace, as a flat bitset.
class IntervalSet {
 public:
  explicit IntervalSet(int n) : n_(n), bits_((static_cast<size_t>(n) * n + 63) / 64, 0) {}

  void add(int i, int j) { bits_[idx(i, j) >> 6] |= 1ull << (idx(i, j) & 63); }
  bool has(int i, int j) const { return bits_[idx(i, j) >> 6] & (1ull << (idx(i, j) & 63)); }

  IntervalSet& operator|=(const IntervalSet& o) {
    for (size_t k = 0; k < bits_.size(); ++k) bits_[k] |= o.bits_[k];
    return *this;
  }
  IntervalSet& operator&=(const IntervalSet& o) {
    for (size_t k = 0; k < bits_.size(); ++k) bits_[k] &= o.bits_[k];
    return *this;
  }
  bool operator==(const IntervalSet& o) const { return bits_ == o.bits_; }

  // { (i,j) | exists k in [i..j]: (i,k) in this and (k,j) in o }
  IntervalSet chop(const IntervalSet& o, int n) const {
    IntervalSet out(n);
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k)
        if (has(i, k))
          for (int j = k; j < n; ++j)
            if (o.has(k, j)) out.add(i, j);
    return out;
  }

 private:
  int n_;
  std::vector<std::uint64_t> bits_;
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }
};

class Labeller {
 public:
  explicit Labeller(const Trace& t) : t_(t), n_(static_cast<int>(t.size())) {}

  bool check(const FormulaPtr& f) {
    IntervalSet s = eval(f);
    return s.has(0, n_ - 1);
  }

 private:
  const Trace& t_;
  int n_;
  std::map<std::string, std::vector<const IntervalSet*>> scopes_;

  IntervalSet eval(const FormulaPtr& f) {
    IntervalSet out(n_);
    switch (f->kind) {
      case FKind::StatePred:
        for (int i = 0; i < n_; ++i)
          if (eval_bexp(f->pred, t_[i]))
            for (int j = i; j < n_; ++j) out.add(i, j);
        return out;
      case FKind::Rel:
        for (int i = 0; i + 1 < n_; ++i) {
          bool holds = false;
          switch (f->rel) {
            case RelKind::Id: holds = t_[i] == t_[i + 1]; break;
            case RelKind::Sb:
              holds = t_[i + 1] == t_[i].with(f->var, eval_aexp(f->expr, t_[i]));
              break;
            case RelKind::Dec:
              holds = eval_aexp(f->expr, t_[i + 1]) <= eval_aexp(f->expr, t_[i]);
              break;
            case RelKind::Named:
              holds = eval_bexp_pair(f->rel_body, t_[i], t_[i + 1]);
              break;
          }
          if (holds) out.add(i, i + 1);
        }
        return out;
      case FKind::And: {
        out = eval(f->lhs);
        out &= eval(f->rhs);
        return out;
      }
      case FKind::Or: {
        out = eval(f->lhs);
        out |= eval(f->rhs);
        return out;
      }
      case FKind::Chop:
        return eval(f->lhs).chop(eval(f->rhs), n_);
      case FKind::Mu: {
        IntervalSet gamma(n_);
        scopes_[f->name].push_back(&gamma);
        while (true) {
          IntervalSet next = eval(f->lhs);
          if (next == gamma) break;
          gamma = next;
        }
        scopes_[f->name].pop_back();
        return gamma;
      }
      case FKind::RVar: {
        auto it = scopes_.find(f->name);
        if (it == scopes_.end() || it->second.empty())
          throw EvalError("unbound recursion variable: " + f->name);
        return *it->second.back();
      }
    }
    return out;
  }
};

}  // namespace

TraceSet eval_stm(const StmtPtr& s, const ProcTable& table, const Bounds& bounds,
                  const SvarInterp& svars, EvalTrace* trace) {
  StmEvaluator ev(table, bounds.max_len, svars, trace);
  StateSet init(bounds.initial_states.begin(), bounds.initial_states.end());
  return ev.run(s, init);
}

TraceSet eval_formula_enum(const FormulaPtr& f, const Bounds& bounds, EvalTrace* trace) {
  auto r = check_restricted(f);
  if (!r.ok)
    throw EvalError("formula is outside the enumerable fragment at: " + to_string(r.offending));
  if (!closed(f)) throw EvalError("formula has unbound recursion variables");
  FormulaEnumerator en(bounds.max_len, trace);
  StateSet init(bounds.initial_states.begin(), bounds.initial_states.end());
  return en.run(f, init);
}

bool models(const Trace& t, const FormulaPtr& f) {
  if (t.empty()) throw EvalError("traces are non-empty");
  if (!closed(f)) throw EvalError("formula has unbound recursion variables");
  Labeller lab(t);
  return lab.check(f);
}

}  // namespace tracelab
