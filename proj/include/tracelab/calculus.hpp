#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracelab/eval.hpp"
#include "tracelab/trace.hpp"

namespace tracelab {

// Judgment S : phi — every trace of S satisfies phi. Antecedent judgments
// bind statement variables to their assumed contracts.
struct Judgment {
  StmtPtr subject;
  FormulaPtr spec;
};

struct Sequent {
  std::vector<Judgment> antecedent;  // subjects are statement variables
  Judgment succedent;
};

enum class Rule { Skip, Assign, Seq, If, IfStar, Unfold, Cons, Call, Axiom, OrIntro, While };

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

// Bounded entailment evidence for a Cons step. Acceptance means: every
// enumerated trace of lhs satisfies rhs over the recorded bounds — evidence,
// not an unbounded proof.
struct OracleCertificate {
  FormulaPtr lhs, rhs;
  Bounds bounds;
  bool accepted = false;
  std::optional<Trace> witness;
};

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

struct ProofTree {
  Sequent conclusion;
  Rule rule;
  std::vector<ProofPtr> premises;
  std::string proc;                       // Call / While
  std::optional<OracleCertificate> cert;  // Cons
};

struct CheckResult {
  bool accepted = false;
  std::string diagnosis;  // empty when accepted
};

// Rule-by-rule verification. Every node must be a correct instance of its
// rule over the given table; Cons certificates are re-run at their recorded
// bounds.
CheckResult check_proof(const ProofPtr& t, const ProcTable& table);

// lhs must be enumerable (reduced grammar); rhs may use the full grammar.
OracleCertificate entails_bounded(const FormulaPtr& lhs, const FormulaPtr& rhs,
                                  const Bounds& bounds);

struct Verdict {
  bool accepted = false;
  std::optional<Trace> witness;
};

// Bounded judgment validity: every trace of S over bounds satisfies phi.
Verdict valid_judgment_bounded(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                               const Bounds& bounds);

// Constructive proof of S : stf(S). One Call per procedure, one Unfold per
// Call; the only Cons nodes adjust If-branch formulas, with certificates
// discharged over the given bounds. Throws EvalError if a certificate is
// refuted (bounds too small).
ProofPtr prove_stf(const StmtPtr& s, const ProcTable& table, const Bounds& bounds);

// Proof of S : phi as Cons over prove_stf with certificate stf(S) |= phi.
// The certificate may be refuted; the tree is returned either way.
ProofPtr prove_via_cons(const StmtPtr& s, const ProcTable& table, const FormulaPtr& phi,
                        const Bounds& bounds);

std::size_t count_rule(const ProofPtr& t, Rule r);

}  // namespace tracelab
