#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"
#include "tracelab/proof_json.hpp"

using namespace tracelab;

namespace {
const auto kX = tt::order({"x"});
const auto kXY = tt::order({"x", "y"});

Trace xs(std::vector<Int> vals) {
  std::vector<std::vector<Int>> rows;
  for (Int v : vals) rows.push_back({v});
  return tt::tr(kX, rows);
}

ProofPtr leaf(Rule r, Sequent s) {
  auto n = std::make_shared<ProofTree>();
  n->rule = r;
  n->conclusion = std::move(s);
  return n;
}
}  // namespace

TEST_CASE("the axiomatic rules") {
  ProofPtr ok = leaf(Rule::Skip, {{}, {Statement::skip(), Formula::rel_id()}});
  CHECK(check_proof(ok, {}).accepted);

  ProofPtr bad = leaf(Rule::Skip, {{}, {Statement::skip(), parse_formula("Sb[x:=x]")}});
  CHECK_FALSE(check_proof(bad, {}).accepted);

  ProofPtr assign = leaf(
      Rule::Assign, {{}, {parse_statement("x := x + 1"), parse_formula("Sb[x:=x+1]")}});
  CHECK(check_proof(assign, {}).accepted);
  ProofPtr assign_wrong = leaf(
      Rule::Assign, {{}, {parse_statement("x := x + 1"), parse_formula("Sb[x:=x+2]")}});
  CHECK_FALSE(check_proof(assign_wrong, {}).accepted);

  Judgment assumed{Statement::svar("Y_m"), parse_formula("Id")};
  ProofPtr ax = leaf(Rule::Axiom, {{assumed}, assumed});
  CHECK(check_proof(ax, {}).accepted);
  ProofPtr ax_missing = leaf(Rule::Axiom, {{}, assumed});
  CHECK_FALSE(check_proof(ax_missing, {}).accepted);
}

TEST_CASE("bounded entailment oracle") {
  FormulaPtr f = parse_formula(tt::kCountFormula);
  Bounds b = tt::grid(tt::order({"y"}), {{0, 0}}, 6);
  CHECK(entails_bounded(f, f, b).accepted);

  OracleCertificate cert = entails_bounded(parse_formula("mu X. (Id \\/ Sb[y:=y+1] ^ X)"),
                                           parse_formula("Id"), b);
  CHECK_FALSE(cert.accepted);
  REQUIRE(cert.witness);
  CHECK(cert.witness->size() == 3);

  // the left side must be enumerable
  CHECK_THROWS_AS(entails_bounded(parse_formula("Dec(x)"), parse_formula("Id"), b), EvalError);
}

TEST_CASE("countdown entails the decrease closure") {
  Program down = parse_program(tt::kDown);
  FormulaPtr lhs = strongest_trace_formula(down.main, down.table);
  FormulaPtr rhs = parse_formula("Id ^ mu D. (Dec(x) \\/ Dec(x) ^ D)");
  Bounds b = tt::grid(kX, {{0, 10}}, 40);
  CHECK(entails_bounded(lhs, rhs, b).accepted);
  OracleCertificate refuted = entails_bounded(lhs, parse_formula("Id"), b);
  CHECK_FALSE(refuted.accepted);
  CHECK(refuted.witness.has_value());
}

TEST_CASE("bounded judgment validity") {
  Program skip = parse_program("main { skip }");
  Bounds b{{State::zero(kX)}, 8};
  CHECK(valid_judgment_bounded(skip.main, skip.table, parse_formula("Id"), b).accepted);

  Program one = parse_program("main { x := 1 }");
  Verdict v = valid_judgment_bounded(one.main, one.table, parse_formula("Sb[x:=2]"), b);
  CHECK_FALSE(v.accepted);
  REQUIRE(v.witness);
  CHECK(*v.witness == xs({0, 1}));

  CHECK_THROWS_AS(
      valid_judgment_bounded(Statement::svar("Y"), {}, parse_formula("Id"), b), EvalError);
}

TEST_CASE("canonical proofs for the corpus are accepted and valid") {
  for (const char* src : {tt::kSkipDec, tt::kEvenOdd, tt::kDown, tt::kAssignDown, tt::kIfStar1,
                          tt::kIfStar2, tt::kWhile}) {
    Program p = parse_program(src);
    Bounds b = tt::grid(kXY, {{0, 4}, {0, 0}}, 40);
    ProofPtr proof = prove_stf(p.main, p.table, b);
    CheckResult r = check_proof(proof, p.table);
    INFO(src, " -> ", r.diagnosis);
    CHECK(r.accepted);
    CHECK(proof->conclusion.antecedent.empty());
    CHECK(equal(proof->conclusion.succedent.subject, p.main));
    CHECK(equal(proof->conclusion.succedent.spec,
                strongest_trace_formula(p.main, p.table)));
    Verdict v = valid_judgment_bounded(p.main, p.table, proof->conclusion.succedent.spec, b);
    CHECK(v.accepted);
  }
}

TEST_CASE("the smallest canonical proof is a single axiomatic node") {
  Program p = parse_program("main { skip }");
  Bounds b{{State::zero(kX)}, 8};
  ProofPtr proof = prove_stf(p.main, p.table, b);
  CHECK(proof->rule == Rule::Skip);
  CHECK(proof->premises.empty());
  CHECK(check_proof(proof, p.table).accepted);
}

TEST_CASE("one call application per procedure") {
  Program even = parse_program(tt::kEvenOdd);
  Bounds b = tt::grid(kXY, {{0, 4}, {0, 0}}, 40);
  ProofPtr proof = prove_stf(even.main, even.table, b);
  CHECK(count_rule(proof, Rule::Call) == 2);
  CHECK(count_rule(proof, Rule::Unfold) == 2);
  CHECK(count_rule(proof, Rule::Axiom) == 1);  // the recursive even() call

  Program down = parse_program(tt::kDown);
  ProofPtr dproof = prove_stf(down.main, down.table, tt::grid(kX, {{0, 4}}, 30));
  CHECK(count_rule(dproof, Rule::Call) == 1);
  CHECK(count_rule(dproof, Rule::Unfold) == 1);
}

TEST_CASE("call side condition rejects a second application") {
  Program down = parse_program(tt::kDown);
  Bounds b = tt::grid(kX, {{0, 2}}, 20);
  ProofPtr proof = prove_stf(down.main, down.table, b);
  // re-rooting the call under an antecedent that already assumes it
  auto cheat = std::make_shared<ProofTree>(*proof);
  FormulaPtr phi = proof->conclusion.succedent.spec->rhs;
  cheat->conclusion.antecedent.push_back({Statement::svar("Y_down"), phi});
  CheckResult r = check_proof(cheat, down.table);
  CHECK_FALSE(r.accepted);
  CHECK(r.diagnosis.find("already assumed") != std::string::npos);
}

TEST_CASE("consequence steps carry replayable certificates") {
  Program down = parse_program(tt::kDown);
  Bounds b = tt::grid(kX, {{0, 6}}, 30);
  FormulaPtr goal = parse_formula("Id ^ mu D. (Dec(x) \\/ Dec(x) ^ D)");
  ProofPtr proof = prove_via_cons(down.main, down.table, goal, b);
  CHECK(proof->rule == Rule::Cons);
  CHECK(check_proof(proof, down.table).accepted);

  // tampering with the certificate claim is caught
  auto tampered = std::make_shared<ProofTree>(*proof);
  auto cert = *tampered->cert;
  cert.rhs = parse_formula("Id");
  tampered->cert = cert;
  CHECK_FALSE(check_proof(tampered, down.table).accepted);
}

TEST_CASE("a refuted certificate is rejected on replay") {
  Program one = parse_program("main { x := 1 }");
  Bounds b{{State::zero(kX)}, 8};
  ProofPtr proof = prove_via_cons(one.main, one.table, parse_formula("Sb[x:=2]"), b);
  REQUIRE(proof->cert);
  CHECK_FALSE(proof->cert->accepted);
  CHECK_FALSE(check_proof(proof, one.table).accepted);
}

TEST_CASE("loop programs can be proved through the derived rule") {
  Program p = parse_program(tt::kWhile);  // while x > 0 do x := x - 1
  const std::string proc = p.table[0].first;
  BExpPtr guard = parse_bexp("x > 0");
  FormulaPtr phi = parse_formula(
      "mu X_w. ({x > 0} /\\ Id ^ Sb[x:=x - 1] ^ Id ^ X_w \\/ {x <= 0} /\\ Id ^ Id)");
  Bounds b = tt::grid(kX, {{0, 5}}, 30);

  Judgment assume{Statement::svar("Y_" + proc), phi};

  // exit premise: skip;skip : b \/ phi
  StmtPtr two_skips = Statement::seq(Statement::skip(), Statement::skip());
  FormulaPtr exit_goal = Formula::or_(Formula::state_pred(guard), phi);
  ProofPtr exit_inner = std::make_shared<ProofTree>(ProofTree{
      {{}, {two_skips, parse_formula("Id ^ Id")}},
      Rule::Seq,
      {leaf(Rule::Skip, {{}, {Statement::skip(), Formula::rel_id()}}),
       leaf(Rule::Skip, {{}, {Statement::skip(), Formula::rel_id()}})},
      "",
      std::nullopt});
  OracleCertificate exit_cert = entails_bounded(parse_formula("Id ^ Id"), exit_goal, b);
  REQUIRE(exit_cert.accepted);
  ProofPtr exit_premise = std::make_shared<ProofTree>(
      ProofTree{{{}, {two_skips, exit_goal}}, Rule::Cons, {exit_inner}, "", exit_cert});

  // step premise: skip; x := x - 1; skip; Y : !b \/ phi
  StmtPtr step_subject = parse_statement("skip; x := x - 1; skip; $Y_" + proc, true);
  FormulaPtr step_mid = Formula::chop(
      Formula::rel_id(),
      Formula::chop(parse_formula("Sb[x:=x - 1]"), Formula::chop(Formula::rel_id(), phi)));
  std::vector<Judgment> ctx{assume};
  ProofPtr y_axiom = leaf(Rule::Axiom, {ctx, {Statement::svar("Y_" + proc), phi}});
  ProofPtr skip_y = std::make_shared<ProofTree>(ProofTree{
      {ctx,
       {parse_statement("skip; $Y_" + proc, true), Formula::chop(Formula::rel_id(), phi)}},
      Rule::Seq,
      {leaf(Rule::Skip, {ctx, {Statement::skip(), Formula::rel_id()}}), y_axiom},
      "",
      std::nullopt});
  ProofPtr assign_tail = std::make_shared<ProofTree>(ProofTree{
      {ctx,
       {parse_statement("x := x - 1; skip; $Y_" + proc, true),
        Formula::chop(parse_formula("Sb[x:=x - 1]"), Formula::chop(Formula::rel_id(), phi))}},
      Rule::Seq,
      {leaf(Rule::Assign, {ctx, {parse_statement("x := x - 1"), parse_formula("Sb[x:=x - 1]")}}),
       skip_y},
      "",
      std::nullopt});
  ProofPtr step_inner = std::make_shared<ProofTree>(
      ProofTree{{ctx, {step_subject, step_mid}},
                Rule::Seq,
                {leaf(Rule::Skip, {ctx, {Statement::skip(), Formula::rel_id()}}), assign_tail},
                "",
                std::nullopt});
  FormulaPtr step_goal = Formula::or_(Formula::state_pred(negate_bexp(guard)), phi);
  OracleCertificate step_cert = entails_bounded(step_mid, step_goal, b);
  REQUIRE(step_cert.accepted);
  ProofPtr step_premise = std::make_shared<ProofTree>(
      ProofTree{{ctx, {step_subject, step_goal}}, Rule::Cons, {step_inner}, "", step_cert});

  ProofPtr while_proof = std::make_shared<ProofTree>(
      ProofTree{{{}, {p.main, Formula::chop(Formula::rel_id(), phi)}},
                Rule::While,
                {exit_premise, step_premise},
                proc,
                std::nullopt});

  CheckResult r = check_proof(while_proof, p.table);
  INFO(r.diagnosis);
  CHECK(r.accepted);
  CHECK(valid_judgment_bounded(p.main, p.table, Formula::chop(Formula::rel_id(), phi), b)
            .accepted);

  // swapping the premise formulas breaks the instance
  auto broken = std::make_shared<ProofTree>(*while_proof);
  broken->premises = {step_premise, exit_premise};
  CHECK_FALSE(check_proof(broken, p.table).accepted);
}

TEST_CASE("proof trees survive the JSON round trip") {
  Program even = parse_program(tt::kEvenOdd);
  Bounds b = tt::grid(kXY, {{0, 2}, {0, 0}}, 30);
  ProofPtr proof = prove_stf(even.main, even.table, b);
  std::string text = proof_to_json(proof);
  ProofPtr back = proof_from_json(text);
  CHECK(check_proof(back, even.table).accepted);
  CHECK(proof_to_json(back) == text);
}

TEST_CASE("single-node mutations are caught") {
  tt::Gen gen(61);
  Program p = parse_program(tt::kEvenOdd);
  Bounds b = tt::grid(kXY, {{0, 3}, {0, 0}}, 30);
  ProofPtr proof = prove_stf(p.main, p.table, b);

  // collect mutable copies of every node
  std::function<void(const ProofPtr&, std::vector<const ProofTree*>&)> collect =
      [&](const ProofPtr& n, std::vector<const ProofTree*>& out) {
        out.push_back(n.get());
        for (const auto& q : n->premises) collect(q, out);
      };
  std::vector<const ProofTree*> nodes;
  collect(proof, nodes);
  REQUIRE(nodes.size() > 5);

  std::function<ProofPtr(const ProofPtr&, const ProofTree*)> mutate =
      [&](const ProofPtr& n, const ProofTree* target) -> ProofPtr {
    auto copy = std::make_shared<ProofTree>(*n);
    if (n.get() == target) {
      copy->conclusion.succedent.spec = Formula::chop(
          copy->conclusion.succedent.spec, parse_formula("Sb[x:=x + 41]"));
    }
    copy->premises.clear();
    for (const auto& q : n->premises) copy->premises.push_back(mutate(q, target));
    return copy;
  };

  for (int i = 0; i < 25; ++i) {
    const ProofTree* target = nodes[static_cast<size_t>(gen.pick(static_cast<int>(nodes.size())))];
    ProofPtr bad = mutate(proof, target);
    bool caught = !check_proof(bad, p.table).accepted;
    if (!caught) {
      Verdict v = valid_judgment_bounded(bad->conclusion.succedent.subject, p.table,
                                         bad->conclusion.succedent.spec, b);
      caught = !v.accepted;
    }
    CHECK(caught);
  }
}
