#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "test_util.hpp"

using namespace tracelab;

namespace {
const auto kXY = tt::order({"x", "y"});

FormulaPtr stf_of(const char* src) {
  Program p = parse_program(src);
  return strongest_trace_formula(p.main, p.table);
}
}  // namespace

TEST_CASE("atomic statements") {
  CHECK(to_string(stf_of("main { skip }")) == "Id");
  CHECK(to_string(stf_of("main { x := x - 1 }")) == "Sb[x:=x - 1]");
  CHECK(to_string(stf_of(tt::kSkipDec)) == "Id ^ Sb[x:=x - 1]");
}

TEST_CASE("the recursive descent formula of the countdown procedure") {
  CHECK(to_string(stf_of(tt::kDown)) ==
        "Id ^ mu X_down. ({x > 0} /\\ Id ^ Sb[x:=x - 2] ^ Id ^ X_down \\/ "
        "{x <= 0} /\\ Id ^ Id)");
}

TEST_CASE("mutual recursion nests binders in call order") {
  CHECK(to_string(stf_of(tt::kEvenOdd)) ==
        "Id ^ mu X_even. ({x = 0} /\\ Id ^ Sb[y:=1] \\/ "
        "{x != 0} /\\ Id ^ Sb[x:=x - 1] ^ Id ^ mu X_odd. ({x = 0} /\\ Id ^ Sb[y:=0] \\/ "
        "{x != 0} /\\ Id ^ Sb[x:=x - 1] ^ Id ^ X_even))");
}

TEST_CASE("the output is closed and inside the reduced grammar") {
  for (const char* src : {tt::kSkipDec, tt::kEvenOdd, tt::kDown, tt::kAssignDown, tt::kIfStar1,
                          tt::kIfStar2, tt::kWhile}) {
    FormulaPtr f = stf_of(src);
    CHECK(closed(f));
    CHECK(check_restricted(f).ok);
  }
}

TEST_CASE("each procedure owns at most one binder along any path") {
  FormulaPtr f = stf_of(tt::kEvenOdd);
  // X_odd's binder sits under X_even's; the inner occurrence of X_even is a
  // variable, not a second binder
  std::set<std::string> names;
  std::function<void(const FormulaPtr&, std::set<std::string>)> walk =
      [&](const FormulaPtr& g, std::set<std::string> above) {
        if (g->kind == FKind::Mu) {
          CHECK_FALSE(above.count(g->name));
          above.insert(g->name);
        }
        if (g->lhs) walk(g->lhs, above);
        if (g->rhs) walk(g->rhs, above);
      };
  walk(f, {});
}

TEST_CASE("denotation characterization on the corpus") {
  for (const char* src : {tt::kSkipDec, tt::kEvenOdd, tt::kDown, tt::kAssignDown, tt::kIfStar1,
                          tt::kIfStar2, tt::kWhile}) {
    Program p = parse_program(src);
    FormulaPtr f = strongest_trace_formula(p.main, p.table);
    Bounds b = tt::grid(kXY, {{-1, 4}, {0, 0}}, 24);
    CHECK(eval_formula_enum(f, b) == eval_stm(p.main, p.table, b));
  }
}

TEST_CASE("valid judgments are entailed by the strongest formula") {
  struct Pair {
    const char* src;
    const char* formula;
  };
  std::vector<Pair> pairs = {
      {tt::kDown, "Id ^ mu D. (Dec(x) \\/ Dec(x) ^ D)"},
      {tt::kDown, "Id ^ {true}"},
      {tt::kSkipDec, "Id ^ Sb[x:=x - 1]"},
      {tt::kWhile, "Id ^ {true}"},
  };
  Bounds b = tt::grid(kXY, {{0, 5}, {0, 0}}, 40);
  for (const auto& pr : pairs) {
    Program p = parse_program(pr.src);
    FormulaPtr phi = parse_formula(pr.formula);
    REQUIRE(valid_judgment_bounded(p.main, p.table, phi, b).accepted);
    CHECK(entails_bounded(strongest_trace_formula(p.main, p.table), phi, b).accepted);
  }
}

TEST_CASE("unused inner binder can be dropped without changing the semantics") {
  FormulaPtr f = stf_of(tt::kEvenOdd);
  FormulaPtr dropped = drop_unused_binders(f);
  CHECK(to_string(dropped).find("mu X_odd") == std::string::npos);
  Bounds b = tt::grid(kXY, {{0, 4}, {0, 0}}, 30);
  CHECK(eval_formula_enum(f, b) == eval_formula_enum(dropped, b));
}

TEST_CASE("equation systems flatten the binders") {
  ModalEquationSystem mes = modal_equation_system(parse_formula("mu X. (Id \\/ X)"));
  CHECK(to_string(mes.root) == "X");
  REQUIRE(mes.equations.size() == 1);
  CHECK(mes.equations[0].first == "X");
  CHECK(to_string(mes.equations[0].second) == "Id \\/ X");
}

TEST_CASE("the even/odd equation system matches the nested formula") {
  FormulaPtr f = stf_of(tt::kEvenOdd);
  ModalEquationSystem mes = modal_equation_system(f);
  CHECK(to_string(mes.root) == "Id ^ X_even");
  REQUIRE(mes.equations.size() == 2);
  std::map<std::string, std::string> eq;
  for (const auto& [name, rhs] : mes.equations) eq[name] = to_string(rhs);
  CHECK(eq.at("X_even") ==
        "{x = 0} /\\ Id ^ Sb[y:=1] \\/ {x != 0} /\\ Id ^ Sb[x:=x - 1] ^ Id ^ X_odd");
  CHECK(eq.at("X_odd") ==
        "{x = 0} /\\ Id ^ Sb[y:=0] \\/ {x != 0} /\\ Id ^ Sb[x:=x - 1] ^ Id ^ X_even");
}

TEST_CASE("resubstitution rebuilds a semantically equal formula") {
  tt::Gen gen(41);
  for (const char* src : {tt::kEvenOdd, tt::kDown, tt::kIfStar2}) {
    FormulaPtr f = stf_of(src);
    FormulaPtr back = resubstitute(modal_equation_system(f));
    CHECK(closed(back));
    Bounds b = tt::grid(kXY, {{0, 3}, {0, 0}}, 20);
    CHECK(eval_formula_enum(f, b) == eval_formula_enum(back, b));
  }
  for (int i = 0; i < 40; ++i) {
    FormulaPtr f = rename_recursion_vars(gen.restricted_formula(4));
    FormulaPtr back = resubstitute(modal_equation_system(f));
    Bounds b = tt::grid(kXY, {{0, 1}, {0, 1}}, 6);
    CHECK(eval_formula_enum(f, b) == eval_formula_enum(back, b));
  }
}

TEST_CASE("duplicate binder names are rejected") {
  FormulaPtr f = parse_formula("mu X. (Id ^ mu X. (Id \\/ X))");
  CHECK_THROWS_AS(modal_equation_system(f), EvalError);
  CHECK_NOTHROW(modal_equation_system(rename_recursion_vars(f)));
}

TEST_CASE("renaming preserves bounded enumeration") {
  tt::Gen gen(47);
  for (int i = 0; i < 40; ++i) {
    FormulaPtr f = gen.restricted_formula(4);
    Bounds b = tt::grid(kXY, {{0, 1}, {0, 1}}, 6);
    CHECK(eval_formula_enum(f, b) == eval_formula_enum(rename_recursion_vars(f), b));
  }
}
