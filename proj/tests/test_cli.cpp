#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tracelab/cli.hpp"

using namespace tracelab;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) {
    path = std::string("cli_test_") + name;
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("trace dumps are engine-independent and deterministic") {
  TempFile prog("down.rec", tt::kAssignDown);
  Result sos = run({"traces", prog.path, "--init", "x=7", "--max-len", "12", "--engine", "sos"});
  Result denot =
      run({"traces", prog.path, "--init", "x=7", "--max-len", "12", "--engine", "denot"});
  CHECK(sos.code == 0);
  CHECK(sos.out == denot.out);
  CHECK(sos.out.find("{x=7}->{x=2}->{x=2}->{x=2}->{x=0}->{x=0}->{x=0}->{x=0}") !=
        std::string::npos);
  Result again = run({"traces", prog.path, "--init", "x=7", "--max-len", "12", "--engine", "sos"});
  CHECK(again.out == sos.out);
}

TEST_CASE("run is the small-step engine") {
  TempFile prog("skipdec.rec", tt::kSkipDec);
  Result r = run({"run", prog.path, "--init", "x=5", "--max-len", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("{x=5}->{x=5}->{x=4}") != std::string::npos);
}

TEST_CASE("empty initial range gives an empty dump and exit 0") {
  TempFile prog("down.rec", tt::kDown);
  Result r = run({"traces", prog.path, "--init", "x=5..2", "--max-len", "10"});
  CHECK(r.code == 0);
  CHECK(r.out == "# bounds: x=5..2 maxLen=10\n");
}

TEST_CASE("exit codes distinguish failure classes") {
  TempFile bad_syntax("bad.rec", "main { skip ;; }");
  CHECK(run({"traces", bad_syntax.path, "--init", "x=0"}).code == 1);

  TempFile bad_wf("undefined.rec", "main { foo() }");
  CHECK(run({"traces", bad_wf.path, "--init", "x=0"}).code == 2);

  TempFile diverge("diverge.rec", "main { diverge }");
  CHECK(run({"traces", diverge.path, "--init", "x=0", "--max-len", "10"}).code == 3);

  TempFile missing_range("down.rec", tt::kDown);
  CHECK(run({"traces", missing_range.path}).code == 5);

  CHECK(run({"bogus-subcommand"}).code == 64);
}

TEST_CASE("entails accepts and refutes with the documented exit codes") {
  TempFile down("down.rec", tt::kDown);
  Result stf_out = run({"stf", down.path});
  REQUIRE(stf_out.code == 0);
  TempFile lhs("lhs.tfl", stf_out.out);
  TempFile dec("dec.tfl", "Id ^ mu D. (Dec(x) \\/ Dec(x) ^ D)");
  Result ok = run({"entails", lhs.path, dec.path, "--init", "x=0..10", "--max-len", "40"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("verdict: accepted (bounded)") != std::string::npos);

  TempFile id("id.tfl", "Id");
  Result no = run({"entails", lhs.path, id.path, "--init", "x=0..10", "--max-len", "40"});
  CHECK(no.code == 4);
  CHECK(no.out.find("witness:") != std::string::npos);

  TempFile dec_only("deconly.tfl", "Dec(x)");
  CHECK(run({"entails", dec_only.path, id.path, "--init", "x=0..2"}).code == 5);
}

TEST_CASE("canon emits the program and rejects non-reduced input") {
  TempFile count("count.tfl", tt::kCountFormula);
  Result r = run({"canon", count.path});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "proc m_X { if * then skip else y := y + 1; m_X() }\n"
        "main { y := 0; m_X() }\n");
  TempFile bare("bare.tfl", "{x > 0}");
  CHECK(run({"canon", bare.path}).code == 2);
}

TEST_CASE("prove writes a proof the checker accepts") {
  TempFile prog("even.rec", tt::kEvenOdd);
  TempFile out("proof.json", "");
  Result r = run({"prove", prog.path, "--target", "stf", "--init", "x=0..4", "--init", "y=0",
                  "--max-len", "40", "--out", out.path});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: accepted (bounded oracle)") != std::string::npos);
  Result c = run({"check-proof", out.path, prog.path});
  CHECK(c.code == 0);

  // a proof for the wrong program is rejected
  TempFile other("down.rec", tt::kDown);
  Result wrong = run({"check-proof", out.path, other.path});
  CHECK(wrong.code == 4);
}

TEST_CASE("prove against a formula file routes through the consequence step") {
  TempFile prog("downprove.rec", tt::kDown);
  TempFile goal("decgoal.tfl", "Id ^ mu D. (Dec(x) \\/ Dec(x) ^ D)");
  TempFile out("consproof.json", "");
  Result r = run({"prove", prog.path, "--target", goal.path, "--init", "x=0..6", "--max-len",
                  "40", "--out", out.path});
  CHECK(r.code == 0);
  CHECK(run({"check-proof", out.path, prog.path}).code == 0);
}

TEST_CASE("prove against a refuted target exits with the refutation code") {
  TempFile prog("one.rec", "main { x := 1 }");
  TempFile goal("goal.tfl", "Sb[x:=2]");
  Result r = run({"prove", prog.path, "--target", goal.path, "--init", "x=0", "--max-len", "8"});
  CHECK(r.code == 4);
  CHECK(r.out.find("witness") != std::string::npos);
}

TEST_CASE("galois agreement and structured output") {
  TempFile prog("down.rec", tt::kDown);
  Result stf_out = run({"stf", prog.path});
  TempFile f("downstf.tfl", stf_out.out);
  Result r = run({"galois", prog.path, f.path, "--init", "x=0..4", "--max-len", "30"});
  CHECK(r.code == 0);
  CHECK(r.out.find("accepted (directions agree)") != std::string::npos);

  Result s = run({"galois", prog.path, f.path, "--init", "x=0..4", "--max-len", "30", "--format",
                  "structured"});
  CHECK(s.code == 0);
  CHECK(s.out.find("\"version\": \"1\"") != std::string::npos);
  CHECK(s.out.find("\"verdict\": \"accepted\"") != std::string::npos);
}

TEST_CASE("variable-free programs run on the empty state") {
  TempFile prog("novars.rec", "main { skip }");
  Result r = run({"traces", prog.path});
  CHECK(r.code == 0);
  CHECK(r.out.find("{}->{}") != std::string::npos);
  CHECK(r.out.find("maxLen=32") != std::string::npos);  // the printed default
}

TEST_CASE("structured trace output carries the schema version") {
  TempFile prog("skip.rec", "main { skip }");
  Result r = run({"traces", prog.path, "--init", "x=1", "--format", "structured"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"version\": \"1\"") != std::string::npos);
  CHECK(r.out.find("\"{x=1}->{x=1}\"") != std::string::npos);
}
