#include "tracelab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tracelab/calculus.hpp"
#include "tracelab/canon.hpp"
#include "tracelab/eval.hpp"
#include "tracelab/parse.hpp"
#include "tracelab/print.hpp"
#include "tracelab/proof_json.hpp"
#include "tracelab/sos.hpp"
#include "tracelab/stf.hpp"

namespace tracelab {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitWellFormed = 2;
constexpr int kExitBudget = 3;
constexpr int kExitRefuted = 4;
constexpr int kExitOracle = 5;
constexpr int kExitUsage = 64;

struct CliError : std::runtime_error {
  int code;
  CliError(int code_, const std::string& msg) : std::runtime_error(msg), code(code_) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitParse, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_out(const std::string& path, const std::string& payload) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitParse, "cannot write " + path);
  out << payload;
}

struct InitRange {
  std::string var;
  Int lo = 0, hi = 0;
};

InitRange parse_init_spec(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CliError(kExitUsage, "bad --init (want VAR=LO..HI): " + spec);
  InitRange r;
  r.var = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  auto dots = rest.find("..");
  try {
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoll(rest);
    } else {
      r.lo = std::stoll(rest.substr(0, dots));
      r.hi = std::stoll(rest.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw CliError(kExitUsage, "bad --init (want VAR=LO..HI): " + spec);
  }
  return r;
}

struct BoundsOpts {
  std::vector<std::string> init_specs;
  int max_len = 32;

  void attach(CLI::App* cmd) {
    cmd->add_option("--init", init_specs,
                    "initial-state range VAR=LO..HI (repeatable, cartesian product)");
    cmd->add_option("--max-len", max_len, "raw trace-length budget in states (default 32)");
  }

  // The variable universe is the union of the inputs' variables and the
  // ranged ones; every input variable must be covered by a range.
  Bounds make(const std::set<std::string>& input_vars) const {
    if (max_len < 2) throw CliError(kExitOracle, "--max-len must be at least 2");
    std::map<std::string, std::vector<Int>> ranges;
    std::set<std::string> all_vars = input_vars;
    for (const auto& spec : init_specs) {
      InitRange r = parse_init_spec(spec);
      all_vars.insert(r.var);
      auto& vals = ranges[r.var];
      for (Int v = r.lo; v <= r.hi; ++v) vals.push_back(v);
    }
    for (const auto& v : input_vars)
      if (!ranges.count(v))
        throw CliError(kExitOracle, "no --init range covers variable " + v);
    auto order = VarOrder::make(all_vars);
    Bounds b;
    b.max_len = max_len;
    std::vector<State> frontier{State::zero(order)};
    for (const auto& name : order->names()) {
      std::vector<State> next;
      auto it = ranges.find(name);
      if (it == ranges.end() || it->second.empty()) {
        if (it != ranges.end()) return b;  // an empty range empties the product
        next = frontier;                   // unranged, unused variable: keep 0
      } else {
        for (const auto& s : frontier)
          for (Int v : it->second) next.push_back(s.with(name, v));
      }
      frontier = std::move(next);
    }
    b.initial_states = std::move(frontier);
    return b;
  }

  std::string describe() const {
    std::ostringstream os;
    for (const auto& s : init_specs) os << s << " ";
    os << "maxLen=" << max_len;
    return os.str();
  }
};

json bounds_json(const BoundsOpts& opts) {
  json o;
  o["init"] = opts.init_specs;
  o["maxLen"] = opts.max_len;
  return o;
}

json trace_json(const Trace& t) { return to_string(t); }

Program load_program(const std::string& path) {
  try {
    return parse_program(read_file(path));
  } catch (const ParseError& e) {
    throw CliError(kExitParse, path + ":" + std::to_string(e.line) + ":" +
                                   std::to_string(e.col) + ": " + e.what());
  } catch (const WellFormedError& e) {
    throw CliError(kExitWellFormed, path + ": " + e.what());
  }
}

FormulaPtr load_formula(const std::string& path) {
  try {
    return parse_formula(read_file(path));
  } catch (const ParseError& e) {
    throw CliError(kExitParse, path + ":" + std::to_string(e.line) + ":" +
                                   std::to_string(e.col) + ": " + e.what());
  }
}

std::set<std::string> vars_of(const Program& p) {
  std::set<std::string> v;
  collect_vars(p, v);
  return v;
}

std::set<std::string> vars_of(const FormulaPtr& f) {
  std::set<std::string> v;
  collect_vars(f, v);
  return v;
}

void emit(std::ostream& out, const std::string& fmt, const std::string& text, const json& j,
          const std::string& out_path) {
  if (fmt == "structured") {
    std::string payload = j.dump(2) + "\n";
    out << payload;
    write_out(out_path, payload);
  } else {
    out << text;
    write_out(out_path, text);
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct TracesCmd {
  std::string file, engine = "sos", format = "text", out_path;
  BoundsOpts bounds;

  int run(std::ostream& out) {
    Program p = load_program(file);
    Bounds b = bounds.make(vars_of(p));
    TraceSet traces;
    RunStats stats;
    if (engine == "sos") {
      traces = run_traces(p.main, p.table, b, &stats);
    } else if (engine == "denot") {
      traces = eval_stm(p.main, p.table, b);
      if (traces.empty()) run_traces(p.main, p.table, b, &stats);  // pruning info
    } else {
      throw CliError(kExitUsage, "unknown engine: " + engine);
    }
    std::ostringstream text;
    text << "# bounds: " << bounds.describe() << "\n" << dump(traces);
    json j;
    j["version"] = "1";
    j["command"] = "traces";
    j["bounds"] = bounds_json(bounds);
    j["traces"] = json::array();
    for (const auto& t : traces) j["traces"].push_back(to_string(t));
    emit(out, format, text.str(), j, out_path);
    if (traces.empty() && stats.pruned_runs > 0) return kExitBudget;
    return kExitOk;
  }
};

struct StfCmd {
  std::string file, format = "text", out_path;

  int run(std::ostream& out) {
    Program p = load_program(file);
    FormulaPtr f = strongest_trace_formula(p.main, p.table);
    json j;
    j["version"] = "1";
    j["command"] = "stf";
    j["formula"] = to_string(f);
    emit(out, format, to_string(f) + "\n", j, out_path);
    return kExitOk;
  }
};

struct CanonCmd {
  std::string file, format = "text", out_path;

  int run(std::ostream& out) {
    FormulaPtr f = load_formula(file);
    Program p;
    try {
      p = canonical_program(f);
    } catch (const EvalError& e) {
      throw CliError(kExitWellFormed, e.what());
    }
    json j;
    j["version"] = "1";
    j["command"] = "canon";
    j["program"] = to_string(p);
    emit(out, format, to_string(p), j, out_path);
    return kExitOk;
  }
};

struct EntailsCmd {
  std::string lhs_file, rhs_file, format = "text", out_path;
  BoundsOpts bounds;

  int run(std::ostream& out) {
    FormulaPtr lhs = load_formula(lhs_file);
    FormulaPtr rhs = load_formula(rhs_file);
    std::set<std::string> vars = vars_of(lhs);
    for (const auto& v : vars_of(rhs)) vars.insert(v);
    Bounds b = bounds.make(vars);
    OracleCertificate cert;
    try {
      cert = entails_bounded(lhs, rhs, b);
    } catch (const EvalError& e) {
      throw CliError(kExitOracle, e.what());
    }
    std::ostringstream text;
    text << "claim: " << to_string(lhs) << " |= " << to_string(rhs) << "\n"
         << "bounds: " << bounds.describe() << "\n"
         << "verdict: " << (cert.accepted ? "accepted (bounded)" : "refuted") << "\n";
    if (cert.witness) text << "witness: " << to_string(*cert.witness) << "\n";
    json j;
    j["version"] = "1";
    j["command"] = "entails";
    j["claim"] = {{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}};
    j["bounds"] = bounds_json(bounds);
    j["verdict"] = cert.accepted ? "accepted" : "refuted";
    j["witness"] = cert.witness ? trace_json(*cert.witness) : json();
    emit(out, format, text.str(), j, out_path);
    return cert.accepted ? kExitOk : kExitRefuted;
  }
};

struct ProveCmd {
  std::string file, target = "stf", format = "text", out_path;
  BoundsOpts bounds;

  int run(std::ostream& out) {
    Program p = load_program(file);
    std::set<std::string> vars = vars_of(p);
    FormulaPtr goal;
    if (target != "stf") {
      goal = load_formula(target);
      for (const auto& v : vars_of(goal)) vars.insert(v);
    }
    Bounds b = bounds.make(vars);
    ProofPtr proof;
    bool refuted = false;
    std::optional<Trace> witness;
    try {
      if (target == "stf") {
        proof = prove_stf(p.main, p.table, b);
      } else {
        proof = prove_via_cons(p.main, p.table, goal, b);
        if (proof->cert && !proof->cert->accepted) {
          refuted = true;
          witness = proof->cert->witness;
        }
      }
    } catch (const EvalError& e) {
      throw CliError(kExitOracle, e.what());
    }
    CheckResult check = check_proof(proof, p.table);
    std::string proof_json_text = proof_to_json(proof);
    write_out(out_path, proof_json_text);
    std::ostringstream text;
    text << "claim: " << to_string(proof->conclusion.succedent.subject) << " : "
         << to_string(proof->conclusion.succedent.spec) << "\n"
         << "bounds: " << bounds.describe() << "\n"
         << "verdict: "
         << (refuted ? "refuted" : (check.accepted ? "accepted (bounded oracle)" : "rejected"))
         << "\n";
    if (witness) text << "witness: " << to_string(*witness) << "\n";
    if (!check.accepted && !refuted) text << "diagnosis: " << check.diagnosis << "\n";
    json j;
    j["version"] = "1";
    j["command"] = "prove";
    j["claim"] = {{"stmt", to_string(proof->conclusion.succedent.subject)},
                  {"formula", to_string(proof->conclusion.succedent.spec)}};
    j["bounds"] = bounds_json(bounds);
    j["verdict"] = refuted ? "refuted" : (check.accepted ? "accepted" : "rejected");
    j["witness"] = witness ? trace_json(*witness) : json();
    if (format == "structured") {
      emit(out, format, "", j, "");
    } else {
      out << text.str();
    }
    if (refuted) return kExitRefuted;
    if (!check.accepted) return kExitOracle;
    return kExitOk;
  }
};

struct CheckProofCmd {
  std::string proof_file, prog_file, format = "text";

  int run(std::ostream& out) {
    Program p = load_program(prog_file);
    ProofPtr proof;
    try {
      proof = proof_from_json(read_file(proof_file));
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(kExitParse, proof_file + ": " + e.what());
    }
    CheckResult r = check_proof(proof, p.table);
    std::ostringstream text;
    text << "claim: " << to_string(proof->conclusion.succedent.subject) << " : "
         << to_string(proof->conclusion.succedent.spec) << "\n"
         << "verdict: " << (r.accepted ? "accepted (bounded oracle)" : "rejected") << "\n";
    if (!r.accepted) text << "diagnosis: " << r.diagnosis << "\n";
    json j;
    j["version"] = "1";
    j["command"] = "check-proof";
    j["verdict"] = r.accepted ? "accepted" : "rejected";
    j["diagnosis"] = r.diagnosis;
    emit(out, format, text.str(), j, "");
    return r.accepted ? kExitOk : kExitRefuted;
  }
};

struct GaloisCmd {
  std::string prog_file, formula_file, format = "text";
  BoundsOpts bounds;

  int run(std::ostream& out) {
    Program p = load_program(prog_file);
    FormulaPtr f = load_formula(formula_file);
    auto rc = check_restricted(f);
    if (!rc.ok)
      throw CliError(kExitWellFormed,
                     "formula is outside the reduced grammar at: " + to_string(rc.offending));
    std::set<std::string> vars = vars_of(p);
    for (const auto& v : vars_of(f)) vars.insert(v);
    Bounds b = bounds.make(vars);
    GaloisReport rep;
    try {
      rep = galois_check(p.main, p.table, f, b);
    } catch (const EvalError& e) {
      throw CliError(kExitOracle, e.what());
    }
    auto dir = [](bool holds, const std::optional<Trace>& w) {
      std::string s = holds ? "holds" : "fails";
      if (w) s += " (witness " + to_string(*w) + ")";
      return s;
    };
    std::ostringstream text;
    text << "bounds: " << bounds.describe() << "\n"
         << "stf(S) entails formula (modulo stutter): "
         << dir(rep.entails_holds, rep.entails_witness) << "\n"
         << "S refines canonical program (modulo stutter): "
         << dir(rep.refines_holds, rep.refines_witness) << "\n"
         << "verdict: " << (rep.agree() ? "accepted (directions agree)" : "refuted (asymmetry)")
         << "\n";
    json j;
    j["version"] = "1";
    j["command"] = "galois";
    j["bounds"] = bounds_json(bounds);
    j["entails"] = {{"holds", rep.entails_holds},
                    {"witness", rep.entails_witness ? trace_json(*rep.entails_witness) : json()}};
    j["refines"] = {{"holds", rep.refines_holds},
                    {"witness", rep.refines_witness ? trace_json(*rep.refines_witness) : json()}};
    j["verdict"] = rep.agree() ? "accepted" : "refuted";
    emit(out, format, text.str(), j, "");
    return rep.agree() ? kExitOk : kExitRefuted;
  }
};

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trace-semantics workbench for recursive programs"};
  app.require_subcommand(1);

  TracesCmd traces_cmd;
  auto* traces = app.add_subcommand("traces", "enumerate bounded traces of a program");
  traces->add_option("file", traces_cmd.file, ".rec program")->required();
  traces->add_option("--engine", traces_cmd.engine, "sos|denot (default sos)");
  traces->add_option("--format", traces_cmd.format, "text|structured");
  traces->add_option("--out", traces_cmd.out_path, "also write the dump to a file");
  traces_cmd.bounds.attach(traces);

  TracesCmd run_cmd;  // `run` is traces pinned to the sos engine
  auto* runc = app.add_subcommand("run", "execute a program under the small-step rules");
  runc->add_option("file", run_cmd.file, ".rec program")->required();
  runc->add_option("--format", run_cmd.format, "text|structured");
  runc->add_option("--out", run_cmd.out_path, "also write the dump to a file");
  run_cmd.bounds.attach(runc);

  StfCmd stf_cmd;
  auto* stf = app.add_subcommand("stf", "print the strongest trace formula of a program");
  stf->add_option("file", stf_cmd.file, ".rec program")->required();
  stf->add_option("--format", stf_cmd.format, "text|structured");
  stf->add_option("--out", stf_cmd.out_path, "also write the formula to a file");

  CanonCmd canon_cmd;
  auto* canon = app.add_subcommand("canon", "print the canonical program of a formula");
  canon->add_option("file", canon_cmd.file, ".tfl formula")->required();
  canon->add_option("--format", canon_cmd.format, "text|structured");
  canon->add_option("--out", canon_cmd.out_path, "also write the program to a file");

  EntailsCmd entails_cmd;
  auto* entails = app.add_subcommand("entails", "bounded entailment between two formulas");
  entails->add_option("lhs", entails_cmd.lhs_file, "enumerable .tfl formula")->required();
  entails->add_option("rhs", entails_cmd.rhs_file, ".tfl formula")->required();
  entails->add_option("--format", entails_cmd.format, "text|structured");
  entails->add_option("--out", entails_cmd.out_path, "also write the report to a file");
  entails_cmd.bounds.attach(entails);

  ProveCmd prove_cmd;
  auto* prove = app.add_subcommand("prove", "generate and check a proof");
  prove->add_option("file", prove_cmd.file, ".rec program")->required();
  prove->add_option("--target", prove_cmd.target, "stf or a .tfl file (default stf)");
  prove->add_option("--format", prove_cmd.format, "text|structured");
  prove->add_option("--out", prove_cmd.out_path, "write the proof tree as JSON");
  prove_cmd.bounds.attach(prove);

  CheckProofCmd check_cmd;
  auto* check = app.add_subcommand("check-proof", "verify a serialized proof tree");
  check->add_option("proof", check_cmd.proof_file, "proof.json")->required();
  check->add_option("program", check_cmd.prog_file, ".rec program")->required();
  check->add_option("--format", check_cmd.format, "text|structured");

  GaloisCmd galois_cmd;
  auto* galois = app.add_subcommand("galois", "check both directions of the adjunction");
  galois->add_option("program", galois_cmd.prog_file, ".rec program")->required();
  galois->add_option("formula", galois_cmd.formula_file, ".tfl formula")->required();
  galois->add_option("--format", galois_cmd.format, "text|structured");
  galois_cmd.bounds.attach(galois);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    int code = app.exit(e, os, os);
    err << os.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (traces->parsed()) return traces_cmd.run(out);
    if (runc->parsed()) {
      run_cmd.engine = "sos";
      return run_cmd.run(out);
    }
    if (stf->parsed()) return stf_cmd.run(out);
    if (canon->parsed()) return canon_cmd.run(out);
    if (entails->parsed()) return entails_cmd.run(out);
    if (prove->parsed()) return prove_cmd.run(out);
    if (check->parsed()) return check_cmd.run(out);
    if (galois->parsed()) return galois_cmd.run(out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const WellFormedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitWellFormed;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitOracle;
  }
  return kExitUsage;
}

}  // namespace tracelab
