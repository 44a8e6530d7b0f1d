#include "tracelab/proof_json.hpp"

#include "json.hpp"
#include "tracelab/parse.hpp"
#include "tracelab/print.hpp"

namespace tracelab {

namespace {

using json = nlohmann::ordered_json;

json state_to_json(const State& s) {
  json o = json::object();
  const auto& names = s.order()->names();
  for (size_t i = 0; i < names.size(); ++i) o[names[i]] = s.values()[i];
  return o;
}

State state_from_json(const json& o) {
  std::set<std::string> names;
  for (auto it = o.begin(); it != o.end(); ++it) names.insert(it.key());
  auto order = VarOrder::make(names);
  std::vector<Int> vals;
  for (const auto& n : order->names()) vals.push_back(o.at(n).get<Int>());
  return State(order, std::move(vals));
}

json bounds_to_json(const Bounds& b) {
  json o;
  o["init"] = json::array();
  for (const auto& s : b.initial_states) o["init"].push_back(state_to_json(s));
  o["maxLen"] = b.max_len;
  return o;
}

Bounds bounds_from_json(const json& o) {
  Bounds b;
  for (const auto& s : o.at("init")) b.initial_states.push_back(state_from_json(s));
  b.max_len = o.at("maxLen").get<int>();
  return b;
}

json trace_to_json(const Trace& t) {
  json a = json::array();
  for (const auto& s : t) a.push_back(state_to_json(s));
  return a;
}

Trace trace_from_json(const json& a) {
  Trace t;
  for (const auto& s : a) t.push_back(state_from_json(s));
  return t;
}

json judgment_to_json(const Judgment& j) {
  json o;
  o["stmt"] = to_string(j.subject);
  o["formula"] = to_string(j.spec);
  return o;
}

Judgment judgment_from_json(const json& o) {
  Judgment j;
  j.subject = parse_statement(o.at("stmt").get<std::string>(), /*allow_svar=*/true);
  j.spec = parse_formula(o.at("formula").get<std::string>());
  return j;
}

json node_to_json(const ProofPtr& t) {
  json o;
  o["rule"] = rule_name(t->rule);
  json concl;
  concl["antecedent"] = json::array();
  for (const auto& j : t->conclusion.antecedent)
    concl["antecedent"].push_back(judgment_to_json(j));
  concl["judgment"] = judgment_to_json(t->conclusion.succedent);
  o["conclusion"] = std::move(concl);
  if (!t->proc.empty()) o["proc"] = t->proc;
  if (t->cert) {
    json c;
    c["lhs"] = to_string(t->cert->lhs);
    c["rhs"] = to_string(t->cert->rhs);
    c["bounds"] = bounds_to_json(t->cert->bounds);
    c["verdict"] = t->cert->accepted ? "accepted" : "refuted";
    if (t->cert->witness) c["witness"] = trace_to_json(*t->cert->witness);
    o["certificate"] = std::move(c);
  }
  o["premises"] = json::array();
  for (const auto& p : t->premises) o["premises"].push_back(node_to_json(p));
  return o;
}

ProofPtr node_from_json(const json& o) {
  auto n = std::make_shared<ProofTree>();
  auto rule = rule_from_name(o.at("rule").get<std::string>());
  if (!rule) throw EvalError("unknown proof rule: " + o.at("rule").get<std::string>());
  n->rule = *rule;
  const json& concl = o.at("conclusion");
  for (const auto& j : concl.at("antecedent"))
    n->conclusion.antecedent.push_back(judgment_from_json(j));
  n->conclusion.succedent = judgment_from_json(concl.at("judgment"));
  if (o.contains("proc")) n->proc = o.at("proc").get<std::string>();
  if (o.contains("certificate")) {
    const json& c = o.at("certificate");
    OracleCertificate cert;
    cert.lhs = parse_formula(c.at("lhs").get<std::string>());
    cert.rhs = parse_formula(c.at("rhs").get<std::string>());
    cert.bounds = bounds_from_json(c.at("bounds"));
    cert.accepted = c.at("verdict").get<std::string>() == "accepted";
    if (c.contains("witness")) cert.witness = trace_from_json(c.at("witness"));
    n->cert = std::move(cert);
  }
  for (const auto& p : o.at("premises")) n->premises.push_back(node_from_json(p));
  return n;
}

}  // namespace

std::string proof_to_json(const ProofPtr& t) {
  json o;
  o["version"] = "1";
  o["proof"] = node_to_json(t);
  return o.dump(2) + "\n";
}

ProofPtr proof_from_json(const std::string& text) {
  json o = json::parse(text);
  return node_from_json(o.at("proof"));
}

}  // namespace tracelab
