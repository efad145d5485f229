#include "commonsys/serialize.hpp"

#include <chrono>
#include <ctime>

#include "commonsys/digest.hpp"
#include "commonsys/error.hpp"

namespace commonsys {

Json to_json(const Property& p) {
  Json j{{"kind", to_string(p.kind)}};
  if (p.l) j["l"] = *p.l;
  if (p.alpha) j["alpha"] = *p.alpha;
  return j;
}

Property property_from_json(const Json& j) {
  Property p;
  p.kind = parse_property_kind(j.at("kind").get<std::string>());
  if (j.contains("l")) p.l = j.at("l").get<std::uint64_t>();
  if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
  return p;
}

Json to_json(const DefectReport& r) {
  Json j{{"system", r.system_id}, {"property", to_json(r.property)}, {"variables", r.variables},
         {"alpha", r.alpha},      {"value", r.value},                 {"scaled_value", r.scaled_value},
         {"t_f", r.t_f},          {"t_1mf", r.t_1mf},                 {"method", to_string(r.method)}};
  if (r.exact_alpha) j["exact_alpha"] = to_string(*r.exact_alpha);
  if (r.exact_t_f) j["exact_t_f"] = to_string(*r.exact_t_f);
  if (r.exact_t_1mf) j["exact_t_1mf"] = to_string(*r.exact_t_1mf);
  if (r.exact_value) j["exact_value"] = to_string(*r.exact_value);
  return j;
}

Json to_json(const SearchConfig& c) {
  Json j{{"objective", to_json(c.objective)},
         {"p", c.p},
         {"n", c.n},
         {"restarts", c.restarts},
         {"max_iters", c.max_iters},
         {"step", c.step},
         {"step_floor", c.step_floor},
         {"seed", c.seed},
         {"gradient_tolerance", c.gradient_tolerance},
         {"violation_threshold", c.violation_threshold}};
  if (c.mean) j["mean"] = *c.mean;
  return j;
}

SearchConfig search_config_from_json(const Json& j) {
  try {
    SearchConfig c;
    c.objective = property_from_json(j.at("objective"));
    c.p = j.at("p").get<std::uint32_t>();
    c.n = j.at("n").get<std::uint32_t>();
    c.restarts = j.at("restarts").get<std::size_t>();
    c.max_iters = j.at("max_iters").get<std::size_t>();
    c.step = j.at("step").get<double>();
    c.step_floor = j.at("step_floor").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.gradient_tolerance = j.at("gradient_tolerance").get<double>();
    c.violation_threshold = j.at("violation_threshold").get<double>();
    if (j.contains("mean")) c.mean = j.at("mean").get<double>();
    return c;
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("search config: ") + e.what());
  }
}

Json to_json(const SearchResult& r) {
  std::vector<double> values(r.best.values().begin(), r.best.values().end());
  return Json{{"best", {{"p", r.best.p()}, {"n", r.best.n()}, {"values", values}}},
              {"best_defect", r.best_defect},
              {"iterations", r.iterations},
              {"total_iterations", r.total_iterations},
              {"converged", r.converged},
              {"violation", r.violation},
              {"best_restart", r.best_restart},
              {"best_seed", r.best_seed},
              {"report", to_json(r.report)}};
}

SearchResult search_result_from_json(const Json& j) {
  try {
    const Json& b = j.at("best");
    GroupFunction f(b.at("p").get<std::uint32_t>(), b.at("n").get<std::uint32_t>(),
                    b.at("values").get<std::vector<double>>());
    SearchResult r{f, j.at("best_defect").get<double>(), j.at("iterations").get<std::size_t>(),
                   j.at("total_iterations").get<std::size_t>(), j.at("converged").get<bool>(),
                   j.at("violation").get<bool>(), j.at("best_restart").get<std::size_t>(),
                   j.at("best_seed").get<std::uint64_t>(), {}};
    const Json& rep = j.at("report");
    r.report.system_id = rep.at("system").get<std::string>();
    r.report.property = property_from_json(rep.at("property"));
    r.report.variables = rep.at("variables").get<std::size_t>();
    r.report.alpha = rep.at("alpha").get<double>();
    r.report.value = rep.at("value").get<double>();
    r.report.scaled_value = rep.at("scaled_value").get<double>();
    r.report.t_f = rep.at("t_f").get<double>();
    r.report.t_1mf = rep.at("t_1mf").get<double>();
    r.report.method = rep.at("method").get<std::string>() == "brute" ? Method::BruteExact : Method::Fourier;
    return r;
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedDocument, std::string("search result: ") + e.what());
  }
}

Json to_json(const AlgebraicNumber& x) { return to_string(x); }

Json to_json(const ExactPoly& p) { return poly_to_strings(p); }

namespace {

Json witness_json(const SturmWitness& w) {
  Json factors = Json::array();
  for (const auto& [r, m] : w.factors) factors.push_back({{"root", to_string(r)}, {"multiplicity", m}});
  Json seq = Json::array();
  for (const auto& q : w.sequence) seq.push_back(to_json(q));
  return {{"polynomial", to_json(w.original)},
          {"interval", {to_string(w.lo), to_string(w.hi)}},
          {"claimed_sign", w.claimed_sign},
          {"strict", w.strict()},
          {"factors", factors},
          {"quotient", to_json(w.quotient)},
          {"sturm_sequence", seq},
          {"variations", {w.variations_lo, w.variations_hi}},
          {"quotient_at_endpoints", {to_json(w.value_lo), to_json(w.value_hi)}}};
}

Json witness_json(const SubdivisionResult& r) {
  Json j{{"polynomial", r.poly.to_string()},
         {"box", {{"alpha", {to_string(r.box.alo), to_string(r.box.ahi)}}, {"x", {to_string(r.box.xlo), to_string(r.box.xhi)}}}},
         {"positive", r.positive},
         {"leaves", r.leaves},
         {"depth", r.depth_reached}};
  // Preorder: "S" for a split, otherwise the leaf lower bound.
  Json tree = Json::array();
  for (const auto& node : r.tree) tree.push_back(node.leaf ? Json(to_string(node.lower)) : Json("S"));
  j["tree"] = tree;
  if (r.witness) {
    j["witness"] = {{"alpha", to_string(r.witness->first)}, {"x", to_string(r.witness->second)},
                    {"value", to_string(*r.witness_value)}};
  }
  return j;
}

Json witness_json(const ChainWitness& w) {
  Json steps = Json::array();
  for (const auto& s : w.steps)
    steps.push_back({{"label", s.label}, {"lhs", to_json(s.lhs)}, {"rel", s.rel}, {"rhs", to_json(s.rhs)}});
  return {{"steps", steps}};
}

Json witness_json(const IdentityWitness& w) {
  Json l = Json::array(), r = Json::array();
  for (const auto& f : w.lhs_factors) l.push_back(f.to_string(w.variable_names));
  for (const auto& f : w.rhs_factors) r.push_back(f.to_string(w.variable_names));
  return {{"variables", w.variable_names}, {"lhs_factors", l}, {"rhs_factors", r}};
}

Json witness_json(const BoxBoundWitness& w) {
  Json pieces = Json::array();
  for (std::size_t k = 0; k < w.boxes.size(); ++k) {
    Json box = Json::array();
    for (const auto& iv : w.boxes[k]) box.push_back({to_string(iv.lo), to_string(iv.hi)});
    pieces.push_back({{"box", box}, {"enclosure", {to_string(w.enclosures[k].lo), to_string(w.enclosures[k].hi)}}});
  }
  return {{"variables", w.variable_names},
          {"polynomial", w.poly.to_string(w.variable_names)},
          {"pieces", pieces},
          {"bound", to_string(w.bound)}};
}

}  // namespace

Json to_json(const Certificate& c) {
  Json j{{"id", c.id}, {"claim", c.claim}, {"method", to_string(c.method)}, {"verified", c.verified}};
  j["witness"] = std::visit([](const auto& w) { return witness_json(w); }, c.witness);
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

Json to_json(const SlackRow& row) {
  Json conds = Json::array();
  for (const auto& c : row.conditions)
    conds.push_back({{"index", c.index},
                     {"statement", c.statement},
                     {"lhs", to_string(c.lhs)},
                     {"rhs", to_string(c.rhs)},
                     {"slack", to_string(c.slack())},
                     {"slack_approx", to_double(c.slack())},
                     {"holds", c.holds}});
  return {{"l", row.l}, {"conditions", conds}, {"all_hold", row.all_hold}, {"coverage", row.coverage}};
}

Json to_json(const ConstantLedger& L) {
  auto entry = [](const Rational& q) { return Json{{"exact", to_string(q)}, {"approx", to_double(q)}}; };
  Json certs = Json::array();
  for (const auto& c : L.certificates) certs.push_back(to_json(c));
  Json slack = Json::array();
  for (const auto& r : L.slack) slack.push_back(to_json(r));
  return {{"constants",
           {{"c0", entry(L.c0)},
            {"c1", entry(L.c1)},
            {"c2", entry(L.c2)},
            {"c3", entry(L.c3)},
            {"C4", entry(L.C4)},
            {"c5", entry(L.c5)},
            {"c6", entry(L.c6)},
            {"T4max", entry(L.t4_max)},
            {"T5max", entry(L.t5_max)},
            {"log_gap", entry(L.log_gap)},
            {"l0", L.l0}}},
          {"c0_exact", to_json(L.c0_exact)},
          {"c1_root_bracket", {to_string(L.c1_root_lo), to_string(L.c1_root_hi)}},
          {"box_faces", L.face_notes},
          {"slack", slack},
          {"certificates", certs}};
}

namespace {

Json manifest_body(const RunManifest& m) {
  return {{"subcommand", m.subcommand}, {"input_digests", m.input_digests}, {"seed", m.seed},
          {"tool_version", m.tool_version}, {"outputs", m.outputs}, {"parameters", m.parameters}};
}

}  // namespace

Json to_json(const RunManifest& m) {
  Json j = manifest_body(m);
  j["timestamp"] = m.timestamp;
  j["digest"] = manifest_digest(m);
  return j;
}

std::string manifest_digest(const RunManifest& m) { return sha256_hex(manifest_body(m).dump()); }

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace commonsys
