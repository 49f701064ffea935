#include "nlsg/problem_spec.hpp"

#include <fstream>
#include <initializer_list>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown field in " + where + ": " + key);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

SamplingPlan plan_from_json(const json& j) {
  reject_unknown(j, {"kind", "per_decade", "decades_below", "above_factor", "seed", "samples", "threads"}, "sampling");
  SamplingPlan p;
  if (j.contains("kind")) {
    const auto k = j.at("kind").get<std::string>();
    if (k == "geometric") p.kind = GridKind::geometric;
    else if (k == "uniform") p.kind = GridKind::uniform;
    else throw ConfigError("unknown grid kind: " + k);
  }
  read(j, "per_decade", p.per_decade);
  read(j, "decades_below", p.decades_below);
  read(j, "above_factor", p.above_factor);
  read(j, "seed", p.seed);
  read(j, "samples", p.samples);
  read(j, "threads", p.threads);
  if (p.per_decade < 1) throw ConfigError("sampling.per_decade must be >= 1");
  if (!(p.decades_below > 0.0)) throw ConfigError("sampling.decades_below must be positive");
  if (!(p.above_factor > 1.0)) throw ConfigError("sampling.above_factor must exceed 1");
  if (p.samples < 1) throw ConfigError("sampling.samples must be >= 1");
  return p;
}

}  // namespace

ProblemSpec ProblemSpec::from_json(const json& j) {
  try {
    reject_unknown(j,
                   {"version", "name", "space", "operator", "x0", "rates", "auto_raise_b", "sampling", "slack",
                    "outputs"},
                   "spec");
    if (!j.contains("version")) throw ConfigError("spec needs \"version\": 1");
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kVersion) {
      throw ConfigError("unsupported spec version (expected 1)");
    }
    for (const char* req : {"space", "operator", "x0"}) {
      if (!j.contains(req)) throw ConfigError(std::string("spec needs \"") + req + "\"");
    }
    ProblemSpec s;
    read(j, "name", s.name);
    s.space = j.at("space");
    s.op = j.at("operator");
    const auto& x = j.at("x0");
    if (!x.is_array() || x.empty()) throw ConfigError("x0 must be a non-empty array");
    s.x0.resize(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) s.x0[static_cast<Eigen::Index>(i)] = x[i].get<double>();
    if (j.contains("rates")) {
      const auto& r = j.at("rates");
      reject_unknown(r, {"b", "n", "E", "D", "lambda0"}, "rates");
      read(r, "b", s.b);
      read(r, "n", s.n);
      read(r, "E", s.E);
      read(r, "D", s.D);
      read(r, "lambda0", s.lambda0);
    }
    read(j, "auto_raise_b", s.auto_raise_b);
    if (j.contains("sampling")) s.sampling = plan_from_json(j.at("sampling"));
    if (j.contains("slack")) {
      const auto& sl = j.at("slack");
      reject_unknown(sl, {"sigma", "kappa"}, "slack");
      read(sl, "sigma", s.slack.sigma);
      read(sl, "kappa", s.slack.kappa);
      if (!(s.slack.sigma >= 0.0) || !(s.slack.kappa >= 0.0)) throw ConfigError("slack must be non-negative");
    }
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      reject_unknown(o, {"dir", "csv", "json"}, "outputs");
      read(o, "dir", s.outputs.dir);
      read(o, "csv", s.outputs.csv);
      read(o, "json", s.outputs.json);
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed spec: ") + e.what());
  }
}

ProblemSpec ProblemSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("spec file is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

json ProblemSpec::to_json() const {
  json x = json::array();
  for (Eigen::Index i = 0; i < x0.size(); ++i) x.push_back(x0[i]);
  json rates = json::object();
  if (b) rates["b"] = *b;
  if (n) rates["n"] = *n;
  if (E) rates["E"] = *E;
  if (D) rates["D"] = *D;
  if (lambda0) rates["lambda0"] = *lambda0;
  json sampling = this->sampling.to_json();
  sampling["threads"] = this->sampling.threads;
  return {{"version", kVersion},
          {"name", name},
          {"space", space},
          {"operator", op},
          {"x0", x},
          {"rates", rates},
          {"auto_raise_b", auto_raise_b},
          {"sampling", sampling},
          {"slack", {{"sigma", slack.sigma}, {"kappa", slack.kappa}}},
          {"outputs", {{"dir", outputs.dir}, {"csv", outputs.csv}, {"json", outputs.json}}}};
}

Instance ProblemSpec::instance() const {
  Operator A = Operator::from_descriptor(op);
  if (lambda0) {
    try {
      A = A.with_lambda0(*lambda0);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  Space S = Space::from_descriptor(space, A.dimension());
  if (x0.size() != A.dimension()) throw ConfigError("x0 dimension does not match the operator");
  Instance inst = make_instance(name, std::move(S), std::move(A), x0);
  if (b) {
    if (*b < inst.b && !auto_raise_b) {
      throw ConfigError("rates.b = " + std::to_string(*b) + " is below max{||x0||, ||A x0||}; need b >= " +
                        std::to_string(inst.b) + " or auto_raise_b");
    }
    inst.b = std::max(*b, inst.b);
  }
  if (n) inst.n = *n;
  inst.E = E;
  inst.D = D;
  inst.validate();
  return inst;
}

}  // namespace nlsg
