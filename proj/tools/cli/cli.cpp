#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "nlsg/axiom_suite.hpp"
#include "nlsg/errors.hpp"
#include "nlsg/parallel.hpp"
#include "nlsg/problem_spec.hpp"

namespace nlsg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string spec;
  std::string eps = "0.5,0.25,0.1";
  std::string claim = "plant_main";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  double t_max = 1.0;
  double delta = 1e-4;
  std::optional<int> per_decade;
  int steps = 20;
  std::optional<double> falsify;
  std::optional<double> escape_k;
};

std::vector<double> parse_eps(const std::string& list) {
  std::vector<double> eps;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--eps entry is not a number: " + item);
    }
    if (used != item.size() || !(v > 0.0) || !std::isfinite(v)) throw ConfigError("--eps entries must be positive: " + item);
    eps.push_back(v);
  }
  if (eps.empty()) throw ConfigError("--eps needs at least one value");
  return eps;
}

std::vector<Claim> parse_claims(const std::string& list) {
  if (list == "all") return all_claims();
  std::vector<Claim> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(claim_from_string(item));
  if (out.empty()) throw ConfigError("--claim needs a name");
  return out;
}

struct Context {
  ProblemSpec spec;
  Instance inst;
  SamplingPlan plan;
  fs::path out_dir;
  json header;
};

Context load(const Options& o, const std::string& command) {
  ProblemSpec spec = ProblemSpec::load(o.spec);
  Instance inst = spec.instance();
  Context c{std::move(spec), std::move(inst), {}, {}, {}};
  c.plan = c.spec.sampling;
  if (o.seed) c.plan.seed = *o.seed;
  if (o.per_decade) {
    if (*o.per_decade < 1) throw ConfigError("--grid-per-decade must be >= 1");
    c.plan.per_decade = *o.per_decade;
  }
  c.out_dir = o.out ? fs::path(*o.out) : fs::path(c.spec.outputs.dir);
  c.header = {{"command", command},
              {"spec", o.spec},
              {"seed", c.plan.seed},
              {"grid_per_decade", c.plan.per_decade},
              {"b", c.inst.b},
              {"n", c.inst.n},
              {"instance", c.inst.descriptor()}};
  return c;
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  f << content;
}

void emit(const Context& c, const std::string& stem, const std::string& csv, const json& doc) {
  if (c.spec.outputs.csv) write_file(c.out_dir, stem + ".csv", csv);
  if (c.spec.outputs.json) write_file(c.out_dir, stem + ".json", doc.dump(2) + "\n");
}

int certify_plant(const Options& o, std::ostream& out) {
  Context c = load(o, "certify plant");
  const auto eps = parse_eps(o.eps);
  c.header["eps"] = eps;
  const PlantParams p = plant_params(c.inst);
  std::ostringstream csv;
  csv << "eps,phi1,phi2,phi3,phi4,Phi\n";
  json rows = json::array();
  for (double e : eps) {
    const double v[] = {phi1(e, p), phi2(e, p), phi3(e, p), phi4(e, p), plant_threshold(e, p)};
    csv << format_number(e);
    for (double x : v) csv << ',' << format_number(x);
    csv << '\n';
    rows.push_back({{"eps", e}, {"phi1", v[0]}, {"phi2", v[1]}, {"phi3", v[2]}, {"phi4", v[3]}, {"Phi", v[4]}});
  }
  emit(c, c.spec.name + "_certify_plant", csv.str(), {{"header", c.header}, {"params", p.snapshot()}, {"rows", rows}});
  out << csv.str();
  return kOk;
}

int certify_reich(const Options& o, std::ostream& out) {
  Context c = load(o, "certify reich");
  const auto eps = parse_eps(o.eps);
  c.header["eps"] = eps;
  const ReichParams p = reich_params(c.inst);
  std::ostringstream csv;
  csv << "eps,phi_inf,phi2,Phi\n";
  json rows = json::array();
  for (double e : eps) {
    const double v[] = {phi_inf(e, p.b, p.range.f), phi2_reich(e, p), reich_threshold(e, p)};
    csv << format_number(e);
    for (double x : v) csv << ',' << format_number(x);
    csv << '\n';
    rows.push_back({{"eps", e}, {"phi_inf", v[0]}, {"phi2", v[1]}, {"Phi", v[2]}});
  }
  emit(c, c.spec.name + "_certify_reich", csv.str(), {{"header", c.header}, {"params", p.snapshot()}, {"rows", rows}});
  out << csv.str();
  return kOk;
}

int verify(const Options& o, std::ostream& out) {
  Context c = load(o, "verify");
  const auto eps = parse_eps(o.eps);
  const auto claims = parse_claims(o.claim);
  c.header["eps"] = eps;
  c.header["claim"] = o.claim;
  if (o.falsify) c.header["falsify"] = *o.falsify;
  if (o.escape_k) c.header["escape_k"] = *o.escape_k;

  std::optional<PlantParams> pp;
  std::optional<ReichParams> rp;
  json reports = json::array();
  std::ostringstream csv;
  csv << "claim,eps,threshold,direction,points,failures,pass,negative_control,kappa_effective,conservativeness_ratio\n";
  json skipped = json::array();
  bool ok = true;
  for (Claim claim : claims) {
    if (is_reich_claim(claim) && !rp) rp = reich_params(c.inst);
    const bool needs_D = claim == Claim::reich_escape || claim == Claim::reich_direction;
    if (needs_D && !rp->range.D) {
      // Only meaningful when d(0, ran A) > 0; an explicit request is a usage error.
      if (o.claim != "all") throw ConfigError(to_string(claim) + " needs d(0, ran A) > 0");
      skipped.push_back({{"claim", to_string(claim)}, {"reason", "d(0, ran A) = 0"}});
      continue;
    }
    for (double e : eps) {
      RateCertificate cert;
      if (is_reich_claim(claim)) {
        cert = reich_certificate(claim, e, *rp, o.escape_k.value_or(static_cast<double>(c.inst.b)));
      } else {
        if (!pp) pp = plant_params(c.inst);
        cert = plant_certificate(claim, e, *pp);
      }
      if (o.falsify) cert = falsify(cert, *o.falsify);
      VerificationReport r = verify_certificate(cert, c.inst, c.plan, c.spec.slack);
      r.negative_control = o.falsify.has_value();
      r.header["cli"] = c.header;
      if (!r.pass && !r.negative_control) ok = false;
      csv << r.claim << ',' << format_number(e) << ',' << format_number(cert.threshold) << ','
          << to_string(cert.direction) << ',' << r.samples.size() << ',' << r.failures() << ','
          << (r.pass ? "pass" : "fail") << ',' << (r.negative_control ? "yes" : "no") << ','
          << format_number(r.kappa_effective) << ','
          << (r.conservativeness_ratio ? format_number(*r.conservativeness_ratio) : std::string()) << '\n';
      reports.push_back(r.to_json());
    }
  }
  const json doc{{"header", c.header}, {"pass", ok}, {"skipped", skipped}, {"reports", reports}};
  emit(c, c.spec.name + "_verify", csv.str(), doc);
  out << doc.dump(2) << '\n';
  return ok ? kOk : kVerificationFailure;
}

int axioms(const Options& o, std::ostream& out) {
  Context c = load(o, "axioms");
  VerificationReport r = axiom_suite(c.inst.space, c.inst.op, c.plan);
  r.slack = c.spec.slack;
  r.header["cli"] = c.header;
  emit(c, c.spec.name + "_axioms", r.to_csv(), r.to_json());
  out << r.to_json().dump(2) << '\n';
  return r.pass ? kOk : kVerificationFailure;
}

int evolve(const Options& o, std::ostream& out) {
  if (!(o.t_max > 0.0) || !std::isfinite(o.t_max)) throw ConfigError("--t-max must be positive");
  if (!(o.delta > 0.0)) throw ConfigError("--delta must be positive");
  if (o.steps < 1) throw ConfigError("--steps must be >= 1");
  Context c = load(o, "evolve");
  c.header["t_max"] = o.t_max;
  c.header["delta"] = o.delta;
  c.header["steps"] = o.steps;
  const SemigroupEvaluator ev(c.inst.op, c.inst.space);
  const Vector& x = c.inst.x0;

  struct Row {
    double t;
    Vector point;
    std::uint64_t n_used;
    std::string route;
  };
  const auto rows = parallel_map(
      static_cast<std::size_t>(o.steps) + 1,
      [&](std::size_t i) -> Row {
        const double t = o.t_max * static_cast<double>(i) / o.steps;
        try {
          SemigroupValue v = ev.semigroup_eval_detailed(t, x, o.delta);
          return {t, std::move(v.point), v.n_used, t == 0.0 ? "exact" : "cl"};
        } catch (const BudgetExceeded&) {
          return {t, c.inst.op.exact_semigroup(t, x), 0, "closed_form"};
        }
      },
      c.plan.threads);

  std::ostringstream csv;
  csv << 't';
  for (Eigen::Index i = 0; i < x.size(); ++i) csv << ",x" << i + 1;
  csv << ",n_used,delta_requested,route\n";
  for (const auto& r : rows) {
    csv << format_number(r.t);
    for (Eigen::Index i = 0; i < r.point.size(); ++i) csv << ',' << format_number(r.point[i]);
    csv << ',' << r.n_used << ',' << format_number(o.delta) << ',' << r.route << '\n';
  }
  if (c.spec.outputs.csv) write_file(c.out_dir, c.spec.name + "_evolve.csv", csv.str());
  if (c.spec.outputs.json) write_file(c.out_dir, c.spec.name + "_evolve.json", json{{"header", c.header}}.dump(2) + "\n");
  out << csv.str();
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Nonlinear semigroups, rate certificates and their verification", "nlsg"};
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "Problem spec (JSON, version 1)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Sampling seed (overrides the spec file)");
    sub->add_option("--out", o.out, "Output directory (overrides the spec file)");
  };

  CLI::App* certify = app.add_subcommand("certify", "Print rate tables");
  certify->require_subcommand(1);
  CLI::App* plant = certify->add_subcommand("plant", "Small-t chain: eps, phi1..phi4, Phi");
  CLI::App* reich = certify->add_subcommand("reich", "Large-t chain: eps, phi_inf, phi2, Phi");
  for (CLI::App* sub : {plant, reich}) {
    add_common(sub);
    sub->add_option("--eps", o.eps, "Comma-separated eps values")->capture_default_str();
  }

  CLI::App* ver = app.add_subcommand("verify", "Verify certificates on the spec file instance");
  add_common(ver);
  ver->add_option("--eps", o.eps, "Comma-separated eps values")->capture_default_str();
  ver->add_option("--claim", o.claim, "Claim name, comma list or 'all'")->capture_default_str();
  ver->add_option("--grid-per-decade", o.per_decade, "Grid points per decade (overrides the spec file)");
  ver->add_option("--falsify", o.falsify, "Negative control: scale every threshold by this factor");
  ver->add_option("--escape-k", o.escape_k, "Norm level K for the escape claim (default b)");

  CLI::App* ax = app.add_subcommand("axioms", "Run the space, operator and semigroup axiom suite");
  add_common(ax);

  CLI::App* evo = app.add_subcommand("evolve", "Trajectory S(t)x0 on a uniform grid");
  add_common(evo);
  evo->add_option("--t-max", o.t_max, "Final time")->capture_default_str();
  evo->add_option("--delta", o.delta, "Accuracy per evaluation")->capture_default_str();
  evo->add_option("--steps", o.steps, "Grid intervals")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (plant->parsed()) return certify_plant(o, out);
    if (reich->parsed()) return certify_reich(o, out);
    if (ver->parsed()) return verify(o, out);
    if (ax->parsed()) return axioms(o, out);
    if (evo->parsed()) return evolve(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace nlsg::cli
