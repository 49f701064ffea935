#include "nlsg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <random>
#include <sstream>

#include "nlsg/errors.hpp"
#include "nlsg/parallel.hpp"

namespace nlsg {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

std::string fmt(double v) { return format_number(v); }

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

// Rounding-level error of a closed-form or resolvent quotient of size `scale`.
double rounding_budget(double scale) { return 64.0 * kUlp * (1.0 + scale); }

Sample make_sample(std::string label, double t, double observed, double bound, std::string route, double budget) {
  Sample s;
  s.label = std::move(label);
  s.t = t;
  s.observed = observed;
  s.bound = bound;
  s.pass = std::isfinite(observed) && observed <= bound;
  s.route = std::move(route);
  s.budget = budget;
  return s;
}

Sample error_sample(std::string label, double t, const std::exception& e) {
  Sample s;
  s.label = std::move(label);
  s.t = t;
  s.observed = std::numeric_limits<double>::quiet_NaN();
  s.bound = 0.0;
  s.pass = false;
  s.route = std::string("error: ") + e.what();
  return s;
}

double yosida_budget(const SemigroupEvaluator& ev, const Vector& x) {
  const double L = ev.op().lipschitz_bound(ev.space(), ev.space().norm(x) + 1.0);
  return L * ev.resolvent_tol() * std::max(1.0, x.norm()) * ev.residual_conditioning();
}

QuantityValue closed_form_quantity(const SemigroupEvaluator& ev, const Vector& x, double t) {
  const Vector yos = ev.op().yosida(t, x, ev.resolvent_tol());
  const Vector q = ev.op().exact_semigroup_quotient(t, x);
  const double value = ev.space().norm(yos - q);
  return {value, "closed_form", rounding_budget(ev.space().norm(q)) + yosida_budget(ev, x)};
}

// Graph points (x0, A x0) with both norms at most b.
std::vector<std::pair<Vector, Vector>> bounded_graph_points(const Instance& inst, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  std::vector<std::pair<Vector, Vector>> pts;
  const int d = inst.space.dimension();
  double radius = inst.b;
  for (int tries = 0; static_cast<int>(pts.size()) < count && tries < 100 * count; ++tries) {
    Vector w(d);
    for (int i = 0; i < d; ++i) w[i] = gauss(rng);
    const double nw = inst.space.norm(w);
    if (nw == 0.0) continue;
    const Vector x0 = (radius * unit(rng) / nw) * w;
    const Vector y0 = inst.op.apply(x0);
    if (inst.space.norm(y0) <= inst.b && inst.space.norm(x0) <= inst.b) {
      pts.emplace_back(x0, y0);
    } else {
      radius *= 0.9;
    }
  }
  pts.emplace_back(inst.x0, inst.op.apply(inst.x0));
  return pts;
}

void check_snapshot(const RateCertificate& cert, const Instance& inst) {
  inst.validate();
  const auto& p = cert.params;
  if (!p.contains("b") || p.at("b").get<int>() != inst.b) {
    throw DomainError("certificate parameter b does not match the instance");
  }
  if (!is_reich_claim(cert.claim) && (!p.contains("n") || p.at("n").get<int>() != inst.n)) {
    throw DomainError("certificate parameter n does not match the instance");
  }
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

nlohmann::json SamplingPlan::to_json() const {
  return {{"kind", kind == GridKind::geometric ? "geometric" : "uniform"},
          {"per_decade", per_decade},
          {"decades_below", decades_below},
          {"above_factor", above_factor},
          {"seed", seed},
          {"samples", samples}};
}

std::vector<double> below_grid(double threshold, const SamplingPlan& plan) {
  if (!(threshold > 0.0)) throw DomainError("grid threshold must be positive");
  const int count = std::max(1, static_cast<int>(std::lround(plan.decades_below * plan.per_decade)));
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(count));
  if (plan.kind == GridKind::geometric) {
    for (int i = 0; i < count; ++i) ts.push_back(threshold * std::pow(10.0, -static_cast<double>(i) / plan.per_decade));
  } else {
    for (int i = 0; i < count; ++i) ts.push_back(threshold * (count - i) / count);
  }
  return ts;
}

std::vector<double> above_grid(double threshold, const SamplingPlan& plan) {
  threshold = std::max(threshold, std::numeric_limits<double>::min());
  const double top = threshold * plan.above_factor;
  std::vector<double> ts;
  if (plan.kind == GridKind::geometric) {
    for (int i = 0;; ++i) {
      const double t = threshold * std::pow(10.0, static_cast<double>(i) / plan.per_decade);
      if (t >= top) break;
      ts.push_back(t);
    }
  } else {
    const int count = std::max(2, static_cast<int>(std::lround(std::log10(plan.above_factor) * plan.per_decade)));
    for (int i = 0; i < count; ++i) ts.push_back(threshold + (top - threshold) * i / count);
  }
  ts.push_back(top);
  return ts;
}

void VerificationReport::finalize() {
  pass = !samples.empty() &&
         std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.pass; });
  kappa_effective = slack.kappa;
  for (const auto& s : samples) kappa_effective = std::max(kappa_effective, s.budget);
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const Sample& s) { return !s.pass; }));
}

nlohmann::json VerificationReport::to_json() const {
  auto rows = nlohmann::json::array();
  for (const auto& s : samples) {
    rows.push_back({{"label", s.label},
                    {"t", finite_or_null(s.t)},
                    {"s", finite_or_null(s.s)},
                    {"observed", finite_or_null(s.observed)},
                    {"bound", s.bound},
                    {"pass", s.pass},
                    {"route", s.route},
                    {"budget", s.budget},
                    {"trials", s.trials}});
  }
  nlohmann::json j{{"claim", claim},
                   {"header", header},
                   {"instance", instance},
                   {"grid", grid},
                   {"slack", {{"sigma", slack.sigma}, {"kappa", slack.kappa}, {"kappa_effective", kappa_effective}}},
                   {"negative_control", negative_control},
                   {"pass", pass},
                   {"failures", failures()},
                   {"samples", rows},
                   {"conservativeness_ratio", nullptr}};
  if (conservativeness_ratio) j["conservativeness_ratio"] = finite_or_null(*conservativeness_ratio);
  return j;
}

std::string VerificationReport::to_csv() const {
  std::ostringstream out;
  out << "label,t,s,observed,bound,pass,route,budget,trials\n";
  for (const auto& s : samples) {
    std::string route = s.route;
    std::replace(route.begin(), route.end(), ',', ';');
    out << s.label << ',' << fmt(s.t) << ',' << fmt(s.s) << ',' << fmt(s.observed) << ',' << fmt(s.bound) << ','
        << (s.pass ? "pass" : "fail") << ',' << route << ',' << fmt(s.budget) << ',' << s.trials << '\n';
  }
  return out.str();
}

SemigroupQuotient semigroup_quotient(const SemigroupEvaluator& ev, double t, const Vector& x, double delta) {
  SemigroupQuotient out;
  if (t == 0.0) {
    out.point = x;
    out.quotient = ev.op().apply(x);
    out.route = "exact";
    return out;
  }
  try {
    SemigroupValue v = ev.semigroup_eval_detailed(t, x, delta);
    out.point = std::move(v.point);
    out.quotient = std::move(v.quotient);
    out.route = v.n_used <= 1 ? "exact" : "cl";
    // The mean of A(J^{i+1}x) equals (x - J^n x)/t; J^n x is within delta/2 of S(t)x.
    out.budget = (v.n_used <= 1 ? 0.0 : delta / (2.0 * t)) + v.quotient_drift +
                 rounding_budget(ev.space().norm(out.quotient));
    return out;
  } catch (const BudgetExceeded&) {
    out.point = ev.op().exact_semigroup(t, x);
    out.quotient = ev.op().exact_semigroup_quotient(t, x);
    out.route = "closed_form";
    out.budget = rounding_budget(ev.space().norm(out.quotient));
    return out;
  }
}

QuantityValue plant_quantity(const SemigroupEvaluator& ev, const Vector& x, double t, double delta) {
  const Vector yos = ev.op().yosida(t, x, ev.resolvent_tol());
  const SemigroupQuotient sq = semigroup_quotient(ev, t, x, delta);
  return {ev.space().norm(yos - sq.quotient), sq.route, sq.budget + yosida_budget(ev, x)};
}

RateCertificate falsify(const RateCertificate& cert, double factor) {
  RateCertificate out = cert;
  out.threshold = cert.direction == Direction::all_t_below ? cert.threshold * factor : cert.threshold / factor;
  out.params["falsified_by"] = factor;
  return out;
}

VerificationReport verify_certificate(const RateCertificate& cert, const Instance& inst, const SamplingPlan& plan,
                                      const Slack& slack) {
  check_snapshot(cert, inst);
  const SemigroupEvaluator ev(inst.op, inst.space);
  const Space& sp = inst.space;
  const Operator& op = inst.op;
  const Vector& x = inst.x0;
  const double eps = cert.epsilon;
  const double bound = slack.bound(eps);

  const auto ts = cert.direction == Direction::all_t_below ? below_grid(cert.threshold, plan)
                                                           : above_grid(cert.threshold, plan);

  std::vector<std::pair<Vector, Vector>> graph_pts;
  if (cert.claim == Claim::miyadera) graph_pts = bounded_graph_points(inst, 8, plan.seed);
  std::optional<ReichParams> rp;
  if (is_reich_claim(cert.claim)) rp = reich_params(inst);

  const double bracket = op.bracket_norm(sp, x);
  const auto delta_for = [&](double t) { return std::min(slack.kappa, eps * t) / 4.0; };
  const auto yosida = [&](double t) { return op.yosida(t, x, ev.resolvent_tol()); };
  const auto jt = [&](double t) { return op.resolvent(t, x, ev.resolvent_tol()); };

  auto evaluate = [&](std::size_t i) -> Sample {
    const double t = ts[i];
    const std::string label = to_string(cert.claim);
    try {
      switch (cert.claim) {
        case Claim::resolvent_roc:
          return make_sample(label, t, bracket - sp.norm(yosida(t)), bound, "resolvent", yosida_budget(ev, x));
        case Claim::miyadera: {
          const SemigroupQuotient sq = semigroup_quotient(ev, t, x, delta_for(t));
          double worst = -std::numeric_limits<double>::infinity();
          for (const auto& [x0, y0] : graph_pts) {
            const double lhs = sp.semi_inner(-sq.quotient, x - x0);
            const double rhs = sp.semi_inner(y0, x0 - x);
            worst = std::max(worst, lhs - rhs);
          }
          return make_sample(label, t, worst, bound, sq.route, sq.budget * (sp.norm(x) + inst.b));
        }
        case Claim::semigroup_roc: {
          const SemigroupQuotient sq = semigroup_quotient(ev, t, x, delta_for(t));
          return make_sample(label, t, bracket - sp.norm(sq.quotient), bound, sq.route, sq.budget);
        }
        case Claim::res_cauchy: {
          const Vector at = yosida(t);
          double worst = 0.0;
          double worst_s = t;
          for (double r : {0.5, 0.1, 1e-3}) {
            const double v = sp.norm(at - yosida(r * t));
            if (v >= worst) {
              worst = v;
              worst_s = r * t;
            }
          }
          Sample smp = make_sample(label, t, worst, bound, "resolvent", 2.0 * yosida_budget(ev, x));
          smp.s = worst_s;
          return smp;
        }
        case Claim::res_semi_comb: {
          const Vector at = yosida(t);
          double worst = 0.0;
          double worst_s = t;
          double budget = 0.0;
          std::string route;
          for (double r : {1.0, 0.1, 0.01}) {
            const double s = r * cert.threshold * t;
            const SemigroupQuotient sq = semigroup_quotient(ev, s, x, delta_for(s));
            const double v = sp.norm(at - sq.quotient);
            budget = std::max(budget, sq.budget);
            if (v >= worst) {
              worst = v;
              worst_s = s;
              route = sq.route;
            }
          }
          Sample smp = make_sample(label, t, worst, bound, route, budget + yosida_budget(ev, x));
          smp.s = worst_s;
          return smp;
        }
        case Claim::plant_main:
        case Claim::reich_main: {
          const QuantityValue q = plant_quantity(ev, x, t, delta_for(t));
          return make_sample(label, t, q.value, bound, q.route, q.budget);
        }
        case Claim::reich_resolvent_roc: {
          const double v = std::abs(sp.norm(jt(t)) / t - rp->range.d_inf);
          return make_sample(label, t, v, bound, "resolvent", rounding_budget(sp.norm(x)));
        }
        case Claim::reich_escape: {
          const double K = cert.params.value("K", 0.0);
          return make_sample(label, t, K - sp.norm(jt(t)), slack.kappa, "resolvent", rounding_budget(t));
        }
        case Claim::reich_direction: {
          const double D = *rp->range.D;
          const auto w = rp->range.witness(2.0 * D * rp->eta(std::min(eps / 2.0, 2.0)));
          const Vector j = jt(t);
          const double v = sp.norm(w.second / sp.norm(w.second) + j / sp.norm(j));
          return make_sample(label, t, v, bound, "resolvent", rounding_budget(1.0));
        }
        case Claim::reich_cauchy: {
          const Vector jtt = jt(t) / t;
          double worst = 0.0;
          double worst_s = t;
          for (double r : {2.0, 8.0, 64.0}) {
            const double v = sp.norm(jt(r * t) / (r * t) - jtt);
            if (v >= worst) {
              worst = v;
              worst_s = r * t;
            }
          }
          Sample smp = make_sample(label, t, worst, bound, "resolvent", rounding_budget(sp.norm(jtt)));
          smp.s = worst_s;
          return smp;
        }
      }
      throw DomainError("unhandled claim");
    } catch (const Error& e) {
      return error_sample(label, t, e);
    }
  };

  VerificationReport report;
  report.claim = to_string(cert.claim);
  report.instance = inst.descriptor();
  report.slack = slack;
  report.grid = plan.to_json();
  report.grid["direction"] = to_string(cert.direction);
  report.grid["threshold"] = cert.threshold;
  report.grid["epsilon"] = eps;
  report.grid["points"] = ts.size();
  report.header = {{"certificate", cert.to_json()}};
  report.samples = parallel_map(ts.size(), evaluate, plan.threads);
  report.finalize();

  if (cert.claim == Claim::plant_main || cert.claim == Claim::reich_main) {
    const auto q = cert.claim == Claim::plant_main ? QuantityId::plant : QuantityId::reich;
    const auto et = empirical_threshold(inst, q, eps, cert.direction, plan);
    if (et.status == ThresholdStatus::found) {
      report.conservativeness_ratio =
          cert.direction == Direction::all_t_below ? et.t_star / cert.threshold : cert.threshold / et.t_star;
    }
    report.header["empirical_threshold"] = {{"status", to_string(et.status)}, {"t_star", finite_or_null(et.t_star)}};
  }
  return report;
}

std::string to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::found: return "found";
    case ThresholdStatus::always_below: return "always_below";
    case ThresholdStatus::never_below: break;
  }
  return "never_below";
}

EmpiricalThreshold empirical_threshold(const Instance& inst, QuantityId, double eps, Direction direction,
                                       const SamplingPlan& plan, double t_lo, double t_hi) {
  if (!(eps > 0.0)) throw DomainError("empirical threshold needs eps > 0");
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("empirical threshold needs 0 < t_lo < t_hi");
  // Both quantities are ||J_t x - S(t)x|| / t; only the side of t* differs.
  const SemigroupEvaluator ev(inst.op, inst.space);
  const auto q = [&](double t) { return closed_form_quantity(ev, inst.x0, t).value; };
  const auto ok = [&](double t) { return q(t) <= eps; };

  std::vector<double> grid;
  const double decades = std::log10(t_hi / t_lo);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * plan.per_decade)) + 1);
  for (int i = 0; i < count; ++i) grid.push_back(t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (count - 1)));
  if (direction == Direction::all_t_above) std::reverse(grid.begin(), grid.end());

  EmpiricalThreshold out;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  std::size_t bad = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!ok(grid[i])) {
      bad = i;
      break;
    }
  }
  if (bad == grid.size()) {
    out.status = ThresholdStatus::always_below;
    out.t_star = direction == Direction::all_t_below ? t_hi : t_lo;
    return out;
  }
  if (bad == 0) {
    out.status = ThresholdStatus::never_below;
    out.t_star = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double good_t = grid[bad - 1];
  double bad_t = grid[bad];
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(good_t * bad_t);
    if (mid == good_t || mid == bad_t) break;
    if (ok(mid)) good_t = mid; else bad_t = mid;
  }
  out.status = ThresholdStatus::found;
  out.t_star = good_t;
  return out;
}

VerificationReport clarkson_integral_check(const Instance& inst, const Vector& x, double lambda, double t,
                                           const SamplingPlan& plan, const Slack& slack, int nodes) {
  if (!(lambda > 0.0) || !(t >= 0.0)) throw DomainError("Clarkson integral check needs lambda > 0, t >= 0");
  if (nodes < 5 || nodes % 2 == 0) throw DomainError("Simpson rule needs an odd node count >= 5");
  const Space& sp = inst.space;
  const Operator& op = inst.op;
  const Vector jl = op.resolvent(lambda, x);

  // S(s) via the closed form: matching delta to the quadrature error with CL would
  // need far more steps than the step cap allows.
  std::vector<double> f(static_cast<std::size_t>(nodes));
  const double h = t / (nodes - 1);
  for (int i = 0; i < nodes; ++i) {
    const double s = h * i;
    f[static_cast<std::size_t>(i)] = s * sp.norm(op.exact_semigroup_quotient(s, x));
  }
  const auto simpson = [&](int stride) {
    const int m = (nodes - 1) / stride;
    const double hh = h * stride;
    double acc = f.front() + f.back();
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[static_cast<std::size_t>(i * stride)];
    return acc * hh / 3.0;
  };
  const double fine = simpson(1);
  const double quad_err = ((nodes - 1) % 4 == 0) ? std::abs(fine - simpson(2)) / 15.0 : 0.0;
  const double lhs = sp.norm(jl - op.exact_semigroup(t, x));
  const double rhs = (1.0 - t / lambda) * sp.norm(x - jl) + (2.0 / lambda) * fine;
  const double quad_budget = (2.0 / lambda) * quad_err;
  if (quad_budget > 0.01 * (std::abs(rhs) + slack.kappa)) {
    throw BudgetExceeded("quadrature error too large for the Clarkson integral check", static_cast<std::uint64_t>(nodes));
  }

  VerificationReport report;
  report.claim = "clarkson_integral";
  report.instance = inst.descriptor();
  report.slack = slack;
  report.grid = plan.to_json();
  report.grid["nodes"] = nodes;
  report.grid["lambda"] = lambda;
  Sample smp = make_sample("clarkson_integral", t, lhs, rhs + slack.sigma * std::abs(rhs) + slack.kappa + quad_budget,
                           "closed_form", quad_budget + rounding_budget(sp.norm(x)));
  smp.s = lambda;
  report.samples.push_back(smp);
  report.finalize();
  return report;
}

}  // namespace nlsg
