#include "hppa/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

using json = nlohmann::json;

void append_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

json point_json(const Point& p) { return coordinates(p); }

json real_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json certificate_json(const Certificate& c) {
  json j;
  j["pass"] = c.pass;
  j["fejer_skipped"] = c.fejer_skipped;
  json fejer = json::array();
  for (const auto& r : c.fejer) {
    fejer.push_back({{"p", point_json(r.p)},
                     {"max_increment", real_json(r.max_increment)},
                     {"worst_n", r.worst_index},
                     {"fitted_scale", r.fitted_scale},
                     {"sum_b", r.sum_b},
                     {"sum_c", r.sum_c},
                     {"sum_b_bound", real_json(r.sum_b_bound)},
                     {"sum_c_bound", real_json(r.sum_c_bound)},
                     {"feasible", r.feasible},
                     {"tail_oscillation", r.tail_oscillation},
                     {"limit_exists", r.limit_exists},
                     {"pass", r.pass}});
  }
  j["fejer"] = fejer;
  j["residual"] = {{"final_d_xz", c.final_d_xz}, {"final_max_d_tx", c.final_max_d_tx}, {"pass", c.residual_pass}};
  j["dist_to_solution"] = {{"final", c.dist_series.empty() ? 0.0 : c.dist_series.back()}, {"pass", c.dist_pass}};
  json windows = json::array();
  for (const auto& w : c.windows) {
    windows.push_back({{"first_n", w.first_n},
                       {"last_n", w.last_n},
                       {"center", point_json(w.estimate.center)},
                       {"radius", w.estimate.radius}});
  }
  j["asymptotic_center"] = {{"windows", windows},
                            {"error_to_limit", c.center_error},
                            {"window_separation", c.window_separation},
                            {"pass", c.center_pass}};
  if (c.condition_i) {
    j["condition_i"] = {{"pass", c.condition_i->pass},
                        {"kappa", real_json(c.condition_i->kappa)},
                        {"violating_n", c.condition_i->violating_n ? json(*c.condition_i->violating_n) : json()}};
  }
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

std::string result_status_name(ResultStatus s) {
  switch (s) {
    case ResultStatus::Converged: return "converged";
    case ResultStatus::Unconverged: return "unconverged";
    case ResultStatus::Error: return "error";
  }
  return "error";
}

std::string trace_csv(const Space& space, const Trace& trace) {
  std::string out = "n,residual,d_xz";
  for (std::size_t i = 1; i <= trace.mapping_count; ++i) out += ",d_T" + std::to_string(i) + "x_x";
  out += ",f_x,f_z,alpha_n,k_n";
  for (const auto& name : coordinate_names(space)) out += "," + name;
  out += "\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.n);
    for (double v : {r.residual, r.d_xz}) {
      out += ',';
      append_real(out, v);
    }
    for (double v : r.d_tx) {
      out += ',';
      append_real(out, v);
    }
    for (double v : {r.f_x, r.f_z, r.alpha, r.k}) {
      out += ',';
      append_real(out, v);
    }
    for (double v : coordinates(r.x)) {
      out += ',';
      append_real(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string summary_json(const ExperimentConfig& cfg, const ScenarioResult& result) {
  json j;
  j["scenario"] = result.scenario;
  j["status"] = result_status_name(result.status);
  if (!result.error.empty()) j["error"] = result.error;
  j["seed"] = cfg.seed;
  j["iterations"] = result.iterations;
  j["final_residual"] = real_json(result.final_residual);
  j["final_iterate"] = result.final_iterate ? point_json(*result.final_iterate) : json();
  j["wall_seconds"] = result.wall_seconds;
  j["config"] = serialize_config(cfg);
  j["certificate"] = result.certificate ? certificate_json(*result.certificate) : json();
  if (!result.trace_path.empty()) j["trace"] = result.trace_path;
  return j.dump(2) + "\n";
}

ScenarioResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  result.scenario = cfg.scenario;
  std::optional<Space> space;
  try {
    const Scenario sc = make_scenario(cfg.scenario, cfg.dimension);
    space = sc.space;
    Rng rng(cfg.seed);
    const Point x1 = cfg.start == StartRule::Canonical ? sc.canonical_start : sc.random_start(rng);
    result.trace = run(sc.space, sc.objective, sc.family, cfg.schedule, x1, cfg.stopping, cfg.prox);
    const auto& last = result.trace.records.back();
    result.final_iterate = last.x;
    result.final_residual = last.residual;
    result.iterations = static_cast<int>(result.trace.records.size());
    result.status =
        result.trace.status == RunStatus::Converged ? ResultStatus::Converged : ResultStatus::Unconverged;
    CertificateOptions opts;
    opts.required_kappa = sc.required_kappa;
    result.certificate = certify(sc.space, result.trace, sc.family, sc.solution_set, opts);
  } catch (const std::exception& e) {
    result.status = ResultStatus::Error;
    result.error = e.what();
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    if (space && !result.trace.records.empty()) {
      result.trace_path = (dir / (cfg.scenario + ".trace.csv")).string();
      write_file(result.trace_path, trace_csv(*space, result.trace));
    }
    result.summary_path = (dir / (cfg.scenario + ".summary.json")).string();
    write_file(result.summary_path, summary_json(cfg, result));
  }
  return result;
}

std::vector<ScenarioResult> run_experiments(const std::vector<ExperimentConfig>& cfgs, unsigned threads) {
  std::vector<ScenarioResult> results(cfgs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cfgs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) results[i] = run_experiment(cfgs[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

bool CheckReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
}

CheckReport check_scenario(const std::string& name, std::uint64_t seed, int samples) {
  const Scenario sc = make_scenario(name);
  const Space& X = sc.space;
  const auto& f = sc.objective;
  Rng rng(seed);
  CheckReport report;
  report.scenario = name;
  auto add = [&](std::string label, double value, double threshold) {
    report.items.push_back({std::move(label), value <= threshold, value, threshold});
  };
  const double neg_inf = -std::numeric_limits<double>::infinity();

  std::vector<Point> xs;
  std::vector<Point> ys;
  for (int i = 0; i < samples; ++i) {
    xs.push_back(sc.sample_domain(rng));
    ys.push_back(sc.sample_domain(rng));
  }

  double convexity = neg_inf;
  for (int i = 0; i < samples; ++i) {
    const double t = rng.uniform();
    const double fx = f(xs[i]);
    const double fy = f(ys[i]);
    if (!std::isfinite(fx) || !std::isfinite(fy)) continue;
    const double lhs = f(combine(X, xs[i], ys[i], t));
    convexity = std::max(convexity, (lhs - ((1 - t) * fx + t * fy)) / (1.0 + std::abs(fx) + std::abs(fy)));
  }
  add("objective convex along geodesics", convexity, 1e-9);

  ResolventConfig prox;
  double nonexp = neg_inf;
  double descent = neg_inf;
  double subdiff = neg_inf;
  double identity = neg_inf;
  const int prox_samples = std::min(samples, 50);
  for (int i = 0; i < prox_samples; ++i) {
    prox.k = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const Point jx = resolvent(X, f, prox, xs[i]);
    const Point jy = resolvent(X, f, prox, ys[i]);
    nonexp = std::max(nonexp, distance(X, jx, jy) - distance(X, xs[i], ys[i]));
    const double djx = distance(X, jx, xs[i]);
    descent = std::max(descent, f(jx) + djx * djx / (2 * prox.k) - f(xs[i]));
    for (int j = 0; j < 10; ++j) {
      const Point& y = ys[(i + j) % ys.size()];
      if (std::isfinite(f(y))) subdiff = std::max(subdiff, subdiff_inequality_residual(X, f, prox.k, xs[i], y, jx));
    }
    const double eta = prox.k * rng.uniform(0.05, 0.95);
    identity = std::max(identity, resolvent_identity_residual(X, f, prox.k, eta, xs[i], prox));
  }
  add("resolvent nonexpansive", nonexp, 1e-8);
  add("resolvent descent property", descent, 1e-9);
  add("subdifferential inequality", subdiff, 1e-6);
  add("resolvent identity", identity, 1e-6);

  double fixed_min = 0.0;
  for (const auto& p : f.minimizers) {
    for (double k : {0.1, 1.0, 10.0}) {
      prox.k = k;
      fixed_min = std::max(fixed_min, distance(X, resolvent(X, f, prox, p), p));
    }
  }
  add("minimizers fixed by J_k", fixed_min, 1e-8);

  for (std::size_t m = 0; m < sc.family.size(); ++m) {
    const auto& T = sc.family[m];
    const std::string tag = "T" + std::to_string(m + 1) + " (" + T.name + ")";
    std::vector<std::pair<Point, Point>> pairs;
    for (int i = 0; i < samples; ++i) pairs.emplace_back(xs[i], ys[i]);
    double tan = neg_inf;
    for (int n = 1; n <= 20; ++n) tan = std::max(tan, tan_violation(X, T, n, pairs));
    add(tag + " total asymptotic nonexpansiveness", tan, 1e-9);

    double fixed = 0.0;
    for (const auto& p : T.fixed_points) fixed = std::max(fixed, distance(X, apply(X, T, p), p));
    add(tag + " declared fixed points", fixed, 1e-10);

    double outside = 0.0;
    if (T.domain) {
      for (const auto& x : xs) outside += T.domain(apply(X, T, x)) ? 0.0 : 1.0;
    }
    add(tag + " maps the domain into itself", outside, 0.0);

    if (T.continuity_modulus) {
      const double L = *T.continuity_modulus;
      double modulus = neg_inf;
      for (int i = 0; i < samples; ++i) {
        const double d = distance(X, xs[i], ys[i]);
        if (d == 0.0) continue;
        const Point near = combine(X, xs[i], ys[i], std::min(1.0, 1e-2 / d));
        const double dd = distance(X, xs[i], near);
        modulus = std::max(modulus, distance(X, apply(X, T, xs[i]), apply(X, T, near)) - L * dd);
      }
      add(tag + " continuity modulus", modulus, 1e-9);
    }
  }

  ExperimentConfig cfg;
  cfg.scenario = name;
  cfg.seed = seed;
  const ScenarioResult run_result = run_experiment(cfg);
  const bool ok = run_result.status == ResultStatus::Converged && run_result.certificate &&
                  run_result.certificate->pass;
  report.items.push_back({"default run converges and certifies", ok, run_result.final_residual, cfg.stopping.tol});
  return report;
}

}  // namespace hppa
