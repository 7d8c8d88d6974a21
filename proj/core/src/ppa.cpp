#include "hppa/ppa.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void require_alpha(int n, double alpha, double a, double b) {
  if (!(alpha >= a && alpha <= b)) {
    throw ConfigError(ConfigError::Kind::Constraint, "alpha",
                      "α_" + std::to_string(n) + " = " + fmt(alpha) +
                          " violates a ≤ α_n ≤ b < 1 (a = " + fmt(a) + ", b = " + fmt(b) + ")");
  }
}

}  // namespace

double Schedule::alpha_at(int n) const {
  if (n < 1) throw DomainError("schedule is indexed from n = 1");
  switch (alpha_rule) {
    case AlphaRule::Constant: return alpha;
    case AlphaRule::Alternating: return n % 2 == 1 ? a : b;
    case AlphaRule::Decay: return a + (b - a) / n;
    case AlphaRule::Custom:
      if (!custom_alpha) throw ConfigError(ConfigError::Kind::Constraint, "alpha_rule", "custom rule has no function");
      return custom_alpha(n);
  }
  return alpha;
}

double Schedule::k_at(int n) const {
  if (n < 1) throw DomainError("schedule is indexed from n = 1");
  return k_rule == KRule::Constant ? k0 : k0 * (1.0 + 1.0 / n);
}

void Schedule::validate() const {
  using K = ConfigError::Kind;
  if (!(a > 0.0)) throw ConfigError(K::Constraint, "a", "need 0 < a ≤ α_n, got a = " + fmt(a));
  if (!(b < 1.0)) throw ConfigError(K::Constraint, "b", "need α_n ≤ b < 1, got b = " + fmt(b));
  if (!(a <= b)) {
    throw ConfigError(K::Constraint, "a", "need a ≤ b, got a = " + fmt(a) + ", b = " + fmt(b));
  }
  if (!(k0 > 0.0) || !std::isfinite(k0)) {
    throw ConfigError(K::Constraint, "k0", "need k_n ≥ k0 > 0, got k0 = " + fmt(k0));
  }
  if (alpha_rule == AlphaRule::Constant) require_alpha(1, alpha, a, b);
  if (alpha_rule == AlphaRule::Custom && !custom_alpha) {
    throw ConfigError(K::Constraint, "alpha_rule", "custom rule has no function");
  }
}

std::string alpha_rule_name(Schedule::AlphaRule rule) {
  switch (rule) {
    case Schedule::AlphaRule::Constant: return "constant";
    case Schedule::AlphaRule::Alternating: return "alternating";
    case Schedule::AlphaRule::Decay: return "decay";
    case Schedule::AlphaRule::Custom: return "custom";
  }
  return "constant";
}

Schedule::AlphaRule parse_alpha_rule(const std::string& name) {
  if (name == "constant") return Schedule::AlphaRule::Constant;
  if (name == "alternating") return Schedule::AlphaRule::Alternating;
  if (name == "decay") return Schedule::AlphaRule::Decay;
  throw ConfigError(ConfigError::Kind::Constraint, "alpha_rule",
                    "unknown alpha rule '" + name + "' (constant, alternating, decay)");
}

std::string k_rule_name(Schedule::KRule rule) {
  return rule == Schedule::KRule::Constant ? "constant" : "decaying";
}

Schedule::KRule parse_k_rule(const std::string& name) {
  if (name == "constant") return Schedule::KRule::Constant;
  if (name == "decaying") return Schedule::KRule::Decaying;
  throw ConfigError(ConfigError::Kind::Constraint, "k_rule",
                    "unknown k rule '" + name + "' (constant, decaying)");
}

std::string status_name(RunStatus status) {
  return status == RunStatus::Converged ? "converged" : "unconverged";
}

IterState step(const Space& space, const ConvexObjective& f, const std::vector<TanMapping>& family,
               const Schedule& schedule, const IterState& state, const ResolventConfig& prox,
               const std::optional<Point>& z_cached) {
  if (family.empty()) throw DomainError("step: the mapping family is empty");
  const int n = state.n;
  const double alpha = schedule.alpha_at(n);
  require_alpha(n, alpha, schedule.a, schedule.b);
  const double k = schedule.k_at(n);
  if (!(k >= schedule.k_min())) {
    throw ConfigError(ConfigError::Kind::Constraint, "k0", "k_" + std::to_string(n) + " fell below k0");
  }

  ResolventConfig cfg = prox;
  cfg.k = k;
  const Point z = z_cached ? *z_cached : resolvent(space, f, cfg, state.x);
  const std::size_t m = family.size();

  IterState next;
  next.n = n + 1;
  next.z = z;
  next.y.assign(m > 1 ? m - 1 : 0, z);

  // Sweep from T_m down to T_1, each stage averaging with the previous output.
  Point current = z;
  for (std::size_t i = m; i >= 1; --i) {
    const Point image = apply_iter(space, family[i - 1], n, current);
    current = combine(space, current, image, alpha);
    if (i > 1) next.y[i - 2] = current;
  }
  next.x = current;
  return next;
}

double residual(const Space& space, const ConvexObjective& f,
                const std::vector<TanMapping>& family, const Point& x, const ResolventConfig& prox) {
  double r = distance(space, x, resolvent(space, f, prox, x));
  for (const auto& T : family) r += distance(space, apply(space, T, x), x);
  return r;
}

Trace run(const Space& space, const ConvexObjective& f, const std::vector<TanMapping>& family,
          const Schedule& schedule, const Point& x1, const StoppingRule& stop,
          const ResolventConfig& prox) {
  schedule.validate();
  if (family.empty()) throw DomainError("run: the mapping family is empty");
  if (stop.max_iters < 1) throw DomainError("run: max_iters must be >= 1");
  for (const auto& T : family) {
    T.check_conditions();
    if (T.domain && !T.domain(x1)) throw DomainError("run: x_1 lies outside the domain of " + T.name);
  }
  space.require(x1);

  const auto start = std::chrono::steady_clock::now();
  Trace trace;
  trace.mapping_count = family.size();
  IterState state;
  state.n = 1;
  state.x = x1;

  for (int i = 0; i < stop.max_iters; ++i) {
    const int n = state.n;
    ResolventConfig cfg = prox;
    cfg.k = schedule.k_at(n);
    const Point z = resolvent(space, f, cfg, state.x);

    IterRecord rec;
    rec.n = n;
    rec.x = state.x;
    rec.z = z;
    rec.d_xz = distance(space, state.x, z);
    rec.residual = rec.d_xz;
    rec.d_tx.reserve(family.size());
    for (const auto& T : family) {
      const double d = distance(space, apply(space, T, state.x), state.x);
      rec.d_tx.push_back(d);
      rec.residual += d;
    }
    rec.f_x = f.value(state.x);
    rec.f_z = f.value(z);
    rec.alpha = schedule.alpha_at(n);
    rec.k = cfg.k;
    const bool done = rec.residual <= stop.tol;

    if (!done && i + 1 < stop.max_iters) {
      state = step(space, f, family, schedule, state, prox, z);
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trace.records.push_back(std::move(rec));
    if (done) {
      trace.status = RunStatus::Converged;
      return trace;
    }
  }
  trace.status = RunStatus::Unconverged;
  return trace;
}

}  // namespace hppa
