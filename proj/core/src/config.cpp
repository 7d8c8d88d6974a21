#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hppa/errors.hpp"
#include "hppa/experiment.hpp"

namespace hppa {

namespace {

using Kind = ConfigError::Kind;

struct Entry {
  std::string value;
  int line;
  int column;  // column of the value
};

std::string trim(const std::string& s, std::size_t& lead) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    lead = s.size();
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  lead = b;
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "dimension", "seed", "output", "start"}},
      {"schedule", {"a", "b", "alpha_rule", "alpha", "k_rule", "k0"}},
      {"stopping", {"tol", "max_iters"}},
      {"solver", {"kind", "inner_tol", "max_inner_iters"}},
  };
  return keys;
}

class Fields {
 public:
  explicit Fields(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::optional<double> real(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ConfigError(Kind::Syntax, key, key + ": expected a finite number, got '" + e->value + "'", e->line,
                        e->column);
    }
    return v;
  }

  template <typename Int>
  std::optional<Int> integer(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    Int v{};
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError(Kind::Syntax, key, key + ": expected an integer, got '" + e->value + "'", e->line,
                        e->column);
    }
    return v;
  }

  std::optional<std::string> text(const std::string& key) const {
    const Entry* e = find(key);
    return e == nullptr ? std::nullopt : std::optional<std::string>(e->value);
  }

 private:
  std::map<std::string, Entry> entries_;
};

Fields tokenize(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t lead = 0;
    const std::string line = trim(raw, lead);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const int col = static_cast<int>(lead) + 1;
    if (line[0] == '[') {
      if (line.back() != ']') {
        throw ConfigError(Kind::Syntax, "", "unterminated section header", line_no,
                          col + static_cast<int>(line.size()));
      }
      std::size_t inner_lead = 0;
      section = trim(line.substr(1, line.size() - 2), inner_lead);
      if (known_keys().count(section) == 0) {
        throw ConfigError(Kind::Syntax, section, "unknown section [" + section + "]", line_no, col + 1);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(Kind::Syntax, "", "expected 'key = value'", line_no, col);
    }
    if (section.empty()) {
      throw ConfigError(Kind::Syntax, "", "key outside of any section", line_no, col);
    }
    std::size_t key_lead = 0;
    std::size_t value_lead = 0;
    const std::string key = trim(line.substr(0, eq), key_lead);
    const std::string value = trim(line.substr(eq + 1), value_lead);
    if (key.empty()) throw ConfigError(Kind::Syntax, "", "missing key before '='", line_no, col);
    if (known_keys().at(section).count(key) == 0) {
      throw ConfigError(Kind::Syntax, key, "unknown key '" + key + "' in [" + section + "]", line_no,
                        col + static_cast<int>(key_lead));
    }
    const int value_col = col + static_cast<int>(eq + 1 + value_lead);
    if (value.empty()) throw ConfigError(Kind::Syntax, key, "missing value for '" + key + "'", line_no, value_col);
    const std::string qualified = section + "." + key;
    if (entries.count(qualified) != 0) {
      throw ConfigError(Kind::Syntax, key, "duplicate key '" + key + "' in [" + section + "]", line_no,
                        col + static_cast<int>(key_lead));
    }
    entries.emplace(qualified, Entry{value, line_no, value_col});
  }
  return Fields(std::move(entries));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  const Fields f = tokenize(text);
  ExperimentConfig cfg;

  const auto name = f.text("scenario.name");
  if (!name) throw ConfigError(Kind::Constraint, "name", "[scenario] name is required");
  cfg.scenario = *name;
  if (!is_scenario(cfg.scenario)) {
    const Entry* e = f.find("scenario.name");
    throw ConfigError(Kind::UnknownScenario, "name", "unknown scenario '" + cfg.scenario + "'", e->line, e->column);
  }
  cfg.dimension = f.integer<int>("scenario.dimension");
  cfg.seed = f.integer<std::uint64_t>("scenario.seed").value_or(0);
  cfg.output_dir = f.text("scenario.output").value_or("");
  if (const auto start = f.text("scenario.start")) {
    if (*start == "canonical") {
      cfg.start = StartRule::Canonical;
    } else if (*start == "random") {
      cfg.start = StartRule::Random;
    } else {
      throw ConfigError(Kind::Constraint, "start", "start must be 'canonical' or 'random', got '" + *start + "'");
    }
  }

  Schedule& s = cfg.schedule;
  s.a = f.real("schedule.a").value_or(s.a);
  s.b = f.real("schedule.b").value_or(s.b);
  if (const auto rule = f.text("schedule.alpha_rule")) s.alpha_rule = parse_alpha_rule(*rule);
  s.alpha = f.real("schedule.alpha").value_or(s.alpha);
  if (const auto rule = f.text("schedule.k_rule")) s.k_rule = parse_k_rule(*rule);
  s.k0 = f.real("schedule.k0").value_or(s.k0);
  s.validate();

  cfg.stopping.tol = f.real("stopping.tol").value_or(cfg.stopping.tol);
  cfg.stopping.max_iters = f.integer<int>("stopping.max_iters").value_or(cfg.stopping.max_iters);
  if (!(cfg.stopping.tol > 0.0)) throw ConfigError(Kind::Constraint, "tol", "need tol > 0");
  if (cfg.stopping.max_iters < 1) throw ConfigError(Kind::Constraint, "max_iters", "need max_iters ≥ 1");

  if (const auto kind = f.text("solver.kind")) {
    try {
      cfg.prox.solver = parse_solver_name(*kind);
    } catch (const std::exception& e) {
      throw ConfigError(Kind::Constraint, "kind", e.what());
    }
  }
  cfg.prox.inner_tolerance = f.real("solver.inner_tol").value_or(cfg.prox.inner_tolerance);
  cfg.prox.max_inner_iterations = f.integer<int>("solver.max_inner_iters").value_or(cfg.prox.max_inner_iterations);
  if (!(cfg.prox.inner_tolerance > 0.0)) throw ConfigError(Kind::Constraint, "inner_tol", "need inner_tol > 0");
  if (cfg.prox.max_inner_iterations < 1) {
    throw ConfigError(Kind::Constraint, "max_inner_iters", "need max_inner_iters ≥ 1");
  }

  // Builds the scenario once so unsupported dimensions surface here.
  make_scenario(cfg.scenario, cfg.dimension);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(Kind::Syntax, "", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "name = " << cfg.scenario << "\n";
  if (cfg.dimension) out << "dimension = " << *cfg.dimension << "\n";
  out << "seed = " << cfg.seed << "\n";
  if (!cfg.output_dir.empty()) out << "output = " << cfg.output_dir << "\n";
  out << "start = " << (cfg.start == StartRule::Canonical ? "canonical" : "random") << "\n";
  out << "\n[schedule]\n";
  out << "a = " << fmt(cfg.schedule.a) << "\n";
  out << "b = " << fmt(cfg.schedule.b) << "\n";
  out << "alpha_rule = " << alpha_rule_name(cfg.schedule.alpha_rule) << "\n";
  out << "alpha = " << fmt(cfg.schedule.alpha) << "\n";
  out << "k_rule = " << k_rule_name(cfg.schedule.k_rule) << "\n";
  out << "k0 = " << fmt(cfg.schedule.k0) << "\n";
  out << "\n[stopping]\n";
  out << "tol = " << fmt(cfg.stopping.tol) << "\n";
  out << "max_iters = " << cfg.stopping.max_iters << "\n";
  out << "\n[solver]\n";
  out << "kind = " << solver_name(cfg.prox.solver) << "\n";
  out << "inner_tol = " << fmt(cfg.prox.inner_tolerance) << "\n";
  out << "max_inner_iters = " << cfg.prox.max_inner_iterations << "\n";
  return out.str();
}

}  // namespace hppa
