#include "blf/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "blf/errors.hpp"

namespace blf {
namespace {

struct Entry {
  std::vector<std::string> tokens;
  int line = 0;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"model", {"theta"}},
      {"gains", {"k", "K", "delta_deg", "gamma", "variant", "tau_max"}},
      {"trajectory", {"amplitude", "omega", "alpha"}},
      {"sim", {"dt", "horizon", "e0_deg", "qdot0", "theta_hat0"}},
      {"output", {"trace_path", "metrics_path"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const auto it = entries_.find(key);
    const int line = it == entries_.end() ? 0 : it->second.line;
    throw ConfigParse(source_ + ":" + std::to_string(line) + ": " + key + ": " + msg);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  Vector reals(const std::string& key, const Vector& fallback, int expected = -1) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto& toks = it->second.tokens;
    Vector v(static_cast<Eigen::Index>(toks.size()));
    for (std::size_t i = 0; i < toks.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(key, toks[i]);
    if (expected >= 0 && v.size() != expected) {
      fail(key, "expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
    }
    return v;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second.tokens.size() != 1) fail(key, "expected a single value");
    return number(key, it->second.tokens.front());
  }

  std::string word(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second.tokens.size() != 1) fail(key, "expected a single value");
    return it->second.tokens.front();
  }

  double number(const std::string& key, const std::string& tok) const {
    double value = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail(key, "'" + tok + "' is not a finite number");
    }
    return value;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

std::map<std::string, Entry> tokenize(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string raw;
  std::string section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigParse(source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    if (!schema().at(section).count(key)) fail("unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (entries.count(full)) fail("duplicate key '" + key + "'");
    Entry e{split_values(trim(line.substr(eq + 1))), lineno};
    if (e.tokens.empty()) fail("key '" + key + "' has no value");
    entries.emplace(full, std::move(e));
  }
  return entries;
}

}  // namespace

Scenario reference_scenario() {
  auto model = std::make_shared<TwoLinkPlanar>();
  const double delta = deg_to_rad(7.0);
  GainConfig gains(Vector{{80.0, 20.0}}, Vector{{2.0, 2.0}}, Vector{{delta, delta}},
                   Vector{{50.0, 0.5, 1.0, 80.0, 2.5}}, BarrierVariant::Logarithmic, 10.0);
  TrajectoryDef traj{Vector{{0.7, 1.2}}, 1.0, 0.3};
  const Vector e0 = Vector::Constant(2, deg_to_rad(2.9));
  Scenario sc{SimConfig{model, ParamVector(*model, TwoLinkPlanar::default_theta()), gains, traj,
                        traj.sample(0.0).q - e0, Vector::Zero(2), Vector::Zero(5), 1e-3, 60.0},
              e0, "trace.csv", "metrics.txt"};
  sc.sim.validate();
  return sc;
}

void refresh_initial_state(Scenario& sc) {
  sc.sim.q0 = sc.sim.trajectory.sample(0.0).q - sc.e0;
  sc.sim.validate();
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  const Reader r(source, tokenize(in, source));
  const Scenario def = reference_scenario();
  auto model = std::make_shared<TwoLinkPlanar>();
  const int n = model->dof();
  const int p = model->num_params();

  const Vector theta = r.reals("model.theta", def.sim.theta_true.values(), p);
  std::optional<ParamVector> theta_true;
  try {
    theta_true.emplace(*model, theta);
  } catch (const InvalidArgument& e) {
    r.fail("model.theta", e.what());
  }

  const Vector k = r.reals("gains.k", def.sim.gains.k(), n);
  const Vector K = r.reals("gains.K", def.sim.gains.K(), n);
  const Vector delta = r.reals("gains.delta_deg", def.sim.gains.delta() * (180.0 / kPi), n) *
                       (kPi / 180.0);
  const Vector gamma = r.reals("gains.gamma", def.sim.gains.gamma(), p);

  const std::string variant_word = r.word("gains.variant", "log");
  BarrierVariant variant = BarrierVariant::Logarithmic;
  if (variant_word == "tan") {
    variant = BarrierVariant::Tangent;
  } else if (variant_word != "log") {
    r.fail("gains.variant", "expected 'log' or 'tan', got '" + variant_word + "'");
  }

  std::optional<double> tau_max = def.sim.gains.tau_max();
  if (r.has("gains.tau_max")) {
    const std::string w = r.word("gains.tau_max", "none");
    tau_max = w == "none" ? std::nullopt : std::optional<double>(r.real("gains.tau_max", 0.0));
  }

  std::optional<GainConfig> gains;
  try {
    gains.emplace(k, K, delta, gamma, variant, tau_max);
  } catch (const InvalidArgument& e) {
    throw ConfigParse(source + ": [gains]: " + e.what());
  }

  TrajectoryDef traj{r.reals("trajectory.amplitude", def.sim.trajectory.amplitude, n),
                     r.real("trajectory.omega", def.sim.trajectory.omega),
                     r.real("trajectory.alpha", def.sim.trajectory.alpha)};
  if (traj.alpha < 0.0) r.fail("trajectory.alpha", "must be non-negative");

  const double dt = r.real("sim.dt", def.sim.dt);
  if (!(dt > 0.0)) r.fail("sim.dt", "must be positive");
  const double horizon = r.real("sim.horizon", def.sim.horizon);
  if (!(horizon > 0.0)) r.fail("sim.horizon", "must be positive");
  const Vector e0 = r.reals("sim.e0_deg", def.e0 * (180.0 / kPi), n) * (kPi / 180.0);
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(e0(i)) < gains->delta()(i) * (1.0 - kBarrierGuard))) {
      r.fail("sim.e0_deg", "initial error of joint " + std::to_string(i + 1) +
                               " is not inside the constraint radius delta_deg");
    }
  }
  const Vector qdot0 = r.reals("sim.qdot0", def.sim.qdot0, n);
  const Vector theta_hat0 = r.reals("sim.theta_hat0", def.sim.theta_hat0, p);

  Scenario sc{SimConfig{model, *theta_true, *gains, traj, traj.sample(0.0).q - e0, qdot0,
                        theta_hat0, dt, horizon},
              e0, r.word("output.trace_path", def.trace_path),
              r.word("output.metrics_path", def.metrics_path)};
  try {
    sc.sim.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigParse(source + ": [sim]: " + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse(path + ": cannot open file");
  return parse_scenario(in, path);
}

}  // namespace blf
