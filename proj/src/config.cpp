#include "ergogap/config.hpp"

#include "ergogap/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ergogap {

using nlohmann::json;

std::vector<double> TimeGrid::values() const {
  std::vector<double> out;
  if (points < 2) return out;
  out.reserve(static_cast<std::size_t>(points));
  if (spacing == Spacing::Linear) {
    for (int i = 0; i < points; ++i) {
      out.push_back(t_min + (t_max - t_min) * i / (points - 1));
    }
    return out;
  }
  double lo = t_min;
  int n = points;
  if (t_min == 0.0) {
    out.push_back(0.0);
    lo = t_max * 1e-5;
    --n;
  }
  if (n == 1) {
    out.push_back(t_max);
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(t_max);
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (n - 1)));
  out.back() = t_max;
  return out;
}

std::vector<std::string> ExperimentConfig::violations() const {
  std::vector<std::string> v;
  auto check = [&v](bool ok, const std::string& msg) {
    if (!ok) v.push_back(msg);
  };
  check(!setups.empty(), "setups: at least one setup is required");
  check(omega_a > 0.0, "omega_a: must be > 0");
  check(omega_b > 0.0, "omega_b: must be > 0");
  check(temperature_a >= 0.0, "bath.temperature_a: must be >= 0");
  check(temperature_b >= 0.0, "bath.temperature_b: must be >= 0");
  check(cutoff_ratio > 0.0, "bath.cutoff_ratio: must be > 0");
  check(coupling >= 0.0, "bath.coupling: must be >= 0");
  check(!dipole_sq || *dipole_sq >= 0.0, "bath.dipole_sq: must be >= 0");
  check(!gamma_a || *gamma_a >= 0.0, "bath.gamma_a: must be >= 0");
  check(!gamma_b || *gamma_b >= 0.0, "bath.gamma_b: must be >= 0");
  check(calibration_relax_rate > 0.0, "calibration_relax_rate: must be > 0");
  check(dipole_sq || coupling > 0.0 || (gamma_a && gamma_b),
        "bath.coupling: must be > 0 when dipole_sq is calibrated");
  check(grid.points >= 2, "time_grid.points: must be >= 2");
  check(grid.t_min >= 0.0, "time_grid.t_min: must be >= 0");
  check(grid.t_max > grid.t_min, "time_grid.t_max: must exceed t_min");
  check(!sweep.temperatures.empty(), "sweep.temperatures: must not be empty");
  for (double t : sweep.temperatures) {
    check(t > 0.0, "sweep.temperatures: entries must be > 0");
  }
  for (double d : sweep.deltas) {
    check(d >= 0.0 && sweep.mean_temperature - d / 2.0 >= 0.0,
          "sweep.deltas: entries must be >= 0 and keep T_A = mean - delta/2 >= 0");
  }
  check(sweep.eval_time >= 0.0, "sweep.eval_time: must be >= 0");
  check(protocol.temperature > 0.0, "protocol.temperature: must be > 0");
  check(protocol.steps >= 1, "protocol.steps: must be >= 1");
  check(protocol.target_distance > 0.0, "protocol.target_distance: must be > 0");
  check(!output.empty(), "output: must not be empty");
  return v;
}

void ExperimentConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid configuration (" << v.size() << " problem" << (v.size() == 1 ? "" : "s") << "):";
  for (const auto& m : v) os << "\n  - " << m;
  throw ConfigError(os.str());
}

double ExperimentConfig::resolved_dipole_sq() const {
  if (dipole_sq) return *dipole_sq;
  constexpr double kRefOmega = 2e12;
  constexpr double kRefTemperature = 100.0;
  const double n = mean_occupation(kRefOmega, kRefTemperature);
  const double gamma = calibration_relax_rate / (2.0 * n + 1.0);
  const double r2 = cutoff_ratio * cutoff_ratio;
  if (coupling == 0.0) return 0.0;
  return gamma * (1.0 + r2) / (coupling * coupling * kRefOmega * r2);
}

namespace {

BathSpec make_bath(const ExperimentConfig& c, double temperature, std::optional<double> rate) {
  BathSpec b;
  b.temperature = temperature;
  b.cutoff_ratio = c.cutoff_ratio;
  b.coupling = c.coupling;
  b.dipole_sq = c.resolved_dipole_sq();
  b.rate = rate;
  return b;
}

}  // namespace

BathSpec ExperimentConfig::bath_a() const { return make_bath(*this, temperature_a, gamma_a); }
BathSpec ExperimentConfig::bath_b() const { return make_bath(*this, temperature_b, gamma_b); }

SetupTriple ExperimentConfig::triple() const { return triple_at(temperature_a, temperature_b); }

SetupTriple ExperimentConfig::triple_at(double ta, double tb) const {
  return make_setup_triple(omega_a, omega_b, make_bath(*this, ta, gamma_a),
                           make_bath(*this, tb, gamma_b));
}

namespace {

// Walks a JSON object, reading known keys and recording every problem.
class Reader {
 public:
  Reader(const json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) {
      errors_.push_back(name("") + ": expected an object");
    }
  }

  ~Reader() {
    if (!j_.is_object()) return;
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) errors_.push_back(name(item.key()) + ": unknown key");
    }
  }

  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  const json* get(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object()) return nullptr;
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) {
      if (v->is_number()) out = v->get<double>();
      else errors_.push_back(name(key) + ": expected a number");
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (v->is_null()) out.reset();
      else if (v->is_number()) out = v->get<double>();
      else errors_.push_back(name(key) + ": expected a number or null");
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = get(key)) {
      if (v->is_number_integer()) out = v->get<int>();
      else errors_.push_back(name(key) + ": expected an integer");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else errors_.push_back(name(key) + ": expected a string");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) {
        errors_.push_back(name(key) + ": expected an array of numbers");
        return;
      }
      std::vector<double> tmp;
      for (const auto& e : *v) {
        if (!e.is_number()) {
          errors_.push_back(name(key) + ": expected an array of numbers");
          return;
        }
        tmp.push_back(e.get<double>());
      }
      out = std::move(tmp);
    }
  }

  std::string name(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

std::vector<Setup> parse_setups(const json& v, std::vector<std::string>& errors) {
  const std::vector<Setup> all{Setup::AandB, Setup::AOnly, Setup::BOnly};
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "all") return all;
    if (s == "a" || s == "b" || s == "c") return {setup_from_letter(s[0])};
    errors.push_back("setups: expected \"all\", \"a\", \"b\", \"c\" or a list of those");
    return all;
  }
  if (v.is_array()) {
    std::vector<Setup> out;
    for (const auto& e : v) {
      if (!e.is_string() || (e != "a" && e != "b" && e != "c")) {
        errors.push_back("setups: list entries must be \"a\", \"b\" or \"c\"");
        return all;
      }
      const Setup s = setup_from_letter(e.get<std::string>()[0]);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](Setup x, Setup y) { return setup_letter(x) < setup_letter(y); });
    return out;
  }
  errors.push_back("setups: expected a string or a list");
  return all;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  std::vector<std::string> errors;
  {
    Reader root(j, "", errors);
    if (const json* v = root.get("schema")) {
      if (!v->is_string() || *v != "ergogap-config/1") {
        errors.push_back("schema: expected \"ergogap-config/1\"");
      }
    }
    if (const json* v = root.get("setups")) c.setups = parse_setups(*v, errors);
    root.number("omega_a", c.omega_a);
    root.number("omega_b", c.omega_b);
    root.number("calibration_relax_rate", c.calibration_relax_rate);
    root.string("output", c.output);
    if (const json* v = root.get("seed")) {
      if (v->is_number_unsigned()) c.seed = v->get<std::uint64_t>();
      else errors.push_back("seed: expected a non-negative integer");
    }
    if (const json* v = root.get("bath")) {
      Reader r(*v, "bath", errors);
      r.number("temperature_a", c.temperature_a);
      r.number("temperature_b", c.temperature_b);
      r.number("cutoff_ratio", c.cutoff_ratio);
      r.number("coupling", c.coupling);
      r.optional_number("dipole_sq", c.dipole_sq);
      r.optional_number("gamma_a", c.gamma_a);
      r.optional_number("gamma_b", c.gamma_b);
    }
    if (const json* v = root.get("time_grid")) {
      Reader r(*v, "time_grid", errors);
      r.number("t_min", c.grid.t_min);
      r.number("t_max", c.grid.t_max);
      r.integer("points", c.grid.points);
      std::string spacing = c.grid.spacing == Spacing::Log ? "log" : "linear";
      r.string("spacing", spacing);
      if (spacing == "log") c.grid.spacing = Spacing::Log;
      else if (spacing == "linear") c.grid.spacing = Spacing::Linear;
      else errors.push_back("time_grid.spacing: expected \"log\" or \"linear\"");
    }
    if (const json* v = root.get("sweep")) {
      Reader r(*v, "sweep", errors);
      std::string mode = c.sweep.mode == SweepMode::Common ? "common" : "delta";
      r.string("mode", mode);
      if (mode == "common") c.sweep.mode = SweepMode::Common;
      else if (mode == "delta") c.sweep.mode = SweepMode::Delta;
      else errors.push_back("sweep.mode: expected \"common\" or \"delta\"");
      r.numbers("temperatures", c.sweep.temperatures);
      r.number("mean_temperature", c.sweep.mean_temperature);
      r.numbers("deltas", c.sweep.deltas);
      r.number("eval_time", c.sweep.eval_time);
    }
    if (const json* v = root.get("protocol")) {
      Reader r(*v, "protocol", errors);
      r.number("temperature", c.protocol.temperature);
      r.integer("steps", c.protocol.steps);
      r.number("target_distance", c.protocol.target_distance);
    }
  }
  for (auto& m : c.violations()) errors.push_back(std::move(m));
  if (!errors.empty()) {
    std::ostringstream os;
    os << "invalid configuration (" << errors.size() << " problem"
       << (errors.size() == 1 ? "" : "s") << "):";
    for (const auto& m : errors) os << "\n  - " << m;
    throw ConfigError(os.str());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  json setups = json::array();
  for (Setup s : c.setups) setups.push_back(to_string(s));
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  return json{
      {"schema", "ergogap-config/1"},
      {"setups", setups},
      {"omega_a", c.omega_a},
      {"omega_b", c.omega_b},
      {"bath",
       {{"temperature_a", c.temperature_a},
        {"temperature_b", c.temperature_b},
        {"cutoff_ratio", c.cutoff_ratio},
        {"coupling", c.coupling},
        {"dipole_sq", c.resolved_dipole_sq()},
        {"gamma_a", opt(c.gamma_a)},
        {"gamma_b", opt(c.gamma_b)}}},
      {"calibration_relax_rate", c.calibration_relax_rate},
      {"time_grid",
       {{"t_min", c.grid.t_min},
        {"t_max", c.grid.t_max},
        {"points", c.grid.points},
        {"spacing", c.grid.spacing == Spacing::Log ? "log" : "linear"}}},
      {"sweep",
       {{"mode", c.sweep.mode == SweepMode::Common ? "common" : "delta"},
        {"temperatures", c.sweep.temperatures},
        {"mean_temperature", c.sweep.mean_temperature},
        {"deltas", c.sweep.deltas},
        {"eval_time", c.sweep.eval_time}}},
      {"protocol",
       {{"temperature", c.protocol.temperature},
        {"steps", c.protocol.steps},
        {"target_distance", c.protocol.target_distance}}},
      {"output", c.output},
      {"seed", c.seed},
  };
}

}  // namespace ergogap
