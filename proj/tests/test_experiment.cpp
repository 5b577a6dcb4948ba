#include "ergogap/errors.hpp"
#include "ergogap/experiment.hpp"
#include "ergogap/validate.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ergogap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string config_error_text(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "ergogap_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.grid.points = 25;
  c.protocol.steps = 400;
  return c;
}

}  // namespace

TEST_CASE("configuration defaults and calibration") {
  const ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.setups.size() == 3);
  CHECK(c.resolved_dipole_sq() == doctest::Approx(7.6234e-7).epsilon(1e-4));
  const RateSet r = rates(c.triple().a);
  CHECK(r.relax_a() == doctest::Approx(1e7).epsilon(1e-10));
  CHECK(r.nbar_a == doctest::Approx(6.05877).epsilon(1e-5));
  CHECK(r.nbar_b == doctest::Approx(38.7784).epsilon(1e-5));

  ExperimentConfig fixed = c;
  fixed.gamma_a = 2e5;
  fixed.gamma_b = 3e5;
  CHECK(rates(fixed.triple().a).gamma_a == doctest::Approx(2e5));
  CHECK(rates(fixed.triple().c).gamma_b == doctest::Approx(3e5));
}

TEST_CASE("configuration parsing") {
  SUBCASE("overrides and round trip") {
    const json j = json::parse(R"({
      "schema": "ergogap-config/1",
      "setups": ["a", "c"],
      "omega_a": 3e12,
      "bath": {"temperature_a": 50, "gamma_b": 1e5},
      "time_grid": {"t_min": 0, "t_max": 1e-6, "points": 11, "spacing": "linear"},
      "sweep": {"mode": "delta", "deltas": [0, 40]},
      "protocol": {"steps": 12}
    })");
    const ExperimentConfig c = config_from_json(j);
    CHECK(c.setups == std::vector<Setup>{Setup::AandB, Setup::BOnly});
    CHECK(c.omega_a == 3e12);
    CHECK(c.omega_b == 1e12);
    CHECK(c.temperature_a == 50);
    CHECK(c.gamma_b.value() == 1e5);
    CHECK(c.grid.spacing == Spacing::Linear);
    CHECK(c.sweep.mode == SweepMode::Delta);
    CHECK(c.protocol.steps == 12);

    const ExperimentConfig again = config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
    CHECK(again.dipole_sq.value() == doctest::Approx(c.resolved_dipole_sq()));
  }
  SUBCASE("every problem is reported") {
    const std::string msg = config_error_text(json::parse(R"({
      "omega_a": "fast",
      "colour": 1,
      "bath": {"temperature_a": -3, "wet": true},
      "time_grid": {"points": 1.5, "spacing": "cubic"},
      "protocol": {"steps": 0}
    })"));
    for (const char* needle :
         {"omega_a: expected a number", "colour: unknown key", "bath.wet: unknown key",
          "time_grid.points: expected an integer", "time_grid.spacing",
          "bath.temperature_a: must be >= 0", "protocol.steps: must be >= 1"}) {
      CHECK_MESSAGE(msg.find(needle) != std::string::npos, needle);
    }
  }
  SUBCASE("schema and setups") {
    CHECK(config_error_text(json{{"schema", "other/2"}}).find("schema") != std::string::npos);
    CHECK(config_error_text(json{{"setups", "d"}}).find("setups") != std::string::npos);
    CHECK(config_error_text(json{{"setups", json::array()}}).find("setups") != std::string::npos);
    CHECK(config_from_json(json{{"setups", "b"}}).setups == std::vector<Setup>{Setup::AOnly});
  }
  SUBCASE("files") {
    CHECK_THROWS_AS(load_config((scratch_dir() / "missing.json").string()), ConfigError);
    const std::string bad = (scratch_dir() / "bad.json").string();
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_config(bad), ConfigError);
  }
}

TEST_CASE("time grids") {
  TimeGrid g;
  g.t_min = 1e-9;
  g.t_max = 1e-5;
  g.points = 5;
  const auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v[0] == doctest::Approx(1e-9));
  CHECK(v[2] == doctest::Approx(1e-7));
  CHECK(v[4] == 1e-5);

  g.t_min = 0.0;
  const auto z = g.values();
  CHECK(z[0] == 0.0);
  CHECK(z[1] == doctest::Approx(1e-10));
  CHECK(z.back() == 1e-5);

  g.spacing = Spacing::Linear;
  const auto lin = g.values();
  CHECK(lin[1] == doctest::Approx(2.5e-6));
  CHECK(std::is_sorted(lin.begin(), lin.end()));
}

TEST_CASE("simulation rows") {
  ExperimentConfig c = small_config();
  c.grid.t_min = 0.0;
  const auto rows = simulate(c);
  REQUIRE(rows.size() == 25);
  const SimulationRow& first = rows.front();
  CHECK(first.t == 0.0);
  for (const SetupSample& s : first.setups) {
    CHECK(s.de == 0.0);
    CHECK(s.dw == 0.0);
    CHECK(s.q_op == 0.0);
    CHECK(s.w_ad == 0.0);
    CHECK(s.concurrence == doctest::Approx(1.0));
    CHECK(s.w == doctest::Approx(1.5e12));
  }
  for (const SimulationRow& r : rows) {
    const auto& a = r.setups[0];
    const auto& b = r.setups[1];
    const auto& cc = r.setups[2];
    CHECK(r.gap_w == doctest::Approx(a.w - b.w - cc.w).scale(1.5e12));
    CHECK(r.gap_dw == doctest::Approx(a.dw - b.dw - cc.dw).scale(1.5e12));
    CHECK(a.de == doctest::Approx(b.de + cc.de).scale(1.5e12));
    for (const SetupSample& s : r.setups) {
      CHECK(s.de == doctest::Approx(s.dw + s.w_ad + s.q_op).scale(1.5e12).epsilon(1e-9));
    }
  }
}

TEST_CASE("simulation CSV") {
  ExperimentConfig c = small_config();
  c.output = (scratch_dir() / "sim.csv").string();
  const std::string once = render_csv(simulate_table(c), c);
  CHECK(once == render_csv(simulate_table(c), c));

  std::istringstream in(once);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema: ergogap-csv/1");
  std::string header;
  int data = 0;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (header.empty()) {
      header = line;
    } else {
      ++data;
    }
  }
  CHECK(data == 25);
  for (const char* col : {"t[s]", "W_a[s^-1]", "dW_c[s^-1]", "Qop_b[s^-1]", "gap_W[s^-1]",
                          "gap_dW[s^-1]", "concurrence_a[1]"}) {
    CHECK_MESSAGE(header.find(col) != std::string::npos, col);
  }
  CHECK(once.find("\"dipole_sq\"") != std::string::npos);

  const RunOutput out = run_simulate(c);
  CHECK(out.csv_path == c.output);
  CHECK(fs::exists(out.csv_path));
  CHECK(fs::exists(out.plot_path));
  CHECK(out.plot_path == plot_script_path(c.output));
  CHECK(slurp(out.plot_path).find("data = 'sim.csv'") != std::string::npos);
  CHECK(slurp(out.csv_path) == once);

  ExperimentConfig blocked = c;
  blocked.output = (scratch_dir() / "no_such_dir" / "x.csv").string();
  CHECK_THROWS_AS(run_simulate(blocked), std::runtime_error);
}

TEST_CASE("temperature sweeps") {
  SUBCASE("common mode") {
    ExperimentConfig c = small_config();
    const auto rows = sweep_common(c);
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].x > rows[i - 1].x);
      CHECK(rows[i].dw < rows[i - 1].dw);
    }
    CHECK(rows[5].dw < rows[1].dw);
    for (const SweepRow& r : rows) CHECK(r.temperature_a == r.temperature_b);
  }
  SUBCASE("delta mode") {
    ExperimentConfig c = small_config();
    c.sweep.mode = SweepMode::Delta;
    c.sweep.deltas = {300, 0, 100, 500, 100};
    const auto curves = sweep_delta(c);
    REQUIRE(curves.size() == 4);
    for (std::size_t i = 1; i < curves.size(); ++i) {
      CHECK(curves[i].delta > curves[i - 1].delta);
      CHECK(curves[i].peak_gap_dw > curves[i - 1].peak_gap_dw);
    }
    CHECK(curves[2].rows.front().temperature_a == doctest::Approx(300));
    CHECK(curves[2].rows.front().temperature_b == doctest::Approx(600));
    const Table t = sweep_table(c);
    CHECK(t.trailer.size() == 4);
    CHECK(t.columns.front() == "dT[K]");
  }
  SUBCASE("zero difference matches common mode") {
    ExperimentConfig c = small_config();
    c.grid.t_min = 0.0;
    c.grid.t_max = 2e-7;
    c.grid.points = 3;
    c.grid.spacing = Spacing::Linear;
    c.sweep.deltas = {0};
    c.sweep.temperatures = {450};
    c.sweep.eval_time = 1e-7;
    const SweepRow d = sweep_delta(c).front().rows[1];
    const SweepRow m = sweep_common(c).front();
    CHECK(d.t == doctest::Approx(m.t));
    CHECK(d.w == doctest::Approx(m.w));
    CHECK(d.dw == doctest::Approx(m.dw));
    CHECK(d.gap_w == doctest::Approx(m.gap_w));
    CHECK(d.gap_dw == doctest::Approx(m.gap_dw));
    CHECK(d.concurrence == doctest::Approx(m.concurrence));
  }
  SUBCASE("written output") {
    ExperimentConfig c = small_config();
    c.output = (scratch_dir() / "sweep.csv").string();
    const RunOutput out = run_sweep_temperature(c);
    CHECK(slurp(out.csv_path).find("# kind: sweep") != std::string::npos);
    CHECK(fs::exists(out.plot_path));
  }
}

TEST_CASE("protocol run") {
  ExperimentConfig c = small_config();
  c.output = (scratch_dir() / "protocol.csv").string();
  const ProtocolTrace tr = protocol_trace(c);
  CHECK(tr.stage1.work_extracted == doctest::Approx(1.5e12));
  CHECK(tr.stage2.size() == 400);
  CHECK(tr.final_distance < 1e-3);
  const RunOutput out = run_protocol(c);
  const std::string csv = slurp(out.csv_path);
  CHECK(csv.find("# summary total_work=") != std::string::npos);
  CHECK(csv.find("energy_audit_residual=") != std::string::npos);
  CHECK(fs::exists(out.plot_path));
}

TEST_CASE("parallel_for") {
  std::vector<int> hit(500, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
}

TEST_CASE("built-in validation") {
  const ValidationReport r = run_validate(7);
  CHECK(r.passed());
  CHECK(r.checks.size() > 20);
  const json j = r.to_json();
  CHECK(j["seed"] == 7);
  for (const CheckResult& c : r.checks) {
    if (!c.informational) CHECK_MESSAGE(c.passed, (c.suite + "/" + c.name));
  }
}
