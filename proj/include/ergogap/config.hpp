#pragma once
//
// Run configuration. The on-disk format is JSON; every key is optional and
// defaults to the reference parameter set (omega_A = 2e12, omega_B = 1e12
// s^-1, T_A = 100 K, T_B = 300 K). Schema:
//
//   {
//     "setups":  "all" | ["a", "b", "c"],
//     "omega_a": 2e12, "omega_b": 1e12,
//     "bath": {
//       "temperature_a": 100, "temperature_b": 300,
//       "cutoff_ratio": 1, "coupling": 1,
//       "dipole_sq": null,            // null: calibrated, see below
//       "gamma_a": null, "gamma_b": null   // direct rate overrides
//     },
//     "calibration_relax_rate": 1e7,
//     "time_grid": {"t_min": 1e-10, "t_max": 1e-5, "points": 200, "spacing": "log"},
//     "sweep": {
//       "mode": "common" | "delta",
//       "temperatures": [100, 200, ..., 900],
//       "mean_temperature": 450, "deltas": [0, 100, 300, 500],
//       "eval_time": 1e-7
//     },
//     "protocol": {"temperature": 300, "steps": 10000, "target_distance": 1e-9},
//     "output": "ergogap.csv",
//     "seed": 20240917
//   }
//
// With dipole_sq null, |d|^2 is fixed so that Gamma_A (2 n_A + 1) equals
// calibration_relax_rate for omega_A = 2e12 s^-1 at 100 K, with the given
// coupling and cutoff ratio. The calibration point does not move with the
// configured temperatures, so temperature sweeps change n only.
//

#include "ergogap/dynamics.hpp"
#include "ergogap/thermo.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ergogap {

enum class Spacing { Linear, Log };
enum class SweepMode { Common, Delta };

struct TimeGrid {
  double t_min = 1e-10;
  double t_max = 1e-5;
  int points = 200;
  Spacing spacing = Spacing::Log;

  // Log spacing with t_min == 0 places t = 0 first and spaces the rest
  // logarithmically from t_max * 1e-5.
  std::vector<double> values() const;
};

struct SweepSpec {
  SweepMode mode = SweepMode::Common;
  std::vector<double> temperatures{100, 200, 300, 400, 500, 600, 700, 800, 900};
  double mean_temperature = 450.0;
  std::vector<double> deltas{0, 100, 300, 500};
  double eval_time = 1e-7;
};

struct ProtocolSpec {
  double temperature = 300.0;
  int steps = 10000;
  double target_distance = 1e-9;
};

struct ExperimentConfig {
  std::vector<Setup> setups{Setup::AandB, Setup::AOnly, Setup::BOnly};
  double omega_a = 2e12;
  double omega_b = 1e12;
  double temperature_a = 100.0;
  double temperature_b = 300.0;
  double cutoff_ratio = 1.0;
  double coupling = 1.0;
  std::optional<double> dipole_sq;
  std::optional<double> gamma_a;
  std::optional<double> gamma_b;
  double calibration_relax_rate = 1e7;
  TimeGrid grid;
  SweepSpec sweep;
  ProtocolSpec protocol;
  std::string output = "ergogap.csv";
  std::uint64_t seed = 20240917;

  // Every violated constraint, one message each. Empty when valid.
  std::vector<std::string> violations() const;
  // Throws ConfigError listing all violations.
  void validate() const;

  // |d|^2 actually used (explicit or calibrated).
  double resolved_dipole_sq() const;
  BathSpec bath_a() const;
  BathSpec bath_b() const;
  SetupTriple triple() const;
  SetupTriple triple_at(double temperature_a, double temperature_b) const;
};

// Parse a JSON document on top of the defaults. Unknown keys and type
// errors are collected; throws ConfigError listing all of them.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Fully resolved configuration (calibrated |d|^2 included).
nlohmann::json to_json(const ExperimentConfig& c);

}  // namespace ergogap
