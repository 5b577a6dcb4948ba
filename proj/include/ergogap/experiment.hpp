#pragma once
//
// Experiment runs over a resolved ExperimentConfig: time series for the
// three setups, temperature sweeps, and the two-stage protocol trace.
// Every run is written as CSV with a versioned '#' metadata block carrying
// the resolved config, plus a gnuplot script next to it.
//

#include "ergogap/config.hpp"
#include "ergogap/protocol.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ergogap {

inline constexpr const char* kCsvSchema = "ergogap-csv/1";

// Per-setup diagnostics at one time, relative to the singlet at t = 0.
struct SetupSample {
  double w = 0.0;
  double dw = 0.0;
  double de = 0.0;
  double q_op = 0.0;
  double w_ad = 0.0;
  double purity = 0.0;
  double concurrence = 0.0;
};

SetupSample sample_setup(const SetupParams& params, double t);

struct SimulationRow {
  double t = 0.0;
  std::array<SetupSample, 3> setups;  // indexed a, b, c
  double gap_w = 0.0;
  double gap_dw = 0.0;
};

// x is the swept variable: the common temperature, or t in delta mode.
struct SweepRow {
  double x = 0.0;
  double t = 0.0;
  double temperature_a = 0.0;
  double temperature_b = 0.0;
  double w = 0.0, w_a = 0.0, w_b = 0.0;
  double dw = 0.0, dw_a = 0.0, dw_b = 0.0;
  double gap_w = 0.0;
  double gap_dw = 0.0;
  std::array<double, 3> de{};
  std::array<double, 3> q_op{};
  double concurrence = 0.0;
};

struct DeltaCurve {
  double delta = 0.0;
  std::vector<SweepRow> rows;  // over the time grid
  double peak_gap_w = 0.0;     // max_t |gap_W|
  double peak_gap_dw = 0.0;    // max_t |gap_dW|
};

std::size_t setup_index(Setup s);

std::vector<SimulationRow> simulate(const ExperimentConfig& config);
SweepRow sweep_point(const ExperimentConfig& config, double temperature_a,
                     double temperature_b, double t);
// One row per temperature at sweep.eval_time, sorted by temperature.
std::vector<SweepRow> sweep_common(const ExperimentConfig& config);
// One curve per delta with T_A = mean - delta/2, T_B = mean + delta/2.
std::vector<DeltaCurve> sweep_delta(const ExperimentConfig& config);
// Singlet under H_s, driven at protocol.temperature.
ProtocolTrace protocol_trace(const ExperimentConfig& config);

// Runs fn(0..n-1) on a worker pool; rethrows the first failure.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct Table {
  std::string kind;
  std::vector<std::string> notes;    // extra '#' lines after the config
  std::vector<std::string> columns;  // with units, e.g. "t[s]"
  std::vector<std::vector<double>> rows;
  std::vector<std::string> trailer;  // '#' lines after the data
};

std::string render_csv(const Table& table, const ExperimentConfig& config);

struct RunOutput {
  std::string csv_path;
  std::string plot_path;
  std::vector<std::string> summary;
};

// Sibling path with the extension replaced by ".gp".
std::string plot_script_path(const std::string& csv_path);

Table simulate_table(const ExperimentConfig& config);
Table sweep_table(const ExperimentConfig& config);
Table protocol_table(const ExperimentConfig& config);

// Write CSV and plot script to config.output. I/O failures throw
// std::runtime_error naming the path.
RunOutput run_simulate(const ExperimentConfig& config);
RunOutput run_sweep_temperature(const ExperimentConfig& config);
RunOutput run_protocol(const ExperimentConfig& config);

}  // namespace ergogap
