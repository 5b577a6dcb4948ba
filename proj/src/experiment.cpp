#include "ergogap/experiment.hpp"

#include "ergogap/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ergogap {

namespace {

const std::array<Setup, 3> kAllSetups{Setup::AandB, Setup::AOnly, Setup::BOnly};

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::size_t setup_index(Setup s) {
  switch (s) {
    case Setup::AandB: return 0;
    case Setup::AOnly: return 1;
    case Setup::BOnly: return 2;
  }
  throw UsageError("setup_index: unknown setup");
}

SetupSample sample_setup(const SetupParams& params, double t) {
  const HamiltonianOperator h = system_hamiltonian(params.omega_a, params.omega_b);
  const DensityMatrix rho0 = analytic_state(params, 0.0);
  const DensityMatrix rho = analytic_state(params, t);
  const ThermoLedger ledger = first_law_ledger(rho0, rho, h);
  SetupSample s;
  s.w = ergotropy(rho, h);
  s.dw = ledger.delta_ergotropy;
  s.de = ledger.delta_energy;
  s.q_op = ledger.operational_heat;
  s.w_ad = ledger.adiabatic_work;
  s.purity = rho.purity();
  s.concurrence = concurrence(rho);
  return s;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SimulationRow> simulate(const ExperimentConfig& config) {
  config.validate();
  const SetupTriple triple = config.triple();
  const std::vector<double> times = config.grid.values();
  std::vector<SimulationRow> rows(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    SimulationRow& row = rows[i];
    row.t = times[i];
    for (Setup s : kAllSetups) row.setups[setup_index(s)] = sample_setup(triple.get(s), row.t);
    const GapReport g = gap_report(triple, row.t);
    row.gap_w = g.gap_w;
    row.gap_dw = g.gap_dw;
  });
  return rows;
}

SweepRow sweep_point(const ExperimentConfig& config, double temperature_a,
                     double temperature_b, double t) {
  const SetupTriple triple = config.triple_at(temperature_a, temperature_b);
  const GapReport g = gap_report(triple, t);
  SweepRow row;
  row.t = t;
  row.temperature_a = temperature_a;
  row.temperature_b = temperature_b;
  row.w = g.w;
  row.w_a = g.w_a;
  row.w_b = g.w_b;
  row.dw = g.dw;
  row.dw_a = g.dw_a;
  row.dw_b = g.dw_b;
  row.gap_w = g.gap_w;
  row.gap_dw = g.gap_dw;
  row.concurrence = g.concurrence_a;
  for (Setup s : kAllSetups) {
    const SetupSample sample = sample_setup(triple.get(s), t);
    row.de[setup_index(s)] = sample.de;
    row.q_op[setup_index(s)] = sample.q_op;
  }
  return row;
}

std::vector<SweepRow> sweep_common(const ExperimentConfig& config) {
  config.validate();
  const auto& temps = config.sweep.temperatures;
  std::vector<SweepRow> rows(temps.size());
  parallel_for(temps.size(), [&](std::size_t i) {
    rows[i] = sweep_point(config, temps[i], temps[i], config.sweep.eval_time);
    rows[i].x = temps[i];
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.x < b.x; });
  return rows;
}

std::vector<DeltaCurve> sweep_delta(const ExperimentConfig& config) {
  config.validate();
  std::vector<double> deltas = config.sweep.deltas;
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  const std::vector<double> times = config.grid.values();
  const double mean = config.sweep.mean_temperature;

  std::vector<DeltaCurve> curves(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    curves[k].delta = deltas[k];
    curves[k].rows.resize(times.size());
  }
  parallel_for(deltas.size() * times.size(), [&](std::size_t idx) {
    const std::size_t k = idx / times.size();
    const std::size_t i = idx % times.size();
    const double d = deltas[k];
    SweepRow row = sweep_point(config, mean - d / 2.0, mean + d / 2.0, times[i]);
    row.x = times[i];
    curves[k].rows[i] = row;
  });
  for (auto& c : curves) {
    for (const auto& r : c.rows) {
      c.peak_gap_w = std::max(c.peak_gap_w, std::abs(r.gap_w));
      c.peak_gap_dw = std::max(c.peak_gap_dw, std::abs(r.gap_dw));
    }
  }
  return curves;
}

ProtocolTrace protocol_trace(const ExperimentConfig& config) {
  config.validate();
  const HamiltonianOperator h = system_hamiltonian(config.omega_a, config.omega_b);
  Stage2Options opts;
  opts.steps = config.protocol.steps;
  opts.target_distance = config.protocol.target_distance;
  return run_two_stage_protocol(singlet_state(), h, config.protocol.temperature, opts);
}

std::string render_csv(const Table& table, const ExperimentConfig& config) {
  std::ostringstream os;
  os << "# schema: " << kCsvSchema << "\n";
  os << "# kind: " << table.kind << "\n";
  os << "# energies are in units of hbar (s^-1)\n";
  os << "# config:\n";
  std::istringstream cfg(to_json(config).dump(2));
  for (std::string line; std::getline(cfg, line);) os << "#   " << line << "\n";
  for (const auto& n : table.notes) os << "# " << n << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
    os << "\n";
  }
  for (const auto& n : table.trailer) os << "# " << n << "\n";
  return os.str();
}

std::string plot_script_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".gp");
  return p.string();
}

namespace {

const char* energy_unit = "[s^-1]";

std::string col(const std::string& name, const char* unit) { return name + unit; }

void append_setup_columns(std::vector<std::string>& cols, Setup s) {
  const std::string l = to_string(s);
  for (const char* q : {"W_", "dW_", "dE_", "Qop_", "Wad_"}) {
    cols.push_back(col(q + l, energy_unit));
  }
  cols.push_back(col("purity_" + l, "[1]"));
  cols.push_back(col("concurrence_" + l, "[1]"));
}

std::size_t column_of(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i].rfind(name + "[", 0) == 0) return i + 1;
  }
  throw UsageError("column_of: no column " + name);
}

std::string plot_header(const std::string& csv_name, const std::string& xlabel, bool logx) {
  std::ostringstream os;
  os << "# gnuplot script for " << csv_name << "\n";
  os << "set datafile separator ','\n";
  os << "set datafile commentschars '#'\n";
  os << "set key autotitle columnhead\n";
  os << "set xlabel '" << xlabel << "'\n";
  if (logx) os << "set logscale x\n";
  os << "set grid\n";
  os << "data = '" << csv_name << "'\n";
  return os.str();
}

std::string plot_script(const Table& t, const ExperimentConfig& config) {
  const std::string name = std::filesystem::path(config.output).filename().string();
  std::ostringstream os;
  if (t.kind == "simulate") {
    os << plot_header(name, "t [s]", config.grid.spacing == Spacing::Log);
    os << "set ylabel 'energy [s^-1]'\n";
    os << "plot ";
    bool first = true;
    for (Setup s : config.setups) {
      os << (first ? "" : ", \\\n     ") << "data using 1:" << column_of(t, "W_" + to_string(s))
         << " with lines";
      first = false;
    }
    os << ", \\\n     data using 1:" << column_of(t, "gap_W") << " with lines";
    os << ", \\\n     data using 1:" << column_of(t, "gap_dW") << " with lines\n";
  } else if (t.kind == "sweep-common") {
    os << plot_header(name, "T [K]", false);
    os << "set ylabel 'ergotropy change [s^-1]'\n";
    os << "plot data using 1:" << column_of(t, "dW") << " with linespoints, \\\n"
       << "     data using 1:" << column_of(t, "dW_a") << " with linespoints, \\\n"
       << "     data using 1:" << column_of(t, "dW_a+dW_b") << " with linespoints\n";
  } else if (t.kind == "sweep-delta") {
    os << plot_header(name, "t [s]", config.grid.spacing == Spacing::Log);
    os << "set key noautotitle\n";
    os << "set ylabel 'W - W_A - W_B [s^-1]'\n";
    std::vector<double> deltas = config.sweep.deltas;
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    const auto tc = column_of(t, "t");
    const auto gc = column_of(t, "gap_W");
    os << "plot ";
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      os << (k ? ", \\\n     " : "") << "data using " << tc << ":($1==" << num(deltas[k])
         << " ? $" << gc << " : 1/0) with lines title 'dT = " << num(deltas[k]) << " K'";
    }
    os << "\n";
  } else {
    os << plot_header(name, "step", false);
    os << "set logscale y\n";
    os << "set ylabel 'total variation to Gibbs'\n";
    os << "plot data using 1:" << column_of(t, "tv_distance") << " with lines\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

RunOutput write_run(const Table& t, const ExperimentConfig& config,
                    std::vector<std::string> summary) {
  RunOutput out;
  out.csv_path = config.output;
  out.plot_path = plot_script_path(config.output);
  write_file(out.csv_path, render_csv(t, config));
  write_file(out.plot_path, plot_script(t, config));
  out.summary = std::move(summary);
  return out;
}

}  // namespace

Table simulate_table(const ExperimentConfig& config) {
  const auto rows = simulate(config);
  Table t;
  t.kind = "simulate";
  t.notes.push_back("initial state: singlet; setups a (both baths), b (bath A), c (bath B)");
  t.columns.push_back("t[s]");
  for (Setup s : config.setups) append_setup_columns(t.columns, s);
  t.columns.push_back(col("gap_W", energy_unit));
  t.columns.push_back(col("gap_dW", energy_unit));
  for (const auto& r : rows) {
    std::vector<double> v{r.t};
    for (Setup s : config.setups) {
      const SetupSample& x = r.setups[setup_index(s)];
      v.insert(v.end(), {x.w, x.dw, x.de, x.q_op, x.w_ad, x.purity, x.concurrence});
    }
    v.push_back(r.gap_w);
    v.push_back(r.gap_dw);
    t.rows.push_back(std::move(v));
  }
  return t;
}

namespace {

void append_sweep_columns(std::vector<std::string>& cols) {
  for (const char* q : {"W", "W_a", "W_b", "dW", "dW_a", "dW_b", "dW_a+dW_b", "gap_W", "gap_dW",
                        "dE_a", "dE_b", "dE_c", "Qop_a", "Qop_b", "Qop_c"}) {
    cols.push_back(col(q, energy_unit));
  }
  cols.push_back("concurrence_a[1]");
}

void append_sweep_values(std::vector<double>& v, const SweepRow& r) {
  v.insert(v.end(), {r.w, r.w_a, r.w_b, r.dw, r.dw_a, r.dw_b, r.dw_a + r.dw_b, r.gap_w, r.gap_dw,
                     r.de[0], r.de[1], r.de[2], r.q_op[0], r.q_op[1], r.q_op[2], r.concurrence});
}

}  // namespace

Table sweep_table(const ExperimentConfig& config) {
  Table t;
  if (config.sweep.mode == SweepMode::Common) {
    t.kind = "sweep-common";
    t.notes.push_back("common bath temperature, evaluated at t = " + num(config.sweep.eval_time) +
                      " s");
    t.columns = {"T[K]", "t[s]"};
    append_sweep_columns(t.columns);
    for (const auto& r : sweep_common(config)) {
      std::vector<double> v{r.x, r.t};
      append_sweep_values(v, r);
      t.rows.push_back(std::move(v));
    }
    return t;
  }
  t.kind = "sweep-delta";
  t.notes.push_back("T_A = mean - dT/2, T_B = mean + dT/2, mean = " +
                    num(config.sweep.mean_temperature) + " K");
  t.columns = {"dT[K]", "T_A[K]", "T_B[K]", "t[s]"};
  append_sweep_columns(t.columns);
  for (const auto& c : sweep_delta(config)) {
    for (const auto& r : c.rows) {
      std::vector<double> v{c.delta, r.temperature_a, r.temperature_b, r.t};
      append_sweep_values(v, r);
      t.rows.push_back(std::move(v));
    }
    t.trailer.push_back(fmt::format("peak dT={} max|gap_W|={} max|gap_dW|={}", num(c.delta),
                                    num(c.peak_gap_w), num(c.peak_gap_dw)));
  }
  return t;
}

Table protocol_table(const ExperimentConfig& config) {
  const ProtocolTrace trace = protocol_trace(config);
  const HamiltonianOperator h = system_hamiltonian(config.omega_a, config.omega_b);
  const double temp = config.protocol.temperature;
  const double free_drop = free_energy(trace.initial, h, temp) -
                           free_energy(trace.stage1.passive.matrix, h, temp);
  const double e0 = internal_energy(trace.initial, h);
  const double e1 = internal_energy(trace.final_state.matrix, h);
  const double total_work = trace.stage1.work_extracted + trace.total_work_to_weight;
  const double audit = (e1 - e0) - (trace.total_heat - total_work);

  Table t;
  t.kind = "protocol";
  t.notes.push_back("initial state: singlet; bath temperature " + num(temp) + " K");
  t.notes.push_back("stage1 work_extracted=" + num(trace.stage1.work_extracted) +
                    " ergotropy=" + num(ergotropy(trace.initial, h)) +
                    " free_energy_drop=" + num(free_drop));
  const std::size_t d = trace.initial_populations.size();
  t.columns = {"step[1]", "level[1]", "moved[1]", "bath_gap[s^-1]", "bath_p0[1]",
               "heat_from_bath[s^-1]", "work_to_weight[s^-1]", "dE[s^-1]", "tv_distance[1]"};
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(fmt::format("p{}[1]", i));
  for (const auto& s : trace.stage2) {
    std::vector<double> v{static_cast<double>(s.index), static_cast<double>(s.level), s.moved,
                          s.bath.gap, s.bath.p0, s.heat_from_bath, s.work_to_weight,
                          s.energy_change, s.distance};
    v.insert(v.end(), s.populations.begin(), s.populations.end());
    t.rows.push_back(std::move(v));
  }
  t.trailer.push_back(fmt::format(
      "summary total_work={} stage1_work={} stage2_work_to_weight={} total_heat={} "
      "final_tv_distance={} energy_audit_residual={}",
      num(total_work), num(trace.stage1.work_extracted), num(trace.total_work_to_weight),
      num(trace.total_heat), num(trace.final_distance), num(audit)));
  return t;
}

RunOutput run_simulate(const ExperimentConfig& config) {
  const Table t = simulate_table(config);
  const auto& last = t.rows.back();
  return write_run(t, config,
                   {fmt::format("{} rows; final gap_W={} gap_dW={}", t.rows.size(),
                                num(last[last.size() - 2]), num(last.back()))});
}

RunOutput run_sweep_temperature(const ExperimentConfig& config) {
  const Table t = sweep_table(config);
  std::vector<std::string> summary{fmt::format("{} rows ({})", t.rows.size(), t.kind)};
  summary.insert(summary.end(), t.trailer.begin(), t.trailer.end());
  return write_run(t, config, std::move(summary));
}

RunOutput run_protocol(const ExperimentConfig& config) {
  const Table t = protocol_table(config);
  std::vector<std::string> summary = t.notes;
  summary.insert(summary.end(), t.trailer.begin(), t.trailer.end());
  return write_run(t, config, std::move(summary));
}

}  // namespace ergogap
