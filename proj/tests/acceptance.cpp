// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
// Exit status is nonzero when any criterion fails.

#include "ergogap/experiment.hpp"
#include "ergogap/protocol.hpp"
#include "ergogap/random.hpp"
#include "ergogap/thermo.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace ergogap;

namespace {

constexpr std::uint64_t kSeed = 20240917;

constexpr double kOracleTol = 1e-8;
constexpr double kOracleSeconds = 10.0;
constexpr double kTraceTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kNegativeTol = 1e-8;
constexpr double kFirstLawTol = 1e-9;
constexpr double kAdditivityTol = 1e-10;
constexpr double kGapFraction = 0.01;
constexpr double kTailFraction = 1e-3;
constexpr double kTailConcurrence = 1e-3;
constexpr double kFactorizationTol = 1e-10;
constexpr double kErgotropyTol = 1e-10;
constexpr double kStage1Tol = 1e-10;
constexpr double kFreeEnergyTol = 1e-9;
constexpr double kDistanceTol = 1e-4;
constexpr double kAuditTol = 1e-9;
constexpr double kProtocolSeconds = 5.0;

const std::array<Setup, 3> kSetups{Setup::AandB, Setup::AOnly, Setup::BOnly};

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& name, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.passed) ++failures;
  fmt::print("{} {:<3} {:<28} {}\n", o.passed ? "PASS" : "FAIL", id, name, o.detail);
  std::fflush(stdout);
}

void info(const std::string& id, const std::string& name, const std::string& detail) {
  fmt::print("INFO {:<3} {:<28} {}\n", id, name, detail);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<double> probe_times(const RateSet& r, Setup s) {
  double slow = 0.0;
  if (s == Setup::AandB) slow = std::min(r.relax_a(), r.relax_b());
  else if (s == Setup::AOnly) slow = r.relax_a();
  else slow = r.relax_b();
  return {0.05 / slow, 0.2 / slow, 0.5 / slow, 1.0 / slow, 2.0 / slow, 4.0 / slow};
}

// Criterion-1 grid: 20 random triples, each with its own probe times.
struct GridPoint {
  SetupTriple triple;
  Setup setup;
  double t;
  DensityMatrix numeric;
};

std::vector<GridPoint> grid;
double oracle_seconds = 0.0;

Outcome oracle_equivalence() {
  Rng rng(kSeed);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const SetupTriple triple = random_setup_triple(rng);
    for (Setup s : kSetups) {
      const SetupParams& p = triple.get(s);
      const double dt = stable_step(p);
      DensityMatrix rho = singlet_state();
      double t_prev = 0.0;
      for (double t : probe_times(rates(p), s)) {
        rho = numerical_lindblad(p, rho, t - t_prev, dt);
        t_prev = t;
        worst = std::max(worst, max_abs_entry(rho.matrix() - analytic_state(p, t).matrix()));
        grid.push_back({triple, s, t, rho});
      }
    }
  }
  oracle_seconds = seconds_since(start);
  return {worst < kOracleTol && oracle_seconds < kOracleSeconds,
          fmt::format("max|analytic-numeric|={:.3e} (tol {:.0e}) over {} states, {:.2f} s (limit {:.0f} s)",
                      worst, kOracleTol, grid.size(), oracle_seconds, kOracleSeconds)};
}

Outcome cptp_invariants() {
  double trace = 0.0, herm = 0.0, neg = 0.0;
  for (const GridPoint& g : grid) {
    const CMatrix& m = g.numeric.matrix();
    trace = std::max(trace, std::abs(m.trace().real() - 1.0));
    herm = std::max(herm, max_abs_entry(m - m.adjoint()));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    neg = std::max(neg, -es.eigenvalues().minCoeff());
  }
  return {!grid.empty() && trace < kTraceTol && herm < kHermitianTol && neg < kNegativeTol,
          fmt::format("trace {:.2e} (tol {:.0e}), hermitian {:.2e} (tol {:.0e}), "
                      "negative eig {:.2e} (tol {:.0e}) on {} states",
                      trace, kTraceTol, herm, kHermitianTol, std::max(0.0, neg), kNegativeTol,
                      grid.size())};
}

Outcome first_law_closure() {
  Rng rng(kSeed + 3);
  double worst = 0.0;
  int evolutions = 0;
  for (int k = 0; k < 100; ++k) {
    const SetupTriple triple = random_setup_triple(rng);
    const HamiltonianOperator h = system_hamiltonian(triple.a.omega_a, triple.a.omega_b);
    for (Setup s : kSetups) {
      const SetupParams& p = triple.get(s);
      const auto times = probe_times(rates(p), s);
      const double t = std::uniform_real_distribution<double>(0.0, times.back())(rng);
      const DensityMatrix rho0 = singlet_state();
      const DensityMatrix rho_t = analytic_state(p, t);
      // Each term from its definition, not from the ledger.
      const double de = internal_energy(rho_t, h) - internal_energy(rho0, h);
      const double dw = ergotropy(rho_t, h) - ergotropy(rho0, h);
      const double q = passive_energy(rho_t.spectrum().values, h) -
                       passive_energy(rho0.spectrum().values, h);
      const double terms = std::max({std::abs(de), std::abs(dw), std::abs(q), 1.0});
      worst = std::max(worst, std::abs(de - dw - q) / terms);
      ++evolutions;
    }
  }
  return {worst < kFirstLawTol,
          fmt::format("max|dE-dW-Q_op|/scale={:.3e} (tol {:.0e}) over {} evolutions (100 per setup)",
                      worst, kFirstLawTol, evolutions)};
}

Outcome energy_additivity() {
  double additivity = 0.0;
  double closed = 0.0;
  for (const GridPoint& g : grid) {
    if (g.setup != Setup::AandB) continue;
    const SetupTriple& tr = g.triple;
    const double wa = tr.a.omega_a;
    const double wb = tr.a.omega_b;
    const HamiltonianOperator h = system_hamiltonian(wa, wb);
    const double e0 = internal_energy(singlet_state(), h);
    const double scale = wa + wb;
    std::array<double, 3> de{};
    for (std::size_t i = 0; i < 3; ++i) {
      de[i] = internal_energy(analytic_state(tr.get(kSetups[i]), g.t), h) - e0;
      const double cf = delta_energy_analytic(kSetups[i], rates(tr.get(kSetups[i])), wa, wb, g.t);
      closed = std::max(closed, std::abs(de[i] - cf) / scale);
    }
    additivity = std::max(additivity, std::abs(de[0] - de[1] - de[2]) / scale);
  }
  return {additivity < kAdditivityTol && closed < kAdditivityTol,
          fmt::format("state-level |dE_a-dE_b-dE_c|/(wA+wB)={:.3e}, closed-form mismatch {:.3e} "
                      "(tol {:.0e}; setup c decays with eta_B)",
                      additivity, closed, kAdditivityTol)};
}

ExperimentConfig figure_config() {
  ExperimentConfig c;
  c.grid.t_min = 1e-10;
  c.grid.t_max = 1e-4;
  c.grid.points = 300;
  return c;
}

Outcome gap_signature() {
  const ExperimentConfig c = figure_config();
  const double threshold = kGapFraction * (c.omega_a - c.omega_b) / 2.0;
  double peak = 0.0;
  double t_peak = 0.0;
  for (const SimulationRow& r : simulate(c)) {
    if (std::abs(r.gap_dw) > peak) {
      peak = std::abs(r.gap_dw);
      t_peak = r.t;
    }
  }
  return {peak > threshold, fmt::format("max|dW-dW_A-dW_B|={:.4e} at t={:.3e} s (needs > {:.1e})",
                                        peak, t_peak, threshold)};
}

Outcome gap_tail() {
  const ExperimentConfig c = figure_config();
  const double threshold = kTailFraction * (c.omega_a + c.omega_b) / 2.0;
  double worst = 0.0;
  double onset = -1.0;
  double last = 0.0;
  int tail = 0;
  for (const SimulationRow& r : simulate(c)) {
    if (r.setups[0].concurrence >= kTailConcurrence) continue;
    if (onset < 0.0) onset = r.t;
    worst = std::max(worst, std::abs(r.gap_w));
    last = r.gap_w;
    ++tail;
  }
  return {tail > 0 && worst < threshold,
          fmt::format("max|W-W_A-W_B|={:.4e} on {} tail samples with concurrence < {:.0e} "
                      "from t={:.3e} s; W-W_A-W_B={:.4e} at t={:.0e} s (needs < {:.1e})",
                      worst, tail, kTailConcurrence, onset, last, c.grid.t_max, threshold)};
}

Outcome product_factorization() {
  Rng rng(kSeed + 6);
  double worst = 0.0;
  int violations = 0;
  for (int k = 0; k < 500; ++k) {
    const double wa = std::uniform_real_distribution<double>(1e12, 3e12)(rng);
    const double wb = std::uniform_real_distribution<double>(0.2, 0.9)(rng) * wa;
    const DensityMatrix ra = random_density(rng, 2);
    const DensityMatrix rb = random_density(rng, 2);
    const HamiltonianOperator h = system_hamiltonian(wa, wb);
    const double joint = ergotropy(tensor(ra, rb), h);
    const double local =
        ergotropy(ra, qubit_hamiltonian(wa)) + ergotropy(rb, qubit_hamiltonian(wb));
    const double d = std::abs(joint - local);
    worst = std::max(worst, d);
    if (d >= kFactorizationTol * (wa + wb)) ++violations;
  }
  return {violations == 0,
          fmt::format("{} of 500 product states exceed {:.0e}(wA+wB); max|W-W_A-W_B|={:.4e}",
                      violations, kFactorizationTol, worst)};
}

Outcome temperature_trends() {
  ExperimentConfig c;
  c.sweep.temperatures = {100, 200, 300, 400, 500, 600, 700, 800, 900};
  const auto common = sweep_common(c);
  bool decreasing = true;
  std::string dws;
  for (std::size_t i = 0; i < common.size(); ++i) {
    if (i && !(common[i].dw < common[i - 1].dw)) decreasing = false;
    dws += fmt::format("{}{:.3e}", i ? "," : "", common[i].dw);
  }
  c.sweep.mean_temperature = 450.0;
  c.sweep.deltas = {100, 300, 500};
  const auto curves = sweep_delta(c);
  bool increasing = curves.size() == 3;
  std::string peaks;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i && !(curves[i].peak_gap_dw > curves[i - 1].peak_gap_dw)) increasing = false;
    peaks += fmt::format("{}{:.5e}", i ? "," : "", curves[i].peak_gap_dw);
  }
  return {decreasing && increasing,
          fmt::format("dW(100..900 K)=[{}] strictly decreasing={}; peak|gap_dW|(dT=100,300,500)=[{}] "
                      "increasing={}",
                      dws, decreasing, peaks, increasing)};
}

Outcome ergotropy_oracle() {
  Rng rng(kSeed + 8);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const DensityMatrix rho = random_density(rng, 4);
    const HamiltonianOperator h = random_hamiltonian(rng, 4);
    const double scale = std::max(std::abs(h.energy(0)), std::abs(h.energy(3)));
    worst = std::max(worst, std::abs(ergotropy(rho, h) - ergotropy_double_sum(rho, h)) / scale);
  }
  const double wa = 2e12, wb = 1e12;
  const double singlet = ergotropy(singlet_state(), system_hamiltonian(wa, wb));
  const double singlet_err = std::abs(singlet - (wa + wb) / 2.0) / ((wa + wb) / 2.0);
  return {worst < kErgotropyTol && singlet_err < kErgotropyTol,
          fmt::format("two routes max rel diff {:.3e}; singlet W={:.6e} rel err {:.1e} (tol {:.0e})",
                      worst, singlet, singlet_err, kErgotropyTol)};
}

Outcome protocol() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.protocol.steps = 10000;
  const HamiltonianOperator h = system_hamiltonian(c.omega_a, c.omega_b);
  const double temperature = c.protocol.temperature;
  const ProtocolTrace tr = protocol_trace(c);

  const DensityMatrix& rho = tr.initial;
  const double scale = (c.omega_a + c.omega_b) / 2.0;
  const double vs_ergotropy = std::abs(tr.stage1.work_extracted - ergotropy(rho, h)) / scale;
  const double df =
      free_energy(rho, h, temperature) - free_energy(tr.stage1.passive.matrix, h, temperature);
  const double vs_free = std::abs(tr.stage1.work_extracted - df) / std::max(std::abs(df), 1.0);

  auto level_energy = [&](const std::vector<double>& p) {
    double e = 0.0;
    for (int n = 0; n < h.dim(); ++n) e += p[static_cast<std::size_t>(n)] * h.energy(n);
    return e;
  };
  double audit = 0.0;
  std::vector<double> prev = tr.initial_populations;
  for (const Stage2Step& s : tr.stage2) {
    const double de = level_energy(s.populations) - level_energy(prev);
    const double denom = std::max({std::abs(s.heat_from_bath), std::abs(s.work_to_weight), scale});
    audit = std::max(audit, std::abs(de - (s.heat_from_bath - s.work_to_weight)) / denom);
    prev = s.populations;
  }
  const double elapsed = seconds_since(start);
  const bool ok = vs_ergotropy < kStage1Tol && vs_free < kFreeEnergyTol &&
                  tr.final_distance < kDistanceTol && audit < kAuditTol &&
                  tr.stage2.size() == 10000 && elapsed < kProtocolSeconds;
  return {ok, fmt::format("stage1 vs W {:.2e} (tol {:.0e}), vs dF {:.2e} (tol {:.0e}); "
                          "N={} TV={:.3e} (tol {:.0e}); step audit {:.2e} (tol {:.0e}); "
                          "{:.2f} s (limit {:.0f} s)",
                          vs_ergotropy, kStage1Tol, vs_free, kFreeEnergyTol, tr.stage2.size(),
                          tr.final_distance, kDistanceTol, audit, kAuditTol, elapsed,
                          kProtocolSeconds)};
}

void locality_diagnostic() {
  const ExperimentConfig c;
  const double t = 1e-7;
  try {
    const LocalitySides s = locality_sides(c.triple(), t);
    const GapReport g = gap_report(c.triple(), t);
    info("10", "locality_sides_diagnostic",
         fmt::format("t={:.0e} s: lhs={:.6e} (closed form {:.6e}, dev {:.3e}); rhs={:.6e} "
                     "(closed form {:.6e}, dev {:.3e}); lhs-rhs={:.6e}, gap_dW={:.6e}",
                     t, s.lhs, s.lhs_closed_form, s.lhs - s.lhs_closed_form, s.rhs,
                     s.rhs_closed_form, s.rhs - s.rhs_closed_form, s.lhs - s.rhs, g.gap_dw));
  } catch (const std::exception& e) {
    info("10", "locality_sides_diagnostic", std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  report("1", "oracle_equivalence", oracle_equivalence);
  report("2", "cptp_invariants", cptp_invariants);
  report("3", "first_law_closure", first_law_closure);
  report("4", "energy_additivity", energy_additivity);
  report("5a", "locality_gap_signature", gap_signature);
  report("5b", "locality_gap_tail", gap_tail);
  report("6", "product_factorization", product_factorization);
  report("7", "temperature_trends", temperature_trends);
  report("8", "ergotropy_oracle", ergotropy_oracle);
  report("9", "protocol", protocol);
  locality_diagnostic();
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
