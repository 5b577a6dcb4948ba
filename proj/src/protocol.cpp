#include "ergogap/protocol.hpp"

#include "ergogap/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ergogap {

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double r : rho.spectrum().values) {
    if (r > 0.0) s -= r * std::log(r);
  }
  return s;
}

double free_energy(const DensityMatrix& rho, const HamiltonianOperator& h, double temperature_k) {
  if (!(temperature_k > 0.0)) throw DomainError("free_energy: temperature must be positive");
  return internal_energy(rho, h) - thermal_energy(temperature_k) * von_neumann_entropy(rho);
}

Stage1Result stage1_extract(const DensityMatrix& rho, const HamiltonianOperator& h) {
  if (rho.dim() != h.dim()) throw DomainError("stage1_extract: dimension mismatch");
  const SpectralDecomposition& rs = rho.spectrum();
  WeightLedger weight;
  for (int n = 0; n < rho.dim(); ++n) {
    const CVector v = rs.vectors.col(n);
    const double offset = v.dot(h.matrix() * v).real() - h.energy(n);
    const double p = rs.values[static_cast<std::size_t>(n)];
    weight.branch_offsets.push_back(offset);
    weight.branch_probabilities.push_back(p);
    weight.mean_energy_gain += p * offset;
  }
  Stage1Result out{passive_state(rho, h), std::move(weight), 0.0};
  out.work_extracted = out.weight.mean_energy_gain;
  return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

namespace {

std::vector<double> gibbs_populations(const HamiltonianOperator& h, double temperature_k) {
  const double kt = thermal_energy(temperature_k);
  std::vector<double> g(static_cast<std::size_t>(h.dim()));
  double z = 0.0;
  for (int n = 0; n < h.dim(); ++n) {
    g[static_cast<std::size_t>(n)] = std::exp(-(h.energy(n) - h.energy(0)) / kt);
    z += g[static_cast<std::size_t>(n)];
  }
  for (double& x : g) x /= z;
  return g;
}

struct PairMove {
  int level = -1;
  double moved = 0.0;  // signed, upward positive
};

// Net population that still has to cross from levels <= i to levels > i
// is flow_i = sum_{j>i} (g_j - p_j). Moving along pair i only changes
// flow_i, and taking population out of a level above its target cannot
// increase the total-variation distance.
PairMove choose_move(const std::vector<double>& p, const std::vector<double>& g, double fraction) {
  const int d = static_cast<int>(p.size());
  PairMove best;
  double flow = 0.0;
  for (int i = d - 2; i >= 0; --i) {
    flow += g[static_cast<std::size_t>(i + 1)] - p[static_cast<std::size_t>(i + 1)];
    if (flow == 0.0) continue;
    const int source = flow > 0.0 ? i : i + 1;
    const double excess = p[static_cast<std::size_t>(source)] - g[static_cast<std::size_t>(source)];
    if (excess <= 0.0) continue;
    const double amount = std::min(fraction * std::abs(flow), excess);
    if (amount > std::abs(best.moved)) {
      best.level = i;
      best.moved = flow > 0.0 ? amount : -amount;
    }
  }
  return best;
}

}  // namespace

ProtocolTrace stage2_thermalize(const PassiveState& pi_s, const HamiltonianOperator& h,
                                double temperature_k, const Stage2Options& options) {
  if (options.steps < 1) throw DomainError("stage2_thermalize: need at least one step");
  if (!(temperature_k > 0.0)) throw DomainError("stage2_thermalize: temperature must be positive");
  if (pi_s.matrix.dim() != h.dim()) throw DomainError("stage2_thermalize: dimension mismatch");
  const CMatrix& m = pi_s.matrix.matrix();
  const double scale = std::max(1.0, max_abs_entry(h.matrix()));
  if (max_abs_entry(m * h.matrix() - h.matrix() * m) > 1e-10 * scale) {
    throw ValidationError("stage2_thermalize: state is not diagonal in the H eigenbasis");
  }

  const double kt = thermal_energy(temperature_k);
  const int d = h.dim();
  std::vector<double> p = pi_s.populations;
  const std::vector<double> g = gibbs_populations(h, temperature_k);

  const double start = total_variation(p, g);
  const double decades = start > options.target_distance
                             ? std::log(start / options.target_distance)
                             : 1.0;
  const double fraction =
      std::min(1.0, static_cast<double>(d - 1) * std::max(decades, 1.0) / options.steps);

  std::vector<Stage2Step> steps;
  steps.reserve(static_cast<std::size_t>(options.steps));
  double heat = 0.0;
  double work = 0.0;
  for (int k = 0; k < options.steps; ++k) {
    Stage2Step step;
    step.index = k + 1;
    const PairMove move = choose_move(p, g, fraction);
    if (move.level >= 0) {
      const auto lo = static_cast<std::size_t>(move.level);
      p[lo] -= move.moved;
      p[lo + 1] += move.moved;
      const double r0 = p[lo];
      const double r1 = p[lo + 1];
      step.level = move.level;
      step.moved = move.moved;
      step.bath = ThermalQubit{r0 / (r0 + r1), r1 / (r0 + r1), kt * std::log(r0 / r1)};
      const double level_gap = h.energy(move.level + 1) - h.energy(move.level);
      step.heat_from_bath = move.moved * step.bath.gap;
      step.work_to_weight = move.moved * (step.bath.gap - level_gap);
      step.energy_change = move.moved * level_gap;
    }
    step.populations = p;
    step.distance = total_variation(p, g);
    heat += step.heat_from_bath;
    work += step.work_to_weight;
    steps.push_back(std::move(step));
  }

  // Rebuild through the eigenbasis; stage-2 populations need not stay
  // sorted mid-run, so this bypasses the passivity check.
  const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), d);
  const CMatrix final_m =
      h.spectrum().vectors * pv.cast<Complex>().asDiagonal() * h.spectrum().vectors.adjoint();
  ProtocolTrace trace{pi_s.matrix,
                      Stage1Result{pi_s, WeightLedger{}, 0.0},
                      std::move(steps),
                      pi_s.populations,
                      g,
                      PassiveState{DensityMatrix(final_m), p},
                      total_variation(p, g),
                      heat,
                      work};
  return trace;
}

ProtocolTrace run_two_stage_protocol(const DensityMatrix& rho, const HamiltonianOperator& h,
                                     double temperature_k, const Stage2Options& options) {
  Stage1Result s1 = stage1_extract(rho, h);
  ProtocolTrace trace = stage2_thermalize(s1.passive, h, temperature_k, options);
  trace.initial = rho;
  trace.stage1 = std::move(s1);
  return trace;
}

}  // namespace ergogap
