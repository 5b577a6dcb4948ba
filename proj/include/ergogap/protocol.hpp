#pragma once
//
// Two-stage work extraction and thermalization.
//
// Stage 1 rotates the system onto its passive state with a unitary that
// maps |r_n> to |eps_n> and shifts a weight by eps_n = <r_n|H|r_n> - eps_n
// in branch n. The weight is tracked through its energy bookkeeping only.
//
// Stage 2 moves the passive populations to the Gibbs state of temperature
// T one thermal qubit at a time. Each step swaps a bath qubit with one
// adjacent level pair (i, i+1); the qubit's population ratio equals the
// pair's target ratio, so its gap is E_bath = (k_B T/hbar) ln(r'_i / r'_{i+1}).
// Per step, with dr the population moved from level i to i+1:
//   heat_from_bath   = dr * E_bath                (> 0: system gains energy)
//   work_to_weight   = dr * (E_bath - (eps_{i+1} - eps_i))
//   dE_system        = heat_from_bath - work_to_weight
//

#include "ergogap/qstate.hpp"
#include "ergogap/thermo.hpp"

#include <vector>

namespace ergogap {

struct WeightLedger {
  double mean_energy_gain = 0.0;
  std::vector<double> branch_offsets;        // eps_n per branch n
  std::vector<double> branch_probabilities;  // r_n
};

struct ThermalQubit {
  double p0 = 1.0;
  double p1 = 0.0;
  double gap = 0.0;  // E_bath in s^-1
};

struct Stage1Result {
  PassiveState passive;
  WeightLedger weight;
  double work_extracted = 0.0;
};

struct Stage2Step {
  int index = 0;
  int level = 0;              // pair (level, level + 1)
  double moved = 0.0;         // dr, population moved upward
  ThermalQubit bath;
  std::vector<double> populations;  // after the step
  double heat_from_bath = 0.0;
  double work_to_weight = 0.0;
  double energy_change = 0.0;
  double distance = 0.0;      // total variation to the Gibbs target after the step
};

struct Stage2Options {
  int steps = 10000;
  double target_distance = 1e-9;
};

struct ProtocolTrace {
  DensityMatrix initial;
  Stage1Result stage1;
  std::vector<Stage2Step> stage2;
  std::vector<double> initial_populations;  // stage-2 start
  std::vector<double> target_populations;   // Gibbs(T) on ascending energies
  PassiveState final_state;
  double final_distance = 0.0;
  double total_heat = 0.0;
  double total_work_to_weight = 0.0;
};

// -sum r ln r with 0 ln 0 = 0 (nats).
double von_neumann_entropy(const DensityMatrix& rho);

// tr[rho H] - (k_B T/hbar) S(rho). Throws DomainError for T <= 0.
double free_energy(const DensityMatrix& rho, const HamiltonianOperator& h, double temperature_k);

Stage1Result stage1_extract(const DensityMatrix& rho, const HamiltonianOperator& h);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// Drives pi_s toward Gibbs(H, T) in exactly `steps` single-pair swaps. Each
// step moves population out of a level that exceeds its target, so the
// total-variation distance never increases. Steps with nothing left to
// move are recorded as no-ops. If `steps` is too small for
// `target_distance`, the achieved distance is reported in the trace.
ProtocolTrace stage2_thermalize(const PassiveState& pi_s, const HamiltonianOperator& h,
                                double temperature_k, const Stage2Options& options = {});

// Stage 1 followed by stage 2.
ProtocolTrace run_two_stage_protocol(const DensityMatrix& rho, const HamiltonianOperator& h,
                                     double temperature_k, const Stage2Options& options = {});

}  // namespace ergogap
