#pragma once
//
// Ergotropy, passive states and the operational first law
//   dE = dW + <W>_ad + <Q>_op
// for the two-qubit system, plus the locality-gap analysis that compares
// the doubly-coupled setup (a) against the singly-coupled ones (b, c).
//

#include "ergogap/dynamics.hpp"
#include "ergogap/qstate.hpp"

#include <vector>

namespace ergogap {

// Spectrum of rho (descending) placed on the ascending eigenbasis of H.
struct PassiveState {
  DensityMatrix matrix;
  std::vector<double> populations;

  // Throws ValidationError when populations are not a non-increasing
  // probability vector of H's dimension.
  static PassiveState from_populations(std::vector<double> populations,
                                       const HamiltonianOperator& h);
};

struct ThermoLedger {
  double delta_energy = 0.0;
  double delta_ergotropy = 0.0;
  double adiabatic_work = 0.0;
  double operational_heat = 0.0;

  // |dE - (dW + W_ad + Q_op)| / max(|terms|, 1).
  double closure_residual() const;
};

PassiveState passive_state(const DensityMatrix& rho, const HamiltonianOperator& h);

// tr[rho H]
double internal_energy(const DensityMatrix& rho, const HamiltonianOperator& h);

// sum_n r_n eps_n with r descending and eps ascending; equals tr[pi H].
double passive_energy(const std::vector<double>& descending_populations,
                      const HamiltonianOperator& h);

// tr[rho H] - tr[pi H].
double ergotropy(const DensityMatrix& rho, const HamiltonianOperator& h);

// sum_{m,n} r_m eps_n (|<eps_n|r_m>|^2 - delta_mn). Independent of
// passive_state; used as the second route in consistency checks.
double ergotropy_double_sum(const DensityMatrix& rho, const HamiltonianOperator& h);

// tr[pi' H'] - tr[pi_m H], with pi' carrying pi_m's populations onto the
// ascending eigenbasis of H'. Exactly 0 when H' == H. Throws
// ValidationError when pi_m is not diagonal in H's eigenbasis.
double adiabatic_work(const PassiveState& pi_m, const HamiltonianOperator& h,
                      const HamiltonianOperator& h_final);

// tr[pi_m H] - tr[pi H] where pi is built from rho and pi_m from rho'.
double operational_heat(const DensityMatrix& rho, const DensityMatrix& rho_final,
                        const HamiltonianOperator& h);

// Time-independent H: W_ad = 0.
ThermoLedger first_law_ledger(const DensityMatrix& rho0, const DensityMatrix& rho_t,
                              const HamiltonianOperator& h);

// Closed-form internal energy change for each setup starting from the
// singlet. Setup c uses eta_b.
double delta_energy_analytic(Setup setup, const RateSet& rates, double omega_a, double omega_b,
                             double t);

// exp(-H / (k_B T / hbar)) / Z. Throws DomainError for T <= 0.
DensityMatrix gibbs_state(const HamiltonianOperator& h, double temperature_k);

// The three setups evaluated on the same qubits and baths.
struct SetupTriple {
  SetupParams a;
  SetupParams b;
  SetupParams c;

  const SetupParams& get(Setup s) const;
  // Throws ConfigError when frequencies or shared baths disagree.
  void validate() const;
};

SetupTriple make_setup_triple(double omega_a, double omega_b, const BathSpec& bath_a,
                              const BathSpec& bath_b);

struct GapReport {
  double t = 0.0;
  double w = 0.0, w_a = 0.0, w_b = 0.0;
  double dw = 0.0, dw_a = 0.0, dw_b = 0.0;
  double gap_w = 0.0;
  double gap_dw = 0.0;
  double concurrence_a = 0.0;
};

GapReport gap_report(const SetupTriple& triple, double t);

// Both sides of the rearranged locality hypothesis
//   W_A(0) + W_B(0) - W(0) + sum_n eps_n <eps_n| rho - rho_A - rho_B |eps_n>
//     = sum_n eps_n <eps_n| pi - pi_A - pi_B |eps_n>
// evaluated from the states, next to the published closed forms for the
// two sides near the decoherence time.
struct LocalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_closed_form = 0.0;
  double rhs_closed_form = 0.0;
};

LocalitySides locality_sides(const SetupTriple& triple, double t);

double locality_lhs_closed_form(const RateSet& rates, double omega_a, double omega_b, double t);
double locality_rhs_closed_form(const RateSet& rates, double omega_a, double omega_b, double t);

// Nonzero entries of an X-shaped state (diagonal plus the |+-><-+| pair).
struct XStateEntries {
  double l11 = 0.0, l22 = 0.0, l33 = 0.0, l44 = 0.0;
  double l23 = 0.0;

  // Throws DomainError when rho has weight outside the X pattern or a
  // complex |+-><-+| coherence.
  static XStateEntries from_state(const DensityMatrix& rho);
};

// Published alpha/beta/Delta ergotropy expressions, evaluated as written.
// Diagnostic only: ergotropy() is authoritative.
double ergotropy_closed_form(Setup setup, const XStateEntries& x, double omega_a, double omega_b);

struct ClosedFormCheck {
  double closed_form = 0.0;
  double generic = 0.0;
  double deviation = 0.0;
};

ClosedFormCheck compare_closed_form(Setup setup, const DensityMatrix& rho, double omega_a,
                                    double omega_b);

struct FactorizationResult {
  double joint = 0.0;      // W(rho_A (x) rho_B, H_A + H_B)
  double local_sum = 0.0;  // W(rho_A, H_A) + W(rho_B, H_B)
  double difference = 0.0;
};

// Throws DomainError unless H is diagonal with the additive structure
// (omega_a/2) sigma_z (x) I + (omega_b/2) I (x) sigma_z.
FactorizationResult factorization_check(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                        const HamiltonianOperator& h);

// W(rho_A (x) rho_B) - W_A - W_B from the local spectra alone. Nonzero only
// when the product of local passive states is not itself passive, i.e. the
// mixed levels |+-> and |-+> end up inverted.
double product_ergotropy_excess(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                double omega_a, double omega_b);

}  // namespace ergogap
