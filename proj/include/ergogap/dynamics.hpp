#pragma once
//
// Bath parameterization and reduced two-qubit dynamics for the three
// coupling setups:
//   a) both qubits coupled to their own thermal bath
//   b) only Alice's qubit coupled
//   c) only Bob's qubit coupled
//
// Units: hbar = 1, energies and rates in s^-1, temperatures in kelvin.
//
// All propagators work in the interaction picture with respect to the
// system Hamiltonian. The rotation exp(-i H_s t) only multiplies the
// |+-><-+| coherence by a phase, so the closed-form states below (and the
// numerical integrator used to check them) carry the dissipative part only.
//

#include "ergogap/qstate.hpp"

#include <optional>
#include <string>

namespace ergogap {

// hbar / k_B in s*K.
inline constexpr double kHbarOverKb = 7.6382e-12;

// k_B T / hbar in s^-1.
inline double thermal_energy(double temperature_k) { return temperature_k / kHbarOverKb; }

struct BathSpec {
  double temperature = 0.0;   // K
  double cutoff_ratio = 1.0;  // Lambda / omega
  double coupling = 0.0;      // gamma_0
  double dipole_sq = 0.0;     // |d|^2
  // Direct rate override; when set, Gamma = *rate regardless of the above.
  std::optional<double> rate;

  void validate() const;
};

enum class Setup { AandB, AOnly, BOnly };

std::string to_string(Setup s);
char setup_letter(Setup s);
Setup setup_from_letter(char c);

struct SetupParams {
  Setup setup = Setup::AandB;
  double omega_a = 2e12;
  double omega_b = 1e12;
  std::optional<BathSpec> bath_a;
  std::optional<BathSpec> bath_b;

  // Throws ConfigError when the bath presence does not match the setup.
  void validate() const;
};

struct RateSet {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double nbar_a = 0.0;
  double nbar_b = 0.0;

  // Gamma_i (2 nbar_i + 1), the population relaxation rate.
  double relax_a() const { return gamma_a * (2.0 * nbar_a + 1.0); }
  double relax_b() const { return gamma_b * (2.0 * nbar_b + 1.0); }
};

struct EtaFactors {
  double eta_a = 1.0;
  double eta_b = 1.0;
  double eta = 1.0;
};

// Lorentz-Drude Ohmic spectral density J(Omega).
double spectral_density(double omega, double coupling, double cutoff);

// Bose-Einstein occupation; exactly 0 at T = 0.
double mean_occupation(double omega, double temperature_k);

// Gamma = gamma0^2 omega r^2 |d|^2 / (1 + r^2), or the override.
double decoherence_rate(const BathSpec& bath, double omega);

RateSet rates(const SetupParams& params);

EtaFactors eta_factors(const RateSet& rates, double t);

DensityMatrix analytic_state_setup_a(const SetupParams& params, double t);
DensityMatrix analytic_state_setup_b(const SetupParams& params, double t);
DensityMatrix analytic_state_setup_c(const SetupParams& params, double t);

// Dispatches on params.setup.
DensityMatrix analytic_state(const SetupParams& params, double t);

// t -> infinity limit of analytic_state.
DensityMatrix asymptotic_state(const SetupParams& params);

// Right-hand side sum_i Gamma_i (n_i+1) D[L_i-] rho + Gamma_i n_i D[L_i+] rho
// over the active baths.
CMatrix lindblad_rhs(const RateSet& rates, const CMatrix& rho);

// Fixed-step RK4 integration of lindblad_rhs from rho0 over [0, t] using
// ceil(t/dt) equal steps, re-Hermitizing after each. Throws ConfigError when
// dt * max_i Gamma_i (2 n_i + 1) >= 0.1.
DensityMatrix numerical_lindblad(const SetupParams& params, const DensityMatrix& rho0, double t,
                                 double dt);

// Largest step admitted by the stability guard, scaled by `fraction`.
double stable_step(const SetupParams& params, double fraction = 0.01);

}  // namespace ergogap
