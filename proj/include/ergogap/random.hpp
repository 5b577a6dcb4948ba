#pragma once
// Random operators, states and setups for property checks.

#include "ergogap/dynamics.hpp"
#include "ergogap/qstate.hpp"
#include "ergogap/thermo.hpp"

#include <random>

namespace ergogap {

using Rng = std::mt19937_64;

CMatrix random_hermitian(Rng& rng, int dim, double scale = 1.0);
CMatrix random_unitary(Rng& rng, int dim);

// Full-rank by construction: G G^dagger / tr with Gaussian G.
DensityMatrix random_density(Rng& rng, int dim);
DensityMatrix random_pure_state(Rng& rng, int dim);

// Random two-qubit Hamiltonian with spectrum on the 1e12 s^-1 scale.
HamiltonianOperator random_hamiltonian(Rng& rng, int dim);

// omega_a in [1e12, 3e12], omega_b in [0.2, 0.9] omega_a, temperatures in
// [10, 1000] K, and rate overrides chosen so that each population
// relaxation rate Gamma_i (2 n_i + 1) lies in [1e6, 1e7] s^-1.
SetupTriple random_setup_triple(Rng& rng);

}  // namespace ergogap
