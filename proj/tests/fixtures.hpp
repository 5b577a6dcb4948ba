#pragma once
// Shared test fixtures and independent reference computations.

#include "ergogap/config.hpp"
#include "ergogap/dynamics.hpp"
#include "ergogap/qstate.hpp"
#include "ergogap/thermo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace fixtures {

using namespace ergogap;

// Reference parameter set: omega 2e12 / 1e12 s^-1, 100 K / 300 K, calibrated rates.
inline SetupTriple reference_triple() { return ExperimentConfig{}.triple(); }

// Swaps the tensor factors: |ab> -> |ba>.
inline CMatrix swap_factors(const CMatrix& m) {
  CMatrix p = CMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) p(2 * b + a, 2 * a + b) = 1.0;
  }
  return p * m * p.transpose();
}

// Single-qubit population propagator over t: columns map (p+, p-) forward.
inline Eigen::Matrix2d qubit_population_map(double relax, double nbar, double t) {
  const double eta = std::exp(-relax * t);
  const double up = nbar / (2.0 * nbar + 1.0);
  Eigen::Matrix2d stationary;
  stationary << up, up, 1.0 - up, 1.0 - up;
  return stationary + eta * (Eigen::Matrix2d::Identity() - stationary);
}

// Diagonal of a two-qubit state propagated by independent local chains.
inline std::array<double, 4> propagate_populations(const std::array<double, 4>& p,
                                                   const RateSet& r, double t) {
  const Eigen::Matrix2d ma = qubit_population_map(r.relax_a(), r.nbar_a, t);
  const Eigen::Matrix2d mb = qubit_population_map(r.relax_b(), r.nbar_b, t);
  std::array<double, 4> out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int a0 = 0; a0 < 2; ++a0) {
        for (int b0 = 0; b0 < 2; ++b0) out[2 * a + b] += ma(a, a0) * mb(b, b0) * p[2 * a0 + b0];
      }
    }
  }
  return out;
}

inline std::array<double, 4> diagonal(const DensityMatrix& rho) {
  return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(3, 3).real()};
}

// Ergotropy by minimizing passive energy over every pairing of spectrum to levels.
inline double ergotropy_bruteforce(const DensityMatrix& rho, const HamiltonianOperator& h) {
  const int d = rho.dim();
  std::vector<double> r = rho.spectrum().values;
  std::vector<double> e(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i)] = h.energy(i);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += r[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return (rho.matrix() * h.matrix()).trace().real() - best;
}

// Gibbs populations for ascending energies, computed directly.
inline std::vector<double> gibbs_populations_oracle(const std::vector<double>& energies,
                                                    double temperature_k) {
  const double kt = temperature_k / 7.6382e-12;
  std::vector<double> w;
  for (double e : energies) w.push_back(std::exp(-(e - energies.front()) / kt));
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= z;
  return w;
}

}  // namespace fixtures
