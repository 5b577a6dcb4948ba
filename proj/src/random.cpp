#include "ergogap/random.hpp"

namespace ergogap {

namespace {

CMatrix gaussian_matrix(Rng& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  return g;
}

}  // namespace

CMatrix random_hermitian(Rng& rng, int dim, double scale) {
  const CMatrix g = gaussian_matrix(rng, dim);
  return 0.5 * scale * (g + g.adjoint());
}

CMatrix random_unitary(Rng& rng, int dim) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(rng, dim));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

DensityMatrix random_density(Rng& rng, int dim) {
  const CMatrix g = gaussian_matrix(rng, dim);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(CMatrix(0.5 * (m + m.adjoint())));
}

DensityMatrix random_pure_state(Rng& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  v.normalize();
  return DensityMatrix(CMatrix(v * v.adjoint()));
}

HamiltonianOperator random_hamiltonian(Rng& rng, int dim) {
  return HamiltonianOperator(random_hermitian(rng, dim, 1e12));
}

SetupTriple random_setup_triple(Rng& rng) {
  std::uniform_real_distribution<double> omega(1e12, 3e12);
  std::uniform_real_distribution<double> ratio(0.2, 0.9);
  std::uniform_real_distribution<double> temp(10.0, 1000.0);
  std::uniform_real_distribution<double> log_relax(6.0, 7.0);
  const double wa = omega(rng);
  const double wb = ratio(rng) * wa;
  BathSpec a;
  a.temperature = temp(rng);
  BathSpec b;
  b.temperature = temp(rng);
  a.rate = std::pow(10.0, log_relax(rng)) / (2.0 * mean_occupation(wa, a.temperature) + 1.0);
  b.rate = std::pow(10.0, log_relax(rng)) / (2.0 * mean_occupation(wb, b.temperature) + 1.0);
  return make_setup_triple(wa, wb, a, b);
}

}  // namespace ergogap
