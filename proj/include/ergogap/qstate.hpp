#pragma once
//
// Dense linear algebra for one- and two-qubit operators.
//
// Basis convention (fixed across the library):
//   single qubit:  index 0 = |+>, index 1 = |->, sigma_z|+-> = +-|+->
//   two qubits:    index 2*a + b  ->  (|++>, |+->, |-+>, |-->)
// The first tensor factor is Alice's qubit (A), the second Bob's (B).
// sigma_- = |-><+| lowers the excited |+> state.
//

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ergogap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace basis {
inline constexpr int kPP = 0;
inline constexpr int kPM = 1;
inline constexpr int kMP = 2;
inline constexpr int kMM = 3;
}  // namespace basis

// Tolerances shared by every state the library produces.
namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNegativeEigen = -1e-8;
}  // namespace tol

// Square complex matrix of dimension 2 or 4 with finite entries.
class ComplexSquareMatrix {
 public:
  explicit ComplexSquareMatrix(CMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& data() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  // max |m - m^dagger| over entries.
  double hermitian_residual() const;

 private:
  CMatrix m_;
};

enum class EigenOrder { Ascending, Descending };

struct SpectralDecomposition {
  std::vector<double> values;
  CMatrix vectors;  // column n is the eigenvector of values[n]

  int dim() const { return static_cast<int>(values.size()); }
  CMatrix reconstruct() const;
};

// Spectral decomposition of a Hermitian matrix. Throws ValidationError
// naming the largest asymmetry when |m - m^dagger|_max > 1e-10.
SpectralDecomposition eigen_hermitian(const ComplexSquareMatrix& m,
                                      EigenOrder order = EigenOrder::Ascending);

// Hermitian, unit trace, positive semidefinite (within tol::*).
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexSquareMatrix& m);
  explicit DensityMatrix(const CMatrix& m) : DensityMatrix(ComplexSquareMatrix(m)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  // Eigenvalues r_n sorted descending with their eigenvectors.
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  double purity() const;

 private:
  CMatrix m_;
  SpectralDecomposition spectrum_;
};

// H = sum_n eps_n |eps_n><eps_n| with eps_n ascending.
class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(const ComplexSquareMatrix& m);
  explicit HamiltonianOperator(const CMatrix& m)
      : HamiltonianOperator(ComplexSquareMatrix(m)) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  double energy(int n) const { return spectrum_.values[static_cast<std::size_t>(n)]; }
  CVector eigenvector(int n) const { return spectrum_.vectors.col(n); }

 private:
  CMatrix m_;
  SpectralDecomposition spectrum_;
};

// Single-qubit operators in the (|+>, |->) basis.
namespace pauli {
CMatrix identity();
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix sigma_minus();
CMatrix sigma_plus();
}  // namespace pauli

CMatrix kron(const CMatrix& a, const CMatrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// (omega_a/2) sigma_z (x) I + (omega_b/2) I (x) sigma_z. Throws DomainError
// for non-positive frequencies; logs a warning to stderr when omega_a <= omega_b.
HamiltonianOperator system_hamiltonian(double omega_a, double omega_b);

// Single-qubit (omega/2) sigma_z.
HamiltonianOperator qubit_hamiltonian(double omega);

// (|+-> - |-+>)/sqrt(2) as a projector.
DensityMatrix singlet_state();

// Projector onto one of the four product basis states.
DensityMatrix basis_state(int index, int dim = 4);

DensityMatrix maximally_mixed(int dim);

enum class Subsystem { A, B };

// Reduced state of the kept qubit.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

// Wootters concurrence.
double concurrence(const DensityMatrix& rho);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Principal square root of a positive semidefinite Hermitian matrix.
CMatrix psd_sqrt(const CMatrix& m);

double max_abs_entry(const CMatrix& m);

}  // namespace ergogap
