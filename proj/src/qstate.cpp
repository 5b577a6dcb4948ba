#include "ergogap/qstate.hpp"

#include "ergogap/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

namespace ergogap {

namespace {

void require_dim(int dim, const char* what) {
  if (dim != 2 && dim != 4) {
    std::ostringstream os;
    os << what << ": dimension must be 2 or 4, got " << dim;
    throw DomainError(os.str());
  }
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexSquareMatrix::ComplexSquareMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DomainError("ComplexSquareMatrix: matrix is not square");
  }
  require_dim(static_cast<int>(m_.rows()), "ComplexSquareMatrix");
  for (Eigen::Index i = 0; i < m_.size(); ++i) {
    const Complex z = m_.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("ComplexSquareMatrix: non-finite entry");
    }
  }
}

double ComplexSquareMatrix::hermitian_residual() const {
  return max_abs_entry(m_ - m_.adjoint());
}

CMatrix SpectralDecomposition::reconstruct() const {
  const Eigen::VectorXd lambda =
      Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return vectors * lambda.cast<Complex>().asDiagonal() * vectors.adjoint();
}

SpectralDecomposition eigen_hermitian(const ComplexSquareMatrix& m, EigenOrder order) {
  // Scale-aware check: Hamiltonians carry entries ~1e12.
  const double scale = std::max(1.0, max_abs_entry(m.data()));
  const double asym = m.hermitian_residual();
  if (asym > 1e-10 * scale) {
    std::ostringstream os;
    os << "eigen_hermitian: matrix is not Hermitian (max |m - m^dagger| = " << asym << ")";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m.data()));
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigen_hermitian: eigensolver did not converge");
  }
  SpectralDecomposition out;
  const int n = m.dim();
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    // Eigen returns ascending eigenvalues.
    const int src = order == EigenOrder::Ascending ? k : n - 1 - k;
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(src);
    out.vectors.col(k) = solver.eigenvectors().col(src);
  }
  return out;
}

DensityMatrix::DensityMatrix(const ComplexSquareMatrix& m) : m_(m.data()) {
  const double asym = m.hermitian_residual();
  if (asym > tol::kHermitian) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (residual " << asym << ")";
    throw ValidationError(os.str());
  }
  m_ = hermitize(m_);
  const double trace = m_.trace().real();
  if (std::abs(trace - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << trace << " != 1";
    throw ValidationError(os.str());
  }
  spectrum_ = eigen_hermitian(ComplexSquareMatrix(m_), EigenOrder::Descending);
  const double min_eig = spectrum_.values.back();
  if (min_eig < tol::kNegativeEigen) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    throw ValidationError(os.str());
  }
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

HamiltonianOperator::HamiltonianOperator(const ComplexSquareMatrix& m)
    : m_(hermitize(m.data())), spectrum_(eigen_hermitian(m, EigenOrder::Ascending)) {}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

CMatrix sigma_plus() { return sigma_minus().adjoint(); }

}  // namespace pauli

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw DomainError("tensor: both factors must be single-qubit states");
  }
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

HamiltonianOperator system_hamiltonian(double omega_a, double omega_b) {
  if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
    throw DomainError("system_hamiltonian: frequencies must be positive");
  }
  if (omega_a <= omega_b) {
    std::cerr << "warning: system_hamiltonian called with omega_a <= omega_b ("
              << omega_a << " <= " << omega_b << ")\n";
  }
  const CMatrix id = pauli::identity();
  const CMatrix sz = pauli::sigma_z();
  return HamiltonianOperator(CMatrix(0.5 * omega_a * kron(sz, id) + 0.5 * omega_b * kron(id, sz)));
}

HamiltonianOperator qubit_hamiltonian(double omega) {
  if (!(omega > 0.0)) {
    throw DomainError("qubit_hamiltonian: frequency must be positive");
  }
  return HamiltonianOperator(CMatrix(0.5 * omega * pauli::sigma_z()));
}

DensityMatrix singlet_state() {
  CVector psi = CVector::Zero(4);
  psi(basis::kPM) = 1.0 / std::sqrt(2.0);
  psi(basis::kMP) = -1.0 / std::sqrt(2.0);
  return DensityMatrix(CMatrix(psi * psi.adjoint()));
}

DensityMatrix basis_state(int index, int dim) {
  require_dim(dim, "basis_state");
  if (index < 0 || index >= dim) {
    throw DomainError("basis_state: index out of range");
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix maximally_mixed(int dim) {
  require_dim(dim, "maximally_mixed");
  return DensityMatrix(CMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) {
    throw DomainError("partial_trace: input must be a two-qubit state");
  }
  CMatrix out = CMatrix::Zero(2, 2);
  const CMatrix& m = rho.matrix();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        out(i, j) += keep == Subsystem::A ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return DensityMatrix(out);
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(m));
  Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.cast<Complex>().asDiagonal() *
         solver.eigenvectors().adjoint();
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw DomainError("concurrence: input must be a two-qubit state");
  }
  // With rho = Phi Phi^dagger, the singular values of Phi^T (sy x sy) Phi are
  // the square roots of the eigenvalues of rho rho~, obtained without taking
  // square roots of tiny eigenvalues.
  const CMatrix yy = kron(pauli::sigma_y(), pauli::sigma_y());
  const auto& sd = rho.spectrum();
  CMatrix phi = sd.vectors;
  for (int k = 0; k < 4; ++k) phi.col(k) *= std::sqrt(std::max(0.0, sd.values[static_cast<std::size_t>(k)]));
  const CMatrix tau = phi.transpose() * yy * phi;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(tau).singularValues();
  std::vector<double> s(sv.data(), sv.data() + sv.size());
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DomainError("fidelity: dimension mismatch");
  }
  const CMatrix root = psd_sqrt(rho.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitize(root * sigma.matrix() * root),
                                                Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    tr += std::sqrt(std::max(0.0, solver.eigenvalues()(k)));
  }
  return tr * tr;
}

}  // namespace ergogap
