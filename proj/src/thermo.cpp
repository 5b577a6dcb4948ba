#include "ergogap/thermo.hpp"

#include "ergogap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ergogap {

namespace {

CMatrix diagonal_in_basis(const std::vector<double>& populations, const CMatrix& basis_vectors) {
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(
      populations.data(), static_cast<Eigen::Index>(populations.size()));
  return basis_vectors * p.cast<Complex>().asDiagonal() * basis_vectors.adjoint();
}

void require_same_dim(int a, int b, const char* fn) {
  if (a != b) {
    std::ostringstream os;
    os << fn << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DomainError(os.str());
  }
}

double energy_scale(const HamiltonianOperator& h) {
  return std::max(1.0, max_abs_entry(h.matrix()));
}

}  // namespace

PassiveState PassiveState::from_populations(std::vector<double> populations,
                                            const HamiltonianOperator& h) {
  require_same_dim(static_cast<int>(populations.size()), h.dim(), "PassiveState");
  for (std::size_t n = 1; n < populations.size(); ++n) {
    if (populations[n] > populations[n - 1] + 1e-12) {
      throw ValidationError("PassiveState: populations must be non-increasing with energy");
    }
  }
  CMatrix m = diagonal_in_basis(populations, h.spectrum().vectors);
  return PassiveState{DensityMatrix(m), std::move(populations)};
}

double ThermoLedger::closure_residual() const {
  const double scale = std::max({1.0, std::abs(delta_energy), std::abs(delta_ergotropy),
                                 std::abs(adiabatic_work), std::abs(operational_heat)});
  return std::abs(delta_energy - (delta_ergotropy + adiabatic_work + operational_heat)) / scale;
}

PassiveState passive_state(const DensityMatrix& rho, const HamiltonianOperator& h) {
  require_same_dim(rho.dim(), h.dim(), "passive_state");
  // Eigenvalues come out descending and energies ascending; within
  // degenerate clusters the solver's index order is kept.
  std::vector<double> r = rho.spectrum().values;
  CMatrix m = diagonal_in_basis(r, h.spectrum().vectors);
  return PassiveState{DensityMatrix(m), std::move(r)};
}

double internal_energy(const DensityMatrix& rho, const HamiltonianOperator& h) {
  require_same_dim(rho.dim(), h.dim(), "internal_energy");
  return (rho.matrix() * h.matrix()).trace().real();
}

double passive_energy(const std::vector<double>& descending_populations,
                      const HamiltonianOperator& h) {
  require_same_dim(static_cast<int>(descending_populations.size()), h.dim(), "passive_energy");
  double e = 0.0;
  for (int n = 0; n < h.dim(); ++n) {
    e += descending_populations[static_cast<std::size_t>(n)] * h.energy(n);
  }
  return e;
}

double ergotropy(const DensityMatrix& rho, const HamiltonianOperator& h) {
  require_same_dim(rho.dim(), h.dim(), "ergotropy");
  return internal_energy(rho, h) - passive_energy(rho.spectrum().values, h);
}

double ergotropy_double_sum(const DensityMatrix& rho, const HamiltonianOperator& h) {
  require_same_dim(rho.dim(), h.dim(), "ergotropy_double_sum");
  const SpectralDecomposition& rs = rho.spectrum();
  const SpectralDecomposition& hs = h.spectrum();
  double w = 0.0;
  for (int m = 0; m < rho.dim(); ++m) {
    for (int n = 0; n < h.dim(); ++n) {
      const double overlap = std::norm(hs.vectors.col(n).dot(rs.vectors.col(m)));
      w += rs.values[static_cast<std::size_t>(m)] * hs.values[static_cast<std::size_t>(n)] *
           (overlap - (m == n ? 1.0 : 0.0));
    }
  }
  return w;
}

double adiabatic_work(const PassiveState& pi_m, const HamiltonianOperator& h,
                      const HamiltonianOperator& h_final) {
  require_same_dim(pi_m.matrix.dim(), h.dim(), "adiabatic_work");
  require_same_dim(h.dim(), h_final.dim(), "adiabatic_work");
  const CMatrix& p = pi_m.matrix.matrix();
  const double comm = max_abs_entry(p * h.matrix() - h.matrix() * p) / energy_scale(h);
  const bool ordered = std::is_sorted(pi_m.populations.rbegin(), pi_m.populations.rend(),
                                      [](double x, double y) { return x < y - 1e-12; });
  const double recon = max_abs_entry(p - diagonal_in_basis(pi_m.populations, h.spectrum().vectors));
  if (comm > 1e-10 || !ordered || recon > 1e-10) {
    throw ValidationError("adiabatic_work: state is not passive with respect to H");
  }
  if (h_final.matrix() == h.matrix()) return 0.0;
  return passive_energy(pi_m.populations, h_final) - passive_energy(pi_m.populations, h);
}

double operational_heat(const DensityMatrix& rho, const DensityMatrix& rho_final,
                        const HamiltonianOperator& h) {
  require_same_dim(rho.dim(), h.dim(), "operational_heat");
  require_same_dim(rho_final.dim(), h.dim(), "operational_heat");
  return passive_energy(rho_final.spectrum().values, h) - passive_energy(rho.spectrum().values, h);
}

ThermoLedger first_law_ledger(const DensityMatrix& rho0, const DensityMatrix& rho_t,
                              const HamiltonianOperator& h) {
  ThermoLedger ledger;
  ledger.delta_energy = internal_energy(rho_t, h) - internal_energy(rho0, h);
  ledger.delta_ergotropy = ergotropy(rho_t, h) - ergotropy(rho0, h);
  ledger.adiabatic_work = adiabatic_work(passive_state(rho_t, h), h, h);
  ledger.operational_heat = operational_heat(rho0, rho_t, h);
  return ledger;
}

double delta_energy_analytic(Setup setup, const RateSet& rates, double omega_a, double omega_b,
                             double t) {
  const EtaFactors e = eta_factors(rates, t);
  const double part_a = omega_a * (e.eta_a - 1.0) / (2.0 * (2.0 * rates.nbar_a + 1.0));
  const double part_b = omega_b * (e.eta_b - 1.0) / (2.0 * (2.0 * rates.nbar_b + 1.0));
  switch (setup) {
    case Setup::AandB: return part_a + part_b;
    case Setup::AOnly: return part_a;
    case Setup::BOnly: return part_b;
  }
  return 0.0;
}

DensityMatrix gibbs_state(const HamiltonianOperator& h, double temperature_k) {
  if (!(temperature_k > 0.0)) throw DomainError("gibbs_state: temperature must be positive");
  const double kt = thermal_energy(temperature_k);
  const double ground = h.energy(0);
  std::vector<double> p(static_cast<std::size_t>(h.dim()));
  double z = 0.0;
  for (int n = 0; n < h.dim(); ++n) {
    p[static_cast<std::size_t>(n)] = std::exp(-(h.energy(n) - ground) / kt);
    z += p[static_cast<std::size_t>(n)];
  }
  for (double& x : p) x /= z;
  return DensityMatrix(diagonal_in_basis(p, h.spectrum().vectors));
}

const SetupParams& SetupTriple::get(Setup s) const {
  switch (s) {
    case Setup::AandB: return a;
    case Setup::AOnly: return b;
    case Setup::BOnly: return c;
  }
  return a;
}

void SetupTriple::validate() const {
  a.validate();
  b.validate();
  c.validate();
  if (a.setup != Setup::AandB || b.setup != Setup::AOnly || c.setup != Setup::BOnly) {
    throw ConfigError("SetupTriple: members must be setups a, b, c in order");
  }
  if (a.omega_a != b.omega_a || a.omega_a != c.omega_a || a.omega_b != b.omega_b ||
      a.omega_b != c.omega_b) {
    throw ConfigError("SetupTriple: setups disagree on qubit frequencies");
  }
  auto same = [](const BathSpec& x, const BathSpec& y) {
    return x.temperature == y.temperature && x.cutoff_ratio == y.cutoff_ratio &&
           x.coupling == y.coupling && x.dipole_sq == y.dipole_sq && x.rate == y.rate;
  };
  if (!same(*a.bath_a, *b.bath_a) || !same(*a.bath_b, *c.bath_b)) {
    throw ConfigError("SetupTriple: setups disagree on shared bath parameters");
  }
}

SetupTriple make_setup_triple(double omega_a, double omega_b, const BathSpec& bath_a,
                              const BathSpec& bath_b) {
  SetupTriple t{SetupParams{Setup::AandB, omega_a, omega_b, bath_a, bath_b},
                SetupParams{Setup::AOnly, omega_a, omega_b, bath_a, std::nullopt},
                SetupParams{Setup::BOnly, omega_a, omega_b, std::nullopt, bath_b}};
  t.validate();
  return t;
}

GapReport gap_report(const SetupTriple& triple, double t) {
  triple.validate();
  const HamiltonianOperator h = system_hamiltonian(triple.a.omega_a, triple.a.omega_b);
  const DensityMatrix rho0 = singlet_state();
  const double w0 = ergotropy(rho0, h);

  const DensityMatrix rho = analytic_state_setup_a(triple.a, t);
  const DensityMatrix rho_a = analytic_state_setup_b(triple.b, t);
  const DensityMatrix rho_b = analytic_state_setup_c(triple.c, t);

  GapReport g;
  g.t = t;
  g.w = ergotropy(rho, h);
  g.w_a = ergotropy(rho_a, h);
  g.w_b = ergotropy(rho_b, h);
  g.dw = g.w - w0;
  g.dw_a = g.w_a - w0;
  g.dw_b = g.w_b - w0;
  g.gap_w = g.w - g.w_a - g.w_b;
  g.gap_dw = g.dw - g.dw_a - g.dw_b;
  g.concurrence_a = concurrence(rho);
  return g;
}

double locality_lhs_closed_form(const RateSet& r, double omega_a, double omega_b, double t) {
  const EtaFactors e = eta_factors(r, t);
  return 0.5 * (omega_a - omega_b) * ((e.eta_b - 1.0) / (2.0 * r.nbar_b + 1.0) - 1.0);
}

double locality_rhs_closed_form(const RateSet& r, double omega_a, double omega_b, double t) {
  const EtaFactors e = eta_factors(r, t);
  const double na = r.nbar_a;
  const double nb = r.nbar_b;
  const double ka = 2.0 * na + 1.0;
  const double kb = 2.0 * nb + 1.0;
  const double denom = 2.0 * (nb - na) + (e.eta_b - e.eta_a) + 2.0 * (e.eta_b * na - e.eta_a * nb);
  const double bracket = (e.eta_b - 1.0) / kb + kb * 2.0 * e.eta_b / (e.eta_b - 1.0) +
                         ka * 2.0 * e.eta_a / (e.eta_a - 1.0) + ka * kb * 2.0 * e.eta / denom;
  return 0.5 * (omega_a - omega_b) * bracket;
}

LocalitySides locality_sides(const SetupTriple& triple, double t) {
  triple.validate();
  const HamiltonianOperator h = system_hamiltonian(triple.a.omega_a, triple.a.omega_b);
  const double w0 = ergotropy(analytic_state_setup_a(triple.a, 0.0), h);
  const double wa0 = ergotropy(analytic_state_setup_b(triple.b, 0.0), h);
  const double wb0 = ergotropy(analytic_state_setup_c(triple.c, 0.0), h);

  const DensityMatrix rho = analytic_state_setup_a(triple.a, t);
  const DensityMatrix rho_a = analytic_state_setup_b(triple.b, t);
  const DensityMatrix rho_b = analytic_state_setup_c(triple.c, t);
  const PassiveState pi = passive_state(rho, h);
  const PassiveState pi_a = passive_state(rho_a, h);
  const PassiveState pi_b = passive_state(rho_b, h);

  // sum_n eps_n <eps_n| X |eps_n>
  auto energy_diag = [&h](const CMatrix& x) {
    double s = 0.0;
    for (int n = 0; n < h.dim(); ++n) {
      const CVector v = h.eigenvector(n);
      s += h.energy(n) * v.dot(x * v).real();
    }
    return s;
  };

  LocalitySides out;
  out.lhs = wa0 + wb0 - w0 + energy_diag(rho.matrix() - rho_a.matrix() - rho_b.matrix());
  out.rhs = energy_diag(pi.matrix.matrix() - pi_a.matrix.matrix() - pi_b.matrix.matrix());
  const RateSet r = rates(triple.a);
  out.lhs_closed_form = locality_lhs_closed_form(r, triple.a.omega_a, triple.a.omega_b, t);
  out.rhs_closed_form = locality_rhs_closed_form(r, triple.a.omega_a, triple.a.omega_b, t);
  return out;
}

XStateEntries XStateEntries::from_state(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DomainError("XStateEntries: expected a two-qubit state");
  const CMatrix& m = rho.matrix();
  double outside = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool diag = i == j;
      const bool anti = (i == basis::kPM && j == basis::kMP) || (i == basis::kMP && j == basis::kPM);
      if (!diag && !anti) outside = std::max(outside, std::abs(m(i, j)));
    }
  }
  if (outside > 1e-12 || std::abs(m(basis::kPM, basis::kMP).imag()) > 1e-12) {
    throw DomainError("XStateEntries: state is not a real X-state");
  }
  return XStateEntries{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(),
                       m(basis::kPM, basis::kMP).real()};
}

namespace {

// num / (2 l32) squared, as the weight x^2/(1+x^2). At l32 == 0 the ratio
// is taken in its limit: 0 when num == 0, infinite otherwise.
double ratio_weight(double num, double l32) {
  if (l32 == 0.0) return num == 0.0 ? 0.0 : 1.0;
  const double x = num / (2.0 * l32);
  return x * x / (1.0 + x * x);
}

}  // namespace

double ergotropy_closed_form(Setup setup, const XStateEntries& x, double omega_a, double omega_b) {
  const double l22 = x.l22;
  const double l33 = x.l33;
  const double l23 = x.l23;
  const double l32 = x.l23;
  double delta = 0.0;
  if (setup == Setup::AandB) {
    const double d = l33 * l33 - l22 * l22;
    delta = std::sqrt(d * d + 4.0 * l23 * l32);
  } else {
    const double d = l33 - l22;
    delta = std::sqrt(d * d + 4.0 * l23 * l32);
  }
  const double half_gap = 0.5 * (omega_a - omega_b);
  const double alpha_w = ratio_weight(l22 - l33 - delta, l32);
  // 1/(1+beta^2) = 1 - beta^2/(1+beta^2)
  const double beta_w = 1.0 - ratio_weight(l22 - l33 + delta, l32);
  return (l22 + l33 + delta) * half_gap * (-beta_w) + (l22 + l33 - delta) * half_gap * alpha_w;
}

ClosedFormCheck compare_closed_form(Setup setup, const DensityMatrix& rho, double omega_a,
                                    double omega_b) {
  ClosedFormCheck c;
  c.closed_form = ergotropy_closed_form(setup, XStateEntries::from_state(rho), omega_a, omega_b);
  c.generic = ergotropy(rho, system_hamiltonian(omega_a, omega_b));
  c.deviation = c.closed_form - c.generic;
  return c;
}

FactorizationResult factorization_check(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                        const HamiltonianOperator& h) {
  if (rho_a.dim() != 2 || rho_b.dim() != 2 || h.dim() != 4) {
    throw DomainError("factorization_check: expects qubit states and a two-qubit Hamiltonian");
  }
  // Split H into local parts via partial traces and verify the split.
  const CMatrix& m = h.matrix();
  CMatrix ha = CMatrix::Zero(2, 2);
  CMatrix hb = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        ha(i, j) += 0.5 * m(2 * i + k, 2 * j + k);
        hb(i, j) += 0.5 * m(2 * k + i, 2 * k + j);
      }
    }
  }
  const Complex shift = 0.25 * m.trace();
  ha -= 0.5 * shift * CMatrix::Identity(2, 2);
  hb -= 0.5 * shift * CMatrix::Identity(2, 2);
  const CMatrix id = pauli::identity();
  const CMatrix rebuilt = kron(ha, id) + kron(id, hb);
  if (max_abs_entry(rebuilt - m) > 1e-12 * energy_scale(h)) {
    throw DomainError("factorization_check: H is not of the form H_A (x) I + I (x) H_B");
  }
  FactorizationResult out;
  out.joint = ergotropy(tensor(rho_a, rho_b), h);
  out.local_sum = ergotropy(rho_a, HamiltonianOperator(ha)) + ergotropy(rho_b, HamiltonianOperator(hb));
  out.difference = out.joint - out.local_sum;
  return out;
}

double product_ergotropy_excess(const DensityMatrix& rho_a, const DensityMatrix& rho_b,
                                double omega_a, double omega_b) {
  if (rho_a.dim() != 2 || rho_b.dim() != 2) {
    throw DomainError("product_ergotropy_excess: expects qubit states");
  }
  const auto& a = rho_a.spectrum().values;
  const auto& b = rho_b.spectrum().values;
  // Local passive populations: a[0] >= a[1] on |->, |+> of each qubit.
  const double low_a_high_b = a[0] * b[1];
  const double high_a_low_b = a[1] * b[0];
  const double inversion =
      omega_a >= omega_b ? high_a_low_b - low_a_high_b : low_a_high_b - high_a_low_b;
  return std::max(0.0, inversion) * std::abs(omega_a - omega_b);
}

}  // namespace ergogap
