#include "ergogap/dynamics.hpp"

#include "ergogap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ergogap {

void BathSpec::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("BathSpec: temperature must be >= 0");
  if (!(cutoff_ratio > 0.0)) throw ConfigError("BathSpec: cutoff ratio must be > 0");
  if (!(coupling >= 0.0)) throw ConfigError("BathSpec: coupling must be >= 0");
  if (!(dipole_sq >= 0.0)) throw ConfigError("BathSpec: |d|^2 must be >= 0");
  if (rate && !(*rate >= 0.0)) throw ConfigError("BathSpec: rate override must be >= 0");
}

std::string to_string(Setup s) {
  switch (s) {
    case Setup::AandB: return "a";
    case Setup::AOnly: return "b";
    case Setup::BOnly: return "c";
  }
  return "?";
}

char setup_letter(Setup s) { return to_string(s)[0]; }

Setup setup_from_letter(char c) {
  switch (c) {
    case 'a': return Setup::AandB;
    case 'b': return Setup::AOnly;
    case 'c': return Setup::BOnly;
    default: throw ConfigError(std::string("unknown setup '") + c + "'");
  }
}

void SetupParams::validate() const {
  if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
    throw ConfigError("SetupParams: frequencies must be positive");
  }
  const bool need_a = setup != Setup::BOnly;
  const bool need_b = setup != Setup::AOnly;
  if (need_a != bath_a.has_value() || need_b != bath_b.has_value()) {
    throw ConfigError("SetupParams: setup " + to_string(setup) +
                      " requires " + (need_a && need_b ? "both baths"
                                      : need_a        ? "bath A only"
                                                      : "bath B only"));
  }
  if (bath_a) bath_a->validate();
  if (bath_b) bath_b->validate();
}

double spectral_density(double omega, double coupling, double cutoff) {
  if (omega < 0.0) throw DomainError("spectral_density: negative frequency");
  if (!(cutoff > 0.0)) throw DomainError("spectral_density: cutoff must be positive");
  const double c2 = cutoff * cutoff;
  return 2.0 * coupling * omega / std::numbers::pi * c2 / (c2 + omega * omega);
}

double mean_occupation(double omega, double temperature_k) {
  if (!(omega > 0.0)) throw DomainError("mean_occupation: frequency must be positive");
  if (temperature_k < 0.0) throw DomainError("mean_occupation: negative temperature");
  if (temperature_k == 0.0) return 0.0;
  const double x = kHbarOverKb * omega / temperature_k;
  return 1.0 / std::expm1(x);
}

double decoherence_rate(const BathSpec& bath, double omega) {
  bath.validate();
  if (bath.rate) return *bath.rate;
  const double r2 = bath.cutoff_ratio * bath.cutoff_ratio;
  return bath.coupling * bath.coupling * omega * r2 * bath.dipole_sq / (1.0 + r2);
}

RateSet rates(const SetupParams& params) {
  params.validate();
  RateSet out;
  if (params.bath_a) {
    out.gamma_a = decoherence_rate(*params.bath_a, params.omega_a);
    out.nbar_a = mean_occupation(params.omega_a, params.bath_a->temperature);
  }
  if (params.bath_b) {
    out.gamma_b = decoherence_rate(*params.bath_b, params.omega_b);
    out.nbar_b = mean_occupation(params.omega_b, params.bath_b->temperature);
  }
  return out;
}

EtaFactors eta_factors(const RateSet& r, double t) {
  if (t < 0.0) throw DomainError("eta_factors: negative time");
  EtaFactors e;
  e.eta_a = std::exp(-r.relax_a() * t);
  e.eta_b = std::exp(-r.relax_b() * t);
  e.eta = e.eta_a * e.eta_b;
  return e;
}

namespace {

DensityMatrix x_state(double l11, double l22, double l33, double l44, double l23) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(basis::kPP, basis::kPP) = l11;
  m(basis::kPM, basis::kPM) = l22;
  m(basis::kMP, basis::kMP) = l33;
  m(basis::kMM, basis::kMM) = l44;
  m(basis::kPM, basis::kMP) = l23;
  m(basis::kMP, basis::kPM) = l23;
  return DensityMatrix(m);
}

void require_setup(const SetupParams& p, Setup s, const char* fn) {
  if (p.setup != s) {
    throw UsageError(std::string(fn) + ": expected setup " + to_string(s) + ", got " +
                     to_string(p.setup));
  }
}

DensityMatrix setup_a_from_eta(const RateSet& r, const EtaFactors& e) {
  const double na = r.nbar_a;
  const double nb = r.nbar_b;
  const double ea = e.eta_a;
  const double eb = e.eta_b;
  const double ee = e.eta;
  const double norm = 2.0 * (2.0 * na + 1.0) * (2.0 * nb + 1.0);
  const double l11 = (eb * na - ee * na + ea * nb - ee * nb - 2 * ee * na * nb + 2 * na * nb) / norm;
  const double l22 = (ea - eb * na + ee * na + ea * nb + ee * nb + 2 * ee * na * nb + 2 * na +
                      2 * na * nb) / norm;
  const double l33 = (eb - ea * nb + ee * nb + eb * na + ee * na + 2 * ee * na * nb + 2 * nb +
                      2 * na * nb) / norm;
  const double l44 = (-ea - eb - eb * na - ee * na - ea * nb - ee * nb - 2 * ee * na * nb +
                      2 * na + 2 * nb + 2 * na * nb + 2) / norm;
  // Each qubit's coherence decays at half its population rate, so the
  // |+-><-+| element carries sqrt(eta_a eta_b).
  return x_state(l11, l22, l33, l44, -0.5 * std::sqrt(ee));
}

DensityMatrix setup_b_from_eta(double n, double eta) {
  const double norm = 2.0 * (2.0 * n + 1.0);
  return x_state((n - eta * n) / norm, (eta + n + eta * n) / norm, (n + eta * n + 1) / norm,
                 (n - eta - eta * n + 1) / norm, -0.5 * std::sqrt(eta));
}

DensityMatrix setup_c_from_eta(double n, double eta) {
  const double norm = 2.0 * (2.0 * n + 1.0);
  return x_state((n - eta * n) / norm, (n + eta * n + 1) / norm, (eta + n + eta * n) / norm,
                 (n - eta - eta * n + 1) / norm, -0.5 * std::sqrt(eta));
}

}  // namespace

DensityMatrix analytic_state_setup_a(const SetupParams& params, double t) {
  require_setup(params, Setup::AandB, "analytic_state_setup_a");
  const RateSet r = rates(params);
  return setup_a_from_eta(r, eta_factors(r, t));
}

DensityMatrix analytic_state_setup_b(const SetupParams& params, double t) {
  require_setup(params, Setup::AOnly, "analytic_state_setup_b");
  const RateSet r = rates(params);
  return setup_b_from_eta(r.nbar_a, eta_factors(r, t).eta_a);
}

DensityMatrix analytic_state_setup_c(const SetupParams& params, double t) {
  require_setup(params, Setup::BOnly, "analytic_state_setup_c");
  const RateSet r = rates(params);
  return setup_c_from_eta(r.nbar_b, eta_factors(r, t).eta_b);
}

DensityMatrix analytic_state(const SetupParams& params, double t) {
  switch (params.setup) {
    case Setup::AandB: return analytic_state_setup_a(params, t);
    case Setup::AOnly: return analytic_state_setup_b(params, t);
    case Setup::BOnly: return analytic_state_setup_c(params, t);
  }
  throw UsageError("analytic_state: unknown setup");
}

DensityMatrix asymptotic_state(const SetupParams& params) {
  const RateSet r = rates(params);
  const EtaFactors zero{0.0, 0.0, 0.0};
  switch (params.setup) {
    case Setup::AandB: return setup_a_from_eta(r, zero);
    case Setup::AOnly: return setup_b_from_eta(r.nbar_a, 0.0);
    case Setup::BOnly: return setup_c_from_eta(r.nbar_b, 0.0);
  }
  throw UsageError("asymptotic_state: unknown setup");
}

namespace {

using Mat4 = Eigen::Matrix4cd;

struct Channel {
  Mat4 jump;
  Mat4 jump_dag;
  Mat4 half_ldl;  // L^dagger L / 2
};

struct Channels {
  Channel a_down, a_up, b_down, b_up;
};

Channel make_channel(const CMatrix& l) {
  const Mat4 m = l;
  return Channel{m, m.adjoint(), 0.5 * m.adjoint() * m};
}

const Channels& channels() {
  static const Channels ops = [] {
    const CMatrix id = pauli::identity();
    return Channels{make_channel(kron(pauli::sigma_minus(), id)),
                    make_channel(kron(pauli::sigma_plus(), id)),
                    make_channel(kron(id, pauli::sigma_minus())),
                    make_channel(kron(id, pauli::sigma_plus()))};
  }();
  return ops;
}

void add_dissipator(Mat4& out, double weight, const Channel& c, const Mat4& rho) {
  if (weight == 0.0) return;
  out.noalias() += weight * (c.jump * rho * c.jump_dag);
  out.noalias() -= weight * (c.half_ldl * rho);
  out.noalias() -= weight * (rho * c.half_ldl);
}

Mat4 rhs4(const RateSet& r, const Mat4& rho) {
  const Channels& c = channels();
  Mat4 out = Mat4::Zero();
  add_dissipator(out, r.gamma_a * (r.nbar_a + 1.0), c.a_down, rho);
  add_dissipator(out, r.gamma_a * r.nbar_a, c.a_up, rho);
  add_dissipator(out, r.gamma_b * (r.nbar_b + 1.0), c.b_down, rho);
  add_dissipator(out, r.gamma_b * r.nbar_b, c.b_up, rho);
  return out;
}

}  // namespace

CMatrix lindblad_rhs(const RateSet& r, const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw DomainError("lindblad_rhs: expected a 4x4 operator");
  }
  return CMatrix(rhs4(r, Mat4(rho)));
}

double stable_step(const SetupParams& params, double fraction) {
  const RateSet r = rates(params);
  const double fastest = std::max(r.relax_a(), r.relax_b());
  if (fastest == 0.0) return 1.0;
  return fraction / fastest;
}

DensityMatrix numerical_lindblad(const SetupParams& params, const DensityMatrix& rho0, double t,
                                 double dt) {
  if (t < 0.0) throw DomainError("numerical_lindblad: negative time");
  if (!(dt > 0.0)) throw DomainError("numerical_lindblad: dt must be positive");
  if (rho0.dim() != 4) throw DomainError("numerical_lindblad: expected a two-qubit state");
  const RateSet r = rates(params);
  const double fastest = std::max(r.relax_a(), r.relax_b());
  if (dt * fastest >= 0.1) {
    std::ostringstream os;
    os << "numerical_lindblad: dt * max rate = " << dt * fastest
       << " violates the stability guard (< 0.1); use dt < " << 0.1 / fastest;
    throw ConfigError(os.str());
  }
  Mat4 rho = rho0.matrix();
  if (fastest == 0.0 || t == 0.0) return DensityMatrix(CMatrix(rho));

  const auto steps = static_cast<long long>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(steps);
  for (long long s = 0; s < steps; ++s) {
    const Mat4 k1 = rhs4(r, rho);
    const Mat4 k2 = rhs4(r, rho + 0.5 * h * k1);
    const Mat4 k3 = rhs4(r, rho + 0.5 * h * k2);
    const Mat4 k4 = rhs4(r, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = (0.5 * (rho + rho.adjoint())).eval();
  }
  return DensityMatrix(CMatrix(rho));
}

}  // namespace ergogap
