#include "ergogap/validate.hpp"

#include "ergogap/config.hpp"
#include "ergogap/dynamics.hpp"
#include "ergogap/experiment.hpp"
#include "ergogap/protocol.hpp"
#include "ergogap/qstate.hpp"
#include "ergogap/random.hpp"
#include "ergogap/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace ergogap {

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.informational || c.passed; });
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["passed"] = passed();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"suite", c.suite},
                     {"name", c.name},
                     {"residual", c.residual},
                     {"tolerance", c.tolerance},
                     {"passed", c.passed},
                     {"informational", c.informational}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j;
}

namespace {

class Recorder {
 public:
  explicit Recorder(ValidationReport& r) : report_(r) {}

  void check(const std::string& suite, const std::string& name, double residual,
             double tolerance, std::string detail = {}) {
    CheckResult c{suite, name, residual, tolerance, residual < tolerance, false, std::move(detail)};
    report_.checks.push_back(std::move(c));
  }

  void info(const std::string& suite, const std::string& name, double value,
            std::string detail) {
    CheckResult c{suite, name, value, 0.0, true, true, std::move(detail)};
    report_.checks.push_back(std::move(c));
  }

  // Runs body; an escaping exception becomes a failed check.
  template <class F>
  void guarded(const std::string& suite, const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      CheckResult c{suite, name, INFINITY, 0.0, false, false, e.what()};
      report_.checks.push_back(std::move(c));
    }
  }

 private:
  ValidationReport& report_;
};

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1.0); }

double spectral_scale(const HamiltonianOperator& h) {
  double s = 0.0;
  for (double e : h.spectrum().values) s = std::max(s, std::abs(e));
  return s;
}

void qstate_suite(Recorder& rec, Rng& rng) {
  rec.guarded("qstate", "eigen_reconstruction", [&] {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const int dim = k % 2 ? 4 : 2;
      const CMatrix m = random_hermitian(rng, dim);
      const auto sd = eigen_hermitian(ComplexSquareMatrix(m), EigenOrder::Ascending);
      const double ortho =
          max_abs_entry(sd.vectors.adjoint() * sd.vectors - CMatrix::Identity(dim, dim));
      worst = std::max({worst, max_abs_entry(sd.reconstruct() - m), ortho});
    }
    rec.check("qstate", "eigen_reconstruction", worst, 1e-12);
  });
  rec.guarded("qstate", "density_invariants", [&] {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const DensityMatrix rho = k % 2 ? random_density(rng, 4) : random_pure_state(rng, 4);
      const double tr = std::abs(rho.matrix().trace().real() - 1.0);
      const double herm = max_abs_entry(rho.matrix() - rho.matrix().adjoint());
      const double neg = std::max(0.0, -rho.spectrum().values.back());
      worst = std::max({worst, tr, herm, neg});
    }
    rec.check("qstate", "density_invariants", worst, 1e-10);
  });
  rec.guarded("qstate", "singlet_concurrence", [&] {
    rec.check("qstate", "singlet_concurrence", std::abs(concurrence(singlet_state()) - 1.0), 1e-12);
  });
  rec.guarded("qstate", "product_concurrence", [&] {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      worst = std::max(worst, concurrence(tensor(random_density(rng, 2), random_density(rng, 2))));
    }
    rec.check("qstate", "product_concurrence", worst, 1e-6);
  });
  rec.guarded("qstate", "singlet_partial_trace", [&] {
    const CMatrix half = 0.5 * CMatrix::Identity(2, 2);
    const double r = std::max(max_abs_entry(partial_trace(singlet_state(), Subsystem::A).matrix() - half),
                              max_abs_entry(partial_trace(singlet_state(), Subsystem::B).matrix() - half));
    rec.check("qstate", "singlet_partial_trace", r, 1e-14);
  });
}

std::vector<double> probe_times(const RateSet& r, Setup s) {
  double slow = 0.0;
  if (s == Setup::AandB) slow = std::min(r.relax_a(), r.relax_b());
  else slow = s == Setup::AOnly ? r.relax_a() : r.relax_b();
  std::vector<double> out;
  for (double f : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0}) out.push_back(f / slow);
  return out;
}

void dynamics_suite(Recorder& rec, Rng& rng) {
  rec.guarded("dynamics", "analytic_vs_numeric", [&] {
    double worst = 0.0;
    double trace_dev = 0.0, herm = 0.0, neg = 0.0;
    int states = 0;
    for (int draw = 0; draw < 20; ++draw) {
      const SetupTriple triple = random_setup_triple(rng);
      for (Setup s : {Setup::AandB, Setup::AOnly, Setup::BOnly}) {
        const SetupParams& p = triple.get(s);
        const double dt = stable_step(p);
        DensityMatrix rho = singlet_state();
        double t_prev = 0.0;
        for (double t : probe_times(rates(p), s)) {
          rho = numerical_lindblad(p, rho, t - t_prev, dt);
          t_prev = t;
          worst = std::max(worst, max_abs_entry(rho.matrix() - analytic_state(p, t).matrix()));
          trace_dev = std::max(trace_dev, std::abs(rho.matrix().trace().real() - 1.0));
          herm = std::max(herm, max_abs_entry(rho.matrix() - rho.matrix().adjoint()));
          neg = std::max(neg, -rho.spectrum().values.back());
          ++states;
        }
      }
    }
    rec.check("dynamics", "analytic_vs_numeric", worst, 1e-8,
              std::to_string(states) + " states, 20 draws x 3 setups x 6 times");
    rec.check("dynamics", "cptp_trace", trace_dev, 1e-10);
    rec.check("dynamics", "cptp_hermitian", herm, 1e-10);
    rec.check("dynamics", "cptp_positive", std::max(0.0, neg), 1e-8);
  });
  rec.guarded("dynamics", "generator_traceless", [&] {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const SetupTriple triple = random_setup_triple(rng);
      const RateSet r = rates(triple.a);
      const CMatrix d = lindblad_rhs(r, random_density(rng, 4).matrix());
      worst = std::max(worst, std::abs(d.trace()) / std::max(r.relax_a(), r.relax_b()));
    }
    rec.check("dynamics", "generator_traceless", worst, 1e-12);
  });
  rec.guarded("dynamics", "asymptote_is_local_gibbs", [&] {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const SetupTriple triple = random_setup_triple(rng);
      const SetupParams& p = triple.a;
      const DensityMatrix expected =
          tensor(gibbs_state(qubit_hamiltonian(p.omega_a), p.bath_a->temperature),
                 gibbs_state(qubit_hamiltonian(p.omega_b), p.bath_b->temperature));
      worst = std::max(worst, max_abs_entry(asymptotic_state(p).matrix() - expected.matrix()));
    }
    rec.check("dynamics", "asymptote_is_local_gibbs", worst, 1e-12);
  });
}

void thermo_suite(Recorder& rec, Rng& rng) {
  rec.guarded("thermo", "ergotropy_two_routes", [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int dim = k % 4 ? 4 : 2;
      const DensityMatrix rho = random_density(rng, dim);
      const HamiltonianOperator h = random_hamiltonian(rng, dim);
      worst = std::max(worst, rel(ergotropy(rho, h), ergotropy_double_sum(rho, h),
                                  spectral_scale(h)));
    }
    rec.check("thermo", "ergotropy_two_routes", worst, 1e-10, "relative to max |eps|");
  });
  rec.guarded("thermo", "singlet_ergotropy", [&] {
    const HamiltonianOperator h = system_hamiltonian(2e12, 1e12);
    rec.check("thermo", "singlet_ergotropy", rel(ergotropy(singlet_state(), h), 1.5e12, 1.5e12),
              1e-14);
  });
  rec.guarded("thermo", "first_law_closure", [&] {
    std::uniform_real_distribution<double> frac(0.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const SetupTriple triple = random_setup_triple(rng);
      const HamiltonianOperator h = system_hamiltonian(triple.a.omega_a, triple.a.omega_b);
      const RateSet r = rates(triple.a);
      const double t = frac(rng) / std::min(r.relax_a(), r.relax_b());
      for (Setup s : {Setup::AandB, Setup::AOnly, Setup::BOnly}) {
        const auto ledger = first_law_ledger(singlet_state(), analytic_state(triple.get(s), t), h);
        worst = std::max(worst, ledger.closure_residual());
      }
    }
    rec.check("thermo", "first_law_closure", worst, 1e-9, "100 evolutions per setup");
  });
  rec.guarded("thermo", "energy_additivity", [&] {
    std::uniform_real_distribution<double> frac(0.0, 5.0);
    double additivity = 0.0;
    double closed = 0.0;
    for (int k = 0; k < 100; ++k) {
      const SetupTriple triple = random_setup_triple(rng);
      const double wa = triple.a.omega_a;
      const double wb = triple.a.omega_b;
      const HamiltonianOperator h = system_hamiltonian(wa, wb);
      const RateSet r = rates(triple.a);
      const double t = frac(rng) / std::min(r.relax_a(), r.relax_b());
      const double e0 = internal_energy(singlet_state(), h);
      double de[3];
      int i = 0;
      for (Setup s : {Setup::AandB, Setup::AOnly, Setup::BOnly}) {
        de[i] = internal_energy(analytic_state(triple.get(s), t), h) - e0;
        closed = std::max(closed, rel(de[i], delta_energy_analytic(s, rates(triple.get(s)), wa, wb, t),
                                      wa + wb));
        ++i;
      }
      additivity = std::max(additivity, std::abs(de[0] - de[1] - de[2]) / (wa + wb));
    }
    rec.check("thermo", "energy_additivity", additivity, 1e-10, "relative to omega_a + omega_b");
    rec.check("thermo", "energy_closed_forms", closed, 1e-10, "relative to omega_a + omega_b");
  });
  rec.guarded("thermo", "product_factorization", [&] {
    std::uniform_real_distribution<double> omega(1e11, 3e12);
    std::uniform_real_distribution<double> ratio(0.2, 1.0);
    double worst = 0.0;
    double worst_excess = 0.0;
    int strict = 0;
    for (int k = 0; k < 500; ++k) {
      const double wa = omega(rng);
      const double wb = ratio(rng) * wa;
      const DensityMatrix ra = random_density(rng, 2);
      const DensityMatrix rb = random_density(rng, 2);
      const auto f = factorization_check(ra, rb, system_hamiltonian(wa, wb));
      const double excess = product_ergotropy_excess(ra, rb, wa, wb);
      worst = std::max(worst, std::abs(f.difference - excess) / (wa + wb));
      worst_excess = std::max(worst_excess, std::abs(f.difference) / (wa + wb));
      if (excess > 0.0) ++strict;
    }
    rec.check("thermo", "product_factorization_excess", worst, 1e-10,
              "W - W_A - W_B against the level-crossing excess, relative to omega_a + omega_b");
    rec.info("thermo", "product_factorization_gap", worst_excess,
             std::to_string(strict) + " of 500 product states have W > W_A + W_B");
  });
  rec.guarded("thermo", "gibbs_is_passive", [&] {
    double worst = 0.0;
    std::uniform_real_distribution<double> temp(1.0, 1000.0);
    for (int k = 0; k < 100; ++k) {
      const HamiltonianOperator h = random_hamiltonian(rng, 4);
      worst = std::max(worst, std::abs(ergotropy(gibbs_state(h, temp(rng)), h)) / spectral_scale(h));
    }
    rec.check("thermo", "gibbs_is_passive", worst, 1e-12);
  });
}

void protocol_suite(Recorder& rec, Rng& rng) {
  rec.guarded("protocol", "stage1_work", [&] {
    double vs_ergotropy = 0.0;
    double vs_free_energy = 0.0;
    std::uniform_real_distribution<double> temp(10.0, 1000.0);
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix rho = random_density(rng, 4);
      const HamiltonianOperator h = random_hamiltonian(rng, 4);
      const double t = temp(rng);
      const Stage1Result s1 = stage1_extract(rho, h);
      const double scale = spectral_scale(h);
      vs_ergotropy = std::max(vs_ergotropy, rel(s1.work_extracted, ergotropy(rho, h), scale));
      const double df = free_energy(rho, h, t) - free_energy(s1.passive.matrix, h, t);
      vs_free_energy = std::max(vs_free_energy, rel(s1.work_extracted, df, scale));
    }
    rec.check("protocol", "stage1_work_equals_ergotropy", vs_ergotropy, 1e-10);
    rec.check("protocol", "stage1_work_equals_free_energy_drop", vs_free_energy, 1e-9);
  });
  rec.guarded("protocol", "stage2_default", [&] {
    const ExperimentConfig config;
    const ProtocolTrace trace = protocol_trace(config);
    double monotone = 0.0;
    double prev = total_variation(trace.initial_populations, trace.target_populations);
    double step_audit = 0.0;
    double sum_de = 0.0;
    for (const auto& s : trace.stage2) {
      monotone = std::max(monotone, s.distance - prev);
      prev = s.distance;
      step_audit = std::max(step_audit, std::abs(s.energy_change - (s.heat_from_bath - s.work_to_weight)) /
                                            std::max(1.0, std::abs(s.heat_from_bath)));
      sum_de += s.energy_change;
    }
    const HamiltonianOperator h = system_hamiltonian(config.omega_a, config.omega_b);
    const double de = passive_energy(trace.final_state.populations, h) -
                      passive_energy(trace.initial_populations, h);
    const double total = std::abs((trace.total_heat - trace.total_work_to_weight) - de) /
                         std::max({std::abs(trace.total_heat), std::abs(de), 1.0});
    rec.check("protocol", "stage2_distance", trace.final_distance, 1e-4,
              std::to_string(trace.stage2.size()) + " steps");
    rec.check("protocol", "stage2_monotone", std::max(0.0, monotone), 1e-15);
    rec.check("protocol", "stage2_step_audit", step_audit, 1e-9);
    rec.check("protocol", "stage2_total_audit", std::max(total, rel(sum_de, de, std::abs(de))), 1e-9);
  });
}

void diagnostics(Recorder& rec) {
  rec.guarded("diagnostics", "locality_sides", [&] {
    const ExperimentConfig config;
    const SetupTriple triple = config.triple();
    const double t = 1e-7;
    const LocalitySides sides = locality_sides(triple, t);
    const GapReport g = gap_report(triple, t);
    const double scale = (config.omega_a + config.omega_b) / 2.0;
    rec.check("diagnostics", "locality_sides_identity", rel(sides.lhs - sides.rhs, g.gap_dw, scale),
              1e-10, "lhs - rhs equals the gap in ergotropy change");
    rec.info("diagnostics", "locality_lhs_closed_form_deviation",
             std::abs(sides.lhs - sides.lhs_closed_form),
             "state-level lhs " + std::to_string(sides.lhs) + " vs closed form " +
                 std::to_string(sides.lhs_closed_form) + " at t = 1e-7 s");
    rec.info("diagnostics", "locality_rhs_closed_form_deviation",
             std::abs(sides.rhs - sides.rhs_closed_form),
             "state-level rhs " + std::to_string(sides.rhs) + " vs closed form " +
                 std::to_string(sides.rhs_closed_form) + " at t = 1e-7 s");
    for (Setup s : {Setup::AandB, Setup::AOnly, Setup::BOnly}) {
      const auto c = compare_closed_form(s, analytic_state(triple.get(s), t), config.omega_a,
                                         config.omega_b);
      rec.info("diagnostics", "ergotropy_closed_form_deviation_" + to_string(s), c.deviation,
               "closed form " + std::to_string(c.closed_form) + " vs generic " +
                   std::to_string(c.generic));
    }
    const GapReport tail = gap_report(triple, config.grid.t_max);
    rec.info("diagnostics", "tail_gap_w", std::abs(tail.gap_w),
             "|W - W_A - W_B| at t_max; threshold 1e-3 (omega_a + omega_b)/2 = " +
                 std::to_string(1e-3 * scale));
  });
}

}  // namespace

ValidationReport run_validate(std::uint64_t seed) {
  ValidationReport report;
  report.seed = seed;
  Recorder rec(report);
  Rng rng(seed);
  qstate_suite(rec, rng);
  dynamics_suite(rec, rng);
  thermo_suite(rec, rng);
  protocol_suite(rec, rng);
  diagnostics(rec);
  return report;
}

}  // namespace ergogap
