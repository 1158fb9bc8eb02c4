#pragma once

#include <random>
#include <string>
#include <vector>

#include "telesim/analysis.hpp"

namespace telesim {

struct VerifyOptions {
  bool quick = false;        // smaller grids, a few seconds total
  bool inject_fault = false; // corrupt the closed-form rate; cross checks must then fail
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0; // worst deviation observed
  double tolerance = 0.0;
  std::string note;
};

namespace detail {

inline Matrix<2> random_density2(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Matrix<2> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = {nd(rng), nd(rng)};
  Matrix<2> rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

template <int N>
Matrix<N> random_hermitian(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Matrix<N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = {nd(rng), nd(rng)};
  Matrix<N> h = a + a.adjoint();
  return 0.5 * h;
}

template <int N>
Matrix<N> random_matrix(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  Matrix<N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = {nd(rng), nd(rng)};
  return a;
}

inline CheckResult make_result(std::string name, double measured, double tolerance,
                               std::string note = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.pass = measured <= tolerance;
  r.note = std::move(note);
  return r;
}

inline const std::vector<EnvironmentKind>& coupled_kinds() {
  static const std::vector<EnvironmentKind> k{
      EnvironmentKind::dissipative, EnvironmentKind::noisy, EnvironmentKind::dephasing};
  return k;
}

inline const std::vector<EnvironmentKind>& all_kinds() {
  static const std::vector<EnvironmentKind> k{EnvironmentKind::perfect,
                                              EnvironmentKind::dissipative, EnvironmentKind::noisy,
                                              EnvironmentKind::dephasing};
  return k;
}

} // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
  std::vector<CheckResult> out;
  std::mt19937 rng(0x5eedu);

  { // algebra of the basis operators
    double dev = 0.0;
    for (int n = 0; n < 4; ++n)
      dev = std::max(dev, max_abs_diff(pauli(n) * pauli(n), Matrix<2>::identity()));
    dev = std::max(dev, max_abs_diff(pauli(1) * pauli(2), cplx{0.0, 1.0} * pauli(3)));
    dev = std::max(dev, max_abs_diff(pauli(2) * pauli(3), cplx{0.0, 1.0} * pauli(1)));
    dev = std::max(dev, max_abs_diff(pauli(1) * pauli(2) + pauli(2) * pauli(1), Matrix<2>{}));
    dev = std::max(dev, max_abs_diff(sigma_plus() * sigma_minus() + sigma_minus() * sigma_plus(),
                                     Matrix<2>::identity()));
    out.push_back(detail::make_result("qmat.pauli_algebra", dev, 1e-14));
  }

  { // kron respects the mixed product rule
    double dev = 0.0;
    for (int rep = 0; rep < (opt.quick ? 3 : 10); ++rep) {
      const auto a = detail::random_matrix<2>(rng), b = detail::random_matrix<2>(rng);
      const auto c = detail::random_matrix<2>(rng), d = detail::random_matrix<2>(rng);
      dev = std::max(dev, max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)));
    }
    out.push_back(detail::make_result("qmat.kron_mixed_product", dev, 1e-12));
  }

  { // partial trace recovers tensor factors and preserves trace
    double dev = 0.0;
    for (int rep = 0; rep < (opt.quick ? 3 : 10); ++rep) {
      const auto a = detail::random_density2(rng), b = detail::random_density2(rng);
      const auto c = detail::random_density2(rng);
      const Matrix<8> joint = kron(a, kron(b, c));
      static constexpr std::array<int, 1> keep0{0};
      static constexpr std::array<int, 2> keep02{0, 2};
      dev = std::max(dev, max_abs_diff(partial_trace<2, 8>(joint, keep0), a));
      dev = std::max(dev, max_abs_diff(partial_trace<4, 8>(joint, keep02), kron(a, c)));
      dev = std::max(dev, std::abs(partial_trace<4, 8>(joint, keep02).trace() - cplx{1.0}));
    }
    out.push_back(detail::make_result("qmat.partial_trace", dev, 1e-12));
  }

  { // eigenvalue sums match trace and Frobenius norm
    double dev = 0.0;
    for (int rep = 0; rep < (opt.quick ? 3 : 10); ++rep) {
      const auto h = detail::random_hermitian<4>(rng);
      const auto ev = hermitian_eigenvalues(h);
      double s1 = 0.0, s2 = 0.0;
      for (double v : ev) {
        s1 += v;
        s2 += v * v;
      }
      dev = std::max(dev, std::abs(s1 - h.trace().real()));
      dev = std::max(dev, std::abs(s2 - h.frobenius_norm() * h.frobenius_norm()));
    }
    out.push_back(detail::make_result("qmat.eigen_invariants", dev, 1e-10));
  }

  { // single-qubit decay laws under each coupling
    double dev = 0.0;
    std::mt19937 r2(7u);
    const Matrix<2> rho0 = detail::random_density2(r2);
    const double g = 0.23, tt = 1.4;
    for (auto kind : detail::coupled_kinds()) {
      LindbladModel<2> model;
      model.collapse_ops = collapse_ops_1q(kind);
      model.gamma = g;
      const Matrix<2> rt = evolve(model, rho0, tt);
      const double p0 = rho0(0, 0).real();
      const cplx coh0 = rho0(0, 1);
      switch (kind) {
        case EnvironmentKind::dissipative:
          dev = std::max(dev, std::abs(rt(0, 0).real() - p0 * std::exp(-g * tt)));
          dev = std::max(dev, std::abs(rt(0, 1) - coh0 * std::exp(-0.5 * g * tt)));
          break;
        case EnvironmentKind::noisy:
          dev = std::max(dev, std::abs((rt(0, 0).real() - 0.5) -
                                       (p0 - 0.5) * std::exp(-2.0 * g * tt)));
          dev = std::max(dev, std::abs(rt(0, 1) - coh0 * std::exp(-g * tt)));
          break;
        case EnvironmentKind::dephasing:
          dev = std::max(dev, std::abs(rt(0, 0).real() - p0));
          dev = std::max(dev, std::abs(rt(0, 1) - coh0 * std::exp(-0.5 * g * tt)));
          break;
        default: break;
      }
    }
    out.push_back(detail::make_result("lindblad.decay_laws", dev, 1e-9));
  }

  { // evolution keeps density matrices physical
    double worst = 0.0;
    const int reps = opt.quick ? 6 : 25;
    for (int rep = 0; rep < reps; ++rep) {
      const Matrix<2> rho0 = detail::random_density2(rng);
      for (auto kind : detail::coupled_kinds()) {
        LindbladModel<2> model;
        model.hamiltonian = (-0.5 * (0.3 + rep * 0.5)) * pauli(1 + rep % 3);
        model.collapse_ops = collapse_ops_1q(kind);
        model.gamma = 0.05 + 0.1 * (rep % 4);
        const Matrix<2> rt = evolve(model, rho0, 0.5 + 0.7 * (rep % 5));
        const auto d = density_diagnostics(rt);
        worst = std::max({worst, d.trace_defect, d.herm_defect, std::max(0.0, -d.min_eigenvalue)});
      }
    }
    out.push_back(detail::make_result("lindblad.density_preserved", worst, 1e-8));
  }

  { // two shorter evolutions compose into one longer one
    LindbladModel<2> model;
    model.hamiltonian = -1.1 * pauli(1);
    model.collapse_ops = collapse_ops_1q(EnvironmentKind::noisy);
    model.gamma = 0.3;
    std::mt19937 r2(11u);
    const Matrix<2> rho0 = detail::random_density2(r2);
    const Matrix<2> oneshot = evolve(model, rho0, 2.1);
    const Matrix<2> split = evolve(model, evolve(model, rho0, 0.8), 1.3);
    out.push_back(
        detail::make_result("lindblad.composition", max_abs_diff(oneshot, split), 1e-8));
  }

  { // channel states: integrator agrees with the exact solution
    double dev = 0.0;
    const std::vector<double> gs = opt.quick ? std::vector<double>{0.1}
                                             : std::vector<double>{0.05, 0.1, 0.2};
    const std::vector<double> t0s = opt.quick ? std::vector<double>{0.5, 2.0}
                                              : std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0};
    for (auto kind : detail::coupled_kinds())
      for (double g : gs)
        for (double t0 : t0s)
          dev = std::max(dev, max_abs_diff(channel_state_closed(kind, g, t0).rho,
                                           channel_state_numeric(kind, g, t0).rho));
    out.push_back(detail::make_result("environment.closed_vs_numeric", dev, 1e-8));
  }

  { // concurrence of the evolved pair follows the channel decay laws
    double dev = 0.0;
    for (double g : {0.05, 0.2})
      for (double t0 : {0.3, 1.0, 3.0, 6.0}) {
        const double e1 = std::exp(-g * t0);
        const double e2 = std::exp(-2.0 * g * t0);
        dev = std::max(dev, std::abs(concurrence(channel_state_closed(
                                         EnvironmentKind::dissipative, g, t0).rho) - e2));
        dev = std::max(dev, std::abs(concurrence(channel_state_closed(
                                         EnvironmentKind::dephasing, g, t0).rho) - e1));
        const double cno = std::max(0.0, e2 - 0.5 * (1.0 - e2 * e2));
        dev = std::max(dev, std::abs(concurrence(channel_state_closed(
                                         EnvironmentKind::noisy, g, t0).rho) - cno));
      }
    out.push_back(detail::make_result("environment.concurrence", dev, 1e-12));
  }

  { // sudden-death time: bisection on the concurrence meets the formula
    double dev = 0.0;
    for (double g : {0.05, 0.1, 0.2}) {
      double a = 0.0, b = 40.0 / g;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        if (concurrence(channel_state_closed(EnvironmentKind::noisy, g, mid).rho) > 0.0)
          a = mid;
        else
          b = mid;
      }
      dev = std::max(dev, std::abs(0.5 * (a + b) - *esd_time(EnvironmentKind::noisy, g)));
    }
    out.push_back(detail::make_result("environment.esd_time", dev, 1e-6));
  }

  { // Bell outcome probabilities always sum to one
    double dev = 0.0;
    for (auto kind : detail::all_kinds())
      for (double t0 : {0.0, 1.5}) {
        const auto ch = channel_state_closed(kind, 0.15, t0);
        for (int rep = 0; rep < 4; ++rep) {
          const BlochAngles ang{0.3 + 0.6 * rep, 0.9 * rep};
          const Matrix<2> rin = pure_state_density(ang);
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += outcome_probability(m, rin, ch);
          dev = std::max(dev, std::abs(s - 1.0));
        }
      }
    out.push_back(detail::make_result("teleport.probability_sum", dev, 1e-12));
  }

  { // undisturbed pipeline teleports exactly
    const auto ch = channel_state_closed(EnvironmentKind::perfect, 0.0, 0.0);
    const RecoveryConfig rec{EnvironmentKind::perfect, 0.0, 0.0, 0.0};
    const double f = average_fidelity(ch, rec).average;
    out.push_back(detail::make_result("teleport.identity", std::abs(f - 1.0), 1e-12));
  }

  { // limits: no recovery time means coin-flip fidelity; free rotation by pi is exact
    double dev = 0.0;
    for (auto alpha : detail::all_kinds())
      for (auto beta : detail::coupled_kinds()) {
        const auto ch = channel_state_closed(alpha, 0.12, alpha == EnvironmentKind::perfect ? 0.0 : 1.0);
        const RecoveryConfig rec{beta, 0.12, 2.0, 0.0};
        dev = std::max(dev, std::abs(average_fidelity(ch, rec).average - 0.5));
      }
    for (auto beta : detail::coupled_kinds()) {
      const auto ch = channel_state_closed(EnvironmentKind::perfect, 0.0, 0.0);
      const RecoveryConfig rec{beta, 0.0, 3.0, pi / 3.0};
      dev = std::max(dev, std::abs(average_fidelity(ch, rec).average - 1.0));
    }
    out.push_back(detail::make_result("teleport.limits", dev, 1e-8));
  }

  { // instantaneous ideal recovery reproduces the entanglement-fidelity law
    double dev = 0.0;
    for (auto alpha : detail::coupled_kinds())
      for (double t0 : {0.5, 2.0}) {
        const auto ch = channel_state_closed(alpha, 0.1, t0);
        const RecoveryConfig rec{EnvironmentKind::perfect, 0.0, 0.0, 0.0};
        const double f = average_fidelity(ch, rec).average;
        const double expect = (2.0 * entanglement_fidelity(alpha, 0.1, t0) + 1.0) / 3.0;
        dev = std::max(dev, std::abs(f - expect));
      }
    out.push_back(detail::make_result("teleport.ideal_recovery_law", dev, 1e-6));
  }

  { // six-point quadrature equals the dense rule
    double dev = 0.0;
    std::mt19937 r2(101u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int reps = opt.quick ? 4 : 16;
    for (int rep = 0; rep < reps; ++rep) {
      const auto alpha = detail::all_kinds()[rep % 4];
      const auto beta = detail::coupled_kinds()[rep % 3];
      const double g = 0.02 + 0.28 * u01(r2);
      const double w = 0.1 + 8.0 * u01(r2);
      const double t = 0.1 + 2.5 * u01(r2);
      const double t0 = 2.0 * u01(r2);
      const auto ch = channel_state_closed(alpha, g, t0);
      const RecoveryConfig rec{beta, g, w, t};
      QuadratureSpec dense;
      dense.kind = QuadratureKind::dense;
      const double f6 = average_fidelity(ch, rec).average;
      const double fd = average_fidelity(ch, rec, dense).average;
      dev = std::max(dev, std::abs(f6 - fd));
    }
    out.push_back(detail::make_result("teleport.quadrature_agreement", dev, 1e-9));
  }

  { // the two fidelity paths agree across the acceptance grid
    const double fault = opt.inject_fault ? 2.0 : 1.0;
    double dev = 0.0;
    const std::vector<std::pair<double, double>> pairs =
        opt.quick ? std::vector<std::pair<double, double>>{{0.1, 0.5}}
                  : std::vector<std::pair<double, double>>{{0.05, 0.0}, {0.1, 0.5}, {0.2, 2.0}};
    const std::vector<double> omegas = opt.quick ? std::vector<double>{0.5, 5.0}
                                                 : std::vector<double>{0.1, 0.5, 2.0, 5.0, 20.0};
    const std::vector<double> times = opt.quick ? std::vector<double>{0.5, 3.0}
                                                : std::vector<double>{0.3, 1.0, 3.0, 8.0};
    int cases = 0;
    for (auto alpha : detail::all_kinds())
      for (auto beta : detail::coupled_kinds())
        for (const auto& [g, t0] : pairs) {
          const auto ch = channel_state_numeric(alpha, g, t0);
          for (double w : omegas)
            for (double t : times) {
              const RecoveryConfig rec{beta, g, w, t};
              const double fn = average_fidelity(ch, rec).average;
              const double fc = fidelity_closed(alpha, beta, fault * g, w, t, t0);
              dev = std::max(dev, std::abs(fn - fc));
              ++cases;
            }
        }
    out.push_back(detail::make_result("twopath.agreement", dev, Tolerances{}.two_path,
                                      std::to_string(cases) + " cases"));
  }

  { // closed forms collapse to the undisturbed channel at t0 = 0
    double dev = 0.0;
    for (auto alpha : detail::coupled_kinds())
      for (auto beta : detail::coupled_kinds())
        for (double w : {0.3, 4.0})
          for (double t : {0.4, 2.5})
            dev = std::max(dev, std::abs(fidelity_closed(alpha, beta, 0.17, w, t, 0.0) -
                                         fidelity_closed(EnvironmentKind::perfect, beta, 0.17, w, t,
                                                         0.0)));
    out.push_back(detail::make_result("closedform.t0_reduction", dev, 1e-12));
  }

  { // smooth across the oscillatory/overdamped branch points
    double dev = 0.0;
    for (auto beta : detail::coupled_kinds())
      for (double w : {0.25, 1.0}) {
        for (double g : {4.0 * w, 2.0 * w}) {
          const double lo = fidelity_closed(EnvironmentKind::dissipative, beta, g * (1.0 - 1e-7),
                                            w, 1.3, 0.5);
          const double hi = fidelity_closed(EnvironmentKind::dissipative, beta, g * (1.0 + 1e-7),
                                            w, 1.3, 0.5);
          dev = std::max(dev, std::abs(hi - lo));
        }
      }
    out.push_back(detail::make_result("closedform.branch_continuity", dev, 1e-5));
  }

  { // closed fidelities stay inside [1/2 - eps, 1]: they never leave [0,1]
    double excursion = 0.0;
    for (auto alpha : detail::all_kinds())
      for (auto beta : detail::coupled_kinds())
        for (double g : {0.0, 0.1, 0.6})
          for (double w : {0.0, 0.5, 8.0})
            for (double t : {0.0, 0.7, 5.0})
              for (double t0 : {0.0, 1.0, 6.0}) {
                const double f = fidelity_closed(alpha, beta, g, w, t, t0);
                excursion = std::max({excursion, -f, f - 1.0});
              }
    out.push_back(detail::make_result("closedform.bounded", excursion, 1e-12));
  }

  { // undamped rotation peaks exactly at half a period with unit fidelity;
    // the scan window holds two identical peaks, either is a correct answer.
    // Locating a quadratic maximum is conditioning-limited to about the
    // square root of machine epsilon, so the position gets a wider band
    // than the height.
    double dev_pos = 0.0, dev_height = 0.0;
    for (double w : {0.7, 3.0}) {
      const auto res = critical_time_closed(EnvironmentKind::perfect, EnvironmentKind::dissipative,
                                            0.0, w, 0.0);
      dev_pos = std::max(dev_pos,
                         std::min(std::abs(res.t_c - pi / w), std::abs(res.t_c - 3.0 * pi / w)));
      dev_height = std::max(dev_height, std::abs(res.f_max - 1.0));
    }
    out.push_back(detail::make_result("analysis.critical_time_free_position", dev_pos, 1e-6));
    out.push_back(detail::make_result("analysis.critical_time_free_height", dev_height, 1e-12));
  }

  { // critical rate brackets the classical limit from both sides
    double violation = 0.0;
    double frozen_dev = 0.0;
    for (auto beta : detail::coupled_kinds()) {
      const auto res = critical_omega(EnvironmentKind::perfect, beta, 0.1, 0.0);
      if (!res.omega_c) {
        violation = 1.0;
        continue;
      }
      const double fl =
          critical_time_closed(EnvironmentKind::perfect, beta, 0.1, *res.omega_c - 1e-3, 0.0).f_max;
      const double fh =
          critical_time_closed(EnvironmentKind::perfect, beta, 0.1, *res.omega_c + 1e-3, 0.0).f_max;
      violation = std::max({violation, fl - 2.0 / 3.0, 2.0 / 3.0 - fh});
      if (beta == EnvironmentKind::dissipative)
        frozen_dev = std::abs(*res.omega_c - 0.1615688133929);
    }
    out.push_back(detail::make_result("analysis.critical_omega_straddle",
                                      std::max(violation, frozen_dev <= 1e-5 ? 0.0 : frozen_dev),
                                      0.0));
  }

  { // critical distribution time scales like 1/gamma at fixed omega/gamma
    const auto r1 = critical_t0(EnvironmentKind::dissipative, EnvironmentKind::dissipative, 0.1,
                                100.0, false);
    const auto r2 = critical_t0(EnvironmentKind::dissipative, EnvironmentKind::dissipative, 0.2,
                                100.0, false);
    const double s1 = 0.1 * r1.t0_c, s2 = 0.2 * r2.t0_c;
    const double rel = std::abs(s1 - s2) / s1;
    out.push_back(detail::make_result("analysis.critical_t0_scaling", rel, 1e-3,
                                      "gamma*t0_c = " + std::to_string(s1)));
  }

  { // the fitter recovers a known double exponential
    const auto xs = linspace(0.15, 7.85, 15);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      ys[i] = 0.11 * std::exp(0.12 * xs[i]) + 0.003 * std::exp(0.47 * xs[i]);
    const auto fit = fit_double_exponential(xs, ys);
    out.push_back(detail::make_result("analysis.fit_roundtrip", fit.rms, 1e-6));
  }

  return out;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

} // namespace telesim
