#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "telesim/environment.hpp"

namespace telesim {

struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline Matrix<2> pure_state_density(const BlochAngles& a) {
  const double c = std::cos(0.5 * a.theta);
  const double s = std::sin(0.5 * a.theta);
  const cplx lower = std::polar(s, a.phi);
  Matrix<2> rho;
  rho(0, 0) = c * c;
  rho(0, 1) = c * std::conj(lower);
  rho(1, 0) = c * lower;
  rho(1, 1) = s * s;
  return rho;
}

inline double fidelity_to_pure(const Matrix<2>& pure, const Matrix<2>& rho) {
  return (pure * rho).trace().real();
}

// Environment acting on the receiving qubit while the correction rotation
// for outcome m runs at rate omega. Outcome 0 needs no rotation at all.
inline LindbladModel<2> recovery_model(EnvironmentKind beta, int m, double gamma, double omega) {
  if (m < 0 || m > 3) throw std::invalid_argument("recovery_model: outcome must be 0..3");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("recovery_model: omega must be finite and nonnegative");
  LindbladModel<2> model;
  if (m != 0) model.hamiltonian = (-0.5 * omega) * pauli(m);
  model.collapse_ops = collapse_ops_1q(beta);
  model.gamma = gamma;
  return model;
}

struct RecoveryConfig {
  EnvironmentKind kind = EnvironmentKind::perfect;
  double gamma = 0.0;
  double omega = 0.0;
  double t = 0.0;
};

namespace detail {

inline Matrix<8> bell_measurement_op(int m) {
  return kron(bell_projector(m), Matrix<2>::identity());
}

// Unnormalized post-measurement state of the receiving qubit: the joint
// three-qubit state projected on outcome m, with qubits 0 and 1 traced out.
// Its trace is the outcome probability.
inline Matrix<2> unnormalized_conditional(int m, const Matrix<2>& rho_in, const Matrix<4>& chan) {
  const Matrix<8> joint = kron(rho_in, chan);
  const Matrix<8> op = bell_measurement_op(m);
  const Matrix<8> reduced = op * joint * op;
  static constexpr std::array<int, 1> keep{2};
  return partial_trace<2, 8>(reduced, keep);
}

} // namespace detail

inline double outcome_probability(int m, const Matrix<2>& rho_in, const ChannelState& ch) {
  if (m < 0 || m > 3) throw std::invalid_argument("outcome_probability: outcome must be 0..3");
  return detail::unnormalized_conditional(m, rho_in, ch.rho).trace().real();
}

inline Matrix<2> conditional_state(int m, const Matrix<2>& rho_in, const ChannelState& ch,
                                   double* probability = nullptr) {
  if (m < 0 || m > 3) throw std::invalid_argument("conditional_state: outcome must be 0..3");
  Matrix<2> chi = detail::unnormalized_conditional(m, rho_in, ch.rho);
  const double p = chi.trace().real();
  if (probability) *probability = p;
  if (!(p > 0.0)) throw std::runtime_error("conditional_state: outcome probability vanished");
  chi *= 1.0 / p;
  return chi;
}

// Receiving qubit after the disturbed correction. A perfect recovery applies
// sigma^m instantly; otherwise the conditional state precesses for time t
// inside the recovery environment.
inline Matrix<2> output_state(int m, const Matrix<2>& rho_in, const ChannelState& ch,
                              const RecoveryConfig& rec, const IntegratorConfig& cfg = {}) {
  const Matrix<2> chi = conditional_state(m, rho_in, ch);
  if (rec.kind == EnvironmentKind::perfect) {
    const Matrix<2> s = pauli(m);
    return s * chi * s;
  }
  if (!(rec.t >= 0.0) || !std::isfinite(rec.t))
    throw std::invalid_argument("output_state: recovery time must be finite and nonnegative");
  return evolve(recovery_model(rec.kind, m, rec.gamma, rec.omega), chi, rec.t, cfg);
}

enum class QuadratureKind { octahedral, dense };

// octahedral: the six Bloch axis points, exact for this integrand (it is
// quadratic in the Bloch vector). dense: Gauss-Legendre in cos(theta) times a
// uniform periodic grid in phi, used to validate the six-point rule.
struct QuadratureSpec {
  QuadratureKind kind = QuadratureKind::octahedral;
  int polar_points = 64;
  int azimuthal_points = 128;
};

struct FidelityReport {
  double average = 0.0;
  std::array<double, 4> outcome_probability{}; // input-averaged P_m
  std::array<double, 4> outcome_fidelity{};    // P-weighted mean fidelity per outcome
  QuadratureKind quadrature = QuadratureKind::octahedral;

  struct SamplePoint {
    BlochAngles angles;
    std::array<double, 4> probability{};
    std::array<double, 4> fidelity{};
  };
  std::vector<SamplePoint> samples; // per-point detail, octahedral rule only
};

namespace detail {

inline std::array<BlochAngles, 6> octahedral_points() {
  return {{{0.0, 0.0},
           {pi, 0.0},
           {0.5 * pi, 0.0},
           {0.5 * pi, 0.5 * pi},
           {0.5 * pi, pi},
           {0.5 * pi, 1.5 * pi}}};
}

// Nodes and weights of n-point Gauss-Legendre on [-1, 1] by Newton iteration
// on the Legendre polynomial.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

using Bloch3 = std::array<double, 3>;

inline double dot(const Bloch3& a, const Bloch3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Affine Bloch-space form of a trace-nonincreasing qubit map: feeding the
// operator basis {I/2, sigma_k/2} through any linear map determines how an
// unnormalized state (s0; s) transforms: s0' = q0 s0 + q.s, s' = s0 w0 + W s.
struct AffineMap {
  double q0 = 1.0;
  Bloch3 q{};
  Bloch3 w0{};
  double w[3][3] = {};

  double out_trace(const Bloch3& n) const { return q0 + dot(q, n); }
  Bloch3 out_vector(double s0, const Bloch3& s) const {
    Bloch3 o;
    for (int k = 0; k < 3; ++k)
      o[k] = s0 * w0[k] + w[k][0] * s[0] + w[k][1] * s[1] + w[k][2] * s[2];
    return o;
  }
};

template <typename Fn>
AffineMap affine_from_action(Fn&& act) {
  AffineMap map;
  const auto decompose = [](const Matrix<2>& y, double& t0, Bloch3& v) {
    t0 = y.trace().real();
    for (int k = 0; k < 3; ++k) v[k] = (pauli(k + 1) * y).trace().real();
  };
  Matrix<2> basis = 0.5 * Matrix<2>::identity();
  decompose(act(basis), map.q0, map.w0);
  for (int k = 0; k < 3; ++k) {
    basis = 0.5 * pauli(k + 1);
    Bloch3 col;
    decompose(act(basis), map.q[k], col);
    map.w[0][k] = col[0];
    map.w[1][k] = col[1];
    map.w[2][k] = col[2];
  }
  return map;
}

} // namespace detail

// Teleportation fidelity averaged over all pure input states, computed with
// the full numeric pipeline: project on each Bell outcome, evolve the
// conditional state through the recovery environment, compare to the input.
inline FidelityReport average_fidelity(const ChannelState& ch, const RecoveryConfig& rec,
                                       const QuadratureSpec& quad = {},
                                       const IntegratorConfig& cfg = {},
                                       const Tolerances& tol = {}) {
  FidelityReport rep;
  rep.quadrature = quad.kind;

  if (quad.kind == QuadratureKind::octahedral) {
    const auto pts = detail::octahedral_points();
    double fsum = 0.0;
    std::array<double, 4> psum{}, pfsum{};
    for (const auto& ang : pts) {
      const Matrix<2> rin = pure_state_density(ang);
      FidelityReport::SamplePoint sp;
      sp.angles = ang;
      double ptot = 0.0;
      for (int m = 0; m < 4; ++m) {
        double p = 0.0;
        const Matrix<2> chi = conditional_state(m, rin, ch, &p);
        Matrix<2> out;
        if (rec.kind == EnvironmentKind::perfect) {
          const Matrix<2> s = pauli(m);
          out = s * chi * s;
        } else {
          out = evolve(recovery_model(rec.kind, m, rec.gamma, rec.omega), chi, rec.t, cfg, tol);
        }
        const double f = fidelity_to_pure(rin, out);
        sp.probability[m] = p;
        sp.fidelity[m] = f;
        ptot += p;
        psum[m] += p;
        pfsum[m] += p * f;
        fsum += p * f;
      }
      if (std::abs(ptot - 1.0) > tol.probability)
        throw std::runtime_error("average_fidelity: outcome probabilities do not sum to 1");
      rep.samples.push_back(sp);
    }
    rep.average = fsum / 6.0;
    for (int m = 0; m < 4; ++m) {
      rep.outcome_probability[m] = psum[m] / 6.0;
      rep.outcome_fidelity[m] = psum[m] > 0.0 ? pfsum[m] / psum[m] : 0.0;
    }
    return rep;
  }

  // Dense validation rule. The pipeline is linear in the input state, so the
  // channel stage and the recovery stage are extracted once as affine maps of
  // the Bloch vector and then evaluated cheaply at every grid point.
  if (quad.polar_points < 2 || quad.azimuthal_points < 2)
    throw std::invalid_argument("average_fidelity: dense quadrature needs at least 2x2 points");

  std::array<detail::AffineMap, 4> stage1, stage2;
  for (int m = 0; m < 4; ++m) {
    stage1[m] = detail::affine_from_action(
        [&](const Matrix<2>& b) { return detail::unnormalized_conditional(m, b, ch.rho); });
    if (rec.kind == EnvironmentKind::perfect) {
      stage2[m] = detail::affine_from_action([&](const Matrix<2>& b) {
        const Matrix<2> s = pauli(m);
        return Matrix<2>(s * b * s);
      });
    } else {
      const LindbladModel<2> model = recovery_model(rec.kind, m, rec.gamma, rec.omega);
      stage2[m] = detail::affine_from_action(
          [&](const Matrix<2>& b) { return evolve_linear(model, b, rec.t, cfg); });
    }
  }

  std::vector<double> gx, gw;
  detail::gauss_legendre(quad.polar_points, gx, gw);
  const int nphi = quad.azimuthal_points;
  const double wphi = 1.0 / static_cast<double>(nphi); // (2pi/nphi) / (2pi)

  double fsum = 0.0;
  std::array<double, 4> psum{}, pfsum{};
  for (int i = 0; i < quad.polar_points; ++i) {
    const double cz = gx[i];
    const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
    const double wz = 0.5 * gw[i]; // weights normalized to integrate to 1
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * pi * j / nphi;
      const detail::Bloch3 n{sz * std::cos(phi), sz * std::sin(phi), cz};
      const double weight = wz * wphi;
      double ptot = 0.0;
      for (int m = 0; m < 4; ++m) {
        const double p = stage1[m].out_trace(n);
        const detail::Bloch3 s = stage1[m].out_vector(1.0, n);
        const detail::Bloch3 o = stage2[m].out_vector(p, s);
        const double pf = 0.5 * (p + detail::dot(n, o));
        ptot += p;
        fsum += weight * pf;
        psum[m] += weight * p;
        pfsum[m] += weight * pf;
      }
      if (std::abs(ptot - 1.0) > tol.probability)
        throw std::runtime_error("average_fidelity: outcome probabilities do not sum to 1");
    }
  }
  rep.average = fsum;
  for (int m = 0; m < 4; ++m) {
    rep.outcome_probability[m] = psum[m];
    rep.outcome_fidelity[m] = psum[m] > 0.0 ? pfsum[m] / psum[m] : 0.0;
  }
  return rep;
}

} // namespace telesim
