#pragma once

#include <cmath>
#include <stdexcept>

#include "telesim/environment.hpp"

namespace telesim {

// cosh(sqrt(w2) t) and sinh(sqrt(w2) t)/sqrt(w2), continued through w2 <= 0
// where they turn into cos and sin(..)/sqrt(-w2). A short series bridges the
// branch point so both members stay smooth across w2 = 0.
struct HypPair {
  double c = 1.0;
  double s = 0.0;
};

inline HypPair hyp_pair(double w2, double t) {
  if (!std::isfinite(w2) || !std::isfinite(t))
    throw std::invalid_argument("hyp_pair: arguments must be finite");
  const double x2 = w2 * t * t;
  if (std::abs(x2) < 1e-8) {
    return {1.0 + x2 * (0.5 + x2 / 24.0), t * (1.0 + x2 * (1.0 / 6.0 + x2 / 120.0))};
  }
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    return {std::cosh(w * t), std::sinh(w * t) / w};
  }
  const double w = std::sqrt(-w2);
  return {std::cos(w * t), std::sin(w * t) / w};
}

namespace detail {

// e^{-d t} hyp_pair(w2, t) evaluated without overflow. Every use below has
// sqrt(w2) <= d, so all exponents stay nonpositive for t >= 0.
inline HypPair decayed_hyp_pair(double w2, double t, double d) {
  const double x2 = w2 * t * t;
  if (std::abs(x2) < 1e-8 || w2 <= 0.0) {
    const auto h = hyp_pair(w2, t);
    const double e = std::exp(-d * t);
    return {e * h.c, e * h.s};
  }
  const double w = std::sqrt(w2);
  const double ep = std::exp((w - d) * t);
  const double em = std::exp(-(w + d) * t);
  return {0.5 * (ep + em), 0.5 * (ep - em) / w};
}

inline void validate_recovery_args(double gamma, double omega, double t) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("closed form: gamma must be finite and nonnegative");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("closed form: omega must be finite and nonnegative");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("closed form: t must be finite and nonnegative");
}

} // namespace detail

// Scalar coefficients of the recovery stage after precessing for time t at
// rate omega inside each environment; alpha: dissipative, beta: noisy,
// mu: dephasing. At t = 0 they reduce to (1,0,0,1,0,1,0).
struct RecoveryParams {
  double alpha1, alpha2, alpha3;
  double beta1, beta2;
  double mu1, mu2;
};

inline RecoveryParams recovery_params(double gamma, double omega, double t) {
  detail::validate_recovery_args(gamma, omega, t);
  const double g2 = gamma * gamma, w2 = omega * omega;
  const double den = g2 + 2.0 * w2;
  if (den == 0.0) return {1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0};

  const double u2 = (g2 - 16.0 * w2) / 16.0;
  const double v2 = (g2 - 4.0 * w2) / 4.0;
  const auto h3 = detail::decayed_hyp_pair(u2, t, 0.75 * gamma);
  const auto hv = detail::decayed_hyp_pair(v2, t, 1.5 * gamma);
  const auto h1 = detail::decayed_hyp_pair(u2, t, 0.25 * gamma);
  const double eg = std::exp(-gamma * t);
  const double eg2 = std::exp(-0.5 * gamma * t);

  RecoveryParams p{};
  p.alpha1 = ((g2 + w2) * h3.c - 0.25 * gamma * (g2 + 5.0 * w2) * h3.s + w2) / den;
  p.alpha2 = 0.5 * (eg2 - 0.25 * gamma * h3.s - h3.c);
  p.alpha3 = w2 * (1.0 - 0.75 * gamma * h3.s - h3.c) / den;
  p.beta1 = 0.5 * (1.0 - 0.5 * gamma * hv.s + hv.c);
  p.beta2 = 0.5 * (eg - 0.5 * gamma * hv.s - hv.c);
  p.mu1 = 0.5 * (1.0 + 0.25 * gamma * h1.s + h1.c);
  p.mu2 = 0.5 * (eg2 + 0.25 * gamma * h1.s - h1.c);
  return p;
}

namespace detail {

// The channel state is X-shaped for every kind, so three scalars carry all
// the fidelity needs: d = r11-r22-r33+r44, dp = r11+r22-r33-r44, z = Re r14.
struct XChannelSummary {
  double d, dp, z;
};

inline XChannelSummary channel_summary(EnvironmentKind alpha, double gamma, double t0) {
  validate_channel_args(gamma, t0);
  switch (alpha) {
    case EnvironmentKind::perfect:
      return {1.0, 0.0, 0.5};
    case EnvironmentKind::dissipative: {
      const double e1 = std::exp(-gamma * t0);
      const double e2 = e1 * e1;
      return {1.0 - 2.0 * e1 + 2.0 * e2, e1 - 1.0, 0.5 * e1};
    }
    case EnvironmentKind::noisy: {
      const double e2 = std::exp(-2.0 * gamma * t0);
      return {e2 * e2, 0.0, 0.5 * e2};
    }
    case EnvironmentKind::dephasing:
      return {1.0, 0.0, 0.5 * std::exp(-gamma * t0)};
  }
  throw std::invalid_argument("channel_summary: bad kind");
}

} // namespace detail

// Input-averaged teleportation fidelity, closed form. alpha names the
// environment the pair crossed for time t0; beta names the environment acting
// while the recovery rotation runs for time t at rate omega. beta = perfect
// means an instantaneous ideal rotation (omega and t are then ignored).
inline double fidelity_closed(EnvironmentKind alpha, EnvironmentKind beta, double gamma,
                              double omega, double t, double t0 = 0.0) {
  const auto ch = detail::channel_summary(alpha, gamma, t0);
  if (beta == EnvironmentKind::perfect)
    return (2.0 * (0.25 * (1.0 + ch.d) + ch.z) + 1.0) / 3.0;

  const auto p = recovery_params(gamma, omega, t);
  const double s2 = [&] {
    const double s = std::sin(0.5 * omega * t);
    return s * s;
  }();
  const double eg = std::exp(-gamma * t);
  const double eg2 = std::exp(-0.5 * gamma * t);

  switch (beta) {
    case EnvironmentKind::dissipative:
      return 0.5 + ch.d / 12.0 * (eg - p.alpha1 + p.alpha3) +
             ch.dp / 12.0 * (eg - p.alpha1 - p.alpha3) + ch.z / 3.0 * (p.alpha2 + eg2 * s2);
    case EnvironmentKind::noisy:
      return 0.5 + ch.d / 12.0 * (eg * eg - 2.0 * p.beta1 + 1.0) +
             ch.z / 3.0 * (p.beta2 + eg * s2);
    case EnvironmentKind::dephasing:
      return 0.5 + ch.d / 6.0 * (1.0 - p.mu1) + ch.z / 3.0 * (p.mu2 + eg2 * s2);
    default:
      throw std::invalid_argument("fidelity_closed: bad recovery kind");
  }
}

// Entanglement fidelity of the channel state with respect to the undisturbed
// pair; the ideal-recovery average fidelity is (2 fe + 1)/3.
inline double entanglement_fidelity(EnvironmentKind alpha, double gamma, double t0) {
  const auto ch = detail::channel_summary(alpha, gamma, t0);
  return 0.25 * (1.0 + ch.d) + ch.z;
}

} // namespace telesim
