#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "telesim/lindblad.hpp"
#include "telesim/pauli.hpp"

namespace telesim {

// The three system-environment couplings, plus the no-coupling reference.
// dissipative: energy loss only; noisy: loss and gain at equal rate;
// dephasing: pure phase damping without population transfer.
enum class EnvironmentKind { perfect, dissipative, noisy, dephasing };

inline const char* to_string(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::perfect: return "perfect";
    case EnvironmentKind::dissipative: return "dissipative";
    case EnvironmentKind::noisy: return "noisy";
    case EnvironmentKind::dephasing: return "dephasing";
  }
  return "?";
}

inline EnvironmentKind environment_from_string(std::string_view s) {
  if (s == "perfect" || s == "p") return EnvironmentKind::perfect;
  if (s == "dissipative" || s == "di") return EnvironmentKind::dissipative;
  if (s == "noisy" || s == "no") return EnvironmentKind::noisy;
  if (s == "dephasing" || s == "de") return EnvironmentKind::dephasing;
  throw std::invalid_argument("unknown environment kind: " + std::string(s));
}

inline std::vector<Matrix<2>> collapse_ops_1q(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::perfect: return {};
    case EnvironmentKind::dissipative: return {sigma_minus()};
    case EnvironmentKind::noisy: return {sigma_minus(), sigma_plus()};
    case EnvironmentKind::dephasing: return {sigma_plus() * sigma_minus()};
  }
  throw std::invalid_argument("collapse_ops_1q: bad kind");
}

// Each qubit of a pair couples to its own local environment of the same kind.
inline std::vector<Matrix<4>> collapse_ops_2q(EnvironmentKind k) {
  const auto ops = collapse_ops_1q(k);
  const auto id = Matrix<2>::identity();
  std::vector<Matrix<4>> out;
  out.reserve(2 * ops.size());
  for (const auto& l : ops) out.push_back(kron(l, id));
  for (const auto& l : ops) out.push_back(kron(id, l));
  return out;
}

// Entangled-pair state after distribution through the environment for time t0.
struct ChannelState {
  EnvironmentKind kind = EnvironmentKind::perfect;
  double gamma = 0.0;
  double t0 = 0.0;
  Matrix<4> rho;
};

namespace detail {

inline void validate_channel_args(double gamma, double t0) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("channel: gamma must be finite and nonnegative");
  if (!(t0 >= 0.0) || !std::isfinite(t0))
    throw std::invalid_argument("channel: t0 must be finite and nonnegative");
}

} // namespace detail

// Exact solution of the pair master equation started from bell_state(0).
// Every kind keeps the X shape: only the diagonal and the outer coherence move.
inline ChannelState channel_state_closed(EnvironmentKind kind, double gamma, double t0) {
  detail::validate_channel_args(gamma, t0);
  ChannelState ch{kind, gamma, t0, {}};
  const double e1 = std::exp(-gamma * t0);
  switch (kind) {
    case EnvironmentKind::perfect:
      ch.rho = bell_projector(0);
      break;
    case EnvironmentKind::dissipative: {
      const double e2 = e1 * e1;
      ch.rho(0, 0) = 0.5 * e2;
      ch.rho(1, 1) = 0.5 * (e1 - e2);
      ch.rho(2, 2) = 0.5 * (e1 - e2);
      ch.rho(3, 3) = 1.0 - e1 + 0.5 * e2;
      ch.rho(0, 3) = 0.5 * e1;
      ch.rho(3, 0) = 0.5 * e1;
      break;
    }
    case EnvironmentKind::noisy: {
      const double e2 = std::exp(-2.0 * gamma * t0);
      const double e4 = e2 * e2;
      ch.rho(0, 0) = 0.25 * (1.0 + e4);
      ch.rho(1, 1) = 0.25 * (1.0 - e4);
      ch.rho(2, 2) = 0.25 * (1.0 - e4);
      ch.rho(3, 3) = 0.25 * (1.0 + e4);
      ch.rho(0, 3) = 0.5 * e2;
      ch.rho(3, 0) = 0.5 * e2;
      break;
    }
    case EnvironmentKind::dephasing:
      ch.rho(0, 0) = 0.5;
      ch.rho(3, 3) = 0.5;
      ch.rho(0, 3) = 0.5 * e1;
      ch.rho(3, 0) = 0.5 * e1;
      break;
  }
  return ch;
}

// Same state through the integrator; cross-checks the closed solution.
inline ChannelState channel_state_numeric(EnvironmentKind kind, double gamma, double t0,
                                          const IntegratorConfig& cfg = {}) {
  detail::validate_channel_args(gamma, t0);
  ChannelState ch{kind, gamma, t0, bell_projector(0)};
  if (kind == EnvironmentKind::perfect || t0 == 0.0) return ch;
  LindbladModel<4> model;
  model.collapse_ops = collapse_ops_2q(kind);
  model.gamma = gamma;
  ch.rho = evolve(model, ch.rho, t0, cfg);
  return ch;
}

// Concurrence of an X-shaped two-qubit state. Throws if the off-X entries
// are not negligible, since the simple formula only covers that shape.
inline double concurrence(const Matrix<4>& rho, double x_shape_tol = 1e-10) {
  static constexpr int off_x[4][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& [i, j] : off_x)
    if (std::abs(rho(i, j)) > x_shape_tol || std::abs(rho(j, i)) > x_shape_tol)
      throw std::invalid_argument("concurrence: state is not X-shaped");
  const double p11 = rho(0, 0).real(), p22 = rho(1, 1).real();
  const double p33 = rho(2, 2).real(), p44 = rho(3, 3).real();
  const double outer = std::abs(rho(0, 3)) - std::sqrt(std::max(0.0, p22 * p33));
  const double inner = std::abs(rho(1, 2)) - std::sqrt(std::max(0.0, p11 * p44));
  return 2.0 * std::max({0.0, outer, inner});
}

// Time at which the channel concurrence hits zero and stays there.
// Only the noisy coupling produces sudden death at finite time.
inline std::optional<double> esd_time(EnvironmentKind kind, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("esd_time: gamma must be finite and positive");
  if (kind != EnvironmentKind::noisy) return std::nullopt;
  return std::log(1.0 + std::sqrt(2.0)) / (2.0 * gamma);
}

} // namespace telesim
