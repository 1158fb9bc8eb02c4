#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "telesim/matrix.hpp"
#include "telesim/tolerances.hpp"

namespace telesim {

// drho/dt = -i[H, rho] + (gamma/2) sum_k (2 L_k rho L_k+ - L_k+ L_k rho - rho L_k+ L_k)
// All collapse operators share the single rate gamma.
template <int N>
struct LindbladModel {
  Matrix<N> hamiltonian;
  std::vector<Matrix<N>> collapse_ops;
  double gamma = 0.0;
};

struct IntegratorConfig {
  double step = 0.0;             // fixed RK4 step; 0 selects the automatic rule
  int refine = 1;                // divides the chosen step, for convergence studies
  bool richardson_check = false; // re-integrate at half step and compare results
  double richardson_tol = 1e-8;
  double target_error = 1e-9;    // accuracy goal of the automatic step rule
};

template <int N>
Matrix<N> liouvillian_apply(const LindbladModel<N>& model, const Matrix<N>& rho) {
  const cplx mi{0.0, -1.0};
  Matrix<N> out = mi * (model.hamiltonian * rho - rho * model.hamiltonian);
  for (const auto& l : model.collapse_ops) {
    const Matrix<N> ld = l.adjoint();
    const Matrix<N> d = ld * l;
    out += (0.5 * model.gamma) * (2.0 * (l * (rho * ld)) - d * rho - rho * d);
  }
  return out;
}

namespace detail {

// Same right-hand side folded into -(G rho + rho G+) + gamma sum L rho L+
// with G = iH + (gamma/2) sum L+L, so each apply costs 2 + 2k products.
template <int N>
struct PreparedLindblad {
  Matrix<N> g;
  std::vector<Matrix<N>> l, ld;
  double gamma;
  double rate; // stiffness bound driving the step rule

  explicit PreparedLindblad(const LindbladModel<N>& m) : gamma(m.gamma) {
    if (!(m.gamma >= 0.0) || !std::isfinite(m.gamma))
      throw std::invalid_argument("lindblad: gamma must be finite and nonnegative");
    g = cplx{0.0, 1.0} * m.hamiltonian;
    double cnorm = 0.0;
    for (const auto& op : m.collapse_ops) {
      l.push_back(op);
      ld.push_back(op.adjoint());
      g += (0.5 * m.gamma) * (ld.back() * op);
      const double n = op.inf_norm();
      cnorm += n * n;
    }
    rate = std::max(1.0, m.hamiltonian.inf_norm() + m.gamma * cnorm);
  }

  Matrix<N> apply(const Matrix<N>& rho) const {
    Matrix<N> out = -(g * rho + rho * g.adjoint());
    for (std::size_t k = 0; k < l.size(); ++k) out += gamma * (l[k] * (rho * ld[k]));
    return out;
  }
};

// Step small enough for stability (0.02 per unit rate) and for the fourth
// order local error to accumulate below target over the whole duration.
inline double auto_step(double rate, double duration, const IntegratorConfig& cfg) {
  double h = 0.02 / rate;
  if (cfg.step > 0.0) h = std::min(h, cfg.step);
  const double t_eff = std::max(duration, 1e-9);
  h = std::min(h, std::pow(120.0 * cfg.target_error / (t_eff * std::pow(rate, 5)), 0.25));
  return h / std::max(1, cfg.refine);
}

template <int N>
Matrix<N> rk4_integrate(const PreparedLindblad<N>& prep, Matrix<N> rho, double duration,
                        double h_req) {
  const long steps = std::max(1L, static_cast<long>(std::ceil(duration / h_req - 1e-12)));
  const double h = duration / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    const Matrix<N> k1 = prep.apply(rho);
    const Matrix<N> k2 = prep.apply(rho + (0.5 * h) * k1);
    const Matrix<N> k3 = prep.apply(rho + (0.5 * h) * k2);
    const Matrix<N> k4 = prep.apply(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

} // namespace detail

// Propagate an arbitrary matrix through the master-equation flow. The flow is
// linear, so operator-basis inputs are legitimate; no density checks apply.
template <int N>
Matrix<N> evolve_linear(const LindbladModel<N>& model, const Matrix<N>& a0, double duration,
                        const IntegratorConfig& cfg = {}) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("evolve: duration must be finite and nonnegative");
  if (duration == 0.0) return a0;
  const detail::PreparedLindblad<N> prep(model);
  return detail::rk4_integrate(prep, a0, duration, detail::auto_step(prep.rate, duration, cfg));
}

// Propagate a density matrix and verify it stays one. A failed post-check is
// retried once at a quarter of the step before giving up.
template <int N>
Matrix<N> evolve(const LindbladModel<N>& model, const Matrix<N>& rho0, double duration,
                 const IntegratorConfig& cfg = {}, const Tolerances& tol = {}) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("evolve: duration must be finite and nonnegative");
  {
    const auto d0 = density_diagnostics(rho0);
    if (!density_ok(d0, tol))
      throw std::invalid_argument("evolve: input is not a density matrix");
  }
  if (duration == 0.0) return rho0;

  const detail::PreparedLindblad<N> prep(model);
  const double h0 = detail::auto_step(prep.rate, duration, cfg);

  for (int attempt = 0; attempt < 2; ++attempt) {
    const double h = h0 / (attempt == 0 ? 1.0 : 4.0);
    const Matrix<N> out = detail::rk4_integrate(prep, rho0, duration, h);
    bool ok = density_ok(density_diagnostics(out), tol);
    if (ok && cfg.richardson_check) {
      const Matrix<N> ref = detail::rk4_integrate(prep, rho0, duration, 0.5 * h);
      ok = max_abs_diff(out, ref) <= cfg.richardson_tol;
    }
    if (ok) return out;
  }
  throw std::runtime_error("evolve: result failed density checks at reduced step");
}

} // namespace telesim
