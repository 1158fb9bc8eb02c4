#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "telesim/closedform.hpp"
#include "telesim/teleport.hpp"

namespace telesim {

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

struct CriticalTimeResult {
  double t_c = 0.0;
  double f_max = 0.0;
  bool boundary = false;        // the best value sits on the scan edge
  double window = 0.0;          // upper edge of the scanned interval
  std::vector<double> competing; // other local maxima within 1e-4 of f_max
};

namespace detail {

template <typename Fn>
double golden_max(Fn&& f, double lo, double hi, double tol) {
  constexpr double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

struct ScanPlan {
  double window;
  double step;
};

// Scan long enough to cover both the slowest precession period and the decay
// transient, finely enough to resolve every oscillation.
inline ScanPlan critical_time_plan(double omega, double gamma) {
  double window = 0.0;
  if (omega > 1e-9) window = std::max(window, 4.0 * pi / omega);
  if (gamma > 1e-12) window = std::max(window, 20.0 / gamma);
  if (window == 0.0) window = 1.0;
  double step = window / 2000.0;
  if (omega > 1e-9) step = std::min(step, pi / (20.0 * omega));
  return {window, step};
}

// Shared refinement: pick the best of the top three interior maxima of the
// sampled curve, polish each by golden section, and compare with the edges.
template <typename Fn>
CriticalTimeResult refine_scan(Fn&& f, const std::vector<double>& ts, const std::vector<double>& fs,
                               double golden_tol) {
  const int n = static_cast<int>(ts.size());
  CriticalTimeResult res;
  res.window = ts.back();

  std::vector<int> peaks;
  for (int i = 1; i + 1 < n; ++i)
    if (fs[i] >= fs[i - 1] && fs[i] >= fs[i + 1]) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return fs[a] > fs[b]; });
  if (peaks.size() > 3) peaks.resize(3);

  std::vector<std::pair<double, double>> candidates; // (t, f)
  candidates.emplace_back(ts.front(), fs.front());
  candidates.emplace_back(ts.back(), fs.back());
  for (int i : peaks) {
    const double t = golden_max(f, ts[i - 1], ts[i + 1], golden_tol);
    candidates.emplace_back(t, f(t));
  }

  const auto best = std::max_element(candidates.begin(), candidates.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  res.t_c = best->first;
  res.f_max = best->second;
  res.boundary = (best == candidates.begin()) || (best == candidates.begin() + 1);
  for (const auto& [t, fv] : candidates)
    if (std::abs(t - res.t_c) > golden_tol * 10.0 + 1e-12 && res.f_max - fv <= 1e-4)
      res.competing.push_back(t);
  return res;
}

} // namespace detail

// Location and value of the global maximum of f over the automatic window.
inline CriticalTimeResult critical_time(const std::function<double(double)>& f, double omega,
                                        double gamma, double golden_tol = 1e-10) {
  const auto plan = detail::critical_time_plan(omega, gamma);
  const int n = static_cast<int>(std::ceil(plan.window / plan.step));
  std::vector<double> ts(n + 1), fs(n + 1);
  for (int i = 0; i <= n; ++i) {
    ts[i] = plan.window * i / n;
    fs[i] = f(ts[i]);
  }
  return detail::refine_scan(f, ts, fs, golden_tol);
}

inline CriticalTimeResult critical_time_closed(EnvironmentKind alpha, EnvironmentKind beta,
                                               double gamma, double omega, double t0 = 0.0) {
  return critical_time(
      [=](double t) { return fidelity_closed(alpha, beta, gamma, omega, t, t0); }, omega, gamma);
}

// Same search against the numeric pipeline. The scan advances all 24
// conditional-state trajectories incrementally; the polish step re-evolves
// from t = 0, which is exact and cheap at the short times involved.
inline CriticalTimeResult critical_time_numeric(const ChannelState& ch, EnvironmentKind beta,
                                                double gamma, double omega,
                                                const IntegratorConfig& cfg = {},
                                                double golden_tol = 1e-10) {
  const auto plan = detail::critical_time_plan(omega, gamma);
  const int n = static_cast<int>(std::ceil(plan.window / plan.step));

  const auto pts = detail::octahedral_points();
  struct Track {
    Matrix<2> state;
    Matrix<2> input;
    double p = 0.0;
    int m = 0;
  };
  std::vector<Track> tracks;
  std::array<LindbladModel<2>, 4> models;
  for (int m = 0; m < 4; ++m) models[m] = recovery_model(beta, m, gamma, omega);
  for (const auto& ang : pts) {
    const Matrix<2> rin = pure_state_density(ang);
    for (int m = 0; m < 4; ++m) {
      Track tr;
      tr.input = rin;
      tr.m = m;
      tr.state = conditional_state(m, rin, ch, &tr.p);
      tracks.push_back(tr);
    }
  }

  // one step budget for the whole window so interval errors stay coherent
  IntegratorConfig stepped = cfg;
  std::array<double, 4> h{};
  for (int m = 0; m < 4; ++m)
    h[m] = detail::auto_step(detail::PreparedLindblad<2>(models[m]).rate, plan.window, cfg);

  std::vector<double> ts(n + 1), fs(n + 1);
  const auto fidelity_now = [&] {
    double s = 0.0;
    for (const auto& tr : tracks) s += tr.p * fidelity_to_pure(tr.input, tr.state);
    return s / 6.0;
  };
  ts[0] = 0.0;
  fs[0] = fidelity_now();
  for (int i = 1; i <= n; ++i) {
    ts[i] = plan.window * i / n;
    const double dt = ts[i] - ts[i - 1];
    for (auto& tr : tracks) {
      IntegratorConfig c2 = stepped;
      c2.step = h[tr.m];
      tr.state = evolve(models[tr.m], tr.state, dt, c2);
    }
    fs[i] = fidelity_now();
  }

  const auto eval = [&](double t) {
    double s = 0.0;
    for (const auto& ang : pts) {
      const Matrix<2> rin = pure_state_density(ang);
      for (int m = 0; m < 4; ++m) {
        double p = 0.0;
        const Matrix<2> chi = conditional_state(m, rin, ch, &p);
        const Matrix<2> out = evolve(models[m], chi, t, cfg);
        s += p * fidelity_to_pure(rin, out);
      }
    }
    return s / 6.0;
  };
  return detail::refine_scan(eval, ts, fs, golden_tol);
}

struct CriticalOmegaResult {
  std::optional<double> omega_c;
  double f_max_at_root = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

// Smallest rotation rate whose best-time fidelity reaches the classical
// limit 2/3. F_max grows monotonically with omega, checked on a coarse scan
// before bisecting.
inline CriticalOmegaResult critical_omega(EnvironmentKind alpha, EnvironmentKind beta, double gamma,
                                          double t0, double target = 2.0 / 3.0) {
  const auto fmax = [&](double w) { return critical_time_closed(alpha, beta, gamma, w, t0).f_max; };
  CriticalOmegaResult res;

  double lo = 1e-4;
  double flo = fmax(lo);
  if (flo >= target) {
    // root below the smallest scanned rate; report the floor as the bracket
    res.omega_c = lo;
    res.f_max_at_root = flo;
    res.bracket_lo = res.bracket_hi = lo;
    return res;
  }
  double hi = lo, fhi = flo;
  while (hi < 1024.0 && fhi < target) {
    hi *= 2.0;
    fhi = fmax(hi);
  }
  if (fhi < target) {
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    return res; // no root: the limit is never reached at any practical rate
  }

  double prev = -1.0;
  for (int k = 0; k <= 16; ++k) {
    const double w = lo * std::pow(hi / lo, k / 16.0);
    const double fw = fmax(w);
    if (fw < prev - 1e-9)
      throw std::runtime_error("critical_omega: f_max(omega) is not monotone on the bracket");
    prev = fw;
  }

  res.bracket_lo = lo;
  res.bracket_hi = hi;
  double a = hi / 2.0, b = hi;
  if (a < lo) a = lo;
  while (b - a > 1e-7) {
    const double mid = 0.5 * (a + b);
    if (fmax(mid) < target)
      a = mid;
    else
      b = mid;
    ++res.iterations;
  }
  res.omega_c = 0.5 * (a + b);
  res.f_max_at_root = fmax(*res.omega_c);
  return res;
}

struct CriticalT0Result {
  double t0_c = 0.0;
  double omega_ref = 0.0;
  int iterations = 0;
  // root recomputed at a tenth of the reference rate, to expose how strongly
  // the answer depends on the rotation being effectively instantaneous
  std::optional<double> t0_c_tenth;
};

// Longest distribution time that still beats the classical limit when the
// recovery rotation runs at omega_ref = omega_scale * gamma.
inline CriticalT0Result critical_t0(EnvironmentKind alpha, EnvironmentKind beta, double gamma,
                                    double omega_scale = 1e4, bool with_sensitivity = true) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("critical_t0: gamma must be finite and positive");

  const auto root_at = [&](double wref, int& iterations) {
    const auto margin = [&](double t0) {
      return critical_time_closed(alpha, beta, gamma, wref, t0).f_max - 2.0 / 3.0;
    };
    if (margin(0.0) <= 0.0)
      throw std::runtime_error("critical_t0: fidelity is below the classical limit even at t0 = 0");
    double hi = 1.0;
    int doublings = 0;
    while (margin(hi) > 0.0) {
      hi *= 2.0;
      if (++doublings > 30)
        throw std::runtime_error("critical_t0: no crossing found below t0 = 2^30");
    }
    double a = (doublings == 0) ? 0.0 : hi / 2.0;
    double b = hi;
    while (b - a > 1e-5) {
      const double mid = 0.5 * (a + b);
      if (margin(mid) > 0.0)
        a = mid;
      else
        b = mid;
      ++iterations;
    }
    return 0.5 * (a + b);
  };

  CriticalT0Result res;
  res.omega_ref = omega_scale * gamma;
  res.t0_c = root_at(res.omega_ref, res.iterations);
  if (with_sensitivity) {
    int it2 = 0;
    res.t0_c_tenth = root_at(res.omega_ref / 10.0, it2);
  }
  return res;
}

struct DoubleExponentialFit {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double rms = 0.0;
  int evaluations = 0;
};

namespace detail {

inline double fit_rms(std::span<const double> x, std::span<const double> y, const double* p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = p[0] * std::exp(p[1] * x[i]) + p[2] * std::exp(p[3] * x[i]);
    if (!std::isfinite(m)) return 1e300;
    const double r = m - y[i];
    s += r * r;
  }
  const double v = std::sqrt(s / static_cast<double>(x.size()));
  return std::isfinite(v) ? v : 1e300;
}

// Nelder-Mead over the four parameters; deterministic and derivative-free.
inline void nelder_mead(std::span<const double> x, std::span<const double> y, double* p,
                        int max_evals, int& evals) {
  constexpr int n = 4;
  double simplex[n + 1][n];
  double fv[n + 1];
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) simplex[i][j] = p[j];
    if (i > 0) {
      const double step = std::abs(p[i - 1]) > 1e-8 ? 0.1 * std::abs(p[i - 1]) : 0.05;
      simplex[i][i - 1] += step;
    }
    fv[i] = fit_rms(x, y, simplex[i]);
    ++evals;
  }

  while (evals < max_evals) {
    int order[n + 1] = {0, 1, 2, 3, 4};
    std::sort(order, order + n + 1, [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double diam = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < n; ++j)
        diam = std::max(diam, std::abs(simplex[order[i]][j] - simplex[best][j]));
    if (diam < 1e-10 && std::abs(fv[worst] - fv[best]) < 1e-14) break;

    double centroid[n] = {};
    for (int i = 0; i <= n; ++i)
      if (i != worst)
        for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    double refl[n];
    for (int j = 0; j < n; ++j) refl[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
    const double fr = fit_rms(x, y, refl);
    ++evals;

    if (fr < fv[best]) {
      double expd[n];
      for (int j = 0; j < n; ++j) expd[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
      const double fe = fit_rms(x, y, expd);
      ++evals;
      const double* take = fe < fr ? expd : refl;
      const double ft = std::min(fe, fr);
      for (int j = 0; j < n; ++j) simplex[worst][j] = take[j];
      fv[worst] = ft;
    } else if (fr < fv[second]) {
      for (int j = 0; j < n; ++j) simplex[worst][j] = refl[j];
      fv[worst] = fr;
    } else {
      double contr[n];
      const double* base = fr < fv[worst] ? refl : simplex[worst];
      for (int j = 0; j < n; ++j) contr[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
      const double fc = fit_rms(x, y, contr);
      ++evals;
      if (fc < std::min(fr, fv[worst])) {
        for (int j = 0; j < n; ++j) simplex[worst][j] = contr[j];
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          fv[i] = fit_rms(x, y, simplex[i]);
          ++evals;
        }
      }
    }
  }

  int ibest = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[ibest]) ibest = i;
  for (int j = 0; j < n; ++j) p[j] = simplex[ibest][j];
}

} // namespace detail

// Least-squares fit of y = a e^{b x} + c e^{d x}, multi-start Nelder-Mead.
// Deterministic; the returned terms are ordered so that b <= d.
inline DoubleExponentialFit fit_double_exponential(std::span<const double> x,
                                                   std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("fit_double_exponential: need matching arrays of at least 4 points");

  // log-linear seed for the dominant term
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto npts = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ly = std::log(std::max(std::abs(y[i]), 1e-300));
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
  }
  const double denom = npts * sxx - sx * sx;
  const double b_ll = denom != 0.0 ? (npts * sxy - sx * sy) / denom : 0.5;
  const double a_ll = std::exp((sy - b_ll * sx) / npts);

  const double seeds[5][4] = {
      {1.0, 2.0, 0.5, 0.5},
      {a_ll, b_ll, 1e-3 * a_ll, 2.0 * b_ll},
      {0.5 * a_ll, 0.5 * b_ll, 0.5 * a_ll, 2.0 * b_ll},
      {y[0] != 0.0 ? y[0] : 0.1, 0.1, 1e-4, 1.0},
      {0.5 * (y.front() + y.back()), 0.05, 0.01, 1.5},
  };

  DoubleExponentialFit best;
  best.rms = 1e300;
  int evals = 0;
  for (const auto& seed : seeds) {
    double p[4] = {seed[0], seed[1], seed[2], seed[3]};
    detail::nelder_mead(x, y, p, 20000, evals);
    const double r = detail::fit_rms(x, y, p);
    ++evals;
    if (r < best.rms) {
      best.a = p[0];
      best.b = p[1];
      best.c = p[2];
      best.d = p[3];
      best.rms = r;
    }
  }
  for (int polish = 0; polish < 2; ++polish) {
    double p[4] = {best.a, best.b, best.c, best.d};
    detail::nelder_mead(x, y, p, 20000, evals);
    const double r = detail::fit_rms(x, y, p);
    ++evals;
    if (r < best.rms) {
      best.a = p[0];
      best.b = p[1];
      best.c = p[2];
      best.d = p[3];
      best.rms = r;
    }
  }

  if (best.b > best.d) {
    std::swap(best.a, best.c);
    std::swap(best.b, best.d);
  }
  best.evaluations = evals;
  return best;
}

} // namespace telesim
