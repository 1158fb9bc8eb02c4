#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>

#include "telesim/tolerances.hpp"

namespace telesim {

using cplx = std::complex<double>;

// Dense square complex matrix with compile-time dimension, sized for one to
// three qubits. Value semantics, no heap: hot loops stay allocation-free.
template <int N>
class Matrix {
  static_assert(N == 2 || N == 4 || N == 8, "qubit-sized dimensions only");

public:
  static constexpr int dim = N;

  constexpr Matrix() = default;

  static constexpr Matrix identity() {
    Matrix m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  constexpr cplx& operator()(int r, int c) { return e_[r * N + c]; }
  constexpr const cplx& operator()(int r, int c) const { return e_[r * N + c]; }

  Matrix& operator+=(const Matrix& o) {
    for (int i = 0; i < N * N; ++i) e_[i] += o.e_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (int i = 0; i < N * N; ++i) e_[i] -= o.e_[i];
    return *this;
  }
  Matrix& operator*=(cplx z) {
    for (auto& v : e_) v *= z;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(cplx z, Matrix a) { return a *= z; }
  friend Matrix operator*(Matrix a, cplx z) { return a *= z; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out;
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  Matrix adjoint() const {
    Matrix out;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  cplx trace() const {
    cplx s = 0.0;
    for (int i = 0; i < N; ++i) s += (*this)(i, i);
    return s;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : e_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& v : e_) s = std::max(s, std::abs(v));
    return s;
  }

  // max row sum of entry magnitudes; upper bounds the spectral norm
  double inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < N; ++i) {
      double row = 0.0;
      for (int j = 0; j < N; ++j) row += std::abs((*this)(i, j));
      best = std::max(best, row);
    }
    return best;
  }

  double hermiticity_defect() const {
    double s = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j)
        s = std::max(s, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return s;
  }

private:
  std::array<cplx, N * N> e_{};
};

template <int N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s = std::max(s, std::abs(a(i, j) - b(i, j)));
  return s;
}

template <int A, int B>
Matrix<A * B> kron(const Matrix<A>& x, const Matrix<B>& y) {
  Matrix<A * B> out;
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < A; ++j) {
      const cplx xij = x(i, j);
      for (int k = 0; k < B; ++k)
        for (int l = 0; l < B; ++l) out(i * B + k, j * B + l) = xij * y(k, l);
    }
  return out;
}

namespace detail {

constexpr int qubit_count(int n) {
  int q = 0;
  while ((1 << q) < n) ++q;
  return q;
}

} // namespace detail

// Trace out every qubit not listed in `keep`. Qubit 0 is the leftmost tensor
// factor (most significant bit of the basis index); `keep` must be strictly
// ascending. The kept qubits preserve their relative order in the result.
template <int M, int N>
Matrix<M> partial_trace(const Matrix<N>& a, std::span<const int> keep) {
  constexpr int nq_in = detail::qubit_count(N);
  constexpr int nq_out = detail::qubit_count(M);
  static_assert(M <= N);
  if (static_cast<int>(keep.size()) != nq_out)
    throw std::invalid_argument("partial_trace: keep list size does not match output dimension");
  for (int b = 0; b < nq_out; ++b) {
    if (keep[b] < 0 || keep[b] >= nq_in)
      throw std::invalid_argument("partial_trace: qubit index out of range");
    if (b > 0 && keep[b] <= keep[b - 1])
      throw std::invalid_argument("partial_trace: keep list must be strictly ascending");
  }

  std::array<int, 3> traced{};
  int nt = 0;
  for (int q = 0; q < nq_in; ++q) {
    bool kept = false;
    for (int b = 0; b < nq_out; ++b) kept |= (keep[b] == q);
    if (!kept) traced[nt++] = q;
  }

  const auto scatter = [](std::span<const int> pos, int count, int bits) {
    int idx = 0;
    for (int b = 0; b < count; ++b)
      if ((bits >> (count - 1 - b)) & 1) idx |= 1 << (nq_in - 1 - pos[b]);
    return idx;
  };

  Matrix<M> out;
  for (int i = 0; i < M; ++i) {
    const int bi = scatter(keep, nq_out, i);
    for (int j = 0; j < M; ++j) {
      const int bj = scatter(keep, nq_out, j);
      cplx s = 0.0;
      for (int t = 0; t < (1 << nt); ++t) {
        const int bt = scatter({traced.data(), traced.size()}, nt, t);
        s += a(bi | bt, bj | bt);
      }
      out(i, j) = s;
    }
  }
  return out;
}

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
// Each rotation strips the phase of the pivot entry and then applies the
// standard symmetric Schur rotation, so the iterate stays Hermitian exactly.
template <int N>
std::array<double, N> hermitian_eigenvalues(Matrix<N> a, double off_tol = 1e-12) {
  if (a.hermiticity_defect() > 1e-9)
    throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }

  constexpr int max_sweeps = 64;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) <= off_tol) {
      converged = true;
      break;
    }
    for (int p = 0; p < N - 1; ++p)
      for (int q = p + 1; q < N; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const cplx phase = a(p, q) / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx gqp = -s * std::conj(phase);
        const cplx gqq = c * std::conj(phase);
        for (int i = 0; i < N; ++i) {
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + gqp * aiq;
          a(i, q) = s * aip + gqq * aiq;
        }
        for (int j = 0; j < N; ++j) {
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + std::conj(gqp) * aqj;
          a(q, j) = s * apj + std::conj(gqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
  }
  if (!converged) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += 2.0 * std::norm(a(p, q));
    if (std::sqrt(off) > off_tol)
      throw std::runtime_error("hermitian_eigenvalues: Jacobi sweep limit exceeded");
  }

  std::array<double, N> ev{};
  for (int i = 0; i < N; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct DensityDiagnostics {
  double trace_defect = 0.0;
  double herm_defect = 0.0;
  double min_eigenvalue = 0.0;
};

template <int N>
DensityDiagnostics density_diagnostics(const Matrix<N>& rho) {
  DensityDiagnostics d;
  d.trace_defect = std::abs(rho.trace() - cplx{1.0});
  d.herm_defect = rho.hermiticity_defect();
  if (d.herm_defect <= 1e-9)
    d.min_eigenvalue = hermitian_eigenvalues(rho).front();
  else
    d.min_eigenvalue = -std::numeric_limits<double>::infinity();
  return d;
}

inline bool density_ok(const DensityDiagnostics& d, const Tolerances& tol = {}) {
  return d.trace_defect <= tol.trace && d.herm_defect <= tol.hermiticity &&
         d.min_eigenvalue >= tol.positivity;
}

} // namespace telesim
