#pragma once

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "telesim/matrix.hpp"

namespace testutil {

inline std::mt19937 make_rng(unsigned seed) { return std::mt19937(seed); }

template <int N>
telesim::Matrix<N> random_matrix(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  telesim::Matrix<N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = {nd(rng), nd(rng)};
  return a;
}

template <int N>
telesim::Matrix<N> random_hermitian(std::mt19937& rng) {
  const auto a = random_matrix<N>(rng);
  return 0.5 * (a + a.adjoint());
}

template <int N>
telesim::Matrix<N> random_density(std::mt19937& rng) {
  const auto g = random_matrix<N>(rng);
  telesim::Matrix<N> rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

} // namespace testutil
