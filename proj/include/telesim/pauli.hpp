#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "telesim/matrix.hpp"

namespace telesim {

// sigma^0..sigma^3 with |0> = (1, 0); the index doubles as the Bell
// measurement outcome label used by the teleportation pipeline.
inline Matrix<2> pauli(int n) {
  Matrix<2> m;
  switch (n) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = {0.0, -1.0}; m(1, 0) = {0.0, 1.0}; break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return m;
}

// (sigma^1 - i sigma^2)/2 = |1><0|; drains population from |0> toward |1>,
// which is the steady state of the dissipative environment.
inline Matrix<2> sigma_minus() {
  Matrix<2> m;
  m(1, 0) = 1.0;
  return m;
}

// (sigma^1 + i sigma^2)/2 = |0><1|
inline Matrix<2> sigma_plus() {
  Matrix<2> m;
  m(0, 1) = 1.0;
  return m;
}

// Maximally entangled pair states; applying sigma^m to the first qubit of
// bell_state(0) reproduces bell_state(m) up to a global phase, so outcome m
// is undone by a sigma^m rotation.
inline std::array<cplx, 4> bell_state(int m) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (m) {
    case 0: return {r, 0.0, 0.0, r};
    case 1: return {0.0, r, r, 0.0};
    case 2: return {0.0, r, -r, 0.0};
    case 3: return {r, 0.0, 0.0, -r};
    default: throw std::invalid_argument("bell_state: index must be 0..3");
  }
}

inline Matrix<4> bell_projector(int m) {
  const auto v = bell_state(m);
  Matrix<4> p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p(i, j) = v[i] * std::conj(v[j]);
  return p;
}

} // namespace telesim
