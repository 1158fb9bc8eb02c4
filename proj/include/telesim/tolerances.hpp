#pragma once

namespace telesim {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Guard rails applied after numerical evolution and when cross-checking the
// two fidelity paths. All values are absolute deviations.
struct Tolerances {
  double trace = 1e-9;        // |tr rho - 1| after an evolution
  double hermiticity = 1e-9;  // max_ij |a_ij - conj(a_ji)|
  double positivity = -1e-8;  // floor for the smallest eigenvalue
  double probability = 1e-12; // defect of sum_m P_m = 1
  double two_path = 1e-6;     // closed form vs numeric pipeline
};

} // namespace telesim
