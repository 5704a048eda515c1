#pragma once

#include <cmath>
#include <numbers>

namespace kktdd {

// Benchmark problem data: a polynomial bump released at t = 0 that the
// control tries to steer toward an oscillating sinusoidal target.

inline double model_initial_condition(double x, double y) {
  return -x * y * (x - 1.0) * (y - 2.0);
}

inline double model_target(double x, double y, double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return std::sin(two_pi * t) * std::sin(two_pi * x) * std::sin(two_pi * y);
}

}  // namespace kktdd
