#pragma once

#include <cmath>
#include <vector>

namespace spinbath::quad {

// 8-point Gauss-Legendre on [-1, 1].
inline constexpr double gl8_x[8] = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975362};
inline constexpr double gl8_w[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

template <typename F>
double gl8(const F& fn, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 8; ++i) s += gl8_w[i] * fn(mid + half * gl8_x[i]);
  return s * half;
}

// Adaptive bisection on top of GL8. Returns the refined estimate; sets
// *converged to false when the depth cap is hit before the local tolerance.
template <typename F>
double adaptive(const F& fn, double a, double b, double rel_tol,
                double abs_tol, int max_depth, bool* converged) {
  const double whole = gl8(fn, a, b);
  struct Frame {
    double a, b, whole;
    int depth;
  };
  double total = 0;
  std::vector<Frame> stack{{a, b, whole, 0}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    const double m = 0.5 * (fr.a + fr.b);
    const double left = gl8(fn, fr.a, m);
    const double right = gl8(fn, m, fr.b);
    const double err = std::abs(left + right - fr.whole);
    if (err <= abs_tol + rel_tol * std::abs(left + right) ||
        fr.depth >= max_depth) {
      if (fr.depth >= max_depth && converged &&
          err > abs_tol + rel_tol * std::abs(left + right)) {
        *converged = false;
      }
      total += left + right;
    } else {
      stack.push_back({fr.a, m, left, fr.depth + 1});
      stack.push_back({m, fr.b, right, fr.depth + 1});
    }
  }
  return total;
}

}  // namespace spinbath::quad
