#ifndef PERIODAX_GOLDEN_HPP
#define PERIODAX_GOLDEN_HPP

#include <cmath>
#include <utility>

namespace periodax {

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Golden-section maximization of a unimodal function on [a, b], stopped when
/// the bracket is below rel_tol * |x|.
template <typename Fn>
GoldenResult golden_section_maximize(Fn&& fn, double a, double b, double rel_tol, int max_iter = 200) {
  constexpr double R = 0.61803398874989484820;  // (sqrt5 - 1) / 2
  if (b < a) std::swap(a, b);
  double x1 = b - R * (b - a);
  double x2 = a + R * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  int it = 0;
  while (it < max_iter && (b - a) > rel_tol * (std::abs(x1) + std::abs(x2)) * 0.5) {
    ++it;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + R * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - R * (b - a);
      f1 = fn(x1);
    }
  }
  return f1 >= f2 ? GoldenResult{x1, f1, it} : GoldenResult{x2, f2, it};
}

}  // namespace periodax

#endif  // PERIODAX_GOLDEN_HPP
