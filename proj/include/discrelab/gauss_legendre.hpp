#pragma once

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre recurrence, plus a mapped integrate() helper.  The n=64 rule
// is cached since it is the workhorse for radial averages.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace discrelab {

struct QuadRule {
  std::vector<double> nodes;    // in (-1, 1)
  std::vector<double> weights;  // positive, sum to 2
};

inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  QuadRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n
    double x = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // evaluate P_n and P_n' by upward recurrence
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = p1;
        p1 = p2;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[std::size_t(n - 1 - i)] = x;  // ascending order
    rule.weights[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

inline const QuadRule& gauss_legendre_64() {
  static const QuadRule rule = gauss_legendre(64);
  return rule;
}

// integral of fn over [a, b] with the given rule
template <class Fn>
double integrate(const QuadRule& rule, double a, double b, Fn&& fn) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * fn(mid + half * rule.nodes[i]);
  return half * s;
}

}  // namespace discrelab
