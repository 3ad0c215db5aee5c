#pragma once

// Bessel J1 without external special-function dependencies: power series
// for small argument, Hankel asymptotic beyond.  Only J1 is needed (the
// d=1 and d=3 ball transforms reduce to elementary functions).  The series
// runs in long double to absorb the alternating-sum cancellation near the
// switchover.

#include <cmath>

namespace discrelab {

namespace detail {

inline double j1_series(double t) {
  // J1(t) = (t/2) sum_k (-(t/2)^2)^k / (k! (k+1)!)
  const long double u = 0.25L * (long double)t * t;
  long double term = 0.5L * t;
  long double sum = term;
  for (int k = 1; k <= 60; ++k) {
    term *= -u / ((long double)k * (k + 1));
    sum += term;
    if (fabsl(term) < 1e-21L * fabsl(sum)) break;
  }
  return double(sum);
}

inline double j1_asymptotic(double t) {
  // Hankel expansion: J1(t) ~ sqrt(2/(pi t)) [P(t) cos(chi) - Q(t) sin(chi)],
  // chi = t - 3pi/4, with mu = 4 (order 1).
  const double chi = t - 0.75 * M_PI;
  const double inv8t = 1.0 / (8.0 * t);
  // a_k = prod_{i=1}^{k} (mu - (2i-1)^2) / (k! 8^k t^k), mu = 4
  double ak = 1.0;  // a_0
  double P = 0.0, Q = 0.0;
  for (int k = 0; k <= 16; ++k) {
    if (k % 2 == 0)
      P += (k % 4 == 0 ? ak : -ak);
    else
      Q += ((k - 1) % 4 == 0 ? ak : -ak);
    double odd = 2.0 * k + 1.0;
    ak *= (4.0 - odd * odd) * inv8t / double(k + 1);
  }
  return std::sqrt(2.0 / (M_PI * t)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace detail

inline double bessel_j1(double t) {
  const double a = std::abs(t);
  double v = (a <= 18.0) ? detail::j1_series(a) : detail::j1_asymptotic(a);
  return t < 0.0 ? -v : v;  // J1 is odd
}

}  // namespace discrelab
