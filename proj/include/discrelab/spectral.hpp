#pragma once

// Spectral side: ball Fourier transforms (Bessel closed forms), lattice
// enumeration with shell grouping on |m|^2, exponential sums, radially
// averaged weights and the analytic truncation tail bounds.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "discrelab/bessel.hpp"
#include "discrelab/gauss_legendre.hpp"
#include "discrelab/torus.hpp"

namespace discrelab {

using cplx = std::complex<double>;

// --- ball transform -------------------------------------------------------
//
// chi_hat(m) of the indicator of the centered ball of radius r; real, radial.
//   d=1: sin(2 pi r|m|) / (pi |m|)
//   d=2: r J1(2 pi r|m|) / |m|
//   d=3: (sin t - t cos t) / (2 pi^2 |m|^3),  t = 2 pi r |m|
// at m = 0 the value is the ball volume.

inline double ball_fourier(int d, double r, double mag) {
  check_dim(d);
  if (!(r > 0.0 && r < 0.5))
    throw std::invalid_argument("ball radius must lie in (0, 1/2)");
  if (mag == 0.0) return ball_volume(d, r);
  const double t = 2.0 * M_PI * r * mag;
  switch (d) {
    case 1:
      return std::sin(t) / (M_PI * mag);
    case 2:
      return r * bessel_j1(t) / mag;
    default: {
      double num;
      if (t < 0.5) {
        // sin t - t cos t = t^3/3 - t^5/30 + t^7/840 - t^9/45360 + ...
        const double t2 = t * t;
        num = t * t2 * (1.0 / 3.0 + t2 * (-1.0 / 30.0 +
              t2 * (1.0 / 840.0 - t2 / 45360.0)));
      } else {
        num = std::sin(t) - t * std::cos(t);
      }
      return num / (2.0 * M_PI * M_PI * mag * mag * mag);
    }
  }
}

inline double ball_fourier(int d, double r, const std::array<int, kMaxDim>& m) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += double(m[a]) * double(m[a]);
  return ball_fourier(d, r, std::sqrt(s));
}

// w(m) = int_a^b |chi_hat_{B_r}(m)|^2 dr.  After t = 2 pi r |m| the d = 1
// and d = 3 integrands have elementary antiderivatives; d = 2 integrates
// t^2 J1(t)^2 by composite Gauss-Legendre with panels short enough that the
// 64-node rule resolves the oscillation to rounding at any |m|.
inline double radial_weight(int d, double a, double b, double mag) {
  if (!(0.0 < a && a < b && b < 0.5))
    throw std::invalid_argument("radial_weight: need 0 < a < b < 1/2");
  if (mag == 0.0) {
    return integrate(gauss_legendre_64(), a, b, [&](double r) {
      double v = ball_volume(d, r);
      return v * v;
    });
  }
  const double ta = 2.0 * M_PI * a * mag, tb = 2.0 * M_PI * b * mag;
  switch (d) {
    case 1: {
      // int sin^2(t) dt = t/2 - sin(2t)/4
      auto F = [](double t) { return 0.5 * t - 0.25 * std::sin(2.0 * t); };
      return (F(tb) - F(ta)) / (2.0 * M_PI * mag * M_PI * M_PI * mag * mag);
    }
    case 2: {
      // |chihat|^2 = r^2 J1(t)^2 / |m|^2, r = t / (2 pi |m|)
      const double scale =
          1.0 / (mag * mag * std::pow(2.0 * M_PI * mag, 3.0));
      const int panels = 1 + int((tb - ta) / 100.0);
      const QuadRule& rule = gauss_legendre_64();
      double s = 0.0;
      for (int i = 0; i < panels; ++i) {
        double lo = ta + (tb - ta) * double(i) / panels;
        double hi = ta + (tb - ta) * double(i + 1) / panels;
        s += integrate(rule, lo, hi, [](double t) {
          double j = bessel_j1(t);
          return t * t * j * j;
        });
      }
      return scale * s;
    }
    default: {
      // int (sin t - t cos t)^2 dt
      auto G = [](double t) {
        double s2 = std::sin(2.0 * t), c2 = std::cos(2.0 * t);
        return t * t * t / 6.0 + 0.5 * t + 0.25 * t * t * s2 - 0.625 * s2 +
               0.75 * t * c2;
      };
      const double scale =
          1.0 / (2.0 * M_PI * mag * 4.0 * std::pow(M_PI, 4.0) * std::pow(mag, 6.0));
      return scale * (G(tb) - G(ta));
    }
  }
}

// --- truncation tails -----------------------------------------------------
//
// |chi_hat_{B_r}(m)|^2 <= kappa_d r^{d-1} |m|^{-d-1}.  d=1 is exact with
// kappa = 1/pi^2; d=2,3 carry a 1.3 margin over the leading asymptotics.
inline double ball_decay_const(int d) {
  switch (d) {
    case 1: return 1.0 / (M_PI * M_PI);
    default: return 1.3 / (M_PI * M_PI);
  }
}

// conservative bound on sum_{|m| > M} |m|^{-d-1} over Z^d
inline double lattice_tail(int d, double M) {
  if (M < 3.0) M = 3.0;
  switch (d) {
    case 1: return 2.0 / M;
    case 2: return 8.0 / (M - 2.0);
    default: return 20.0 / (M - 2.0);
  }
}

// bound on sum_{|m| > M} |chi_hat_{B_r}(m)|^2 at fixed r
inline double ball_tail_bound(int d, double r, double M) {
  return ball_decay_const(d) * std::pow(r, d - 1) * lattice_tail(d, M);
}

// same for the [a,b] radial average (integrate the r-dependence)
inline double radial_tail_bound(int d, double a, double b, double M) {
  double rint = (std::pow(b, double(d)) - std::pow(a, double(d))) / double(d);
  return ball_decay_const(d) * rint * lattice_tail(d, M);
}

// --- exponential sums -----------------------------------------------------

inline cplx exp_sum(const WeightedPointSet& ps,
                    const std::array<int, kMaxDim>& m) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    double phase = 0.0;
    for (int a = 0; a < ps.dim; ++a) phase += double(m[a]) * ps.points[j].x[a];
    s += ps.weights[j] * std::polar(1.0, 2.0 * M_PI * phase);
  }
  return s / double(ps.size());
}

// --- lattice enumeration --------------------------------------------------

struct Shell {
  std::int64_t m_sq = 0;
  std::vector<std::array<int, kMaxDim>> members;
};

struct FrequencySet {
  int dim = 1;
  double cutoff = 0.0;
  std::vector<Shell> shells;  // ascending in m_sq, excludes m = 0

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& s : shells) n += s.members.size();
    return n;
  }
};

// all m in Z^d with 0 < |m| <= M_max, grouped by |m|^2
inline FrequencySet enumerate_lattice(int d, double M_max,
                                      std::size_t shell_budget = 1u << 24) {
  check_dim(d);
  if (!(M_max >= 1.0)) throw std::invalid_argument("enumerate_lattice: M_max >= 1");
  const int K = int(std::floor(M_max));
  const std::int64_t cap = std::int64_t(std::floor(M_max * M_max + 1e-9));
  std::map<std::int64_t, std::vector<std::array<int, kMaxDim>>> groups;
  std::array<int, kMaxDim> m{0, 0, 0};
  const int lo1 = -K, hi1 = K;
  const int lo2 = d >= 2 ? -K : 0, hi2 = d >= 2 ? K : 0;
  const int lo3 = d >= 3 ? -K : 0, hi3 = d >= 3 ? K : 0;
  for (int m3 = lo3; m3 <= hi3; ++m3)
    for (int m2 = lo2; m2 <= hi2; ++m2)
      for (int m1 = lo1; m1 <= hi1; ++m1) {
        std::int64_t sq = std::int64_t(m1) * m1 + std::int64_t(m2) * m2 +
                          std::int64_t(m3) * m3;
        if (sq == 0 || sq > cap) continue;
        m = {m1, m2, m3};
        groups[sq].push_back(m);
      }
  if (groups.size() > shell_budget)
    throw std::runtime_error("enumerate_lattice: shell budget exceeded");
  FrequencySet fs;
  fs.dim = d;
  fs.cutoff = M_max;
  fs.shells.reserve(groups.size());
  for (auto& [sq, mem] : groups) fs.shells.push_back({sq, std::move(mem)});
  return fs;
}

// --- weight tables --------------------------------------------------------

struct SpectralWeightTable {
  int dim = 1;
  bool radial_average = false;
  double r = 0.0;       // fixed-radius mode
  double a = 0.0, b = 0.0;  // radial-average mode
  std::map<std::int64_t, double> entries;  // |m|^2 -> w(m)
  double tail_bound = 0.0;  // bound on the mass beyond the enumerated cutoff

  double at(std::int64_t m_sq) const {
    auto it = entries.find(m_sq);
    if (it == entries.end())
      throw std::out_of_range("SpectralWeightTable: shell not tabulated");
    return it->second;
  }
};

inline SpectralWeightTable fixed_radius_table(const FrequencySet& fs, double r) {
  SpectralWeightTable t;
  t.dim = fs.dim;
  t.radial_average = false;
  t.r = r;
  for (const auto& s : fs.shells) {
    double v = ball_fourier(fs.dim, r, std::sqrt(double(s.m_sq)));
    t.entries[s.m_sq] = v * v;
  }
  t.tail_bound = ball_tail_bound(fs.dim, r, fs.cutoff);
  return t;
}

inline SpectralWeightTable radial_average_table(const FrequencySet& fs,
                                                double a, double b) {
  SpectralWeightTable t;
  t.dim = fs.dim;
  t.radial_average = true;
  t.a = a;
  t.b = b;
  for (const auto& s : fs.shells)
    t.entries[s.m_sq] = radial_weight(fs.dim, a, b, std::sqrt(double(s.m_sq)));
  t.tail_bound = radial_tail_bound(fs.dim, a, b, fs.cutoff);
  return t;
}

}  // namespace discrelab
