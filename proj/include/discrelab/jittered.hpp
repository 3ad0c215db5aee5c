#pragma once

// Jittered sampling: Monte Carlo estimation of J(N, f, r) and the exact
// variance identity
//   J = N^-1 |B_r| ||f||_2^2 - sum_j ||chi_{B_r} * (f chi_{E_j})||_2^2,
// evaluated spectrally.  The per-frequency variance term
//   T(m) = N^-1 ||f||_2^2 - sum_j |ghat_j(m)|^2
// collapses, after summing the cell phases, to a sum over coefficient pairs
// congruent mod H per axis -- no O(N) cell loop in the hot path.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "discrelab/densities.hpp"
#include "discrelab/engine.hpp"
#include "discrelab/parallel.hpp"
#include "discrelab/rng.hpp"
#include "discrelab/spectral.hpp"
#include "discrelab/torus.hpp"

namespace discrelab {

// transform of the indicator of cell j: int_{E_j} e^{-2 pi i u.x} dx
inline cplx cube_hat(const PartitionCells& cells, std::size_t j,
                     const FreqKey& u) {
  const double s = cells.side();
  TorusPoint c = cells.center(j);
  cplx v = 1.0;
  for (int a = 0; a < cells.dim; ++a) {
    double amp = (u[a] == 0) ? s : std::sin(M_PI * double(u[a]) * s) /
                                       (M_PI * double(u[a]));
    v *= amp * std::polar(1.0, -2.0 * M_PI * double(u[a]) * c.x[a]);
  }
  return v;
}

namespace detail {

// per-axis factor of cube_hat for the cell with index 0 along that axis
inline cplx axis_factor(int u, int H) {
  const double s = 1.0 / double(H);
  double amp = (u == 0) ? s : std::sin(M_PI * double(u) * s) / (M_PI * double(u));
  return amp * std::polar(1.0, -2.0 * M_PI * double(u) * (-0.5 + 0.5 * s));
}

}  // namespace detail

// Precomputed pair expansion of sum_j |ghat_j(m)|^2: summing the cell phase
// e^{-2 pi i (u - u').i/H} over cell indices kills every pair of coefficient
// offsets not congruent mod H and contributes H per axis otherwise.
struct CellPairSum {
  int dim = 1;
  int H = 1;
  double l2sq = 0.0;  // ||f||_2^2 by Parseval
  struct Pair {
    FreqKey k1, k2;
    cplx cc;  // fhat(k1) conj fhat(k2) H^d
  };
  std::vector<Pair> pairs;

  CellPairSum(const DensityField& f, const PartitionCells& cells)
      : dim(f.dim), H(cells.side_count) {
    if (f.dim != cells.dim) throw std::invalid_argument("CellPairSum: dim mismatch");
    double Hd = std::pow(double(H), dim);
    for (const auto& [k1, c1] : f.coeffs) {
      l2sq += std::norm(c1);
      for (const auto& [k2, c2] : f.coeffs) {
        bool cong = true;
        for (int a = 0; a < dim; ++a)
          if ((k1[a] - k2[a]) % H != 0) cong = false;
        if (cong) pairs.push_back({k1, k2, c1 * std::conj(c2) * Hd});
      }
    }
  }

  double cell_sum(const FreqKey& m) const {
    cplx acc = 0.0;
    for (const auto& p : pairs) {
      cplx v = p.cc;
      for (int a = 0; a < dim; ++a)
        v *= detail::axis_factor(m[a] - p.k1[a], H) *
             std::conj(detail::axis_factor(m[a] - p.k2[a], H));
      acc += v;
    }
    return acc.real();
  }

  // T(m) >= 0 up to rounding; equals the per-frequency sampling variance
  double var_term(const FreqKey& m) const {
    double N = std::pow(double(H), dim);
    return l2sq / N - cell_sum(m);
  }
};

struct JitterEstimate {
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  int replicates = 0;
  double closed_form = 0.0;
  double tail_bound = 0.0;
  std::vector<double> cell_terms;
};

// closed form on an explicit frequency set (plus m = 0); exact up to the
// truncation, whose deficit is at most (||f||_2^2/N) x the spectral tail
inline JitterEstimate jitter_closed_form(const PartitionCells& cells,
                                         const DensityField& f, double r,
                                         const FrequencySet& fs) {
  if (cells.dim != f.dim || cells.dim != fs.dim)
    throw std::invalid_argument("jitter_closed_form: dim mismatch");
  CellPairSum cps(f, cells);
  const int d = cells.dim;
  double vol = ball_volume(d, r);
  JitterEstimate est;
  est.closed_form = vol * vol * cps.var_term({0, 0, 0});
  est.closed_form += parallel_sum(fs.shells.size(), [&](std::size_t si) {
    const Shell& sh = fs.shells[si];
    double v = ball_fourier(d, r, std::sqrt(double(sh.m_sq)));
    double acc = 0.0;
    for (const auto& m : sh.members) acc += cps.var_term(m);
    return v * v * acc;
  }, 4);
  double N = double(cells.cell_count());
  est.tail_bound = cps.l2sq / N * ball_tail_bound(d, r, fs.cutoff);
  return est;
}

// per-cell contributions ||chi_{B_r} * (f chi_{E_j})||_2^2 over the set;
// direct O(cells x freqs x coeffs) -- for validation at small sizes
inline std::vector<double> jitter_cell_terms(const PartitionCells& cells,
                                             const DensityField& f, double r,
                                             const FrequencySet& fs) {
  const int d = cells.dim;
  const std::size_t N = cells.cell_count();
  std::vector<double> terms(N, 0.0);
  parallel_for(N, [&](std::size_t j) {
    double acc = 0.0;
    auto add = [&](const FreqKey& m, double w) {
      cplx g = 0.0;
      for (const auto& [k, c] : f.coeffs) {
        FreqKey u{m[0] - k[0], m[1] - k[1], m[2] - k[2]};
        g += c * cube_hat(cells, j, u);
      }
      acc += w * std::norm(g);
    };
    double vol = ball_volume(d, r);
    add({0, 0, 0}, vol * vol);
    for (const auto& sh : fs.shells) {
      double v = ball_fourier(d, r, std::sqrt(double(sh.m_sq)));
      for (const auto& m : sh.members) add(m, v * v);
    }
    terms[j] = acc;
  });
  return terms;
}

// Monte Carlo on the same truncated frequency set: per replicate, one
// uniform point per cell with weights f(z_j), then the truncated x-average.
inline JitterEstimate jitter_mc(const PartitionCells& cells,
                                const DensityField& f, double r,
                                const FrequencySet& fs, int replicates,
                                std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("jitter_mc: replicates >= 2");
  if (cells.dim != f.dim || cells.dim != fs.dim)
    throw std::invalid_argument("jitter_mc: dim mismatch");
  const int d = cells.dim;
  const std::size_t N = cells.cell_count();
  const int K = int(std::ceil(fs.cutoff));

  // flatten the set once: weights and fhat(-m) per member
  struct Entry {
    FreqKey m;
    double w;
    cplx fneg;
  };
  std::vector<Entry> entries;
  double vol = ball_volume(d, r);
  entries.push_back({{0, 0, 0}, vol * vol, f.coeff({0, 0, 0})});
  for (const auto& sh : fs.shells) {
    double v = ball_fourier(d, r, std::sqrt(double(sh.m_sq)));
    for (const auto& m : sh.members)
      entries.push_back({m, v * v, f.coeff({-m[0], -m[1], -m[2]})});
  }

  std::vector<double> vals(std::size_t(replicates), 0.0);
  parallel_for(std::size_t(replicates), [&](std::size_t t) {
    WeightedPointSet ps = sample_jitter(cells, hash2(seed, t));
    for (std::size_t j = 0; j < N; ++j) ps.weights[j] = f.eval(ps.points[j]);
    // per-point power tables e^{2 pi i m_a z_a}, m_a in [-K, K]
    std::vector<cplx> pw(std::size_t(d) * N * std::size_t(2 * K + 1));
    for (std::size_t j = 0; j < N; ++j)
      for (int a = 0; a < d; ++a) {
        cplx base = std::polar(1.0, 2.0 * M_PI * ps.points[j].x[a]);
        std::size_t off = (std::size_t(a) * N + j) * std::size_t(2 * K + 1);
        pw[off + std::size_t(K)] = 1.0;
        for (int q = 1; q <= K; ++q) {
          pw[off + std::size_t(K + q)] = pw[off + std::size_t(K + q - 1)] * base;
          pw[off + std::size_t(K - q)] = std::conj(pw[off + std::size_t(K + q)]);
        }
      }
    double total = 0.0;
    for (const auto& e : entries) {
      cplx S = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        cplx v = ps.weights[j];
        for (int a = 0; a < d; ++a)
          v *= pw[(std::size_t(a) * N + j) * std::size_t(2 * K + 1) +
                  std::size_t(K + e.m[a])];
        S += v;
      }
      total += e.w * std::norm(S / double(N) - e.fneg);
    }
    vals[t] = total;
  });

  JitterEstimate est;
  est.replicates = replicates;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= double(replicates);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= double(replicates - 1);
  est.mc_value = mean;
  est.mc_stderr = std::sqrt(var / double(replicates));
  return est;
}

namespace detail {

// sum over the half lattice 0 < |m| <= M of term(m, m_sq), doubled; rows
// along the first axis, block-parallel over rows
template <class Term>
double jitter_half_lattice(int d, double M, Term&& term) {
  const int K = int(std::floor(M));
  const double M2 = M * M;
  struct Row {
    int m2, m3, lo, hi;
  };
  std::vector<Row> rows;
  auto push = [&](int m2, int m3, bool positive_only) {
    double rem = M2 - double(m2) * m2 - double(m3) * m3;
    if (rem < 0.0) return;
    int K1 = int(std::floor(std::sqrt(rem)));
    if (positive_only) {
      if (K1 >= 1) rows.push_back({m2, m3, 1, K1});
    } else {
      rows.push_back({m2, m3, -K1, K1});
    }
  };
  push(0, 0, true);
  if (d >= 2)
    for (int m2 = 1; m2 <= K; ++m2) push(m2, 0, false);
  if (d >= 3)
    for (int m3 = 1; m3 <= K; ++m3)
      for (int m2 = -K; m2 <= K; ++m2) push(m2, m3, false);
  return 2.0 * parallel_sum(rows.size(), [&](std::size_t ri) {
    const Row& row = rows[ri];
    double tail = double(row.m2) * row.m2 + double(row.m3) * row.m3;
    double acc = 0.0;
    for (int m1 = row.lo; m1 <= row.hi; ++m1)
      acc += term(FreqKey{m1, row.m2, row.m3}, double(m1) * m1 + tail);
    return acc;
  }, 1);
}

}  // namespace detail

// radial weights w(|m|^2) = int_a^b |chihat|^2 dr tabulated once per (d,a,b)
// and reusable across cell counts
struct RadialWeightCache {
  int dim = 1;
  double a = 0.0, b = 0.0;
  double M_max = 0.0;
  double w0 = 0.0;  // weight of m = 0: int vol^2 dr
  std::vector<double> w;  // indexed by |m|^2

  RadialWeightCache(int d, double a_, double b_, double M)
      : dim(d), a(a_), b(b_), M_max(M) {
    if (!(0.0 < a && a < b && b < 0.5))
      throw std::invalid_argument("RadialWeightCache: need 0 < a < b < 1/2");
    w0 = integrate(gauss_legendre_64(), a, b, [&](double r) {
      double v = ball_volume(d, r);
      return v * v;
    });
    std::size_t n = std::size_t(M * M) + 2;
    w.assign(n, 0.0);
    parallel_for(n - 1, [&](std::size_t i) {
      w[i + 1] = radial_weight(dim, a, b, std::sqrt(double(i + 1)));
    });
  }
};

// int_a^b J(N, f, r) dr, truncated at |m| <= cache.M_max
inline double jitter_radial_avg(const PartitionCells& cells,
                                const DensityField& f,
                                const RadialWeightCache& cache) {
  if (cells.dim != f.dim || cells.dim != cache.dim)
    throw std::invalid_argument("jitter_radial_avg: dim mismatch");
  CellPairSum cps(f, cells);
  double total = cache.w0 * cps.var_term({0, 0, 0});
  total += detail::jitter_half_lattice(
      cells.dim, cache.M_max, [&](const FreqKey& m, double m_sq) {
        return cache.w[std::size_t(m_sq + 0.5)] * cps.var_term(m);
      });
  return total;
}

// --- exact route for f = 1 ------------------------------------------------
//
// With constant density the cell terms are double integrals of the ball
// autocorrelation A_r(u) = |B_r intersect (B_r + u)| against the cell
// difference density (a tent), so J has a closed form up to a smooth
// low-dimensional quadrature -- no frequency truncation at all.

// |B_r intersect (B_r + u)| in R^d at center distance u >= 0
inline double ball_overlap(int d, double r, double u) {
  if (u >= 2.0 * r) return 0.0;
  switch (d) {
    case 1:
      return 2.0 * r - u;
    case 2:
      return 2.0 * r * r * std::acos(u / (2.0 * r)) -
             0.5 * u * std::sqrt(4.0 * r * r - u * u);
    default:
      return M_PI / 12.0 * (4.0 * r + u) * (2.0 * r - u) * (2.0 * r - u);
  }
}

// periodization over integer shifts (2r < 1, so +-1 per axis suffices)
inline double ball_overlap_periodized(int d, double r,
                                      const std::array<double, kMaxDim>& u) {
  double total = 0.0;
  const int lo = -1, hi = 1;
  std::array<int, kMaxDim> k{0, 0, 0};
  for (k[2] = (d >= 3 ? lo : 0); k[2] <= (d >= 3 ? hi : 0); ++k[2])
    for (k[1] = (d >= 2 ? lo : 0); k[1] <= (d >= 2 ? hi : 0); ++k[1])
      for (k[0] = lo; k[0] <= hi; ++k[0]) {
        double sq = 0.0;
        for (int a = 0; a < d; ++a) {
          double v = u[a] + double(k[a]);
          sq += v * v;
        }
        total += ball_overlap(d, r, std::sqrt(sq));
      }
  return total;
}

namespace detail {

// N int_{[-s,s]^d} A_r(u) prod_a (s - |u_a|) du via tensor panels (the
// integrand has a kink on |u| = 2r, so panels keep the rule accurate)
inline double jitter_const_cell_sum(const PartitionCells& cells, double r) {
  const int d = cells.dim;
  const double s = cells.side();
  const int panels = 8;
  static const QuadRule rule = gauss_legendre(12);
  const int P = panels * int(rule.nodes.size());
  std::vector<double> nodes(std::size_t(P), 0.0);
  std::vector<double> weights(std::size_t(P), 0.0);
  for (int i = 0; i < panels; ++i) {
    double lo = -s + 2.0 * s * double(i) / panels;
    double hi = -s + 2.0 * s * double(i + 1) / panels;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      std::size_t idx = std::size_t(i) * rule.nodes.size() + q;
      nodes[idx] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
      weights[idx] = 0.5 * (hi - lo) * rule.weights[q];
    }
  }
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= std::size_t(P);
  double acc = parallel_sum(total, [&](std::size_t idx) {
    std::array<double, kMaxDim> u{0, 0, 0};
    double w = 1.0;
    std::size_t rest = idx;
    for (int a = 0; a < d; ++a) {
      std::size_t i = rest % std::size_t(P);
      rest /= std::size_t(P);
      u[a] = nodes[i];
      w *= weights[i] * (s - std::abs(u[a]));
    }
    return w * ball_overlap_periodized(d, r, u);
  }, 1024);
  return double(cells.cell_count()) * acc;
}

}  // namespace detail

// exact J(N, 1, r) = N^-1 |B_r| - sum_j cell terms
inline double jitter_const_fixed_r(const PartitionCells& cells, double r) {
  double N = double(cells.cell_count());
  return ball_volume(cells.dim, r) / N -
         detail::jitter_const_cell_sum(cells, r);
}

// int_a^b J(N, 1, r) dr by Gauss-Legendre in r (J is smooth in r)
inline double jitter_const_radial_avg(const PartitionCells& cells, double a,
                                      double b) {
  if (!(0.0 < a && a < b && b < 0.5))
    throw std::invalid_argument("jitter_const_radial_avg: need 0 < a < b < 1/2");
  return integrate(gauss_legendre_64(), a, b,
                   [&](double r) { return jitter_const_fixed_r(cells, r); });
}

// J(N, f, r) at fixed radius, truncated at |m| <= M_max
inline double jitter_fixed_r(const PartitionCells& cells, const DensityField& f,
                             double r, double M_max) {
  CellPairSum cps(f, cells);
  const int d = cells.dim;
  double vol = ball_volume(d, r);
  double total = vol * vol * cps.var_term({0, 0, 0});
  total += detail::jitter_half_lattice(
      d, M_max, [&](const FreqKey& m, double m_sq) {
        double v = ball_fourier(d, r, std::sqrt(m_sq));
        return v * v * cps.var_term(m);
      });
  return total;
}

}  // namespace discrelab
