#pragma once

// Discrepancy engine: pointwise evaluation, the L^2-in-x and L^2-in-(x,r)
// lattice sums with certified truncation tails, the nonnegative band-limited
// kernel certificate, and the lower-bound scale functionals.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "discrelab/densities.hpp"
#include "discrelab/parallel.hpp"
#include "discrelab/spectral.hpp"
#include "discrelab/torus.hpp"

namespace discrelab {

struct DiscrepancyReport {
  double value = 0.0;
  std::string method = "spectral";
  double tail_bound = 0.0;
  double cutoff = 0.0;
};

// D_N(x, r) = N^-1 sum_j a_j chi_{-x+B}(z_j) - int_{-x+B} f.  Counting by
// wrapped membership, integral by the exact spectral formula.
inline double discrepancy_at(const WeightedPointSet& ps, const DensityField& f,
                             const BallWindow& B, const TorusPoint& x) {
  if (ps.dim != f.dim || ps.dim != B.dim)
    throw std::invalid_argument("discrepancy_at: dim mismatch");
  if (!f.is_real()) throw std::invalid_argument("discrepancy_at: density must be real");
  double count = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    std::array<double, kMaxDim> s{0, 0, 0};
    for (int a = 0; a < ps.dim; ++a) s[a] = ps.points[j].x[a] + x.x[a];
    if (wrap_distance(TorusPoint(ps.dim, s), B.center) < B.radius)
      count += ps.weights[j];
  }
  count /= double(ps.size());
  // int_{-x+B} f = sum_m fhat(m) chihat(m) e^{2 pi i m.(c - x)}
  cplx integral = 0.0;
  for (const auto& [m, c] : f.coeffs) {
    double phase = 0.0;
    for (int a = 0; a < f.dim; ++a)
      phase += double(m[a]) * (B.center.x[a] - x.x[a]);
    integral += c * ball_fourier(f.dim, B.radius, m) *
                std::polar(1.0, 2.0 * M_PI * phase);
  }
  return count - integral.real();
}

namespace detail {

// sum over 0 < |m| <= M of weight(|m|^2) |S(m)|^2, S = exp_sum.  Exploits
// S(-m) = conj S(m) (real weights) to scan a half lattice with incremental
// per-point powers; deterministic block-parallel reduction.
template <class Wfn>
double lattice_energy(const WeightedPointSet& ps, double M, Wfn&& weight) {
  const int d = ps.dim;
  const std::size_t N = ps.size();
  const double Nd = double(N);
  std::vector<std::array<double, kMaxDim>> z(N);
  for (std::size_t j = 0; j < N; ++j) z[j] = ps.points[j].x;

  if (d == 1) {
    const std::int64_t K = std::int64_t(std::floor(M));
    // parallel over blocks of m; each block seeds powers then increments
    const std::size_t block = 2048;
    const std::size_t nblocks = (std::size_t(K) + block - 1) / block;
    return 2.0 * parallel_sum(nblocks, [&](std::size_t b) {
      const std::int64_t lo = std::int64_t(b) * std::int64_t(block) + 1;
      const std::int64_t hi = std::min<std::int64_t>(K, lo + std::int64_t(block) - 1);
      std::vector<cplx> p(N), step(N);
      for (std::size_t j = 0; j < N; ++j) {
        p[j] = ps.weights[j] * std::polar(1.0, 2.0 * M_PI * double(lo) * z[j][0]);
        step[j] = std::polar(1.0, 2.0 * M_PI * z[j][0]);
      }
      double acc = 0.0;
      for (std::int64_t m = lo; m <= hi; ++m) {
        cplx S = 0.0;
        for (std::size_t j = 0; j < N; ++j) S += p[j];
        acc += weight(double(m) * double(m)) * std::norm(S / Nd);
        for (std::size_t j = 0; j < N; ++j) p[j] *= step[j];
      }
      return acc;
    }, 1);
  }

  // d = 2, 3: scan rows of the half lattice.  A row fixes the trailing
  // coordinates and sweeps m1 over its admissible range incrementally.
  struct Row {
    int m2, m3, m1_lo, m1_hi;
  };
  std::vector<Row> rows;
  const int K = int(std::floor(M));
  const double M2 = M * M;
  auto push_rows = [&](int m2, int m3, bool positive_only) {
    double rem = M2 - double(m2) * m2 - double(m3) * m3;
    if (rem < 0.0) return;
    int K1 = int(std::floor(std::sqrt(rem)));
    if (positive_only) {
      if (K1 >= 1) rows.push_back({m2, m3, 1, K1});
    } else {
      rows.push_back({m2, m3, -K1, K1});
    }
  };
  if (d == 2) {
    push_rows(0, 0, true);
    for (int m2 = 1; m2 <= K; ++m2) push_rows(m2, 0, false);
  } else {
    push_rows(0, 0, true);
    for (int m2 = 1; m2 <= K; ++m2) push_rows(m2, 0, false);
    for (int m3 = 1; m3 <= K; ++m3)
      for (int m2 = -K; m2 <= K; ++m2) push_rows(m2, m3, false);
  }
  return 2.0 * parallel_sum(rows.size(), [&](std::size_t ri) {
    const Row& row = rows[ri];
    std::vector<cplx> p(N), step(N);
    for (std::size_t j = 0; j < N; ++j) {
      double phase = double(row.m2) * z[j][1] + double(row.m3) * z[j][2] +
                     double(row.m1_lo) * z[j][0];
      p[j] = ps.weights[j] * std::polar(1.0, 2.0 * M_PI * phase);
      step[j] = std::polar(1.0, 2.0 * M_PI * z[j][0]);
    }
    const double tail_sq = double(row.m2) * row.m2 + double(row.m3) * row.m3;
    double acc = 0.0;
    for (int m1 = row.m1_lo; m1 <= row.m1_hi; ++m1) {
      cplx S = 0.0;
      for (std::size_t j = 0; j < N; ++j) S += p[j];
      acc += weight(double(m1) * m1 + tail_sq) * std::norm(S / Nd);
      for (std::size_t j = 0; j < N; ++j) p[j] *= step[j];
    }
    return acc;
  }, 1);
}

// |S(k) - fhat(-k)|^2 - |S(k)|^2 corrections over the density support,
// plus the full m = 0 term
template <class Wfn>
double support_correction(const WeightedPointSet& ps, const DensityField& f,
                          double M, double w0, Wfn&& weight) {
  double corr = 0.0;
  bool saw_zero = false;
  for (const auto& [k, c] : f.coeffs) {
    FreqKey neg{-k[0], -k[1], -k[2]};
    double sq = 0.0;
    for (int a = 0; a < f.dim; ++a) sq += double(k[a]) * k[a];
    cplx S = exp_sum(ps, neg);  // pairs with fhat(-m) at m = -k... see below
    // We correct at m = neg so that fhat(-m) = fhat(k) = c.
    if (sq == 0.0) {
      saw_zero = true;
      corr += w0 * std::norm(S - c);
      continue;
    }
    double w = weight(sq);
    corr += w * std::norm(S - c);
    if (std::sqrt(sq) <= M) corr -= w * std::norm(S);
  }
  if (!saw_zero) {
    cplx S0 = exp_sum(ps, {0, 0, 0});
    corr += w0 * std::norm(S0);
  }
  return corr;
}

}  // namespace detail

// int_{T^d} |D_N(x, r)|^2 dx = sum_m |chihat_{B_r}(m)|^2 |S(m) - fhat(-m)|^2,
// truncated at |m| <= M_max with the analytic tail bound reported.
inline DiscrepancyReport avg_sq_x(const WeightedPointSet& ps,
                                  const DensityField& f, double r,
                                  double M_max) {
  if (ps.dim != f.dim) throw std::invalid_argument("avg_sq_x: dim mismatch");
  const int d = ps.dim;
  auto w = [&](double m_sq) {
    double v = ball_fourier(d, r, std::sqrt(m_sq));
    return v * v;
  };
  double vol = ball_volume(d, r);
  double S0 = detail::lattice_energy(ps, M_max, w);
  double corr = detail::support_correction(ps, f, M_max, vol * vol, w);
  double A = 0.0;
  for (double a : ps.weights) A += std::abs(a);
  A /= double(ps.size());
  DiscrepancyReport rep;
  rep.value = S0 + corr;
  rep.method = "spectral";
  rep.cutoff = M_max;
  rep.tail_bound = A * A * ball_tail_bound(d, r, M_max);
  return rep;
}

// (x, r)-averaged version: weights w(m) = int_a^b |chihat_{B_r}(m)|^2 dr.
// Radial weights are cached per |m|^2 for d >= 2 (they repeat across shells).
inline DiscrepancyReport avg_sq_xr(const WeightedPointSet& ps,
                                   const DensityField& f, double a, double b,
                                   double M_max) {
  if (ps.dim != f.dim) throw std::invalid_argument("avg_sq_xr: dim mismatch");
  if (!(0.0 < a && a < b && b < 0.5))
    throw std::invalid_argument("avg_sq_xr: need 0 < a < b < 1/2");
  const int d = ps.dim;
  std::vector<double> cache;
  if (d >= 2) {
    std::size_t n = std::size_t(M_max * M_max) + 2;
    cache.assign(n, -1.0);
  }
  auto w = [&](double m_sq) {
    if (d == 1) return radial_weight(d, a, b, std::sqrt(m_sq));
    std::size_t key = std::size_t(m_sq + 0.5);
    if (key < cache.size() && cache[key] >= 0.0) return cache[key];
    double v = radial_weight(d, a, b, std::sqrt(m_sq));
    if (key < cache.size()) cache[key] = v;
    return v;
  };
  // precompute the cache serially so the parallel scan only reads it
  if (d >= 2) {
    for (std::size_t k = 1; k < cache.size(); ++k)
      cache[k] = radial_weight(d, a, b, std::sqrt(double(k)));
  }
  double w0 = integrate(gauss_legendre_64(), a, b, [&](double r) {
    double v = ball_volume(d, r);
    return v * v;
  });
  double S0 = detail::lattice_energy(ps, M_max, w);
  double corr = detail::support_correction(ps, f, M_max, w0, w);
  double A = 0.0;
  for (double al : ps.weights) A += std::abs(al);
  A /= double(ps.size());
  DiscrepancyReport rep;
  rep.value = S0 + corr;
  rep.method = "spectral";
  rep.cutoff = M_max;
  rep.tail_bound = A * A * radial_tail_bound(d, a, b, M_max);
  return rep;
}

// exact finite sum over an explicit frequency set (plus m = 0); both the
// Monte Carlo and closed-form jitter paths use the same set so the pair
// estimates one and the same truncated quantity
inline double avg_sq_x_on(const WeightedPointSet& ps, const DensityField& f,
                          double r, const FrequencySet& fs) {
  if (ps.dim != f.dim || ps.dim != fs.dim)
    throw std::invalid_argument("avg_sq_x_on: dim mismatch");
  const int d = ps.dim;
  double vol = ball_volume(d, r);
  cplx S0 = exp_sum(ps, {0, 0, 0});
  double total = vol * vol * std::norm(S0 - f.coeff({0, 0, 0}));
  for (const auto& shell : fs.shells) {
    double v = ball_fourier(d, r, std::sqrt(double(shell.m_sq)));
    double w = v * v;
    for (const auto& m : shell.members) {
      FreqKey neg{-m[0], -m[1], -m[2]};
      total += w * std::norm(exp_sum(ps, m) - f.coeff(neg));
    }
  }
  return total;
}

// --- band-limited nonnegative kernels -------------------------------------

enum class KernelFamily { fejer_tensor, smooth_bump };

struct SpectralKernel {
  KernelFamily family = KernelFamily::fejer_tensor;
  int dim = 1;
  int M = 1;
  int bump_decay = 4;  // smooth_bump: exponent p of (1 - (2s)^2)^p
  // smooth_bump internals
  std::map<FreqKey, double> bump_coeff;  // b_m, support |m| <= M/2
  std::map<FreqKey, double> profile_cache;  // Khat for smooth_bump
  double bump_norm_sq = 0.0;

  double fourier(const FreqKey& m) const {
    if (family == KernelFamily::fejer_tensor) {
      double v = 1.0;
      for (int a = 0; a < dim; ++a) {
        double t = 1.0 - std::abs(double(m[a])) / double(M);
        if (t <= 0.0) return 0.0;
        v *= t;
      }
      return v;
    }
    auto it = profile_cache.find(m);
    return it == profile_cache.end() ? 0.0 : it->second;
  }

  double eval(const TorusPoint& x) const {
    if (family == KernelFamily::fejer_tensor) {
      double v = 1.0;
      for (int a = 0; a < dim; ++a) {
        double s = std::sin(M_PI * x.x[a]);
        if (std::abs(s) < 1e-12) {
          v *= double(M);
        } else {
          double num = std::sin(M_PI * double(M) * x.x[a]);
          v *= num * num / (double(M) * s * s);
        }
      }
      return v;
    }
    cplx s = 0.0;
    for (const auto& [m, bm] : bump_coeff) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += double(m[a]) * x.x[a];
      s += bm * std::polar(1.0, 2.0 * M_PI * phase);
    }
    return std::norm(s) / bump_norm_sq;
  }

  double peak() const {  // K(0)
    if (family == KernelFamily::fejer_tensor) return std::pow(double(M), dim);
    double s = 0.0;
    for (const auto& [m, bm] : bump_coeff) s += bm;
    return s * s / bump_norm_sq;
  }

  // frequencies with nonzero profile
  std::vector<FreqKey> support() const {
    std::vector<FreqKey> out;
    if (family == KernelFamily::fejer_tensor) {
      FreqKey m{0, 0, 0};
      auto rec = [&](auto&& self, int axis) -> void {
        if (axis == dim) {
          bool zero = true;
          for (int a = 0; a < dim; ++a)
            if (m[a] != 0) zero = false;
          (void)zero;
          if (fourier(m) > 0.0) out.push_back(m);
          return;
        }
        for (int k = -(M - 1); k <= M - 1; ++k) {
          m[axis] = k;
          self(self, axis + 1);
        }
        m[axis] = 0;
      };
      rec(rec, 0);
    } else {
      for (const auto& [m, v] : profile_cache)
        if (v > 0.0) out.push_back(m);
    }
    return out;
  }
};

inline SpectralKernel make_kernel(KernelFamily family, int M, int d,
                                  int bump_decay = 4) {
  check_dim(d);
  if (M < 1) throw std::invalid_argument("make_kernel: M >= 1");
  SpectralKernel k;
  k.family = family;
  k.dim = d;
  k.M = M;
  k.bump_decay = bump_decay;
  if (family == KernelFamily::smooth_bump) {
    // b_m = (1 - (2|m|/M)^2)^p on |m| < M/2; K = |b-synthesis|^2 / ||b||^2
    // so K >= 0 exactly, Khat = autocorrelation of b is in [0, 1] with
    // Khat(0) = 1 by Cauchy-Schwarz.
    const double halfM = 0.5 * double(M);
    const int K = int(std::floor(halfM));
    FreqKey m{0, 0, 0};
    auto rec = [&](auto&& self, int axis) -> void {
      if (axis == d) {
        double sq = 0.0;
        for (int a = 0; a < d; ++a) sq += double(m[a]) * m[a];
        double s = std::sqrt(sq) / double(M);  // in units of M
        double t = 1.0 - 4.0 * s * s;
        if (t > 0.0) k.bump_coeff[m] = std::pow(t, double(bump_decay));
        return;
      }
      for (int q = -K; q <= K; ++q) {
        m[axis] = q;
        self(self, axis + 1);
      }
      m[axis] = 0;
    };
    rec(rec, 0);
    for (const auto& [mm, bm] : k.bump_coeff) k.bump_norm_sq += bm * bm;
    // Khat(h) = sum_n b_{h+n} b_n / ||b||^2
    for (const auto& [m1, b1] : k.bump_coeff)
      for (const auto& [m2, b2] : k.bump_coeff) {
        FreqKey h{m1[0] - m2[0], m1[1] - m2[1], m1[2] - m2[2]};
        k.profile_cache[h] += b1 * b2 / k.bump_norm_sq;
      }
  }
  return k;
}

struct CertificateResult {
  double spectral = 0.0;   // sum_m Khat(m) |S(m)|^2
  double point_sum = 0.0;  // N^-2 sum_{j,k} a_j a_k K(z_j - z_k)
  double bound = 0.0;      // K(0) N^-1 ||alpha||^2
};

inline CertificateResult montgomery_certificate(const WeightedPointSet& ps,
                                                const SpectralKernel& kernel) {
  if (ps.dim != kernel.dim)
    throw std::invalid_argument("certificate: dim mismatch");
  if (!ps.nonneg)
    throw std::invalid_argument(
        "certificate: signed weights violate the nonnegativity hypothesis");
  double anorm = weight_norm(ps);
  if (anorm == 0.0)
    throw std::invalid_argument("certificate: all weights are zero");
  CertificateResult res;
  for (const auto& m : kernel.support())
    res.spectral += kernel.fourier(m) * std::norm(exp_sum(ps, m));
  const std::size_t N = ps.size();
  res.point_sum = parallel_sum(N, [&](std::size_t j) {
    double acc = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
      std::array<double, kMaxDim> diff{0, 0, 0};
      for (int a = 0; a < ps.dim; ++a)
        diff[a] = ps.points[j].x[a] - ps.points[l].x[a];
      acc += ps.weights[j] * ps.weights[l] * kernel.eval(TorusPoint(ps.dim, diff));
    }
    return acc;
  }, 16) / (double(N) * double(N));
  res.bound = kernel.peak() * anorm * anorm / double(N);
  return res;
}

// --- lower-bound scale functionals ----------------------------------------

// L^p mode: N^{-1-q/(2d)} ||alpha||^{2+q/d} ||f||_p^{-q/d}, 1/p + 1/q = 1
inline double lower_bound_scale_lp(double p, int d, double N, double alpha_norm,
                                   double f_norm) {
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("lower_bound_scale: need 1 < p <= 2");
  double q = p / (p - 1.0);
  return std::pow(N, -1.0 - q / (2.0 * d)) *
         std::pow(alpha_norm, 2.0 + q / double(d)) *
         std::pow(f_norm, -q / double(d));
}

// Morrey mode: N^{-1-1/lambda} ||alpha||^{2+1/lambda} ||f||_{1,lambda}^{-1/lambda}
inline double lower_bound_scale_morrey(double lambda, int d, double N,
                                       double alpha_norm, double f_norm) {
  if (!(lambda > 0.0 && lambda <= double(d)))
    throw std::invalid_argument("lower_bound_scale: need 0 < lambda <= d");
  return std::pow(N, -1.0 - 1.0 / lambda) *
         std::pow(alpha_norm, 2.0 + 1.0 / lambda) *
         std::pow(f_norm, -1.0 / lambda);
}

}  // namespace discrelab
