#pragma once

// Densities as finite Fourier coefficient maps, the extremal constructions
// (periodized bump, integer dilation, de la Vallee Poussin, lacunary Holder
// profile) and the L^p / Morrey norms.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "discrelab/spectral.hpp"
#include "discrelab/torus.hpp"

namespace discrelab {

using FreqKey = std::array<int, kMaxDim>;

struct DensityField {
  int dim = 1;
  std::map<FreqKey, cplx> coeffs;
  std::string recipe = "custom";
  // populated by holder_density only
  double holder_beta = 0.0;
  double holder_constant = 0.0;

  cplx coeff(const FreqKey& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? cplx(0.0) : it->second;
  }
  cplx mean() const { return coeff({0, 0, 0}); }

  // largest |m_a| over the support, per-axis max
  int bandwidth() const {
    int b = 0;
    for (const auto& [m, c] : coeffs)
      for (int a = 0; a < dim; ++a) b = std::max(b, std::abs(m[a]));
    return b;
  }

  bool is_real(double tol = 1e-12) const {
    for (const auto& [m, c] : coeffs) {
      FreqKey neg{-m[0], -m[1], -m[2]};
      if (std::abs(std::conj(c) - coeff(neg)) > tol) return false;
    }
    return true;
  }

  double eval(const TorusPoint& p) const {
    if (p.dim != dim) throw std::invalid_argument("eval: dim mismatch");
    cplx s = 0.0;
    for (const auto& [m, c] : coeffs) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += double(m[a]) * p.x[a];
      s += c * std::polar(1.0, 2.0 * M_PI * phase);
    }
    return s.real();
  }

  void set(const FreqKey& m, cplx v) {
    if (std::abs(v) == 0.0) return;
    coeffs[m] = v;
  }
};

// --- elementary constructions ---------------------------------------------

inline DensityField constant_density(double c, int d = 1) {
  check_dim(d);
  DensityField f;
  f.dim = d;
  f.recipe = "constant";
  if (c != 0.0) f.coeffs[{0, 0, 0}] = c;
  return f;
}

// complex exponential e^{2 pi i k.x} (not real unless k = 0)
inline DensityField single_mode(const FreqKey& k, double amplitude = 1.0,
                                int d = 1) {
  check_dim(d);
  DensityField f;
  f.dim = d;
  f.recipe = "single_mode";
  f.set(k, amplitude);
  return f;
}

// real cosine mode: cos(2 pi k.x), coefficients 1/2 at +-k
inline DensityField cosine_mode(const FreqKey& k, double amplitude = 1.0,
                                int d = 1) {
  check_dim(d);
  DensityField f;
  f.dim = d;
  f.recipe = "cosine_mode";
  f.set(k, 0.5 * amplitude);
  f.set({-k[0], -k[1], -k[2]}, 0.5 * amplitude);
  return f;
}

// --- periodized bump ------------------------------------------------------

// Fourier-side radial profile: 1 on |xi| <= 1, 0 on |xi| >= 2, quintic
// smoothstep transition in between (C^2 at the seams).
struct BumpProfile {
  double operator()(double s) const {
    s = std::abs(s);
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const double u = s - 1.0;
    const double step = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    return 1.0 - step;
  }
};

inline DensityField periodized_bump(int M, int d = 1, BumpProfile profile = {}) {
  check_dim(d);
  if (M < 1) throw std::invalid_argument("periodized_bump: M >= 1");
  DensityField f;
  f.dim = d;
  f.recipe = "periodized_bump";
  FrequencySet fs = enumerate_lattice(d, 2.0 * M);
  f.coeffs[{0, 0, 0}] = 1.0;
  for (const auto& shell : fs.shells) {
    double v = profile(std::sqrt(double(shell.m_sq)) / double(M));
    if (v == 0.0) continue;
    for (const auto& m : shell.members) f.coeffs[m] = v;
  }
  return f;
}

// f(x) = F(Hx): support dilated by H, L^p norms preserved (H integer)
inline DensityField scale_density(const DensityField& F, int H) {
  if (H < 1) throw std::invalid_argument("scale_density: H >= 1");
  DensityField f;
  f.dim = F.dim;
  f.recipe = "scaled(" + F.recipe + ")";
  for (const auto& [m, c] : F.coeffs) {
    FreqKey k{0, 0, 0};
    for (int a = 0; a < F.dim; ++a) k[a] = H * m[a];
    f.coeffs[k] = c;
  }
  return f;
}

// --- de la Vallee Poussin -------------------------------------------------

// tensor product of 1-d kernels: per axis, profile 1 on |m| <= n, linear
// ramp to 0 at |m| = 2n; classical L^1 bound 3 per axis
inline DensityField dvp_density(int n, int d = 1) {
  check_dim(d);
  if (n < 1) throw std::invalid_argument("dvp_density: n >= 1");
  auto ramp = [n](int m) {
    int a = std::abs(m);
    if (a <= n) return 1.0;
    if (a >= 2 * n) return 0.0;
    return double(2 * n - a) / double(n);
  };
  DensityField f;
  f.dim = d;
  f.recipe = "dvp";
  const int B = 2 * n - 1;
  FreqKey m{0, 0, 0};
  auto emit = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      double v = 1.0;
      for (int a = 0; a < d; ++a) v *= ramp(m[a]);
      if (v != 0.0) f.coeffs[m] = v;
      return;
    }
    for (int k = -B; k <= B; ++k) {
      m[axis] = k;
      self(self, axis + 1);
    }
    m[axis] = 0;
  };
  emit(emit, 0);
  return f;
}

// --- Holder test profile --------------------------------------------------

// Lacunary cosine sum W(x) = s * sum_a sum_k m_k^{-beta} cos(2 pi m_k x_a),
// m_k = base 2^k.  Mean zero, exactly band-limited, and beta-Holder with the
// certified constant below: each level contributes at most
// s m_k^{-beta} min(2, 2 pi m_k h) <= 2 s pi^beta h^beta, so the quotient is
// bounded by 2 s pi^beta levels per axis, times d for the full sum.
struct HolderShape {
  double scale = 1.0;
  int levels = 12;
  int base = 1;
  // constant added on top of the oscillation; leaves the Holder constant
  // untouched but keeps the density positive once offset > sum of amplitudes
  double offset = 0.0;
};

inline DensityField holder_density(double beta, int d = 1,
                                   HolderShape shape = {}) {
  check_dim(d);
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("holder_density: beta in (0, 1]");
  if (shape.levels < 1 || shape.base < 1)
    throw std::invalid_argument("holder_density: bad shape parameters");
  DensityField f;
  f.dim = d;
  f.recipe = "holder_sample";
  f.holder_beta = beta;
  if (shape.offset != 0.0) f.coeffs[{0, 0, 0}] = shape.offset;
  for (int a = 0; a < d; ++a) {
    std::int64_t mk = shape.base;
    for (int k = 0; k < shape.levels; ++k, mk *= 2) {
      if (mk > (std::int64_t(1) << 30))
        throw std::invalid_argument("holder_density: bandwidth overflow");
      double amp = shape.scale * std::pow(double(mk), -beta);
      FreqKey mp{0, 0, 0}, mm{0, 0, 0};
      mp[a] = int(mk);
      mm[a] = -int(mk);
      f.coeffs[mp] += 0.5 * amp;
      f.coeffs[mm] += 0.5 * amp;
    }
  }
  f.holder_constant =
      2.0 * shape.scale * std::pow(M_PI, beta) * double(shape.levels) * double(d);
  return f;
}

// --- norms ----------------------------------------------------------------

inline double l2_norm(const DensityField& f) {
  double s = 0.0;
  for (const auto& [m, c] : f.coeffs) s += std::norm(c);
  return std::sqrt(s);
}

namespace detail {

// real samples of f on the uniform G^d grid, separable synthesis per axis
inline std::vector<double> sample_grid(const DensityField& f, int G) {
  const int d = f.dim;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= std::size_t(G);
  std::vector<cplx> acc(total, 0.0);
  // phase tables e^{2 pi i m g / G} per axis value
  for (const auto& [m, c] : f.coeffs) {
    // direct accumulation; coefficient counts stay small in practice
    std::array<std::vector<cplx>, kMaxDim> ph;
    for (int a = 0; a < d; ++a) {
      ph[a].resize(std::size_t(G));
      for (int g = 0; g < G; ++g)
        ph[a][std::size_t(g)] =
            std::polar(1.0, 2.0 * M_PI * double(m[a]) * (double(g) / G - 0.5));
    }
    std::size_t idx = 0;
    std::array<int, kMaxDim> g{0, 0, 0};
    for (idx = 0; idx < total; ++idx) {
      cplx v = c;
      for (int a = 0; a < d; ++a) v *= ph[a][std::size_t(g[a])];
      acc[idx] += v;
      for (int a = 0; a < d; ++a) {
        if (++g[a] < G) break;
        g[a] = 0;
      }
    }
  }
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = acc[i].real();
  return out;
}

inline double lp_on_grid(const DensityField& f, double p, int G) {
  auto vals = sample_grid(f, G);
  double s = 0.0;
  for (double v : vals) s += std::pow(std::abs(v), p);
  return std::pow(s / double(vals.size()), 1.0 / p);
}

}  // namespace detail

struct LpEstimate {
  double value = 0.0;
  double refine_err = 0.0;  // |value(G) - value(2G)|
};

inline LpEstimate lp_norm_estimate(const DensityField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
  if (f.coeffs.empty()) return {0.0, 0.0};
  if (p == 2.0) return {l2_norm(f), 0.0};
  int G = std::max(32, 4 * f.bandwidth() + 4);
  double coarse = detail::lp_on_grid(f, p, G);
  double fine = detail::lp_on_grid(f, p, 2 * G);
  return {fine, std::abs(fine - coarse)};
}

inline double lp_norm(const DensityField& f, double p) {
  return lp_norm_estimate(f, p).value;
}

// Morrey norm sup_{z,r} r^{-lambda} int_{B(z,r)} |f|: lower estimate over a
// center grid x geometric radius grid.  |f| is sampled on the grid, its grid
// DFT taken, and the ball averages synthesized spectrally per radius.
struct MorreyParams {
  int centers = 0;   // 0 -> default per dimension
  int radii = 48;
  double r_min = 0.005;
  double r_max = 0.499;
};

inline double morrey_norm(const DensityField& f, double lambda,
                          MorreyParams mp = {}) {
  const int d = f.dim;
  if (!(lambda > 0.0 && lambda <= double(d)))
    throw std::invalid_argument("morrey_norm: lambda in (0, d]");
  int G = mp.centers;
  if (G == 0) G = (d == 1) ? 256 : (d == 2 ? 48 : 24);
  G = std::max(G, 32);
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= std::size_t(G);

  auto vals = detail::sample_grid(f, G);
  for (double& v : vals) v = std::abs(v);

  // grid DFT of |f|: ghat(m) for m in [-G/2, G/2)^d, row-column passes
  const int half = G / 2;
  std::vector<cplx> spec(vals.begin(), vals.end());
  std::vector<cplx> tmp(total);
  std::vector<cplx> twiddle(std::size_t(G) * std::size_t(G));
  for (int m = 0; m < G; ++m)
    for (int g = 0; g < G; ++g)
      twiddle[std::size_t(m) * G + g] = std::polar(
          1.0, -2.0 * M_PI * double(m - half) * (double(g) / G - 0.5));
  std::size_t stride = 1;
  for (int a = 0; a < d; ++a) {
    for (std::size_t blk = 0; blk < total / std::size_t(G); ++blk) {
      // index of the blk-th line along axis a
      std::size_t base = (blk / stride) * stride * std::size_t(G) + blk % stride;
      for (int m = 0; m < G; ++m) {
        cplx s = 0.0;
        for (int g = 0; g < G; ++g)
          s += spec[base + std::size_t(g) * stride] *
               twiddle[std::size_t(m) * G + g];
        tmp[base + std::size_t(m) * stride] = s / double(G);
      }
    }
    std::swap(spec, tmp);
    stride *= std::size_t(G);
  }

  // per radius: A_r(z) = sum_m ghat(m) chi_hat(m) e^{2 pi i m.z} on the grid,
  // synthesized with the conjugate twiddles (same line passes)
  double best = 0.0;
  for (int ri = 0; ri < mp.radii; ++ri) {
    double t = double(ri) / double(mp.radii - 1);
    double r = mp.r_min * std::pow(mp.r_max / mp.r_min, t);
    std::vector<cplx> field(spec);
    // multiply by the radial ball transform
    {
      std::size_t idx = 0;
      std::array<int, kMaxDim> mi{0, 0, 0};
      for (idx = 0; idx < total; ++idx) {
        double sq = 0.0;
        for (int a = 0; a < d; ++a) {
          double v = double(mi[a] - half);
          sq += v * v;
        }
        field[idx] *= ball_fourier(d, r, std::sqrt(sq));
        for (int a = 0; a < d; ++a) {
          if (++mi[a] < G) break;
          mi[a] = 0;
        }
      }
    }
    std::size_t st = 1;
    for (int a = 0; a < d; ++a) {
      for (std::size_t blk = 0; blk < total / std::size_t(G); ++blk) {
        std::size_t base = (blk / st) * st * std::size_t(G) + blk % st;
        for (int g = 0; g < G; ++g) {
          cplx s = 0.0;
          for (int m = 0; m < G; ++m)
            s += field[base + std::size_t(m) * st] *
                 std::conj(twiddle[std::size_t(m) * G + g]);
          tmp[base + std::size_t(g) * st] = s;
        }
      }
      std::swap(field, tmp);
      st *= std::size_t(G);
    }
    double scale = std::pow(r, -lambda);
    for (std::size_t i = 0; i < total; ++i)
      best = std::max(best, field[i].real() * scale);
  }
  return best;
}

// constant of the Holder-inequality imbedding of L^p into the Morrey space
// with lambda = d/q: |B_1|^{1/q}
inline double morrey_imbedding_const(int d, double p) {
  double q = p / (p - 1.0);
  return std::pow(ball_volume(d, 1.0), 1.0 / q);  // |B_1| = v_d
}

}  // namespace discrelab
