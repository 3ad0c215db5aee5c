#include "doctest.h"

#include <cmath>
#include <complex>

#include "discrelab/jittered.hpp"
#include "discrelab/rng.hpp"

using namespace discrelab;

namespace {

DensityField random_real_trig(int d, int B, std::uint64_t seed) {
  DensityField f = constant_density(1.0, d);
  FrequencySet fs = enumerate_lattice(d, double(B));
  std::uint64_t c = 0;
  for (const auto& sh : fs.shells)
    for (const auto& m : sh.members) {
      if (f.coeffs.count(m)) continue;
      FreqKey neg{-m[0], -m[1], -m[2]};
      double re = uniform01(seed, 1, c++) - 0.5;
      double im = uniform01(seed, 1, c++) - 0.5;
      f.coeffs[m] = cplx(re, im);
      f.coeffs[neg] = cplx(re, -im);
    }
  return f;
}

}  // namespace

TEST_CASE("cube_hat against numeric integration") {
  auto cells = cube_partition(3, 2);
  const QuadRule& rule = gauss_legendre(24);
  for (std::size_t j : {std::size_t(0), std::size_t(4), std::size_t(7)}) {
    TorusPoint lo = cells.lower_corner(j);
    double s = cells.side();
    for (FreqKey u : {FreqKey{0, 0, 0}, FreqKey{1, 0, 0}, FreqKey{-2, 3, 0},
                      FreqKey{5, -1, 0}}) {
      cplx direct = 0.0;
      // tensor quadrature of e^{-2 pi i u.x} over the cell
      for (std::size_t qa = 0; qa < rule.nodes.size(); ++qa)
        for (std::size_t qb = 0; qb < rule.nodes.size(); ++qb) {
          double x = lo.x[0] + s * 0.5 * (1.0 + rule.nodes[qa]);
          double y = lo.x[1] + s * 0.5 * (1.0 + rule.nodes[qb]);
          double w = 0.25 * s * s * rule.weights[qa] * rule.weights[qb];
          direct += w * std::polar(1.0, -2.0 * M_PI *
                                            (double(u[0]) * x + double(u[1]) * y));
        }
      CHECK(std::abs(cube_hat(cells, j, u) - direct) < 1e-12);
    }
  }
}

TEST_CASE("CellPairSum matches the direct cell loop") {
  for (int d : {1, 2}) {
    int H = 3;
    auto cells = cube_partition(H, d);
    auto f = random_real_trig(d, 2, 31 + std::uint64_t(d));
    CellPairSum cps(f, cells);
    for (FreqKey m : {FreqKey{0, 0, 0}, FreqKey{1, 0, 0}, FreqKey{-3, 0, 0},
                      FreqKey{2, (d == 2 ? -1 : 0), 0},
                      FreqKey{7, (d == 2 ? 5 : 0), 0}}) {
      cplx gsum = 0.0;
      double direct = 0.0;
      for (std::size_t j = 0; j < cells.cell_count(); ++j) {
        cplx g = 0.0;
        for (const auto& [k, c] : f.coeffs) {
          FreqKey u{m[0] - k[0], m[1] - k[1], m[2] - k[2]};
          g += c * cube_hat(cells, j, u);
        }
        direct += std::norm(g);
        gsum += g;
      }
      CHECK(cps.cell_sum(m) == doctest::Approx(direct).epsilon(1e-10));
      // variance term is the gap to ||f||^2/N and sits in [0, ||f||^2/N]
      double T = cps.var_term(m);
      CHECK(T >= -1e-12);
      CHECK(T <= cps.l2sq / std::pow(double(H), d) + 1e-12);
      // the cell transforms resum to the full Fourier coefficient
      CHECK(std::abs(gsum - f.coeff(m)) < 1e-10);
    }
  }
}

TEST_CASE("single cell: J = |B| - |B|^2 for f = 1") {
  auto cells = cube_partition(1, 1);
  auto f = constant_density(1.0, 1);
  auto fs = enumerate_lattice(1, 20000.0);
  auto est = jitter_closed_form(cells, f, 0.25, fs);
  CHECK(est.closed_form == doctest::Approx(0.25).epsilon(1e-4));
  // exact overlap route nails it
  CHECK(jitter_const_fixed_r(cells, 0.25) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("spectral and overlap routes agree for f = 1") {
  auto f1 = constant_density(1.0, 1);
  auto c1 = cube_partition(4, 1);
  double spec = jitter_fixed_r(c1, f1, 0.3, 20000.0);
  double exact = jitter_const_fixed_r(c1, 0.3);
  CHECK(spec == doctest::Approx(exact).epsilon(1e-3));
  CHECK(spec <= exact + 1e-12);  // truncation only loses nonnegative terms

  auto f2 = constant_density(1.0, 2);
  auto c2 = cube_partition(3, 2);
  double spec2 = jitter_fixed_r(c2, f2, 0.3, 600.0);
  double exact2 = jitter_const_fixed_r(c2, 0.3);
  CHECK(spec2 == doctest::Approx(exact2).epsilon(2e-2));
  CHECK(spec2 <= exact2 + 1e-12);

  // radial averages: cached spectral route vs overlap route
  RadialWeightCache cache(1, 0.1, 0.4, 20000.0);
  CHECK(jitter_radial_avg(c1, f1, cache) ==
        doctest::Approx(jitter_const_radial_avg(c1, 0.1, 0.4)).epsilon(1e-3));
}

TEST_CASE("ball overlap closed forms") {
  CHECK(ball_overlap(1, 0.3, 0.1) == doctest::Approx(0.5));
  CHECK(ball_overlap(1, 0.3, 0.7) == 0.0);
  CHECK(ball_overlap(2, 0.3, 0.0) == doctest::Approx(M_PI * 0.09));
  CHECK(ball_overlap(3, 0.3, 0.0) == doctest::Approx(4.0 / 3.0 * M_PI * 0.027));
  // d = 2 overlap by Monte Carlo oracle
  double r = 0.25, u = 0.2;
  int hits = 0, trials = 400000;
  for (int t = 0; t < trials; ++t) {
    double x = (uniform01(71, t, 0) - 0.5) * 2.0 * r + u / 2.0;
    double y = (uniform01(71, t, 1) - 0.5) * 2.0 * r;
    bool in1 = (x - u) * (x - u) + y * y < r * r;
    bool in2 = x * x + y * y < r * r;
    if (in1 && in2) ++hits;
  }
  double mc = double(hits) / trials * 4.0 * r * r;
  CHECK(ball_overlap(2, r, u) == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("monte carlo agrees with the closed form on the same set") {
  for (int d : {1, 2}) {
    auto cells = cube_partition(d == 1 ? 4 : 2, d);
    auto f = random_real_trig(d, 2, 47);
    auto fs = enumerate_lattice(d, d == 1 ? 256.0 : 32.0);
    for (double r : {0.15, 0.3}) {
      auto cf = jitter_closed_form(cells, f, r, fs);
      auto mc = jitter_mc(cells, f, r, fs, 400, 1234);
      CHECK(std::abs(mc.mc_value - cf.closed_form) <= 4.0 * mc.mc_stderr);
      CHECK(mc.mc_stderr > 0.0);
    }
  }
}

TEST_CASE("jitter_mc determinism and zero density") {
  auto cells = cube_partition(3, 1);
  auto f = random_real_trig(1, 2, 53);
  auto fs = enumerate_lattice(1, 64.0);
  auto a = jitter_mc(cells, f, 0.2, fs, 100, 777);
  auto b = jitter_mc(cells, f, 0.2, fs, 100, 777);
  CHECK(a.mc_value == b.mc_value);
  CHECK(a.mc_stderr == b.mc_stderr);

  auto zero = constant_density(0.0, 1);
  auto z = jitter_mc(cells, zero, 0.2, fs, 100, 777);
  CHECK(z.mc_value == 0.0);
  CHECK(z.mc_stderr == 0.0);
}

TEST_CASE("cell terms decompose the closed form") {
  auto cells = cube_partition(3, 1);
  auto f = random_real_trig(1, 3, 61);
  auto fs = enumerate_lattice(1, 200.0);
  auto est = jitter_closed_form(cells, f, 0.3, fs);
  auto terms = jitter_cell_terms(cells, f, 0.3, fs);
  REQUIRE(terms.size() == cells.cell_count());
  double sumw = ball_volume(1, 0.3) * ball_volume(1, 0.3);
  for (const auto& sh : fs.shells) {
    double v = ball_fourier(1, 0.3, std::sqrt(double(sh.m_sq)));
    sumw += v * v * double(sh.members.size());
  }
  double total = 0.0;
  for (double t : terms) {
    CHECK(t >= 0.0);
    total += t;
  }
  double N = double(cells.cell_count());
  double l2sq = CellPairSum(f, cells).l2sq;
  CHECK(est.closed_form ==
        doctest::Approx(sumw * l2sq / N - total).epsilon(1e-9));
}

TEST_CASE("concentrated density witness: J >= |B| ||f||^2 / (2N)") {
  // Fejer profile shifted into one cell: positive, integral 1, large L2 mass
  int H = 4, K = 32;
  auto cells = cube_partition(H, 1);
  DensityField f;
  f.dim = 1;
  double c = cells.center(1).x[0];
  for (int m = -K + 1; m <= K - 1; ++m)
    f.coeffs[{m, 0, 0}] =
        (1.0 - std::abs(m) / double(K)) * std::polar(1.0, -2.0 * M_PI * m * c);
  double l2sq = 0.0;
  for (const auto& [m, v] : f.coeffs) l2sq += std::norm(v);
  double N = double(cells.cell_count());
  CHECK(l2sq >= 2.0 * N);  // ||f||_1 = 1 for the nonnegative profile
  double r = 0.3;
  double J = jitter_fixed_r(cells, f, r, 4000.0);
  CHECK(J >= 0.5 * ball_volume(1, r) * l2sq / N * (1.0 - 1e-9));
}
