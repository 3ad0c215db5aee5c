// Acceptance harness: one criterion per invocation (argv[1] in 1..11), one
// PASS/FAIL line each, exit status 0 on pass.  Runs everything when no
// argument is given.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "discrelab/discrelab.hpp"
#include "discrelab/experiments.hpp"

using namespace discrelab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

DensityField random_real_trig(int d, int B, std::uint64_t seed) {
  DensityField f = constant_density(1.0, d);
  FrequencySet fs = enumerate_lattice(d, double(B));
  std::uint64_t c = 0;
  for (const auto& sh : fs.shells)
    for (const auto& m : sh.members) {
      if (f.coeffs.count(m)) continue;
      FreqKey neg{-m[0], -m[1], -m[2]};
      double re = (uniform01(seed, 1, c++) - 0.5) / double(B);
      double im = (uniform01(seed, 1, c++) - 0.5) / double(B);
      f.coeffs[m] = cplx(re, im);
      f.coeffs[neg] = cplx(re, -im);
    }
  return f;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1. closed-form anchor at d = 1, single atom, constant density
Outcome crit1() {
  WeightedPointSet ps(1, {TorusPoint::d1(0.0)}, {1.0});
  DensityField f = constant_density(1.0, 1);
  double spec = avg_sq_x(ps, f, 0.25, 20000.0).value;
  double direct = avg_sq_x_direct_1d(ps, f, BallWindow(1, 0.25));
  Outcome o;
  o.pass = std::abs(spec - 0.25) < 1e-4 && std::abs(direct - 0.25) < 1e-6;
  o.detail = "spectral err " + fmt(std::abs(spec - 0.25)) + ", direct err " +
             fmt(std::abs(direct - 0.25));
  return o;
}

// 2. spectral average vs spatial quadrature on random configs
Outcome crit2() {
  Outcome o;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::uint64_t s = hash2(101, std::uint64_t(t));
    std::size_t N = 1 + std::size_t(uniform01(s, 0, 0) * 15.0);
    int B = 1 + int(uniform01(s, 0, 1) * 7.0);
    double r = 0.1 + 0.35 * uniform01(s, 0, 2);
    WeightedPointSet ps = iid_points(1, N, hash2(s, 1));
    for (std::size_t j = 0; j < N; ++j)
      ps.weights[j] = 0.2 + uniform01(s, 2, j);
    ps.refresh_nonneg();
    DensityField f = random_real_trig(1, B, hash2(s, 2));
    double direct = avg_sq_x_direct_1d(ps, f, BallWindow(1, r));
    double spec = avg_sq_x(ps, f, r, 4.0e6).value;
    worst = std::max(worst, std::abs(spec - direct) / direct);
  }
  o.pass = worst < 1e-6;
  o.detail = "worst relative gap " + fmt(worst) + " over 20 configs";
  return o;
}

// 3. jittered sampling identity: Monte Carlo vs closed form per config
Outcome crit3() {
  Outcome o;
  double worst = 0.0;
  for (int d : {1, 2}) {
    DensityField f = random_real_trig(d, 2, 71);
    FrequencySet fs = enumerate_lattice(d, d == 1 ? 256.0 : 48.0);
    for (int N : {4, 16, 64}) {
      int H = (d == 1) ? N : int(std::lround(std::sqrt(double(N))));
      PartitionCells cells = cube_partition(H, d);
      for (double r : {0.15, 0.3}) {
        double cf = jitter_closed_form(cells, f, r, fs).closed_form;
        JitterEstimate mc = jitter_mc(cells, f, r, fs, 2000, 4242);
        double z = std::abs(mc.mc_value - cf) / mc.mc_stderr;
        worst = std::max(worst, z);
      }
    }
  }
  o.pass = worst <= 4.0;
  o.detail = "worst |mc - closed| = " + fmt(worst) + " stderr (limit 4)";
  return o;
}

// 4. jittered rates for constant density via the exact overlap route
Outcome crit4() {
  Outcome o;
  std::ostringstream ss;
  for (int d : {1, 2}) {
    JitterRateResult res = jitter_rates(d, {2, 4, 8, 16}, 0.1, 0.4, 0.3);
    double want = -(1.0 + 1.0 / d);
    bool ok = std::abs(res.radial.fit.slope - want) <= 0.10 &&
              res.upper_const > 0.0 && std::isfinite(res.upper_const);
    if (!ok) o.pass = false;
    ss << "d=" << d << " slope " << fmt(res.radial.fit.slope) << " (want "
       << fmt(want) << " +-0.10), C=" << fmt(res.upper_const) << "; ";
  }
  o.detail = ss.str();
  return o;
}

// 5. Holder-profile rates across the beta = 1/2 branch point
Outcome crit5() {
  Outcome o;
  std::ostringstream ss;
  const std::vector<int> H = {4, 8, 16, 32, 64};
  for (auto [beta, want] : {std::pair{0.25, -1.5}, std::pair{1.0, -2.0}}) {
    // below the branch point the oscillation drives the rate, so the profile
    // is mean zero; at beta = 1 the rate saturates only for densities bounded
    // away from zero, so the profile carries a positive offset
    HolderShape shape{1.0, 12, 1, beta < 0.5 ? 0.0 : 4.0};
    RateTable t = holder_rates(beta, 1, H, 0.3, shape);
    if (std::abs(t.fit.slope - want) > 0.15) o.pass = false;
    ss << "beta=" << fmt(beta) << " slope " << fmt(t.fit.slope) << " (want "
       << fmt(want) << " +-0.15); ";
  }
  o.detail = ss.str();
  return o;
}

// 6. grid points against the dilated plateau: normalized value stays bounded
Outcome crit6() {
  Outcome o;
  std::ostringstream ss;
  for (int d : {1, 2}) {
    SharpResult res = lp_sharp(d, {4, 8, 16, 32}, 8, 0.3, d == 1 ? 2048 : 48);
    double hi = 0.0;
    for (const auto& [N, v] : res.rows) hi = std::max(hi, v);
    bool ok = res.spread < 10.0;
    if (!ok) o.pass = false;
    ss << "d=" << d << " max " << fmt(hi) << ", spread " << fmt(res.spread)
       << " (limit 10); ";
  }
  o.detail = ss.str();
  return o;
}

// 7. collapsed mass against widening plateau kernels tracks 1/log N
Outcome crit7() {
  CollapseResult res =
      l1_collapse({8.0, 64.0, 512.0, 4096.0, 32768.0}, 0.3, 50000.0);
  Outcome o;
  o.pass = res.spread < 3.0;
  for (const auto& [N, v] : res.rows) o.pass = o.pass && v > 0.0;
  o.detail = "value/eps spread " + fmt(res.spread) + " (limit 3) over 5 sizes";
  return o;
}

// 8. kernel energy certificate on random nonnegative-weight configs
Outcome crit8() {
  AuditResult res = certificate_audit(50, 2024);
  Outcome o;
  o.pass = res.violations == 0 && res.worst_rel_gap < 1e-9;
  o.detail = "violations " + std::to_string(res.violations) +
             ", worst spectral/point gap " + fmt(res.worst_rel_gap);
  return o;
}

// 9. lower-bound scale: empirical constant stable across N per family
Outcome crit9() {
  Outcome o;
  std::ostringstream ss;
  for (FloorMode mode : {FloorMode::lp, FloorMode::morrey}) {
    for (int d : {1, 2}) {
      std::vector<int> H = (d == 1) ? std::vector<int>{16, 64, 256}
                                    : std::vector<int>{4, 8, 16};
      double M = (d == 1) ? 8192.0 : 300.0;
      FloorResult res = lower_bound_floor(mode, d, H, 0.1, 0.4, M, 99);
      bool ok = res.spread < 10.0;
      for (const auto& [N, v] : res.rows) ok = ok && v > 0.0;
      if (!ok) o.pass = false;
      ss << (mode == FloorMode::lp ? "lp" : "morrey") << " d=" << d
         << " spread " << fmt(res.spread) << "; ";
    }
  }
  o.detail = ss.str() + "(limit 10 each)";
  return o;
}

// 10. signed weights at a collapsed pair: single surviving frequency
Outcome crit10() {
  SignedResult res = signed_weights_demo(32, 0.1, 0.4);
  Outcome o;
  o.pass = res.max_abs_diff < 1e-10 && std::abs(res.fit.slope + 2.0) <= 0.3;
  o.detail = "max |value - weight| " + fmt(res.max_abs_diff) + ", slope " +
             fmt(res.fit.slope) + " (want -2 +-0.3)";
  return o;
}

// 11. Morrey norm analytics and the p = 2 imbedding
Outcome crit11() {
  Outcome o;
  auto one1 = constant_density(1.0, 1);
  double m1 = morrey_norm(one1, 1.0);
  double mh = morrey_norm(one1, 0.5);
  bool a = std::abs(m1 - 2.0) < 1e-3;
  bool b = std::abs(mh - std::sqrt(2.0)) < 1e-2;
  bool c = true;
  std::vector<DensityField> zoo;
  zoo.push_back(constant_density(1.0, 1));
  zoo.push_back(cosine_mode({3, 0, 0}, 1.0, 1));
  zoo.push_back(periodized_bump(4, 1));
  zoo.push_back(dvp_density(4, 1));
  zoo.push_back(holder_density(0.5, 1));
  zoo.push_back(constant_density(1.0, 2));
  zoo.push_back(cosine_mode({2, 1, 0}, 1.0, 2));
  zoo.push_back(periodized_bump(3, 2));
  zoo.push_back(dvp_density(2, 2));
  for (const auto& f : zoo) {
    double lhs = morrey_norm(f, double(f.dim) / 2.0);
    double rhs = morrey_imbedding_const(f.dim, 2.0) * lp_norm(f, 2.0);
    if (lhs > rhs * (1.0 + 1e-9)) c = false;
  }
  o.pass = a && b && c;
  o.detail = "lambda=1: " + fmt(m1) + " (want 2), lambda=1/2: " + fmt(mh) +
             " (want sqrt 2), imbedding " + (c ? "holds" : "VIOLATED") +
             " on " + std::to_string(zoo.size()) + " densities";
  return o;
}

Outcome run(int n) {
  switch (n) {
    case 1: return crit1();
    case 2: return crit2();
    case 3: return crit3();
    case 4: return crit4();
    case 5: return crit5();
    case 6: return crit6();
    case 7: return crit7();
    case 8: return crit8();
    case 9: return crit9();
    case 10: return crit10();
    default: return crit11();
  }
}

}  // namespace

int main(int argc, char** argv) {
  int lo = 1, hi = 11;
  if (argc > 1) lo = hi = std::atoi(argv[1]);
  if (lo < 1 || hi > 11) {
    std::fprintf(stderr, "usage: acceptance [1..11]\n");
    return 2;
  }
  bool all = true;
  for (int n = lo; n <= hi; ++n) {
    Outcome o = run(n);
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n,
                o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
