#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "discrelab/io.hpp"
#include "discrelab/rng.hpp"
#include "discrelab/torus.hpp"

using namespace discrelab;

TEST_CASE("wrap_coord maps to [-1/2, 1/2) and is idempotent") {
  CHECK(wrap_coord(0.5) == doctest::Approx(-0.5));
  CHECK(wrap_coord(-0.5) == doctest::Approx(-0.5));
  CHECK(wrap_coord(0.75) == doctest::Approx(-0.25));
  CHECK(wrap_coord(1.25) == doctest::Approx(0.25));
  CHECK(wrap_coord(-1.1) == doctest::Approx(-0.1));
  for (double t : {-3.7, -0.5, 0.0, 0.49999, 1.0, 123.456}) {
    double w = wrap_coord(t);
    CHECK(w >= -0.5);
    CHECK(w < 0.5);
    CHECK(wrap_coord(w) == w);
  }
}

TEST_CASE("wrap_distance") {
  CHECK(wrap_distance(TorusPoint::d1(0.4), TorusPoint::d1(-0.4)) ==
        doctest::Approx(0.2));
  CHECK(wrap_distance(TorusPoint::d1(0.13), TorusPoint::d1(0.13)) == 0.0);
  // each coordinate difference wraps to 0.5
  CHECK(wrap_distance(TorusPoint::d2(0.25, 0.25), TorusPoint::d2(-0.25, -0.25)) ==
        doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS(wrap_distance(TorusPoint::d1(0.0), TorusPoint::d2(0.0, 0.0)));
}

TEST_CASE("grid_points enumerates (1/H)Z^d") {
  auto g = grid_points(2, 1);
  REQUIRE(g.size() == 2);
  std::set<double> xs{g.points[0].x[0], g.points[1].x[0]};
  CHECK(xs.count(-0.5) == 1);
  CHECK(xs.count(0.0) == 1);
  CHECK(weight_norm(g) == doctest::Approx(1.0));

  auto g2 = grid_points(3, 2);
  REQUIRE(g2.size() == 9);
  for (const auto& p : g2.points)
    for (int a = 0; a < 2; ++a) {
      bool ok = std::abs(p.x[a] + 1.0 / 3.0) < 1e-12 ||
                std::abs(p.x[a]) < 1e-12 || std::abs(p.x[a] - 1.0 / 3.0) < 1e-12;
      CHECK(ok);
    }

  auto g3 = grid_points(1, 3);
  REQUIRE(g3.size() == 1);
  CHECK(g3.weights[0] == 1.0);
}

TEST_CASE("weight_norm") {
  WeightedPointSet a(1, {TorusPoint::d1(0.1), TorusPoint::d1(0.2)}, {2.0, 0.0});
  CHECK(weight_norm(a) == doctest::Approx(std::sqrt(2.0)));
  WeightedPointSet b(1, {TorusPoint::d1(0.1), TorusPoint::d1(0.2)}, {1.0, -1.0});
  CHECK(weight_norm(b) == doctest::Approx(1.0));
  CHECK(b.nonneg == false);
  CHECK(a.nonneg == true);
}

TEST_CASE("cube_partition tiles the torus") {
  auto cells = cube_partition(2, 1);
  CHECK(cells.cell_count() == 2);
  CHECK(cells.lower_corner(0).x[0] == doctest::Approx(-0.5));
  CHECK(cells.lower_corner(1).x[0] == doctest::Approx(0.0));

  auto c2 = cube_partition(2, 2);
  CHECK(c2.cell_count() == 4);
  CHECK(c2.side() == doctest::Approx(0.5));

  // every random point lands in exactly one cell
  auto c3 = cube_partition(5, 3);
  for (std::size_t t = 0; t < 2000; ++t) {
    std::array<double, kMaxDim> c{uniform01(7, t, 0) - 0.5,
                                  uniform01(7, t, 1) - 0.5,
                                  uniform01(7, t, 2) - 0.5};
    TorusPoint p(3, c);
    int hits = 0;
    for (std::size_t j = 0; j < c3.cell_count(); ++j)
      if (c3.contains(j, p)) ++hits;
    CHECK(hits == 1);
    CHECK(c3.contains(c3.find_cell(p), p));
  }
}

TEST_CASE("sample_jitter: membership, determinism, cell moments") {
  auto cells = cube_partition(4, 2);
  auto ps = sample_jitter(cells, 42);
  REQUIRE(ps.size() == 16);
  for (std::size_t j = 0; j < ps.size(); ++j) CHECK(cells.contains(j, ps.points[j]));

  auto ps2 = sample_jitter(cells, 42);
  for (std::size_t j = 0; j < ps.size(); ++j)
    for (int a = 0; a < 2; ++a) CHECK(ps.points[j].x[a] == ps2.points[j].x[a]);

  // empirical mean of the point in cell 5 over many replicates -> centroid
  const int R = 10000;
  double mean0 = 0.0, mean1 = 0.0;
  for (int t = 0; t < R; ++t) {
    auto q = sample_jitter(cells, hash2(9, std::uint64_t(t)));
    mean0 += q.points[5].x[0];
    mean1 += q.points[5].x[1];
  }
  mean0 /= R;
  mean1 /= R;
  TorusPoint cent = cells.center(5);
  // std error of a uniform on a cell of side 1/4: (1/4)/sqrt(12 R)
  double se = 0.25 / std::sqrt(12.0 * R);
  CHECK(std::abs(mean0 - cent.x[0]) < 4.0 * se);
  CHECK(std::abs(mean1 - cent.x[1]) < 4.0 * se);
}

TEST_CASE("point set round trip") {
  auto cells = cube_partition(3, 2);
  auto ps = sample_jitter(cells, 11);
  ps.weights[2] = -0.75;
  ps.refresh_nonneg();
  std::stringstream ss;
  write_point_set(ss, ps);
  auto back = read_point_set(ss);
  REQUIRE(back.size() == ps.size());
  CHECK(back.dim == ps.dim);
  CHECK(back.nonneg == false);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    CHECK(back.weights[j] == ps.weights[j]);
    for (int a = 0; a < 2; ++a) CHECK(back.points[j].x[a] == ps.points[j].x[a]);
  }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS(check_dim(4));
  CHECK_THROWS(BallWindow(1, 0.5));
  CHECK_THROWS(BallWindow(2, 0.0));
  CHECK_THROWS(grid_points(0, 1));
  CHECK_THROWS(WeightedPointSet(1, {}, {}));
}
