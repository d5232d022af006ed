#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "plab/grid.hpp"

using namespace plab;

namespace {

// Independent oracle: cube [k 2^-j, (k+1) 2^-j) intersects (-L, L) iff the
// open interval overlap test passes per axis.
bool cube_hits_box_1d(std::int64_t k, int j, double L) {
  const double side = std::exp2(-j);
  const double lo = k * side;
  const double hi = lo + side;
  return lo < L && hi > -L;
}

}  // namespace

TEST_CASE("box domain validates shape parameters") {
  CHECK_NOTHROW(BoxDomain::make(1, 4.0, 4096));
  CHECK_NOTHROW(BoxDomain::make(2, 2.0, 256));
  CHECK_THROWS_AS(BoxDomain::make(3, 2.0, 64), error);
  CHECK_THROWS_AS(BoxDomain::make(1, 3.0, 64), error);   // not a power of two
  CHECK_THROWS_AS(BoxDomain::make(1, 0.5, 64), error);   // below 1
  CHECK_THROWS_AS(BoxDomain::make(1, 2.0, 100), error);  // samples not 2^k
  CHECK_THROWS_AS(BoxDomain::make(1, 2.0, 4), error);    // spacing >= 1
}

TEST_CASE("grid coordinates and levels") {
  auto box = BoxDomain::make(1, 4.0, 4096);
  CHECK(box.spacing() == doctest::Approx(8.0 / 4096).epsilon(1e-15));
  CHECK(box.max_level() == 9);  // 2^-9 == 8/4096
  CHECK(box.coord(0) == doctest::Approx(-4.0));
  CHECK(box.coord(box.samples / 2) == doctest::Approx(0.0));

  auto box2 = BoxDomain::make(2, 2.0, 256);
  CHECK(box2.max_level() == 6);
  CHECK(box2.total() == 256 * 256);
  auto idx = box2.unflat(box2.flat(3, 7));
  CHECK(idx[0] == 3);
  CHECK(idx[1] == 7);
}

TEST_CASE("cube enumeration matches the interval-intersection oracle") {
  auto box = BoxDomain::make(1, 4.0, 256);
  const int jmin = -4, jmax = 3;
  auto cubes = enumerate_cubes(box, jmin, jmax);

  std::set<std::pair<int, std::int64_t>> expect;
  for (int j = jmin; j <= jmax; ++j)
    for (std::int64_t k = -1000; k <= 1000; ++k)
      if (cube_hits_box_1d(k, j, box.half_width)) expect.insert({j, k});

  std::set<std::pair<int, std::int64_t>> got;
  for (const auto& q : cubes) got.insert({q.level, q.k[0]});
  CHECK(got == expect);

  // lexicographic (level, k) order
  for (size_t i = 1; i < cubes.size(); ++i) {
    auto a = std::make_pair(cubes[i - 1].level, cubes[i - 1].k[0]);
    auto b = std::make_pair(cubes[i].level, cubes[i].k[0]);
    CHECK(a < b);
  }
}

TEST_CASE("pinned enumeration example: unit half-width, two levels") {
  auto box = BoxDomain::make(1, 1.0, 16);
  auto cubes = enumerate_cubes(box, 0, 1);
  REQUIRE(cubes.size() == 6);  // levels 0: k in {-1,0}; level 1: k in {-2..1}
  CHECK(cubes[0].level == 0);
  CHECK(cubes[0].k[0] == -1);
  CHECK(cubes[1].k[0] == 0);
  CHECK(cubes[2].level == 1);
  CHECK(cubes[2].k[0] == -2);
  CHECK(cubes[5].k[0] == 1);
}

TEST_CASE("cube enumeration in two dimensions is the tensor product") {
  auto box = BoxDomain::make(2, 2.0, 64);
  auto cubes = enumerate_cubes(box, 1, 1);
  // per axis k in {-4..3}: 8 values
  CHECK(cubes.size() == 64);
  std::set<std::pair<std::int64_t, std::int64_t>> ks;
  for (const auto& q : cubes) ks.insert({q.k[0], q.k[1]});
  CHECK(ks.size() == 64);
  CHECK(ks.count({-4, -4}) == 1);
  CHECK(ks.count({3, 3}) == 1);
  CHECK(ks.count({4, 0}) == 0);
}

TEST_CASE("index boxes of one level partition the sample lattice") {
  for (int dim : {1, 2}) {
    auto box = dim == 1 ? BoxDomain::make(1, 4.0, 256)
                        : BoxDomain::make(2, 2.0, 64);
    for (int j = std::min(0, -2); j <= box.max_level(); ++j) {
      auto cubes = enumerate_cubes(box, j, j);
      std::vector<int> seen(box.total(), 0);
      for (const auto& q : cubes) {
        auto ib = cube_index_box(box, q);
        for (std::int64_t i0 = ib.lo[0]; i0 < ib.hi[0]; ++i0)
          for (std::int64_t i1 = ib.lo[1]; i1 < ib.hi[1]; ++i1)
            seen[box.flat(i0, i1)] += 1;
      }
      for (std::int64_t i = 0; i < box.total(); ++i) {
        INFO("dim=" << dim << " level=" << j << " flat=" << i);
        CHECK(seen[i] == 1);
      }
    }
  }
}

TEST_CASE("index box membership agrees with geometry") {
  auto box = BoxDomain::make(1, 2.0, 128);
  std::mt19937_64 rng(7);
  auto cubes = enumerate_cubes(box, -2, box.max_level());
  for (const auto& q : cubes) {
    auto g = cube_geometry(q, box.dim);
    auto ib = cube_index_box(box, q);
    for (std::int64_t i = 0; i < box.samples; ++i) {
      const double x = box.coord(i);
      const bool inside = x >= g.corner[0] && x < g.corner[0] + g.side;
      const bool listed = i >= ib.lo[0] && i < ib.hi[0];
      CHECK(inside == listed);
    }
  }
  // finer than the lattice: refuse rather than misalign
  CHECK_THROWS_AS(cube_index_box(box, DyadicCube{box.max_level() + 1, {0, 0}}),
                  error);
}

TEST_CASE("cube geometry round trip") {
  DyadicCube q{3, {-5, 2}};
  auto g = cube_geometry(q, 2);
  CHECK(g.side == doctest::Approx(0.125));
  CHECK(g.volume == doctest::Approx(0.125 * 0.125));
  CHECK(g.corner[0] == doctest::Approx(-0.625));
  CHECK(g.corner[1] == doctest::Approx(0.25));
  CHECK(g.center[0] == doctest::Approx(-0.625 + 0.0625));
  // negative level: cube larger than unit
  auto gg = cube_geometry(DyadicCube{-2, {-1, 0}}, 1);
  CHECK(gg.side == doctest::Approx(4.0));
  CHECK(gg.corner[0] == doctest::Approx(-4.0));
}

TEST_CASE("scale window enforces the band margin") {
  auto box = BoxDomain::make(1, 4.0, 4096);  // max level 9
  CHECK_NOTHROW(make_scale_window(box, 0, 8));
  CHECK_THROWS_AS(make_scale_window(box, 0, 9), error);
  CHECK_THROWS_AS(make_scale_window(box, 3, 2), error);
  CHECK(make_scale_window(box, -3, 8).count() == 12);
}

TEST_CASE("ball average of a half-space indicator is one half") {
  auto box = BoxDomain::make(1, 4.0, 4096);
  auto f = sample(box, [](std::array<double, 2> x) {
    return cplx(x[0] >= 0 ? 1.0 : 0.0, 0.0);
  });
  const double h = box.spacing();
  for (double r : {0.25, 0.5, 1.0}) {
    const double got = ball_average(f, {0.0, 0.0}, r, 1.0);
    CHECK(std::fabs(got - 0.5) <= 2.0 * h / r + 1e-12);
  }
}

TEST_CASE("ball average power mean properties") {
  auto box = BoxDomain::make(2, 2.0, 64);
  auto f = sample(box, [](std::array<double, 2> x) {
    return cplx(std::sin(3 * x[0]) * std::cos(2 * x[1]) + 1.2, 0.0);
  });
  const std::array<double, 2> c = {0.3, -0.4};
  // constant function: power mean is the constant for every u
  auto one = sample(box, [](std::array<double, 2>) { return cplx(1.0, 0.0); });
  for (double u : {0.5, 1.0, 2.0, 7.0})
    CHECK(ball_average(one, c, 0.7, u) == doctest::Approx(1.0).epsilon(1e-12));
  // monotone in the exponent
  double prev = 0.0;
  for (double u : {0.25, 0.5, 1.0, 2.0, 4.0, 16.0}) {
    const double cur = ball_average(f, c, 0.7, u);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
  // sup exponent equals the max over the ball
  const double sup = ball_average(f, c, 0.7,
                                  std::numeric_limits<double>::infinity());
  CHECK(sup >= prev - 1e-12);
  CHECK(ball_average(f, c, 2.9, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(f.values.abs().maxCoeff()).epsilon(1e-12));
  // degenerate balls are refused
  CHECK_THROWS_AS(ball_average(f, {1.999, 1.999}, 1e-6, 2.0), error);
}

TEST_CASE("periodic distance uses the minimal image") {
  auto box = BoxDomain::make(1, 1.0, 16);
  CHECK(dist_periodic(box, {-0.9, 0}, {0.9, 0}) == doctest::Approx(0.2));
  CHECK(dist_periodic(box, {0.25, 0}, {0.5, 0}) == doctest::Approx(0.25));
  auto box2 = BoxDomain::make(2, 2.0, 16);
  CHECK(dist_periodic(box2, {-1.9, -1.9}, {1.9, 1.9}) ==
        doctest::Approx(std::sqrt(0.2 * 0.2 * 2)));
}

TEST_CASE("grid file round trip is exact") {
  auto box = BoxDomain::make(2, 2.0, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction f(box);
  for (std::int64_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cplx(u(rng), u(rng));

  auto path = std::filesystem::temp_directory_path() / "plab_grid_rt.bin";
  write_grid_file(path, f);
  auto g = read_grid_file(path);
  REQUIRE(same_box(f.box, g.box));
  for (std::int64_t i = 0; i < f.values.size(); ++i)
    CHECK(f.values[i] == g.values[i]);
  std::filesystem::remove(path);

  auto csv = std::filesystem::temp_directory_path() / "plab_grid_rt.csv";
  write_grid_csv(csv, f);
  CHECK(std::filesystem::file_size(csv) > 0);
  std::filesystem::remove(csv);
}
