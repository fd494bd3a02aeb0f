#include <sstream>

#include "doctest.h"

#include "cubemax/grid.hpp"
#include "cubemax/grid_io.hpp"
#include "cubemax/summed_area.hpp"
#include "oracles.hpp"

using namespace cubemax;

TEST_CASE("grid function validates its inputs") {
  CHECK_THROWS_AS(GridFunction(GridShape{3}, 1.0, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(GridFunction(GridShape{2}, 0.0, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(GridFunction(GridShape{2}, 1.0, std::vector<double>{1, NAN}), Error);
  CHECK_THROWS_AS(GridShape({1, 2, 3, 4}), Error);
  CHECK_THROWS_AS(GridShape({0, 2}), Error);
  const GridFunction f(GridShape{2, 3}, 0.5, 1.0);
  CHECK(f.size() == 6);
  CHECK(f.cell_measure() == 0.25);
  CHECK(f.face_measure() == 0.5);
}

TEST_CASE("superlevel sets") {
  const GridFunction c(GridShape{4, 4}, 1.0, 3.0);
  CHECK(superlevel(c, 3.0).count() == 16);
  CHECK(superlevel(c, 3.5).empty());

  const GridFunction f(GridShape{3}, 1.0, std::vector<double>{1, 0, 2});
  const PixelSet E = superlevel(f, 1.0);
  CHECK(E[0]);
  CHECK(!E[1]);
  CHECK(E[2]);

  Rng rng(11);
  const GridFunction g = oracle::integer_grid(GridShape{6, 7}, 1.0, -3, 3, rng);
  for (int lam = -3; lam < 3; ++lam) CHECK(superlevel(g, lam + 1).subset_of(superlevel(g, lam)));
}

TEST_CASE("perimeter by face count") {
  PixelSet one(GridShape{5, 5});
  one.set({2, 2, 0});
  CHECK(perimeter(one).measure == 4.0);
  CHECK(perimeter(PixelSet(GridShape{5, 5}, true)).measure == 0.0);

  // Corner cell: the two faces on the box boundary never count.
  PixelSet corner(GridShape{5, 5});
  corner.set({0, 0, 0});
  CHECK(perimeter(corner).face_count == 2);

  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const PixelSet E = [&] {
      PixelSet s(GridShape{8, 8});
      for (Index i = 0; i < s.size(); ++i) s.set(i, rng.coin());
      return s;
    }();
    CHECK(perimeter(E).face_count == oracle::perimeter_faces(E));
    PixelSet mask(GridShape{8, 8});
    for (Index i = 0; i < mask.size(); ++i) mask.set(i, rng.coin(0.7));
    CHECK(perimeter(E, &mask).face_count == oracle::perimeter_faces(E, &mask));
    // Doubling h scales the measure by 2^(d-1).
    CHECK(perimeter(E, 2.0).measure == 2.0 * perimeter(E, 1.0).measure);
  }

  const PixelSet wrong(GridShape{3, 4});
  CHECK_THROWS_AS(perimeter(PixelSet(GridShape{3, 3}), &wrong), Error);
}

TEST_CASE("variation examples") {
  CHECK(variation(GridFunction(GridShape{4, 4}, 1.0, 2.5)) == 0.0);
  CHECK(variation(GridFunction(GridShape{3}, 1.0, std::vector<double>{0, 1, 0})) == 2.0);
  // 1-d variation does not depend on h.
  CHECK(variation(GridFunction(GridShape{3}, 0.25, std::vector<double>{0, 1, 0})) == 2.0);
}

TEST_CASE("coarea sum equals the gradient sum") {
  Rng rng(5);
  for (int dim = 1; dim <= 3; ++dim)
    for (int t = 0; t < 30; ++t) {
      const GridShape s = oracle::random_shape(dim, dim == 3 ? 6 : 12, rng);
      std::vector<double> v(std::size_t(s.size()));
      for (auto& x : v) x = rng.coin(0.3) ? rng.uniform_int(0, 3) : rng.normal();
      const GridFunction f(s, rng.uniform(0.1, 2.0), v);
      const double a = variation(f);
      const double b = oracle::gradient_variation(f);
      CHECK(a == doctest::Approx(b).epsilon(1e-9));

      PixelSet mask(s);
      for (Index i = 0; i < s.size(); ++i) mask.set(i, rng.coin(0.8));
      CHECK(variation(f, &mask) == doctest::Approx(oracle::gradient_variation(f, &mask)).epsilon(1e-9));
    }
}

TEST_CASE("level perimeters count the faces of each superlevel set") {
  Rng rng(8);
  const GridFunction f = oracle::integer_grid(GridShape{7, 5}, 1.0, 0, 4, rng);
  const LevelPerimeters lp = level_perimeters(f);
  for (std::size_t j = 0; j < lp.levels.size(); ++j)
    CHECK(lp.faces[j] == oracle::perimeter_faces(superlevel(f, lp.levels[j])));
}

TEST_CASE("breakpoints") {
  const GridFunction f(GridShape{3}, 1.0, std::vector<double>{1, 0, 2});
  const std::vector<double> extra{0.5};
  CHECK(lambda_breakpoints(f, extra) == std::vector<double>{0, 0.5, 1, 2});
  CHECK(lambda_breakpoints(GridFunction(GridShape{4}, 1.0, 0.0)) == std::vector<double>{0});

  // Superlevel sets are constant strictly between consecutive breakpoints.
  Rng rng(2);
  const GridFunction g = oracle::integer_grid(GridShape{6, 6}, 1.0, 0, 9, rng);
  const auto b = lambda_breakpoints(g);
  for (std::size_t i = 1; i < b.size(); ++i) {
    const double lo = b[i - 1], hi = b[i];
    CHECK(superlevel(g, lo + 0.25 * (hi - lo)) == superlevel(g, lo + 0.75 * (hi - lo)));
    CHECK(superlevel(g, lo + 0.25 * (hi - lo)) == superlevel(g, hi));
  }
}

TEST_CASE("summed-area table matches direct sums") {
  Rng rng(4);
  for (int dim = 1; dim <= 3; ++dim) {
    const GridShape s = oracle::random_shape(dim, dim == 3 ? 7 : 15, rng);
    std::vector<double> v(std::size_t(s.size()));
    for (auto& x : v) x = rng.normal() * 1e3;
    const GridFunction f(s, 1.0, v);
    const SummedAreaTable sat(f);
    for (const auto& q : oracle::every_cube(s)) {
      const double direct = oracle::cube_sum(f, q);
      CHECK(sat.cube_sum(q.anchor, q.side) == doctest::Approx(direct).epsilon(1e-12).scale(1e3));
    }
  }
  // Exact zeros far away from a large mass.
  std::vector<double> v(64, 0.0);
  v[0] = 1e17;
  v[1] = 3.0;
  const SummedAreaTable sat(GridFunction(GridShape{64}, 1.0, v));
  CHECK(sat.cube_sum({10, 0, 0}, 20) == 0.0);
  CHECK(sat.cube_sum({1, 0, 0}, 5) == 3.0);
}

TEST_CASE("csv and binary round trips") {
  Rng rng(6);
  std::vector<double> v(12);
  for (auto& x : v) x = rng.normal();
  const GridFunction f(GridShape{3, 4}, 0.125, v);

  std::stringstream csv;
  write_csv(csv, f);
  const GridFunction g = read_csv(csv, 0.125);
  CHECK(g.shape() == f.shape());
  CHECK((g.values() == f.values()).all());

  const GridFunction f3(GridShape{2, 3, 2}, 0.5, v);
  std::stringstream bin;
  write_binary(bin, f3);
  CHECK(bin.str().substr(0, 8) == "CUBEMAX1");
  const GridFunction g3 = read_binary(bin);
  CHECK(g3.shape() == f3.shape());
  CHECK(g3.h() == 0.5);
  CHECK((g3.values() == f3.values()).all());

  std::stringstream bad("NOTAGRID");
  CHECK_THROWS_AS(read_binary(bad), Error);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);
  std::stringstream out;
  CHECK_THROWS_AS(write_csv(out, f3), Error);
}
