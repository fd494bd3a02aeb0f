#include <cmath>

#include "doctest.h"

#include "cubemax/generators.hpp"
#include "cubemax/maximal.hpp"
#include "oracles.hpp"

using namespace cubemax;

namespace {

std::vector<double> as_vector(const GridFunction& g) { return {g.values().data(), g.values().data() + g.size()}; }

}  // namespace

TEST_CASE("sliding max") {
  const std::vector<double> in{3, 1, 4, 1, 5, 9, 2, 6};
  for (int w = 1; w <= 8; ++w) {
    std::vector<double> out(in.size() - std::size_t(w) + 1);
    sliding_max(in, w, out);
    for (std::size_t i = 0; i < out.size(); ++i)
      CHECK(out[i] == *std::max_element(in.begin() + long(i), in.begin() + long(i) + w));
  }
}

TEST_CASE("global maximal function small cases") {
  const GridFunction c(GridShape{5, 5}, 1.0, 2.0);
  CHECK((maximal_global(c).values.values() == 2.0).all());

  const GridFunction f(GridShape{3}, 1.0, std::vector<double>{1, 0, 0});
  const auto m = as_vector(maximal_global(f).values);
  CHECK(m[0] == 1.0);
  CHECK(m[1] == 0.5);
  CHECK(m[2] == 1.0 / 3.0);
}

TEST_CASE("global maximal function equals brute force") {
  Rng rng(101);
  for (int dim = 1; dim <= 3; ++dim)
    for (int t = 0; t < 20; ++t) {
      const GridShape s = oracle::random_shape(dim, dim == 3 ? 5 : 12, rng);
      const GridFunction f = oracle::integer_grid(s, rng.uniform(0.5, 2.0), -4, 9, rng);
      const MaxFunction m = maximal_global(f);
      CHECK(m.provenance == Provenance::global);
      CHECK(as_vector(m.values) == oracle::maximal_brute(f, oracle::every_cube(s)));
    }
}

TEST_CASE("maximal function is monotone and dominates f") {
  Rng rng(7);
  const GridShape s{9, 7};
  for (int t = 0; t < 10; ++t) {
    const GridFunction f = oracle::integer_grid(s, 1.0, 0, 5, rng);
    GridFunction g = f;
    for (Index i = 0; i < g.size(); ++i) g[i] += rng.uniform_int(0, 2);
    const auto mf = maximal_global(f).values;
    const auto mg = maximal_global(g).values;
    CHECK((mf.values() <= mg.values()).all());
    CHECK((mf.values() >= f.values()).all());
  }
}

TEST_CASE("family maximal function") {
  Rng rng(9);
  const GridShape s{8, 8};
  const GridFunction f = oracle::integer_grid(s, 1.0, 0, 6, rng);

  const CubeFamily none(s, 1.0);
  CHECK((maximal_family(f, none).values.values() == f.values()).all());

  const GridCube q{{2, 3, 0}, 3};
  const auto one = as_vector(maximal_family(f, CubeFamily(s, 1.0, {q})).values);
  const double avg = oracle::cube_avg(f, q);
  for (Index i = 0; i < s.size(); ++i)
    CHECK(one[std::size_t(i)] == (contains_cell(2, q, s.coord(i)) ? std::max(f[i], avg) : f[i]));

  for (int t = 0; t < 10; ++t) {
    CubeFamily fam = generate_family(FamilyClass::random_complete, s, 1.0, rng, 6);
    fam.bind(f);
    const GridFunction mq = maximal_family(f, fam).values;
    CHECK(as_vector(mq) == oracle::maximal_brute(f, {fam.cubes().begin(), fam.cubes().end()}));
    for (double lam : lambda_breakpoints(f, fam.averages())) {
      PixelSet rhs = superlevel(f, lam);
      for (std::size_t k = 0; k < fam.size(); ++k)
        if (fam.average(k) >= lam) paint(rhs, fam[k]);
      CHECK(superlevel(mq, lam) == rhs);
    }
  }
}

TEST_CASE("local maximal function") {
  Rng rng(15);
  const GridShape s{7, 6};
  const GridFunction f = oracle::integer_grid(s, 1.0, -2, 6, rng);

  const PixelSet full(s, true);
  CHECK(as_vector(maximal_local(f, full).values) == as_vector(maximal_global(f).values));

  PixelSet single(s);
  single.set({3, 2, 0});
  const MaxFunction m1 = maximal_local(f, single);
  CHECK(m1.values.at({3, 2, 0}) == f.at({3, 2, 0}));
  CHECK(std::isnan(m1.values.at({0, 0, 0})));
  CHECK(m1.provenance == Provenance::local_masked);

  // Random domains: cubes entirely inside the domain only.
  for (int t = 0; t < 10; ++t) {
    PixelSet omega(s);
    for (Index i = 0; i < s.size(); ++i) omega.set(i, rng.coin(0.75));
    if (omega.empty()) continue;
    std::vector<GridCube> admissible;
    for (const auto& q : oracle::every_cube(s))
      if (oracle::cube_count(omega, q) == cube_cell_count(2, q.side)) admissible.push_back(q);
    const auto ref = oracle::maximal_brute(f, admissible);
    const auto got = as_vector(maximal_local(f, omega).values);
    for (Index i = 0; i < s.size(); ++i)
      if (omega[i]) CHECK(got[std::size_t(i)] == ref[std::size_t(i)]);
      else CHECK(std::isnan(got[std::size_t(i)]));
  }

  CHECK_THROWS_AS(maximal_local(f, PixelSet(s)), Error);
}

TEST_CASE("variation ratio") {
  const GridFunction c(GridShape{4, 4}, 1.0, 1.0);
  CHECK_THROWS_AS(variation_ratio(c, maximal_global(c)), Error);

  GridFunction sq(GridShape{8, 8}, 1.0, 0.0);
  for (int i = 2; i < 6; ++i)
    for (int j = 2; j < 6; ++j) sq[sq.shape().index({i, j, 0})] = 1.0;
  const double r = variation_ratio(sq, maximal_global(sq));
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
}

TEST_CASE("1-d variation does not increase: exhaustive binary strings") {
  for (int n = 1; n <= 10; ++n)
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::vector<double> v(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) v[std::size_t(i)] = (bits >> i) & 1;
      const GridFunction f(GridShape{n}, 1.0, v);
      const double vf = variation(f);
      const double vm = variation(maximal_global(f).values);
      CHECK(vm <= vf * (1 + 1e-9));
    }
}

TEST_CASE("1-d variation does not increase: random steps") {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const GridFunction f = random_steps(rng.uniform_int(4, 40), 1.0, rng);
    if (variation(f) == 0.0) continue;
    CHECK(variation_ratio(f, maximal_global(f)) <= 1 + 1e-9);
  }
}
