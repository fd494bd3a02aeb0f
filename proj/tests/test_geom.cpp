#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cubemax/error.hpp"
#include "cubemax/geom.hpp"

using namespace cubemax;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

OrientedCube axis_cube(const VectorXd& c, double side) {
  return OrientedCube{c, side, MatrixXd::Identity(c.size(), c.size())};
}

// Union boundary length in the disc by sampling edge midpoints.
double boundary_by_sampling(const std::vector<OrientedCube>& sq, double r, int per_edge) {
  double total = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const auto v = sq[i].vertices();
    const int ring[4] = {0, 1, 3, 2};
    for (int e = 0; e < 4; ++e) {
      const VectorXd a = v[ring[e]], b = v[ring[(e + 1) % 4]];
      const double step = (b - a).norm() / per_edge;
      for (int k = 0; k < per_edge; ++k) {
        const VectorXd x = a + (b - a) * ((k + 0.5) / per_edge);
        if (x.norm() > r) continue;
        bool interior = false;
        for (std::size_t j = 0; j < sq.size() && !interior; ++j)
          interior = j != i && sq[j].gauge(x) < 1.0;
        if (!interior) total += step;
      }
    }
  }
  return total;
}

}  // namespace

TEST_CASE("angles and rotations") {
  VectorXd e1(2), e2(2), d(2);
  e1 << 1, 0;
  e2 << 0, 3;
  d << 1, 1;
  CHECK(angle_between(e1, e2) == doctest::Approx(pi / 2));
  CHECK(angle_between(e1, e1) == 0.0);
  CHECK(angle_between(e1, -e1) == doctest::Approx(pi));
  CHECK(angle_between(e1, d) == doctest::Approx(pi / 4));

  Rng rng(3);
  for (int dim : {2, 3}) {
    const MatrixXd R = random_rotation(dim, rng);
    CHECK((R.transpose() * R - MatrixXd::Identity(dim, dim)).norm() < 1e-12);
    CHECK(R.determinant() == doctest::Approx(1.0));
    const VectorXd u = random_unit(dim, rng);
    CHECK(u.norm() == doctest::Approx(1.0));
    const MatrixXd S = rotation_by_angle(dim, 0.3, rng);
    CHECK((S.transpose() * S - MatrixXd::Identity(dim, dim)).norm() < 1e-12);
    CHECK(std::acos(std::clamp((S.trace() - (dim - 2)) / 2, -1.0, 1.0)) == doctest::Approx(0.3));
  }
}

TEST_CASE("oriented cube membership") {
  VectorXd c(2), x(2);
  c << 1, 1;
  const OrientedCube q = axis_cube(c, 2.0);
  x << 2, 1.5;
  CHECK(q.gauge(x) == 1.0);
  CHECK(q.contains(x));
  x << 2.1, 1;
  CHECK(!q.contains(x));
  CHECK(q.contains(x, 0.1 + 1e-12));
  CHECK(q.vertices().size() == 4);

  Rng rng(4);
  OrientedCube r{VectorXd::Zero(3), 2.0, random_rotation(3, rng)};
  for (const auto& v : r.vertices()) {
    CHECK(v.norm() == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.gauge(v) == doctest::Approx(1.0));
  }
}

TEST_CASE("cube boundary angle") {
  Rng rng(5);
  const AngleCheck a2 = cube_angle_check(2, 2000, rng);
  CHECK(a2.bound == doctest::Approx(pi / 4));
  CHECK(a2.max_angle == doctest::Approx(pi / 4).epsilon(1e-12));
  CHECK(a2.holds());
  const AngleCheck a3 = cube_angle_check(3, 2000, rng);
  CHECK(a3.bound == doctest::Approx(std::atan(std::sqrt(2.0))));
  CHECK(a3.holds());
  CHECK_THROWS_AS(cube_angle_check(4, 10, rng), Error);
}

TEST_CASE("minimum angle") {
  Rng rng(6);
  for (int dim : {2, 3}) {
    const MinAngleResult m = min_angle_check(dim, 0.05, 2000, rng);
    CHECK(m.N >= 1.0);
    CHECK(m.max_angle <= 0.1);
    CHECK(min_angle_trials(dim, 0.05, 4 * m.N, 500, rng));
  }
}

TEST_CASE("nearby cube cover") {
  Rng rng(7);
  for (int dim : {2, 3}) {
    const CubeCoverResult c = cube_cover_check(dim, 0.1, 2000, rng);
    CHECK(c.delta == doctest::Approx(0.1 / (2 + 2 * std::sqrt(double(dim)))));
    CHECK(c.failures == 0);
    CHECK(c.worst_gauge <= 1.0 + 0.1);
    CHECK(c.largest_passing >= c.delta);
  }
  CHECK_THROWS_AS(cube_cover_check(2, 0.0, 10, rng), Error);
}

TEST_CASE("lipschitz neighbourhood volume") {
  Rng rng(8);
  for (int dim : {2, 3}) {
    // A flat piece of diameter D: the eps-neighbourhood is a slab with caps.
    const BlowupResult flat = lipschitz_blowup_check(dim, 0.0, 1.0, 0.05, 20000, rng);
    CHECK(flat.holds());
    CHECK(flat.estimate > 0.0);
    const BlowupResult steep = lipschitz_blowup_check(dim, 3.0, 1.0, 0.02, 20000, rng);
    CHECK(steep.holds());
  }
  CHECK_THROWS_AS(lipschitz_blowup_check(2, -1.0, 1.0, 0.1, 10, rng), Error);
}

TEST_CASE("union boundary in a disc") {
  CHECK(union_boundary_in_disc({}, 1.0) == 0.0);
  const OrientedCube big = axis_cube(VectorXd::Zero(2), 2.0);
  CHECK(union_boundary_in_disc({big}, 10.0) == doctest::Approx(8.0));
  CHECK(union_boundary_in_disc({big}, 0.5) == 0.0);
  // Inscribed circle touches each side once.
  CHECK(union_boundary_in_disc({big}, 1.0) == doctest::Approx(0.0).epsilon(1e-6));

  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    std::vector<OrientedCube> fam;
    const int n = rng.uniform_int(1, 5);
    for (int i = 0; i < n; ++i)
      fam.push_back(OrientedCube{random_unit(2, rng) * rng.uniform(0.0, 1.5), rng.uniform(0.3, 2.0),
                                 random_rotation(2, rng)});
    CHECK(union_boundary_in_disc(fam, 1.0) == doctest::Approx(boundary_by_sampling(fam, 1.0, 20000)).epsilon(2e-3));
  }

  const BallBoundaryResult b = large_boundary_in_ball_check(2, 1.0, 200, rng);
  CHECK(b.trials == 200);
  CHECK(b.max_ratio <= 1.0);
  CHECK_THROWS_AS(large_boundary_in_ball_check(3, 1.0, 1, rng), Error);
}
