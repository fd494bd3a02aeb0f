#ifndef CUBEMAX_GEOM_HPP
#define CUBEMAX_GEOM_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cubemax/rng.hpp"

namespace cubemax {

/// Cube with arbitrary orientation: center + R * (side/2) * (-1,1)^d.
struct OrientedCube {
  Eigen::VectorXd center;
  double side = 1.0;
  Eigen::MatrixXd rotation;

  int dim() const { return int(center.size()); }
  /// Closed-cube membership with tolerance tol (in length units).
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  /// Smallest K with x in the closure of K * cube.
  double gauge(const Eigen::VectorXd& x) const;
  std::vector<Eigen::VectorXd> vertices() const;
};

Eigen::MatrixXd random_rotation(int dim, Rng& rng);
/// Rotation by `angle` about a random axis (d = 3) or the plane (d = 2).
Eigen::MatrixXd rotation_by_angle(int dim, double angle, Rng& rng);
Eigen::VectorXd random_unit(int dim, Rng& rng);
/// Angle between two nonzero vectors, in [0, pi].
double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct AngleCheck {
  double max_angle = 0.0;
  double bound = 0.0;
  std::uint64_t samples = 0;
  bool holds() const { return max_angle <= bound + 1e-9; }
};
/// Angle between a boundary point of a centered cube and the outer normal
/// there. Corners are always included among the samples.
AngleCheck cube_angle_check(int dim, std::uint64_t samples, Rng& rng);

struct MinAngleResult {
  double eps = 0.0;
  double N = 0.0;  // smallest passing N found by doubling from 1
  std::uint64_t trials = 0;
  double max_angle = 0.0;  // at the reported N
};
/// True when every trial with |x_i| >= (N+1) diam(B)/2 and ang(x1,x2) <= eps
/// has ang(y1 - x1, y2 - x2) <= 2 eps. Also reports the worst angle.
bool min_angle_trials(int dim, double eps, double N, std::uint64_t trials, Rng& rng, double* worst = nullptr);
MinAngleResult min_angle_check(int dim, double eps, std::uint64_t trials, Rng& rng, double N_max = 1 << 20);

struct CubeCoverResult {
  double eps = 0.0;
  double delta = 0.0;  // eps / (2 + 2 sqrt d)
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_gauge = 0.0;     // max over trials of the gauge of P's vertices w.r.t. Q
  double largest_passing = 0.0;  // largest delta (bisection) with no failures on the adversarial set
};
CubeCoverResult cube_cover_check(int dim, double eps, std::uint64_t trials, Rng& rng);

struct BlowupResult {
  double estimate = 0.0;  // Monte-Carlo volume of the eps-neighbourhood
  double std_error = 0.0;
  double bound = 0.0;     // C (diam + eps)^(d-1) (1 + L) eps
  double diam = 0.0;
  bool holds() const { return estimate <= bound + 5.0 * std_error; }
};
/// Random L-Lipschitz piecewise-linear graph of diameter about `diam`.
BlowupResult lipschitz_blowup_check(int dim, double L, double diam, double eps, std::uint64_t mc_samples, Rng& rng,
                                    double C = 4.0);

struct BallBoundaryResult {
  double max_ratio = 0.0;  // sigma(d U Q n B) / ((K^-d + 1) sigma(dB))
  std::uint64_t trials = 0;
};
/// Length of the union boundary of a square family inside the disc of the
/// given radius around the origin.
double union_boundary_in_disc(const std::vector<OrientedCube>& squares, double radius);
/// d = 2 only; throws UnsupportedDimension otherwise.
BallBoundaryResult large_boundary_in_ball_check(int dim, double K, std::uint64_t trials, Rng& rng);


}  // namespace cubemax

#endif  // CUBEMAX_GEOM_HPP
