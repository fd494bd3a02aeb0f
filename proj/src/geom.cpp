#include "cubemax/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "cubemax/error.hpp"

namespace cubemax {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

constexpr double pi = std::numbers::pi;

void require_dim(int dim) {
  if (dim != 2 && dim != 3) throw Error(Errc::unsupported_dimension, "geometry checks need d = 2 or 3");
}

}  // namespace

bool OrientedCube::contains(const VectorXd& x, double tol) const {
  const VectorXd y = rotation.transpose() * (x - center);
  return y.cwiseAbs().maxCoeff() <= side / 2 + tol;
}

double OrientedCube::gauge(const VectorXd& x) const {
  const VectorXd y = rotation.transpose() * (x - center);
  return y.cwiseAbs().maxCoeff() / (side / 2);
}

std::vector<VectorXd> OrientedCube::vertices() const {
  const int d = dim();
  std::vector<VectorXd> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    VectorXd y(d);
    for (int a = 0; a < d; ++a) y[a] = (mask >> a & 1) ? side / 2 : -side / 2;
    out.push_back(center + rotation * y);
  }
  return out;
}

VectorXd random_unit(int dim, Rng& rng) {
  VectorXd v(dim);
  do
    for (int a = 0; a < dim; ++a) v[a] = rng.normal();
  while (v.norm() < 1e-12);
  return v.normalized();
}

MatrixXd random_rotation(int dim, Rng& rng) {
  if (dim == 2) return Eigen::Rotation2Dd(rng.uniform(0, 2 * pi)).toRotationMatrix();
  require_dim(dim);
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

MatrixXd rotation_by_angle(int dim, double angle, Rng& rng) {
  if (dim == 2) return Eigen::Rotation2Dd(rng.coin() ? angle : -angle).toRotationMatrix();
  require_dim(dim);
  const VectorXd axis = random_unit(3, rng);
  return Eigen::AngleAxisd(angle, Vector3d(axis)).toRotationMatrix();
}

double angle_between(const VectorXd& a, const VectorXd& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

AngleCheck cube_angle_check(int dim, std::uint64_t samples, Rng& rng) {
  require_dim(dim);
  AngleCheck out;
  out.bound = pi / 2 - std::asin(1 / std::sqrt(double(dim)));
  out.samples = samples;
  const MatrixXd R = random_rotation(dim, rng);
  for (std::uint64_t k = 0; k < samples; ++k) {
    const int axis = rng.uniform_int(0, dim - 1);
    const double sign = rng.coin() ? 1.0 : -1.0;
    VectorXd y(dim);
    const bool corner = k % 16 == 0;
    for (int a = 0; a < dim; ++a) y[a] = corner ? (rng.coin() ? 1.0 : -1.0) : rng.uniform(-1, 1);
    y[axis] = sign;
    VectorXd e = VectorXd::Zero(dim);
    e[axis] = sign;
    out.max_angle = std::max(out.max_angle, angle_between(R * y, R * e));
  }
  return out;
}

bool min_angle_trials(int dim, double eps, double N, std::uint64_t trials, Rng& rng, double* worst) {
  require_dim(dim);
  bool ok = true;
  double max_angle = 0.0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const double r = rng.uniform(0.5, 2.0);
    const bool extreme = k % 2 == 0;
    VectorXd y1, y2;
    if (extreme) {
      const VectorXd w = random_unit(dim, rng);
      y1 = r * w;
      y2 = -r * w;
    } else {
      y1 = random_unit(dim, rng) * r * std::pow(rng.uniform01(), 1.0 / dim);
      y2 = random_unit(dim, rng) * r * std::pow(rng.uniform01(), 1.0 / dim);
    }
    const double rmin = (N + 1) * r;
    const VectorXd u1 = random_unit(dim, rng);
    VectorXd v = random_unit(dim, rng);
    v -= v.dot(u1) * u1;
    if (v.norm() < 1e-9) continue;
    v.normalize();
    const double theta = extreme ? eps : rng.uniform(0, eps);
    const VectorXd u2 = std::cos(theta) * u1 + std::sin(theta) * v;
    const double m1 = extreme ? rmin : rmin * rng.uniform(1, 4);
    const double m2 = extreme ? rmin : rmin * rng.uniform(1, 4);
    const double a = angle_between(y1 - m1 * u1, y2 - m2 * u2);
    max_angle = std::max(max_angle, a);
    if (a > 2 * eps + 1e-12) ok = false;
  }
  if (worst) *worst = max_angle;
  return ok;
}

MinAngleResult min_angle_check(int dim, double eps, std::uint64_t trials, Rng& rng, double N_max) {
  MinAngleResult out;
  out.eps = eps;
  out.trials = trials;
  for (double N = 1; N <= N_max; N *= 2) {
    double worst = 0.0;
    if (min_angle_trials(dim, eps, N, trials, rng, &worst)) {
      out.N = N;
      out.max_angle = worst;
      return out;
    }
  }
  out.N = std::numeric_limits<double>::infinity();
  return out;
}

namespace {

struct CoverTrial {
  OrientedCube Q, P;
};

// P at (or inside) the limits allowed by delta relative to Q.
CoverTrial cover_trial(int dim, double delta, bool extreme, Rng& rng) {
  CoverTrial t;
  t.Q.center = VectorXd(dim);
  for (int a = 0; a < dim; ++a) t.Q.center[a] = rng.uniform(-1, 1);
  t.Q.side = rng.uniform(0.5, 2.0);
  t.Q.rotation = random_rotation(dim, rng);

  const double l = t.Q.side;
  t.P.side = extreme ? (1 + delta) * l : rng.uniform(0.5, 1 + delta) * l;
  VectorXd dir(dim);
  if (extreme) {
    for (int a = 0; a < dim; ++a) dir[a] = rng.coin() ? 1.0 : -1.0;
    dir = t.Q.rotation * dir.normalized();
  } else {
    dir = random_unit(dim, rng);
  }
  t.P.center = t.Q.center + (extreme ? 1.0 : rng.uniform01()) * delta * l * dir;
  // ||R - I|| = 2 sin(theta / 2) for a rotation by theta.
  const double theta_max = 2 * std::asin(std::min(1.0, delta / 2));
  t.P.rotation = t.Q.rotation * rotation_by_angle(dim, extreme ? theta_max : rng.uniform(0, theta_max), rng);
  return t;
}

double cover_gauge(const CoverTrial& t) {
  double g = 0.0;
  for (const auto& v : t.P.vertices()) g = std::max(g, t.Q.gauge(v));
  return g;
}

}  // namespace

CubeCoverResult cube_cover_check(int dim, double eps, std::uint64_t trials, Rng& rng) {
  require_dim(dim);
  if (!(eps > 0)) throw Error(Errc::invalid_argument, "eps must be positive");
  CubeCoverResult out;
  out.eps = eps;
  out.delta = eps / (2 + 2 * std::sqrt(double(dim)));
  out.trials = trials;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const CoverTrial t = cover_trial(dim, out.delta, k % 2 == 0, rng);
    const double g = cover_gauge(t);
    out.worst_gauge = std::max(out.worst_gauge, g);
    if (g > 1 + eps + 1e-12) ++out.failures;
  }

  // Largest delta that survives a fixed adversarial sample.
  const std::uint64_t seed = rng.bits();
  auto passes = [&](double delta) {
    Rng local(seed);
    for (int k = 0; k < 2000; ++k)
      if (cover_gauge(cover_trial(dim, delta, true, local)) > 1 + eps) return false;
    return true;
  };
  double lo = out.delta, hi = 2.0;
  if (!passes(lo)) lo = 0.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  out.largest_passing = lo;
  return out;
}

namespace {

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vector3d closest_on_triangle(const Vector3d& p, const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + d1 / (d1 - d3) * ab;
  const Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  const double denom = 1 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

template <class Point>
double diameter(const std::vector<Point>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace

BlowupResult lipschitz_blowup_check(int dim, double L, double diam, double eps, std::uint64_t mc_samples, Rng& rng,
                                    double C) {
  require_dim(dim);
  if (!(L >= 0 && diam > 0 && eps > 0 && mc_samples > 0)) throw Error(Errc::invalid_argument, "bad blowup parameters");
  BlowupResult out;
  std::uint64_t hits = 0;
  double box_volume = 1.0;

  if (dim == 2) {
    const int segments = 16;
    const double len = diam / std::sqrt(1 + L * L);
    std::vector<Eigen::Vector2d> pts{{0.0, 0.0}};
    for (int k = 0; k < segments; ++k) {
      const double dx = len / segments;
      pts.emplace_back(pts.back().x() + dx, pts.back().y() + rng.uniform(-L, L) * dx);
    }
    out.diam = diameter(pts);
    Eigen::Vector2d lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    lo.array() -= eps;
    hi.array() += eps;
    box_volume = (hi - lo).prod();
    for (std::uint64_t k = 0; k < mc_samples; ++k) {
      const Eigen::Vector2d p(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()));
      for (std::size_t s = 0; s + 1 < pts.size(); ++s)
        if (point_segment_distance(p, pts[s], pts[s + 1]) < eps) {
          ++hits;
          break;
        }
    }
  } else {
    // Height field L/sqrt(2) * min_k (b_k + |x - p_k|) on a right-triangle mesh:
    // each axis difference quotient is at most L/sqrt(2), so every triangle
    // has gradient norm at most L.
    const int m = 9;
    const double len = diam / std::sqrt(2.0 * (1 + L * L));
    std::vector<Eigen::Vector2d> peaks;
    std::vector<double> offsets;
    for (int k = 0; k < 4; ++k) {
      peaks.emplace_back(rng.uniform(0, len), rng.uniform(0, len));
      offsets.push_back(rng.uniform(0, len / 2));
    }
    auto height = [&](double x, double y) {
      double g = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 4; ++k) g = std::min(g, offsets[k] + (Eigen::Vector2d(x, y) - peaks[k]).norm());
      return L / std::sqrt(2.0) * g;
    };
    std::vector<Vector3d> nodes;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double x = len * i / (m - 1), y = len * j / (m - 1);
        nodes.emplace_back(x, y, height(x, y));
      }
    out.diam = diameter(nodes);
    struct Tri {
      Vector3d a, b, c, lo, hi;
    };
    std::vector<Tri> tris;
    auto add = [&](const Vector3d& a, const Vector3d& b, const Vector3d& c) {
      Tri t{a, b, c, a.cwiseMin(b).cwiseMin(c), a.cwiseMax(b).cwiseMax(c)};
      t.lo.array() -= eps;
      t.hi.array() += eps;
      tris.push_back(t);
    };
    for (int i = 0; i + 1 < m; ++i)
      for (int j = 0; j + 1 < m; ++j) {
        const Vector3d& p00 = nodes[i * m + j];
        const Vector3d& p10 = nodes[(i + 1) * m + j];
        const Vector3d& p01 = nodes[i * m + j + 1];
        const Vector3d& p11 = nodes[(i + 1) * m + j + 1];
        add(p00, p10, p11);
        add(p00, p11, p01);
      }
    Vector3d lo = nodes[0], hi = nodes[0];
    for (const auto& p : nodes) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    lo.array() -= eps;
    hi.array() += eps;
    box_volume = (hi - lo).prod();
    for (std::uint64_t k = 0; k < mc_samples; ++k) {
      const Vector3d p(rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()), rng.uniform(lo.z(), hi.z()));
      for (const auto& t : tris) {
        if ((p.array() < t.lo.array()).any() || (p.array() > t.hi.array()).any()) continue;
        if ((p - closest_on_triangle(p, t.a, t.b, t.c)).norm() < eps) {
          ++hits;
          break;
        }
      }
    }
  }

  const double frac = double(hits) / double(mc_samples);
  out.estimate = box_volume * frac;
  out.std_error = box_volume * std::sqrt(frac * (1 - frac) / double(mc_samples));
  out.bound = C * std::pow(out.diam + eps, dim - 1) * (1 + L) * eps;
  return out;
}

double union_boundary_in_disc(const std::vector<OrientedCube>& squares, double radius) {
  double total = 0.0;
  for (std::size_t i = 0; i < squares.size(); ++i) {
    const auto v = squares[i].vertices();
    // Vertex order from vertices(): (-,-), (+,-), (-,+), (+,+).
    const int ring[4] = {0, 1, 3, 2};
    for (int e = 0; e < 4; ++e) {
      const Eigen::Vector2d a = v[ring[e]], b = v[ring[(e + 1) % 4]];
      const Eigen::Vector2d ab = b - a;
      // |a + t ab|^2 <= r^2.
      const double qa = ab.squaredNorm(), qb = 2 * a.dot(ab), qc = a.squaredNorm() - radius * radius;
      const double disc = qb * qb - 4 * qa * qc;
      if (disc <= 0) continue;
      const double sq = std::sqrt(disc);
      const double t0 = std::max(0.0, (-qb - sq) / (2 * qa));
      const double t1 = std::min(1.0, (-qb + sq) / (2 * qa));
      if (t0 >= t1) continue;

      std::vector<std::pair<double, double>> cut;
      for (std::size_t j = 0; j < squares.size(); ++j) {
        if (j == i) continue;
        const OrientedCube& s = squares[j];
        const Eigen::Vector2d ya = s.rotation.transpose() * (a - s.center);
        const Eigen::Vector2d yd = s.rotation.transpose() * ab;
        double lo = t0, hi = t1;
        for (int k = 0; k < 2 && lo < hi; ++k) {
          const double half = s.side / 2;
          if (std::abs(yd[k]) < 1e-15) {
            if (std::abs(ya[k]) >= half) hi = lo;
            continue;
          }
          double u0 = (-half - ya[k]) / yd[k], u1 = (half - ya[k]) / yd[k];
          if (u0 > u1) std::swap(u0, u1);
          lo = std::max(lo, u0);
          hi = std::min(hi, u1);
        }
        if (lo < hi) cut.emplace_back(lo, hi);
      }
      std::sort(cut.begin(), cut.end());
      double covered = 0.0, reach = t0;
      for (const auto& [lo, hi] : cut) {
        if (hi <= reach) continue;
        covered += hi - std::max(lo, reach);
        reach = hi;
      }
      total += (t1 - t0 - covered) * std::sqrt(qa);
    }
  }
  return total;
}

BallBoundaryResult large_boundary_in_ball_check(int dim, double K, std::uint64_t trials, Rng& rng) {
  if (dim != 2) throw Error(Errc::unsupported_dimension, "union boundary measure is only computed for d = 2");
  if (!(K > 0)) throw Error(Errc::invalid_argument, "K must be positive");
  BallBoundaryResult out;
  out.trials = trials;
  const double r = 1.0;
  const double scale = (std::pow(K, -dim) + 1) * 2 * pi * r;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const int n = rng.uniform_int(1, 8);
    std::vector<OrientedCube> fam;
    for (int i = 0; i < n; ++i) {
      OrientedCube q;
      q.side = K * 2 * r * rng.uniform(1, 3);
      const double reach = q.side / std::sqrt(2.0) + r;
      q.center = random_unit(2, rng) * reach * std::sqrt(rng.uniform01());
      q.rotation = random_rotation(2, rng);
      fam.push_back(q);
    }
    out.max_ratio = std::max(out.max_ratio, union_boundary_in_disc(fam, r) / scale);
  }
  return out;
}

}  // namespace cubemax
