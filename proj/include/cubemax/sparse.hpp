#ifndef CUBEMAX_SPARSE_HPP
#define CUBEMAX_SPARSE_HPP

#include <map>
#include <utility>
#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"

namespace cubemax {

/// lam_Q = inf{lam : |Q n {f >= lam}| <= 2^(-d-1) |Q|}: the (T+1)-th
/// largest value in Q with T = floor(#cells / 2^(d+1)).
double lambda_q(const GridFunction& f, const GridCube& q);

/// Greedy selection result, in selection order.
struct SparseFamily {
  std::vector<GridCube> cubes;
  std::vector<double> averages;  // f_Q
  std::vector<double> lambdas;   // lam_Q
  double rhs_sum = 0.0;          // sum (f_Q - lam_Q) * sigma(dQ)
  std::size_t iterations = 0;
};

/// Surface measure of the cube: 2d (side h)^(d-1).
double cube_surface(int dim, double h, const GridCube& q);

/// Repeatedly takes the largest-scale cube with the largest average
/// (canonical order breaks ties) and discards every cube Q with f_Q <= f_S
/// and |Q n S| >= min(|Q|, |S|) / 2.
SparseFamily greedy_sparse(const GridFunction& f, const CubeFamily& candidates);

struct PairViolation {
  std::size_t larger = 0, smaller = 0;  // indices into SparseFamily::cubes
};

/// Every pair R, Q with side(R) <= side(Q) must satisfy |R n Q| < |R|/2, or
/// scale(R) < scale(Q) and f_R > f_Q.
std::vector<PairViolation> audit_sparse(const SparseFamily& s, int dim, double h);

/// Union over breakpoints of the low-density class q2, and the exact
/// integral of sigma(d U q2^lam) over lam.
struct Q2Collection {
  CubeFamily cubes;
  double boundary_integral = 0.0;
};
Q2Collection collect_q2(const GridFunction& f, const CubeFamily& fam);

/// (integral of sigma(d U q2^lam), greedy rhs_sum).
struct SignificantMass {
  double lhs = 0.0;
  double rhs = 0.0;
  SparseFamily sparse;
};
SignificantMass significant_mass_bound(const GridFunction& f, const CubeFamily& fam);

/// Bounded-overlap selection F from D = U D(Q0).
struct OverlapFamily {
  std::vector<GridCube> cubes;
  double eps = 0.0;
  int C = 0;         // max number of (1-eps)^2 dilates through one point
  double C1 = 0.0;   // max over (Q0, Q) of the chosen Q subset C1 P
  double C2 = 0.0;   // max over (Q0, Q) of the chosen P subset C2 Q0
  std::size_t reduced_size = 0;  // |D~|
};

using DFamilies = std::map<GridCube, std::vector<GridCube>>;

/// Default contraction for the mid-density band: 2^(-d-3) / d.
double default_contraction(int dim);

/// Throws PremiseViolated if a D(Q0) cube leaves Q0 or strictly contains
/// a cube of S.
OverlapFamily disjoint_select(const GridShape& shape, double h, const std::vector<GridCube>& S,
                              const DFamilies& D, double eps);

/// Max number of K-dilates of the given cubes that share a point.
int dilate_overlap_count(int dim, double h, const std::vector<GridCube>& cubes, double K);

}  // namespace cubemax

#endif  // CUBEMAX_SPARSE_HPP
