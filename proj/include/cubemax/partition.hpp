#ifndef CUBEMAX_PARTITION_HPP
#define CUBEMAX_PARTITION_HPP

#include <optional>
#include <string>
#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"

namespace cubemax {

/// Density classes of Q^lam = {Q : f_Q >= lam}:
///   q0: |Q n {f >= lam}| >= 2^(-d-1) |Q|
///   q1: not q0, |Q n U q0| >= 2^(-d-1) |Q|
///   q2: the rest.
struct LevelPartition {
  double lam = 0.0;
  std::vector<GridCube> q0, q1, q2;
  PixelSet superlevel;  // {f >= lam}
  PixelSet union_all, union0, union1, union2;
  BoundaryMeasure boundary0, boundary1, boundary2;
};

/// Sides of the threshold test `count >= 2^(-d-1) * cells`, in integers.
inline bool dense_enough(int dim, Index count, Index cells) { return (count << (dim + 1)) >= cells; }

LevelPartition partition_at(const GridFunction& f, const CubeFamily& fam, double lam);

struct DecompositionTerms {
  double term1 = 0.0;  // sigma(d(U q0 u U q1) \ cl{f >= lam})
  double term2 = 0.0;  // sigma(d U q2)
  double lhs = 0.0;    // sigma(d U Q^lam \ cl{f >= lam})
  Index term1_faces = 0, term2_faces = 0, lhs_faces = 0;
  bool holds() const { return lhs_faces <= term1_faces + term2_faces; }
};

DecompositionTerms boundary_decomposition_terms(const LevelPartition& p, const GridFunction& f);

/// A face as (lower cell index, axis).
struct Face {
  Index cell = 0;
  int axis = 0;
};

struct UnionCheck {
  bool holds = true;
  std::optional<Face> counterexample;
};

/// Face-level check of d(A u B) subset of (dA \ cl B) u dB.
UnionCheck boundary_of_union_check(const PixelSet& A, const PixelSet& B);

struct DensityRatio {
  double ratio = 0.0;
  double lhs = 0.0;  // sigma(d(U q0 u U q1) \ cl{f >= lam})
  double rhs = 0.0;  // sigma(d{f >= lam} n U Q^lam)
  bool degenerate = false;  // rhs == 0; ratio is 0 or +inf
};

DensityRatio high_density_ratio(const LevelPartition& p, const GridFunction& f);

/// Per-level CSV: lam,|q0|,|q1|,|q2|,term1,term2,lhs,f_boundary.
struct PartitionRow {
  double lam;
  std::size_t n0, n1, n2;
  double term1, term2, lhs, f_boundary;
};
std::string partition_table_csv(const std::vector<PartitionRow>& rows);

}  // namespace cubemax

#endif  // CUBEMAX_PARTITION_HPP
