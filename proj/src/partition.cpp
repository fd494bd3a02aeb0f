#include "cubemax/partition.hpp"

#include <limits>
#include <sstream>

#include "cubemax/grid_io.hpp"
#include "cubemax/summed_area.hpp"

namespace cubemax {

LevelPartition partition_at(const GridFunction& f, const CubeFamily& fam, double lam) {
  if (!(fam.shape() == f.shape())) throw Error(Errc::dimension_mismatch, "family and function grids differ");
  CubeFamily bound = fam;
  if (!bound.has_averages()) bound.bind(f);
  const int dim = f.dim();

  LevelPartition p;
  p.lam = lam;
  p.superlevel = superlevel(f, lam);
  const CountTable in_level(p.superlevel);

  std::vector<GridCube> rest;
  for (std::size_t k = 0; k < bound.size(); ++k) {
    if (!(bound.average(k) >= lam)) continue;
    const GridCube& q = bound[k];
    if (dense_enough(dim, in_level.cube_count(q.anchor, q.side), cube_cell_count(dim, q.side)))
      p.q0.push_back(q);
    else
      rest.push_back(q);
  }
  p.union0 = cube_union(f.shape(), p.q0);
  const CountTable in_union0(p.union0);
  for (const auto& q : rest) {
    if (dense_enough(dim, in_union0.cube_count(q.anchor, q.side), cube_cell_count(dim, q.side)))
      p.q1.push_back(q);
    else
      p.q2.push_back(q);
  }
  p.union1 = cube_union(f.shape(), p.q1);
  p.union2 = cube_union(f.shape(), p.q2);
  p.union_all = p.union0 | p.union1 | p.union2;
  p.boundary0 = perimeter(p.union0, f.h());
  p.boundary1 = perimeter(p.union1, f.h());
  p.boundary2 = perimeter(p.union2, f.h());
  return p;
}

DecompositionTerms boundary_decomposition_terms(const LevelPartition& p, const GridFunction& f) {
  const double h = f.h();
  const PixelSet u01 = p.union0 | p.union1;
  const auto t1 = perimeter_outside_closure(u01, p.superlevel, h);
  const auto t2 = perimeter(p.union2, h);
  const auto l = perimeter_outside_closure(p.union_all, p.superlevel, h);
  DecompositionTerms out;
  out.term1 = t1.measure;
  out.term2 = t2.measure;
  out.lhs = l.measure;
  out.term1_faces = t1.face_count;
  out.term2_faces = t2.face_count;
  out.lhs_faces = l.face_count;
  return out;
}

UnionCheck boundary_of_union_check(const PixelSet& A, const PixelSet& B) {
  if (!(A.shape() == B.shape())) throw Error(Errc::dimension_mismatch, "pixel set shapes differ");
  UnionCheck out;
  for_each_face(A.shape(), [&](Index a, Index b, int axis) {
    if (!out.holds) return;
    const bool in_union = (A[a] || B[a]) != (A[b] || B[b]);
    if (!in_union) return;
    const bool in_dA_outside_clB = A[a] != A[b] && !B[a] && !B[b];
    const bool in_dB = B[a] != B[b];
    if (!in_dA_outside_clB && !in_dB) {
      out.holds = false;
      out.counterexample = Face{a, axis};
    }
  });
  return out;
}

DensityRatio high_density_ratio(const LevelPartition& p, const GridFunction& f) {
  DensityRatio r;
  r.lhs = perimeter_outside_closure(p.union0 | p.union1, p.superlevel, f.h()).measure;
  r.rhs = perimeter_inside(p.superlevel, p.union_all, f.h()).measure;
  if (r.rhs > 0.0) {
    r.ratio = r.lhs / r.rhs;
  } else {
    r.degenerate = true;
    r.ratio = r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

std::string partition_table_csv(const std::vector<PartitionRow>& rows) {
  std::ostringstream os;
  os << "lam,q0,q1,q2,term1,term2,lhs,f_boundary\n";
  for (const auto& r : rows)
    os << format_double(r.lam) << ',' << r.n0 << ',' << r.n1 << ',' << r.n2 << ',' << format_double(r.term1) << ','
       << format_double(r.term2) << ',' << format_double(r.lhs) << ',' << format_double(r.f_boundary) << '\n';
  return os.str();
}

}  // namespace cubemax
