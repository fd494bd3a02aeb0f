#include "cubemax/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubemax/partition.hpp"
#include "cubemax/summed_area.hpp"

namespace cubemax {

double lambda_q(const GridFunction& f, const GridCube& q) {
  const GridShape& shape = f.shape();
  if (!inside_grid(shape, q)) throw Error(Errc::invalid_argument, "cube outside the grid box");
  std::vector<double> vals;
  vals.reserve(std::size_t(cube_cell_count(shape.dim, q.side)));
  const int e1 = shape.dim > 1 ? q.side : 1;
  const int e2 = shape.dim > 2 ? q.side : 1;
  for (int i0 = 0; i0 < q.side; ++i0)
    for (int i1 = 0; i1 < e1; ++i1)
      for (int i2 = 0; i2 < e2; ++i2) vals.push_back(f.at({q.anchor[0] + i0, q.anchor[1] + i1, q.anchor[2] + i2}));
  const std::size_t t = vals.size() >> (shape.dim + 1);
  std::nth_element(vals.begin(), vals.begin() + std::ptrdiff_t(t), vals.end(), std::greater<>());
  return vals[t];
}

double cube_surface(int dim, double h, const GridCube& q) {
  return 2.0 * dim * std::pow(q.side * h, dim - 1);
}

SparseFamily greedy_sparse(const GridFunction& f, const CubeFamily& candidates) {
  CubeFamily R = candidates;
  if (!R.has_averages()) R.bind(f);
  const int dim = f.dim();
  const double h = f.h();

  std::vector<std::size_t> alive(R.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  SparseFamily out;
  while (!alive.empty()) {
    ++out.iterations;
    int top = std::numeric_limits<int>::min();
    for (auto i : alive) top = std::max(top, scale_of(R[i].side, h));
    // Canonical order inside `alive` makes the first maximizer the tie winner.
    std::size_t pick = alive.front();
    bool found = false;
    for (auto i : alive) {
      if (scale_of(R[i].side, h) != top) continue;
      if (!found || R.average(i) > R.average(pick)) {
        pick = i;
        found = true;
      }
    }
    const GridCube& S = R[pick];
    const double fS = R.average(pick);
    const Index cellsS = cube_cell_count(dim, S.side);
    out.cubes.push_back(S);
    out.averages.push_back(fS);
    out.lambdas.push_back(lambda_q(f, S));
    out.rhs_sum += (fS - out.lambdas.back()) * cube_surface(dim, h, S);

    std::erase_if(alive, [&](std::size_t i) {
      const Index cellsQ = cube_cell_count(dim, R[i].side);
      return R.average(i) <= fS && 2 * overlap_cells(dim, R[i], S) >= std::min(cellsQ, cellsS);
    });
  }
  return out;
}

std::vector<PairViolation> audit_sparse(const SparseFamily& s, int dim, double h) {
  std::vector<PairViolation> bad;
  for (std::size_t q = 0; q < s.cubes.size(); ++q)
    for (std::size_t r = 0; r < s.cubes.size(); ++r) {
      if (q == r || s.cubes[r].side > s.cubes[q].side) continue;
      const bool small_overlap =
          2 * overlap_cells(dim, s.cubes[r], s.cubes[q]) < cube_cell_count(dim, s.cubes[r].side);
      const bool separated =
          scale_of(s.cubes[r].side, h) < scale_of(s.cubes[q].side, h) && s.averages[r] > s.averages[q];
      if (!small_overlap && !separated) bad.push_back({q, r});
    }
  return bad;
}

Q2Collection collect_q2(const GridFunction& f, const CubeFamily& fam) {
  CubeFamily bound = fam;
  if (!bound.has_averages()) bound.bind(f);
  const auto bp = lambda_breakpoints(f, bound.averages());
  Q2Collection out{CubeFamily(f.shape(), f.h()), 0.0};
  std::vector<GridCube> all;
  // Every set below is constant for lam in (bp[j-1], bp[j]]; lam <= bp[0]
  // puts every cube in q0.
  for (std::size_t j = 1; j < bp.size(); ++j) {
    const LevelPartition p = partition_at(f, bound, bp[j]);
    out.boundary_integral += (bp[j] - bp[j - 1]) * p.boundary2.measure;
    all.insert(all.end(), p.q2.begin(), p.q2.end());
  }
  out.cubes.insert(all);
  return out;
}

SignificantMass significant_mass_bound(const GridFunction& f, const CubeFamily& fam) {
  Q2Collection q2 = collect_q2(f, fam);
  SignificantMass out;
  out.lhs = q2.boundary_integral;
  out.sparse = greedy_sparse(f, q2.cubes);
  out.rhs = out.sparse.rhs_sum;
  return out;
}

double default_contraction(int dim) { return std::ldexp(1.0, -dim - 3) / dim; }

OverlapFamily disjoint_select(const GridShape& shape, double h, const std::vector<GridCube>& S,
                              const DFamilies& D, double eps) {
  const int dim = shape.dim;
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(Errc::invalid_argument, "eps must lie in [0, 1)");

  std::vector<GridCube> all;
  for (const auto& [q0, cubes] : D)
    for (const auto& q : cubes) {
      if (!contains(dim, q0, q)) throw Error(Errc::premise_violated, "a D(Q0) cube is not inside Q0");
      all.push_back(q);
    }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (const auto& s : S)
    for (const auto& q : all)
      if (q.side > s.side && contains(dim, q, s))
        throw Error(Errc::premise_violated, "a cube of S lies strictly inside a cube of D");

  OverlapFamily out;
  out.eps = eps;
  const double contract = 1.0 - eps;
  const double contract2 = contract * contract;

  // D~: cubes not inside the (1 - eps) contraction of another cube of D.
  std::vector<GridCube> reduced;
  for (const auto& q : all) {
    const RealBox bq = extent(dim, h, q);
    bool covered = false;
    for (const auto& p : all)
      if (p.side > q.side && dilate(dim, h, p, contract).contains(bq, 0.0)) {
        covered = true;
        break;
      }
    if (!covered) reduced.push_back(q);
  }
  out.reduced_size = reduced.size();

  // Per scale, a maximal subfamily with pairwise disjoint (1-eps)^2 dilates.
  std::map<int, std::vector<GridCube>> by_scale;
  for (const auto& q : reduced) by_scale[scale_of(q.side, h)].push_back(q);
  for (auto& [n, cubes] : by_scale) {
    std::vector<RealBox> chosen;
    for (const auto& q : cubes) {
      const RealBox bq = dilate(dim, h, q, contract2);
      if (std::none_of(chosen.begin(), chosen.end(), [&](const RealBox& b) { return b.intersects(bq); })) {
        chosen.push_back(bq);
        out.cubes.push_back(q);
      }
    }
  }
  std::sort(out.cubes.begin(), out.cubes.end());

  out.C = dilate_overlap_count(dim, h, out.cubes, contract2);

  for (const auto& [q0, cubes] : D) {
    const RealBox b0 = extent(dim, h, q0);
    for (const auto& q : cubes) {
      const RealBox bq = extent(dim, h, q);
      double best = std::numeric_limits<double>::infinity();
      double c1 = 0.0, c2 = 0.0;
      for (const auto& p : out.cubes) {
        const RealBox bp = extent(dim, h, p);
        const double k1 = containment_factor(bq, bp);
        const double k2 = containment_factor(bp, b0);
        if (std::max(k1, k2) < best) {
          best = std::max(k1, k2);
          c1 = k1;
          c2 = k2;
        }
      }
      out.C1 = std::max(out.C1, c1);
      out.C2 = std::max(out.C2, c2);
    }
  }
  return out;
}

int dilate_overlap_count(int dim, double h, const std::vector<GridCube>& cubes, double K) {
  std::vector<RealBox> boxes;
  boxes.reserve(cubes.size());
  for (const auto& q : cubes) boxes.push_back(dilate(dim, h, q, K));
  return max_pointwise_overlap(boxes);
}

}  // namespace cubemax
