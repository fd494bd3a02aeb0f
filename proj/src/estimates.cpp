#include "cubemax/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "cubemax/partition.hpp"
#include "cubemax/summed_area.hpp"

namespace cubemax {

namespace {

void require_dyadic_inside(const GridShape& shape, const GridCube& q0) {
  if (!inside_grid(shape, q0)) throw Error(Errc::invalid_argument, "cube outside the grid box");
  if (!is_power_of_two(q0.side)) throw Error(Errc::non_dyadic_side, "cube side is not a power of two");
}

PixelSet cells_of(const GridShape& shape, const GridCube& q) {
  PixelSet u(shape);
  paint(u, q);
  return u;
}

double side_length(const GridCube& q, double h) { return q.side * h; }

// Sums over the level intervals (b[i-1], b[i]] that lie above `floor`.
// `floor` must itself be one of the breakpoints.
template <class Fn>
double integrate_above(const std::vector<double>& b, double floor, Fn&& g) {
  double total = 0.0;
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i - 1] >= floor) total += (b[i] - b[i - 1]) * g(b[i]);
  return total;
}

}  // namespace

SparseMassEstimate sparse_mass_estimate(const GridFunction& f, const GridCube& q0, std::optional<double> lam0) {
  const GridShape& shape = f.shape();
  require_dyadic_inside(shape, q0);
  const int dim = shape.dim;
  const double h = f.h();
  const Index cells = cube_cell_count(dim, q0.side);
  const PixelSet in_q0 = cells_of(shape, q0);

  SparseMassEstimate out;
  Index above = 0;
  if (lam0) {
    out.lam0 = *lam0;
    for (Index i = 0; i < f.size(); ++i)
      if (in_q0[i] && f[i] >= out.lam0) ++above;
  } else {
    // At lam_q0 itself the count may sit above the threshold; the density
    // condition holds for every level just above it.
    out.lam0 = lambda_q(f, q0);
    for (Index i = 0; i < f.size(); ++i)
      if (in_q0[i] && f[i] > out.lam0) ++above;
  }
  if ((above << (dim + 1)) > cells) throw Error(Errc::precondition_density, "level set too dense in q0");

  const SummedAreaTable sat(f);
  const double fq0 = sat.cube_average(q0.anchor, q0.side);
  out.lhs = cells * f.cell_measure() * (fq0 - out.lam0);

  const CubeFamily dy = dyadic_descendants(shape, h, q0);
  std::vector<double> avg(dy.size());
  for (std::size_t k = 0; k < dy.size(); ++k) avg[k] = sat.cube_average(dy[k].anchor, dy[k].side);
  std::vector<double> extra = avg;
  GridFunction restricted = f;
  for (Index i = 0; i < f.size(); ++i)
    if (!in_q0[i]) restricted[i] = fq0;
  const auto b = lambda_breakpoints(restricted, extra);

  const double integral = integrate_above(b, fq0, [&](double lam) {
    const PixelSet E = superlevel(f, lam);
    const CountTable count(E);
    PixelSet u(shape);
    for (std::size_t k = 0; k < dy.size(); ++k) {
      if (!(avg[k] >= lam)) continue;
      const GridCube& q = dy[k];
      if (2 * count.cube_count(q.anchor, q.side) < cube_cell_count(dim, q.side)) paint(u, q);
    }
    return double((u & E).count()) * f.cell_measure();
  });
  out.rhs = std::ldexp(integral, dim + 1);
  return out;
}

MidDensityCover covering_middensity(const PixelSet& E, double h, const GridCube& q0) {
  const GridShape& shape = E.shape();
  require_dyadic_inside(shape, q0);
  const int dim = shape.dim;
  const CountTable count(E);
  if (2 * count.cube_count(q0.anchor, q0.side) >= cube_cell_count(dim, q0.side))
    throw Error(Errc::precondition_density, "E fills at least half of q0");

  const CubeFamily dy = dyadic_descendants(shape, h, q0);
  std::vector<GridCube> band;
  for (const auto& q : dy.cubes()) {
    const Index c = count.cube_count(q.anchor, q.side);
    const Index n = cube_cell_count(dim, q.side);
    if (dense_enough(dim, c, n) && 2 * c < n) band.push_back(q);
  }
  MidDensityCover out{CubeFamily(shape, h, band), std::nullopt};
  const PixelSet covered = cube_union(shape, band);
  const PixelSet in_q0 = cells_of(shape, q0);
  for (Index i = 0; i < E.size(); ++i)
    if (E[i] && in_q0[i] && !covered[i]) {
      out.uncovered = i;
      break;
    }
  return out;
}

double contracted_density(const PixelSet& E, double h, const GridCube& q, double eps) {
  const RealBox box = dilate(E.shape().dim, h, q, (1.0 - eps) * (1.0 - eps));
  return weighted_volume(E, h, box) / box.volume();
}

bool contract_density_check(const PixelSet& E, double h, const GridCube& q, double eps) {
  const double r = contracted_density(E, h, q, eps);
  const double margin = std::ldexp(1.0, -E.shape().dim - 2);
  return margin < r && r < 0.5 + margin;
}

double poincare_ratio(const GridFunction& f, const GridCube& q) {
  const GridShape& shape = f.shape();
  if (!inside_grid(shape, q)) throw Error(Errc::invalid_argument, "cube outside the grid box");
  const PixelSet in_q = cells_of(shape, q);
  const double var = variation(f, &in_q);
  if (!(var > 0.0)) throw Error(Errc::zero_variation_input, "f is constant on the cube");
  const double fq = SummedAreaTable(f).cube_average(q.anchor, q.side);

  const int dim = shape.dim;
  double norm = 0.0;
  if (dim == 1) {
    for (Index i = 0; i < f.size(); ++i)
      if (in_q[i]) norm = std::max(norm, std::abs(f[i] - fq));
  } else {
    const double p = double(dim) / (dim - 1);
    for (Index i = 0; i < f.size(); ++i)
      if (in_q[i]) norm += std::pow(std::abs(f[i] - fq), p);
    norm = std::pow(norm * f.cell_measure(), 1.0 / p);
  }
  return norm / var;
}

double isoperimetric_ratio(const PixelSet& E, double h) {
  const Index n = E.count();
  if (n == 0) return 0.0;
  const int dim = E.shape().dim;
  const double vol = n * std::pow(h, dim);
  const double per = perimeter(E, h).measure;
  const double num = dim == 1 ? 1.0 : std::pow(vol, double(dim - 1) / dim);
  return num / per;
}

std::pair<double, double> isoperimetric_significant(const PixelSet& E, double h, const GridCube& q, double delta) {
  const GridShape& shape = E.shape();
  if (!inside_grid(shape, q)) throw Error(Errc::invalid_argument, "cube outside the grid box");
  const int dim = shape.dim;
  const PixelSet in_q = cells_of(shape, q);
  const Index inside = (E & in_q).count();
  if (double(inside) > (1.0 - delta) * double(cube_cell_count(dim, q.side)))
    throw Error(Errc::precondition_density, "E fills more than 1 - delta of the cube");
  const double sigma = perimeter_inside(E, in_q, h).measure;
  const double vol = inside * std::pow(h, dim);
  return {std::pow(sigma, dim), std::pow(vol, dim - 1)};
}

namespace {

struct SeedCube {
  GridCube q0;
  double avg = 0.0;
  double lam = 0.0;
  std::vector<GridCube> dy;
  std::vector<double> chain_max;  // max of f_P over dyadic ancestors P of dy[k] in q0, self included
  double mass_above = 0.0;        // integral of |U D^lam(q0)| above f_q0
};

std::string describe(const char* what, double lam) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at lam=" << lam;
  return os.str();
}

}  // namespace

TheoremReport theorem_main_evaluate(const GridFunction& f, const CubeFamily& fam, const TheoremOptions& opt) {
  if (!(fam.shape() == f.shape())) throw Error(Errc::dimension_mismatch, "family and function grids differ");
  if (auto w = dyadic_completeness_witness(fam)) throw Error(Errc::not_dyadically_complete, "family is not dyadically complete");

  const GridShape& shape = f.shape();
  const int dim = shape.dim;
  const double h = f.h();
  TheoremReport rep;
  rep.eps = opt.eps < 0.0 ? default_contraction(dim) : opt.eps;
  const double shrink = (1.0 - rep.eps) * (1.0 - rep.eps);
  rep.family_size = fam.size();

  CubeFamily full = fam;
  full.bind(f);
  const CubeFamily reduced = maximal_cube_reduction(full, f);
  rep.reduced_size = reduced.size();
  const PixelSet all_union = full.cell_union();
  const SummedAreaTable sat(f);

  // Sparse family from the low-density cubes of the reduced family.
  SparseFamily sparse;
  std::vector<SeedCube> seeds;
  if (opt.proof_chain) {
    const Q2Collection q2 = collect_q2(f, reduced);
    sparse = greedy_sparse(f, q2.cubes);
    for (std::size_t k = 0; k < sparse.cubes.size(); ++k) {
      const GridCube& q0 = sparse.cubes[k];
      SeedCube s{q0, sparse.averages[k], sparse.lambdas[k], {}, {}, 0.0};
      if (is_power_of_two(q0.side)) {
        const CubeFamily dy = dyadic_descendants(shape, h, q0);
        s.dy.assign(dy.cubes().begin(), dy.cubes().end());
        // Canonical order lists parents before children.
        std::map<GridCube, double> best;
        s.chain_max.resize(s.dy.size());
        for (std::size_t j = 0; j < s.dy.size(); ++j) {
          const GridCube& q = s.dy[j];
          double m = sat.cube_average(q.anchor, q.side);
          if (q.side < q0.side) {
            GridCube parent{q0.anchor, q.side * 2};
            for (int a = 0; a < dim; ++a)
              parent.anchor[a] = q0.anchor[a] + ((q.anchor[a] - q0.anchor[a]) / parent.side) * parent.side;
            m = std::max(m, best.at(parent));
          }
          best[q] = m;
          s.chain_max[j] = m;
        }
      }
      seeds.push_back(std::move(s));
    }
  }
  rep.sparse_size = sparse.cubes.size();
  rep.sparse_rhs_sum = sparse.rhs_sum;
  PixelSet sparse_union = cube_union(shape, sparse.cubes);

  std::vector<double> extra(full.averages().begin(), full.averages().end());
  for (const auto& s : seeds)
    for (const auto& q : s.dy) extra.push_back(sat.cube_average(q.anchor, q.side));
  const auto b = lambda_breakpoints(f, extra);
  rep.breakpoints = b.size();

  rep.volume_to_boundary_min = std::numeric_limits<double>::infinity();
  DFamilies prev_D;
  std::vector<GridCube> prev_S;
  OverlapFamily prev_F;
  bool have_prev = false;

  for (std::size_t i = 1; i < b.size(); ++i) {
    const double lam = b[i];
    TheoremRow row;
    row.lam = lam;
    row.weight = b[i] - b[i - 1];

    const LevelPartition p = partition_at(f, reduced, lam);
    const DecompositionTerms t = boundary_decomposition_terms(p, f);
    const PixelSet& E = p.superlevel;
    row.n0 = p.q0.size();
    row.n1 = p.q1.size();
    row.n2 = p.q2.size();
    row.term1 = t.term1;
    row.term2 = t.term2;
    row.lhs = t.lhs;
    row.rhs = perimeter_inside(E, all_union, h).measure;
    if (!t.holds()) {
      ++rep.decomposition_failures;
      rep.violations.push_back(describe("boundary decomposition fails", lam));
    }
    const DensityRatio hd = high_density_ratio(p, f);
    row.hd_rhs = hd.rhs;
    if (!hd.degenerate) rep.high_density_ratio_max = std::max(rep.high_density_ratio_max, hd.ratio);

    if (opt.proof_chain && !seeds.empty()) {
      const CountTable count(E);
      std::vector<GridCube> S_lam;
      DFamilies D;
      for (auto& s : seeds) {
        if (s.dy.empty()) continue;
        std::vector<GridCube> dq;
        PixelSet u(shape);
        for (std::size_t j = 0; j < s.dy.size(); ++j) {
          if (!(s.chain_max[j] >= lam)) continue;
          const GridCube& q = s.dy[j];
          const Index c = count.cube_count(q.anchor, q.side);
          const Index n = cube_cell_count(dim, q.side);
          if (dense_enough(dim, c, n) && 2 * c < n) {
            dq.push_back(q);
            paint(u, q);
          }
        }
        // The integrand on (b[i-1], b[i]] counts once b[i-1] >= f_q0.
        if (b[i - 1] >= s.avg) {
          s.mass_above += row.weight * double(u.count()) * f.cell_measure();
          S_lam.push_back(s.q0);
          D[s.q0] = std::move(dq);
        }
      }
      row.n_s = S_lam.size();

      OverlapFamily F;
      if (have_prev && D == prev_D && S_lam == prev_S) {
        F = prev_F;
      } else {
        F = disjoint_select(shape, h, S_lam, D, rep.eps);
        prev_D = D;
        prev_S = S_lam;
        prev_F = F;
        have_prev = true;
      }
      std::size_t nd = 0;
      for (const auto& [q0, dq] : D) nd += dq.size();
      row.n_d = nd;
      row.n_f = F.cubes.size();
      row.C = F.C;
      rep.C_max = std::max(rep.C_max, F.C);
      rep.C1_max = std::max(rep.C1_max, F.C1);
      rep.C2_max = std::max(rep.C2_max, F.C2);

      row.disjoint_rhs = perimeter_inside(E, sparse_union, h).measure;
      for (const auto& q : F.cubes) {
        const RealBox inner = dilate(dim, h, q, shrink);
        const double sigma = weighted_boundary(E, h, inner);
        row.disjoint_lhs += sigma;
        const double l = side_length(q, h);
        rep.volume_to_boundary_min = std::min(rep.volume_to_boundary_min, sigma / std::pow(l, dim - 1));

        double inv = 0.0;
        const RealBox bq = extent(dim, h, q);
        for (const auto& q0 : sparse.cubes)
          if (dilate(dim, h, q0, std::max(F.C2, 1.0)).contains(bq)) inv += 1.0 / side_length(q0, h);
        rep.massbelow_max = std::max(rep.massbelow_max, l * inv);
        row.level_lhs += std::pow(l, dim) * inv;
      }
      if (row.disjoint_lhs > F.C * row.disjoint_rhs * (1.0 + 1e-12) + 1e-12) {
        ++rep.disjoint_failures;
        rep.violations.push_back(describe("bounded-overlap boundary sum exceeds C times the sparse boundary", lam));
      }
      if (row.disjoint_rhs > 0.0) rep.level_ratio_max = std::max(rep.level_ratio_max, row.level_lhs / row.disjoint_rhs);
    }

    rep.lhs += row.weight * row.lhs;
    rep.rhs += row.weight * row.rhs;
    rep.high_density_integral += row.weight * row.term1;
    rep.q2_integral += row.weight * row.term2;
    rep.high_density_rhs += row.weight * row.hd_rhs;
    rep.mass_above_integral += row.weight * row.level_lhs;
    rep.sparse_boundary_integral += row.weight * row.disjoint_rhs;
    rep.rows.push_back(row);
  }
  if (!std::isfinite(rep.volume_to_boundary_min)) rep.volume_to_boundary_min = 0.0;

  for (const auto& r : rep.rows) rep.lhs_from_table += r.weight * r.lhs;
  if (rep.rhs > 0.0)
    rep.ratio = rep.lhs / rep.rhs;
  else
    rep.ratio = rep.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (rep.sparse_rhs_sum > 0.0) rep.todyadic_ratio = rep.q2_integral / rep.sparse_rhs_sum;

  for (const auto& s : seeds) {
    if (s.dy.empty()) continue;
    const double left = (s.avg - s.lam) * cube_surface(dim, h, s.q0);
    const double right = s.mass_above / side_length(s.q0, h);
    if (right > 0.0) rep.massabove_ratio_max = std::max(rep.massabove_ratio_max, left / right);
    const SparseMassEstimate est = sparse_mass_estimate(f, s.q0);
    if (est.rhs > 0.0) rep.sparse_mass_ratio_max = std::max(rep.sparse_mass_ratio_max, est.lhs / est.rhs);
    // Counted, not a violation: the estimate has known counterexamples.
    if (!est.holds()) ++rep.sparse_mass_failures;
  }

  if (opt.cap > 0.0 && rep.lhs > opt.cap * rep.rhs)
    rep.violations.push_back(describe("boundary estimate exceeds the configured cap", rep.ratio));
  return rep;
}

}  // namespace cubemax
