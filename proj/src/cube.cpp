#include "cubemax/cube.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cubemax/summed_area.hpp"

namespace cubemax {

std::size_t GridCubeHash::operator()(const GridCube& q) const noexcept {
  std::size_t h = std::hash<int>{}(q.side);
  for (int a : q.anchor) h = h * 1000003u ^ std::hash<int>{}(a);
  return h;
}

Index cube_cell_count(int dim, int side) {
  Index n = 1;
  for (int a = 0; a < dim; ++a) n *= side;
  return n;
}

bool is_power_of_two(int side) { return side > 0 && (side & (side - 1)) == 0; }

int scale_of(int side, double h) {
  int e = 0;
  std::frexp(double(side) * h, &e);  // side*h = m * 2^e, m in [1/2, 1)
  return e - 1;
}

bool inside_grid(const GridShape& shape, const GridCube& q) {
  if (q.side < 1) return false;
  for (int a = 0; a < shape.dim; ++a)
    if (q.anchor[a] < 0 || q.anchor[a] + q.side > shape.n[a]) return false;
  return true;
}

bool contains(int dim, const GridCube& outer, const GridCube& inner) {
  for (int a = 0; a < dim; ++a)
    if (inner.anchor[a] < outer.anchor[a] || inner.anchor[a] + inner.side > outer.anchor[a] + outer.side)
      return false;
  return true;
}

bool contains_cell(int dim, const GridCube& q, const Coord& c) {
  for (int a = 0; a < dim; ++a)
    if (c[a] < q.anchor[a] || c[a] >= q.anchor[a] + q.side) return false;
  return true;
}

Index overlap_cells(int dim, const GridCube& a, const GridCube& b) {
  Index n = 1;
  for (int ax = 0; ax < dim; ++ax) {
    const int lo = std::max(a.anchor[ax], b.anchor[ax]);
    const int hi = std::min(a.anchor[ax] + a.side, b.anchor[ax] + b.side);
    if (hi <= lo) return 0;
    n *= hi - lo;
  }
  return n;
}

double intersection_volume(int dim, double h, const GridCube& a, const GridCube& b) {
  return double(overlap_cells(dim, a, b)) * std::pow(h, dim);
}

void paint(PixelSet& U, const GridCube& q) {
  const GridShape& s = U.shape();
  const int e1 = s.dim > 1 ? q.side : 1;
  const int e2 = s.dim > 2 ? q.side : 1;
  for (int i0 = 0; i0 < q.side; ++i0)
    for (int i1 = 0; i1 < e1; ++i1)
      for (int i2 = 0; i2 < e2; ++i2)
        U.set(Coord{q.anchor[0] + i0, q.anchor[1] + i1, q.anchor[2] + i2});
}

PixelSet cube_union(const GridShape& shape, std::span<const GridCube> cubes) {
  PixelSet U(shape);
  for (const auto& q : cubes) paint(U, q);
  return U;
}

// RealBox ------------------------------------------------------------------

double RealBox::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= std::max(0.0, hi[a] - lo[a]);
  return v;
}

std::array<double, 3> RealBox::center() const {
  std::array<double, 3> c{0, 0, 0};
  for (int a = 0; a < dim; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

bool RealBox::contains(const RealBox& o, double slack) const {
  for (int a = 0; a < dim; ++a) {
    const double tol = slack * std::max({1.0, std::abs(lo[a]), std::abs(hi[a])});
    if (o.lo[a] < lo[a] - tol || o.hi[a] > hi[a] + tol) return false;
  }
  return true;
}

bool RealBox::intersects(const RealBox& o) const {
  for (int a = 0; a < dim; ++a)
    if (std::min(hi[a], o.hi[a]) <= std::max(lo[a], o.lo[a])) return false;
  return true;
}

double RealBox::intersection_volume(const RealBox& o) const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double len = std::min(hi[a], o.hi[a]) - std::max(lo[a], o.lo[a]);
    if (len <= 0.0) return 0.0;
    v *= len;
  }
  return v;
}

RealBox extent(int dim, double h, const GridCube& q) {
  RealBox b;
  b.dim = dim;
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = q.anchor[a] * h;
    b.hi[a] = (q.anchor[a] + q.side) * h;
  }
  return b;
}

RealBox dilate(const RealBox& box, double K) {
  if (!(K > 0.0)) throw Error(Errc::invalid_argument, "dilation factor must be positive");
  RealBox b = box;
  for (int a = 0; a < box.dim; ++a) {
    const double c = 0.5 * (box.lo[a] + box.hi[a]);
    const double r = 0.5 * (box.hi[a] - box.lo[a]) * K;
    b.lo[a] = c - r;
    b.hi[a] = c + r;
  }
  return b;
}

RealBox dilate(int dim, double h, const GridCube& q, double K) { return dilate(extent(dim, h, q), K); }

double containment_factor(const RealBox& inner, const RealBox& outer) {
  double K = 0.0;
  for (int a = 0; a < outer.dim; ++a) {
    const double c = 0.5 * (outer.lo[a] + outer.hi[a]);
    const double r = 0.5 * (outer.hi[a] - outer.lo[a]);
    K = std::max({K, std::abs(inner.lo[a] - c) / r, std::abs(inner.hi[a] - c) / r});
  }
  return K;
}

namespace {

// Cell index range [first, last) overlapping [lo, hi] on one axis.
std::pair<int, int> cell_range(double lo, double hi, double h, int n) {
  const int first = std::clamp(static_cast<int>(std::floor(lo / h)), 0, n);
  const int last = std::clamp(static_cast<int>(std::ceil(hi / h)) + 1, 0, n);
  return {first, std::max(first, last)};
}

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

double weighted_volume(const PixelSet& E, double h, const RealBox& box) {
  const GridShape& s = E.shape();
  std::array<std::pair<int, int>, 3> r{{{0, 1}, {0, 1}, {0, 1}}};
  for (int a = 0; a < s.dim; ++a) r[a] = cell_range(box.lo[a], box.hi[a], h, s.n[a]);
  double total = 0.0;
  for (int i0 = r[0].first; i0 < r[0].second; ++i0)
    for (int i1 = r[1].first; i1 < r[1].second; ++i1)
      for (int i2 = r[2].first; i2 < r[2].second; ++i2) {
        const Coord c{i0, i1, i2};
        if (!E.contains(c)) continue;
        double w = 1.0;
        for (int a = 0; a < s.dim && w > 0.0; ++a)
          w *= overlap_1d(c[a] * h, (c[a] + 1) * h, box.lo[a], box.hi[a]);
        total += w;
      }
  return total;
}

double weighted_boundary(const PixelSet& E, double h, const RealBox& box) {
  const GridShape& s = E.shape();
  std::array<std::pair<int, int>, 3> r{{{0, 1}, {0, 1}, {0, 1}}};
  for (int a = 0; a < s.dim; ++a) r[a] = cell_range(box.lo[a], box.hi[a], h, s.n[a]);
  double total = 0.0;
  for (int axis = 0; axis < s.dim; ++axis) {
    const Index stride = s.stride(axis);
    for (int i0 = r[0].first; i0 < r[0].second; ++i0)
      for (int i1 = r[1].first; i1 < r[1].second; ++i1)
        for (int i2 = r[2].first; i2 < r[2].second; ++i2) {
          const Coord c{i0, i1, i2};
          if (c[axis] + 1 >= s.n[axis]) continue;
          const Index i = s.index(c);
          if (E[i] == E[i + stride]) continue;
          const double x = (c[axis] + 1) * h;
          if (!(box.lo[axis] < x && x < box.hi[axis])) continue;
          double w = 1.0;
          for (int a = 0; a < s.dim && w > 0.0; ++a)
            if (a != axis) w *= overlap_1d(c[a] * h, (c[a] + 1) * h, box.lo[a], box.hi[a]);
          total += w;
        }
  }
  return total;
}

int max_pointwise_overlap(std::span<const RealBox> boxes) {
  if (boxes.empty()) return 0;
  const int dim = boxes.front().dim;
  std::array<std::vector<double>, 3> coords;
  for (int a = 0; a < dim; ++a) {
    for (const auto& b : boxes) {
      coords[a].push_back(b.lo[a]);
      coords[a].push_back(b.hi[a]);
    }
    std::sort(coords[a].begin(), coords[a].end());
    coords[a].erase(std::unique(coords[a].begin(), coords[a].end()), coords[a].end());
  }
  // Elementary open cells between consecutive coordinates; each box covers
  // a contiguous index range of them.
  std::array<Index, 3> k{1, 1, 1};
  for (int a = 0; a < dim; ++a) k[a] = Index(coords[a].size());  // cells + 1 difference slot
  const Index total = k[0] * k[1] * k[2];
  if (total > (Index(1) << 26)) throw Error(Errc::invalid_argument, "overlap arrangement too large");
  std::vector<int> diff(static_cast<std::size_t>(total), 0);
  auto idx = [&](const std::array<Index, 3>& p) { return (p[0] * k[1] + p[1]) * k[2] + p[2]; };
  for (const auto& b : boxes) {
    if (b.volume() <= 0.0) continue;
    std::array<Index, 3> lo{0, 0, 0}, hi{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
      lo[a] = std::lower_bound(coords[a].begin(), coords[a].end(), b.lo[a]) - coords[a].begin();
      hi[a] = std::lower_bound(coords[a].begin(), coords[a].end(), b.hi[a]) - coords[a].begin();
    }
    for (int m = 0; m < (1 << dim); ++m) {
      std::array<Index, 3> p{0, 0, 0};
      int parity = 0;
      for (int a = 0; a < dim; ++a) {
        if (m & (1 << a)) {
          p[a] = hi[a];
          ++parity;
        } else {
          p[a] = lo[a];
        }
      }
      diff[static_cast<std::size_t>(idx(p))] += (parity & 1) ? -1 : 1;
    }
  }
  for (int a = 0; a < dim; ++a) {
    const Index stride = a == 0 ? k[1] * k[2] : a == 1 ? k[2] : 1;
    for (Index i = 0; i < total; ++i)
      if ((i / stride) % k[a] >= 1) diff[static_cast<std::size_t>(i)] += diff[static_cast<std::size_t>(i - stride)];
  }
  return *std::max_element(diff.begin(), diff.end());
}

// CubeFamily ---------------------------------------------------------------

CubeFamily::CubeFamily(GridShape shape, double h, std::vector<GridCube> cubes)
    : shape_(shape), h_(h), cubes_(std::move(cubes)) {
  if (!(h_ > 0.0)) throw Error(Errc::invalid_argument, "h must be positive");
  for (const auto& q : cubes_)
    if (!inside_grid(shape_, q)) throw Error(Errc::invalid_argument, "cube outside the grid box");
  normalize();
}

void CubeFamily::normalize() {
  for (auto& q : cubes_)
    for (int a = shape_.dim; a < 3; ++a) q.anchor[a] = 0;
  std::sort(cubes_.begin(), cubes_.end());
  cubes_.erase(std::unique(cubes_.begin(), cubes_.end()), cubes_.end());
  averages_.clear();
}

bool CubeFamily::contains(const GridCube& q) const {
  return std::binary_search(cubes_.begin(), cubes_.end(), q);
}

void CubeFamily::insert(const GridCube& q) { insert(std::span<const GridCube>(&q, 1)); }

void CubeFamily::insert(std::span<const GridCube> qs) {
  for (const auto& q : qs) {
    if (!inside_grid(shape_, q)) throw Error(Errc::invalid_argument, "cube outside the grid box");
    cubes_.push_back(q);
  }
  normalize();
}

void CubeFamily::bind(const GridFunction& f) {
  if (!(f.shape() == shape_)) throw Error(Errc::dimension_mismatch, "family and function grids differ");
  const SummedAreaTable sat(f);
  averages_.resize(cubes_.size());
  for (std::size_t i = 0; i < cubes_.size(); ++i)
    averages_[i] = sat.cube_average(cubes_[i].anchor, cubes_[i].side);
}

// Dyadic structure ----------------------------------------------------------

CubeFamily dyadic_descendants(const GridShape& shape, double h, const GridCube& q0) {
  if (!is_power_of_two(q0.side))
    throw Error(Errc::non_dyadic_side, "side " + std::to_string(q0.side) + " is not a power of two");
  std::vector<GridCube> out;
  const int dim = shape.dim;
  for (int s = q0.side; s >= 1; s /= 2) {
    const int k = q0.side / s;
    const int k1 = dim > 1 ? k : 1;
    const int k2 = dim > 2 ? k : 1;
    for (int i0 = 0; i0 < k; ++i0)
      for (int i1 = 0; i1 < k1; ++i1)
        for (int i2 = 0; i2 < k2; ++i2) {
          GridCube q{q0.anchor, s};
          q.anchor[0] += i0 * s;
          if (dim > 1) q.anchor[1] += i1 * s;
          if (dim > 2) q.anchor[2] += i2 * s;
          out.push_back(q);
        }
  }
  return CubeFamily(shape, h, std::move(out));
}

std::vector<GridCube> dyadic_ancestors_within(int dim, const GridCube& q0, const GridCube& p) {
  std::vector<GridCube> chain;
  if (!is_power_of_two(q0.side) || !contains(dim, q0, p)) return chain;
  for (int s = q0.side; s >= p.side; s /= 2) {
    GridCube q{q0.anchor, s};
    for (int a = 0; a < dim; ++a) q.anchor[a] = q0.anchor[a] + ((p.anchor[a] - q0.anchor[a]) / s) * s;
    if (!contains(dim, q, p)) break;
    chain.push_back(q);
  }
  return chain;
}

namespace {

// Visits every (Q0, P) pair with P strictly inside a power-of-two Q0 and
// every dyadic cube of Q0 containing P. Stops when visit returns false.
template <class Visit>
void for_each_required(std::span<const GridCube> cubes, int dim, Visit&& visit) {
  for (const auto& q0 : cubes) {
    if (!is_power_of_two(q0.side) || q0.side == 1) continue;
    for (const auto& p : cubes) {
      if (p.side >= q0.side || !contains(dim, q0, p)) continue;
      for (const auto& q : dyadic_ancestors_within(dim, q0, p))
        if (!visit(q)) return;
    }
  }
}

}  // namespace

std::optional<GridCube> dyadic_completeness_witness(const CubeFamily& fam) {
  std::optional<GridCube> missing;
  for_each_required(fam.cubes(), fam.dim(), [&](const GridCube& q) {
    if (fam.contains(q)) return true;
    missing = q;
    return false;
  });
  return missing;
}

CubeFamily dyadic_completion(const CubeFamily& fam) {
  CubeFamily out = fam;
  for (;;) {
    std::unordered_set<GridCube, GridCubeHash> add;
    for_each_required(out.cubes(), out.dim(), [&](const GridCube& q) {
      if (!out.contains(q)) add.insert(q);
      return true;
    });
    if (add.empty()) return out;
    std::vector<GridCube> v(add.begin(), add.end());
    out.insert(v);
  }
}

CubeFamily maximal_cube_reduction(const CubeFamily& fam, const GridFunction& f) {
  CubeFamily bound = fam;
  if (!bound.has_averages()) bound.bind(f);
  const auto cubes = bound.cubes();
  std::vector<GridCube> keep;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    bool maximal = true;
    // Strict supersets are larger, hence earlier in canonical order.
    for (std::size_t j = 0; j < i && maximal; ++j)
      if (cubes[j].side > cubes[i].side && contains(fam.dim(), cubes[j], cubes[i]))
        maximal = bound.average(i) > bound.average(j);
    if (maximal) keep.push_back(cubes[i]);
  }
  CubeFamily out(fam.shape(), fam.h(), std::move(keep));
  out.bind(f);
  return out;
}

CubeFamily all_cubes(const GridShape& shape, double h) {
  std::vector<GridCube> out;
  for (int s = 1; s <= shape.min_extent(); ++s) {
    const int m0 = shape.n[0] - s + 1;
    const int m1 = shape.dim > 1 ? shape.n[1] - s + 1 : 1;
    const int m2 = shape.dim > 2 ? shape.n[2] - s + 1 : 1;
    for (int i0 = 0; i0 < m0; ++i0)
      for (int i1 = 0; i1 < m1; ++i1)
        for (int i2 = 0; i2 < m2; ++i2) out.push_back(GridCube{{i0, i1, i2}, s});
  }
  return CubeFamily(shape, h, std::move(out));
}

}  // namespace cubemax
