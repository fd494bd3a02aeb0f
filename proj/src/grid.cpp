#include "cubemax/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubemax {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::non_dyadic_side: return "NonDyadicSide";
    case Errc::empty_domain: return "EmptyDomain";
    case Errc::zero_variation_input: return "ZeroVariationInput";
    case Errc::precondition_density: return "PreconditionDensity";
    case Errc::premise_violated: return "PremiseViolated";
    case Errc::not_dyadically_complete: return "NotDyadicallyComplete";
    case Errc::unsupported_dimension: return "UnsupportedDimension";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

GridShape::GridShape(std::span<const int> dims) {
  if (dims.empty() || dims.size() > 3)
    throw Error(Errc::invalid_argument, "grid dimension must be 1, 2 or 3");
  dim = static_cast<int>(dims.size());
  for (int a = 0; a < dim; ++a) {
    if (dims[a] <= 0) throw Error(Errc::invalid_argument, "grid extents must be positive");
    n[a] = dims[a];
  }
}

GridShape::GridShape(std::initializer_list<int> dims)
    : GridShape(std::span<const int>(dims.begin(), dims.size())) {}

Index GridShape::stride(int axis) const {
  switch (axis) {
    case 0: return Index(n[1]) * n[2];
    case 1: return n[2];
    default: return 1;
  }
}

Coord GridShape::coord(Index i) const {
  Coord c;
  c[2] = static_cast<int>(i % n[2]);
  i /= n[2];
  c[1] = static_cast<int>(i % n[1]);
  c[0] = static_cast<int>(i / n[1]);
  return c;
}

int GridShape::min_extent() const { return *std::min_element(n.begin(), n.begin() + dim); }

GridFunction::GridFunction(GridShape shape, double h, Eigen::ArrayXd values)
    : shape_(shape), h_(h), values_(std::move(values)) {
  if (shape_.dim < 1 || shape_.dim > 3)
    throw Error(Errc::invalid_argument, "grid dimension must be 1, 2 or 3");
  if (values_.size() != shape_.size())
    throw Error(Errc::invalid_argument, "values length does not match the grid shape");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(Errc::invalid_argument, "h must be positive");
  if (!values_.isFinite().all()) throw Error(Errc::invalid_argument, "values must be finite");
}

GridFunction::GridFunction(GridShape shape, double h, const std::vector<double>& values)
    : GridFunction(shape, h, Eigen::Map<const Eigen::ArrayXd>(values.data(), Index(values.size()))) {}

GridFunction::GridFunction(GridShape shape, double h, double value)
    : GridFunction(shape, h, Eigen::ArrayXd::Constant(shape.size(), value)) {}

GridFunction GridFunction::with_sentinels(GridShape shape, double h, Eigen::ArrayXd values) {
  GridFunction g;
  g.shape_ = shape;
  g.h_ = h;
  g.values_ = std::move(values);
  return g;
}

double GridFunction::face_measure() const { return std::pow(h_, shape_.dim - 1); }
double GridFunction::cell_measure() const { return std::pow(h_, shape_.dim); }

PixelSet::PixelSet(GridShape shape, bool fill)
    : shape_(shape), bits_(static_cast<std::size_t>(shape.size()), fill ? 1 : 0) {}

Index PixelSet::count() const {
  return std::accumulate(bits_.begin(), bits_.end(), Index{0});
}

bool PixelSet::subset_of(const PixelSet& o) const {
  if (!(shape_ == o.shape_)) throw Error(Errc::dimension_mismatch, "pixel set shapes differ");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !o.bits_[i]) return false;
  return true;
}

namespace {
void require_same(const GridShape& a, const GridShape& b) {
  if (!(a == b)) throw Error(Errc::dimension_mismatch, "pixel set shapes differ");
}
}  // namespace

PixelSet& PixelSet::operator|=(const PixelSet& o) {
  require_same(shape_, o.shape_);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

PixelSet& PixelSet::operator&=(const PixelSet& o) {
  require_same(shape_, o.shape_);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

PixelSet& PixelSet::operator-=(const PixelSet& o) {
  require_same(shape_, o.shape_);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] && !o.bits_[i];
  return *this;
}

BoundaryMeasure make_boundary_measure(Index faces, int dim, double h) {
  return {faces, double(faces) * std::pow(h, dim - 1)};
}

PixelSet superlevel(const GridFunction& f, double lam) {
  PixelSet E(f.shape());
  for (Index i = 0; i < f.size(); ++i)
    if (f[i] >= lam) E.set(i);
  return E;
}

BoundaryMeasure perimeter(const PixelSet& E, const PixelSet* mask, double h) {
  const GridShape& shape = E.shape();
  Index faces = 0;
  if (mask) {
    require_same(shape, mask->shape());
    const PixelSet& m = *mask;
    faces = count_faces(shape, [&](Index a, Index b) { return m[a] && m[b] && E[a] != E[b]; });
  } else {
    faces = count_faces(shape, [&](Index a, Index b) { return E[a] != E[b]; });
  }
  return make_boundary_measure(faces, shape.dim, h);
}

BoundaryMeasure perimeter(const PixelSet& E, double h) { return perimeter(E, nullptr, h); }

BoundaryMeasure perimeter_inside(const PixelSet& E, const PixelSet& U, double h) {
  require_same(E.shape(), U.shape());
  const Index faces =
      count_faces(E.shape(), [&](Index a, Index b) { return U[a] && U[b] && E[a] != E[b]; });
  return make_boundary_measure(faces, E.shape().dim, h);
}

BoundaryMeasure perimeter_outside_closure(const PixelSet& A, const PixelSet& E, double h) {
  require_same(A.shape(), E.shape());
  const Index faces =
      count_faces(A.shape(), [&](Index a, Index b) { return A[a] != A[b] && !E[a] && !E[b]; });
  return make_boundary_measure(faces, A.shape().dim, h);
}

LevelPerimeters level_perimeters(const GridFunction& f, const PixelSet* mask) {
  if (mask) require_same(f.shape(), mask->shape());
  auto inside = [&](Index i) { return mask == nullptr || (*mask)[i]; };

  LevelPerimeters out;
  for (Index i = 0; i < f.size(); ++i)
    if (inside(i)) out.levels.push_back(f[i]);
  std::sort(out.levels.begin(), out.levels.end());
  out.levels.erase(std::unique(out.levels.begin(), out.levels.end()), out.levels.end());

  // A face with values lo < hi separates {f >= v} exactly for lo < v <= hi,
  // i.e. for level ranks in (rank(lo), rank(hi)].
  std::vector<Index> diff(out.levels.size() + 1, 0);
  auto rank = [&](double v) {
    return std::lower_bound(out.levels.begin(), out.levels.end(), v) - out.levels.begin();
  };
  for_each_face(f.shape(), [&](Index a, Index b, int) {
    if (!inside(a) || !inside(b) || f[a] == f[b]) return;
    const double lo = std::min(f[a], f[b]), hi = std::max(f[a], f[b]);
    ++diff[rank(lo) + 1];
    --diff[rank(hi) + 1];
  });
  out.faces.resize(out.levels.size());
  Index running = 0;
  for (std::size_t j = 0; j < out.levels.size(); ++j) {
    running += diff[j];
    out.faces[j] = running;
  }
  return out;
}

double variation(const GridFunction& f, const PixelSet* mask) {
  const LevelPerimeters lp = level_perimeters(f, mask);
  double total = 0.0;
  for (std::size_t j = 1; j < lp.levels.size(); ++j)
    total += (lp.levels[j] - lp.levels[j - 1]) * double(lp.faces[j]);
  return total * f.face_measure();
}

std::vector<double> lambda_breakpoints(const GridFunction& f, std::span<const double> extra) {
  std::vector<double> bp;
  bp.reserve(std::size_t(f.size()) + extra.size());
  for (Index i = 0; i < f.size(); ++i)
    if (std::isfinite(f[i])) bp.push_back(f[i]);
  for (double v : extra)
    if (std::isfinite(v)) bp.push_back(v);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

}  // namespace cubemax
