#ifndef CUBEMAX_GRID_HPP
#define CUBEMAX_GRID_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cubemax/error.hpp"

namespace cubemax {

using Index = std::int64_t;
using Coord = std::array<int, 3>;

/// Shape of a d-dimensional cell lattice, d in {1,2,3}.
///
/// Unused trailing axes have extent 1 so that loops can always run over
/// three axes. Storage is row-major: the last used axis varies fastest.
struct GridShape {
  int dim = 0;
  Coord n{1, 1, 1};

  GridShape() = default;
  explicit GridShape(std::span<const int> dims);
  GridShape(std::initializer_list<int> dims);

  Index size() const { return Index(n[0]) * n[1] * n[2]; }
  Index stride(int axis) const;
  Index index(const Coord& c) const { return (Index(c[0]) * n[1] + c[1]) * n[2] + c[2]; }
  Coord coord(Index i) const;
  std::vector<int> dims() const { return {n.begin(), n.begin() + dim}; }
  int min_extent() const;

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

/// Real-valued function sampled on a lattice with cell width h.
class GridFunction {
 public:
  GridFunction() = default;
  /// Throws invalid_argument on size mismatch, h <= 0 or non-finite values.
  GridFunction(GridShape shape, double h, Eigen::ArrayXd values);
  GridFunction(GridShape shape, double h, const std::vector<double>& values);
  /// Constant function.
  GridFunction(GridShape shape, double h, double value);

  /// Skips the finiteness check; used for outputs that carry a NaN sentinel
  /// outside a masked domain.
  static GridFunction with_sentinels(GridShape shape, double h, Eigen::ArrayXd values);

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  double h() const { return h_; }
  Index size() const { return shape_.size(); }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }
  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }
  double at(const Coord& c) const { return values_[shape_.index(c)]; }

  /// Measure of one face, h^(d-1).
  double face_measure() const;
  /// Measure of one cell, h^d.
  double cell_measure() const;

 private:
  GridShape shape_;
  double h_ = 1.0;
  Eigen::ArrayXd values_;
};

/// Exact subset of lattice cells.
class PixelSet {
 public:
  PixelSet() = default;
  explicit PixelSet(GridShape shape, bool fill = false);

  const GridShape& shape() const { return shape_; }
  Index size() const { return shape_.size(); }
  bool operator[](Index i) const { return bits_[i] != 0; }
  bool contains(const Coord& c) const { return bits_[shape_.index(c)] != 0; }
  void set(Index i, bool v = true) { bits_[i] = v ? 1 : 0; }
  void set(const Coord& c, bool v = true) { set(shape_.index(c), v); }
  Index count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const PixelSet& other) const;

  PixelSet& operator|=(const PixelSet& o);
  PixelSet& operator&=(const PixelSet& o);
  /// Set difference.
  PixelSet& operator-=(const PixelSet& o);
  friend PixelSet operator|(PixelSet a, const PixelSet& b) { return a |= b; }
  friend PixelSet operator&(PixelSet a, const PixelSet& b) { return a &= b; }
  friend PixelSet operator-(PixelSet a, const PixelSet& b) { return a -= b; }
  friend bool operator==(const PixelSet&, const PixelSet&) = default;

  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  GridShape shape_;
  std::vector<std::uint8_t> bits_;
};

/// Discrete boundary measure: interior lattice faces times h^(d-1).
struct BoundaryMeasure {
  Index face_count = 0;
  double measure = 0.0;
};

BoundaryMeasure make_boundary_measure(Index faces, int dim, double h);

/// Calls fn(a, b, axis) for every pair of face-adjacent cells a < b.
template <class Fn>
void for_each_face(const GridShape& shape, Fn&& fn) {
  const Coord& n = shape.n;
  for (int axis = 0; axis < shape.dim; ++axis) {
    const Index s = shape.stride(axis);
    for (int i0 = 0; i0 < n[0]; ++i0)
      for (int i1 = 0; i1 < n[1]; ++i1)
        for (int i2 = 0; i2 < n[2]; ++i2) {
          const Coord c{i0, i1, i2};
          if (c[axis] + 1 >= n[axis]) continue;
          const Index a = shape.index(c);
          fn(a, a + s, axis);
        }
  }
}

/// Counts faces (a, b) with pred(a, b) true.
template <class Pred>
Index count_faces(const GridShape& shape, Pred&& pred) {
  Index count = 0;
  for_each_face(shape, [&](Index a, Index b, int) {
    if (pred(a, b)) ++count;
  });
  return count;
}

/// {f >= lam}.
PixelSet superlevel(const GridFunction& f, double lam);

/// Faces between a cell of E and a cell of mask \ E, both inside the mask.
/// Without a mask the open grid box is the domain: outer faces never count.
BoundaryMeasure perimeter(const PixelSet& E, const PixelSet* mask = nullptr, double h = 1.0);
BoundaryMeasure perimeter(const PixelSet& E, double h);

/// Faces of the boundary of E that lie inside the cell union U (both
/// adjacent cells in U).
BoundaryMeasure perimeter_inside(const PixelSet& E, const PixelSet& U, double h);

/// Faces of the boundary of A that do not lie in the closure of E
/// (neither adjacent cell in E).
BoundaryMeasure perimeter_outside_closure(const PixelSet& A, const PixelSet& E, double h);

/// Perimeters of {f >= v} for every distinct value v (ascending) of f over
/// the mask, computed as face counts.
struct LevelPerimeters {
  std::vector<double> levels;
  std::vector<Index> faces;
};
LevelPerimeters level_perimeters(const GridFunction& f, const PixelSet* mask = nullptr);

/// Total variation via the coarea sum over threshold gaps.
double variation(const GridFunction& f, const PixelSet* mask = nullptr);

/// Sorted, deduplicated union of the finite cell values and `extra`.
std::vector<double> lambda_breakpoints(const GridFunction& f, std::span<const double> extra = {});

}  // namespace cubemax

#endif  // CUBEMAX_GRID_HPP
