#ifndef CUBEMAX_CUBE_HPP
#define CUBEMAX_CUBE_HPP

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "cubemax/grid.hpp"

namespace cubemax {

/// Axis-aligned lattice cube: cells [anchor, anchor + side) on each used
/// axis. Unused axes keep anchor 0.
struct GridCube {
  Coord anchor{0, 0, 0};
  int side = 1;

  /// Canonical order: side descending, then anchor lexicographic.
  friend auto operator<=>(const GridCube& a, const GridCube& b) {
    if (auto c = b.side <=> a.side; c != 0) return c;
    return a.anchor <=> b.anchor;
  }
  friend bool operator==(const GridCube&, const GridCube&) = default;
};

struct GridCubeHash {
  std::size_t operator()(const GridCube& q) const noexcept;
};

Index cube_cell_count(int dim, int side);
bool is_power_of_two(int side);

/// Scale index n with side * h in [2^n, 2^(n+1)).
int scale_of(int side, double h);

bool inside_grid(const GridShape& shape, const GridCube& q);
bool contains(int dim, const GridCube& outer, const GridCube& inner);
bool contains_cell(int dim, const GridCube& q, const Coord& c);
/// Number of lattice cells shared by a and b.
Index overlap_cells(int dim, const GridCube& a, const GridCube& b);
/// Exact overlap volume, overlap_cells * h^d.
double intersection_volume(int dim, double h, const GridCube& a, const GridCube& b);

/// Paints the cells of q into U.
void paint(PixelSet& U, const GridCube& q);
PixelSet cube_union(const GridShape& shape, std::span<const GridCube> cubes);

/// Open axis-aligned box in real coordinates (length units).
struct RealBox {
  int dim = 0;
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{0, 0, 0};

  double volume() const;
  std::array<double, 3> center() const;
  /// Closure containment of `other`, with a relative slack for rounding.
  bool contains(const RealBox& other, double slack = 1e-12) const;
  bool intersects(const RealBox& other) const;
  double intersection_volume(const RealBox& other) const;
};

RealBox extent(int dim, double h, const GridCube& q);
/// K Q: same center, side scaled by K.
RealBox dilate(int dim, double h, const GridCube& q, double K);
RealBox dilate(const RealBox& box, double K);
/// Smallest K with `inner` contained in K * outer.
double containment_factor(const RealBox& inner, const RealBox& outer);
/// Weighted volume of E inside the box: each E-cell counts its exact overlap.
double weighted_volume(const PixelSet& E, double h, const RealBox& box);
/// Boundary faces of E weighted by the (d-1)-dimensional part inside the box.
double weighted_boundary(const PixelSet& E, double h, const RealBox& box);
/// Maximum number of open boxes sharing a common point.
int max_pointwise_overlap(std::span<const RealBox> boxes);

/// Finite, deduplicated cube collection on a fixed grid, kept in canonical
/// order. Averages are filled by bind() and refer to one grid function.
class CubeFamily {
 public:
  CubeFamily() = default;
  CubeFamily(GridShape shape, double h, std::vector<GridCube> cubes = {});

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  double h() const { return h_; }
  std::span<const GridCube> cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  bool empty() const { return cubes_.empty(); }
  const GridCube& operator[](std::size_t i) const { return cubes_[i]; }
  bool contains(const GridCube& q) const;

  void insert(const GridCube& q);
  void insert(std::span<const GridCube> qs);

  /// Caches f_Q for every cube.
  void bind(const GridFunction& f);
  bool has_averages() const { return !averages_.empty() && averages_.size() == cubes_.size(); }
  std::span<const double> averages() const { return averages_; }
  double average(std::size_t i) const { return averages_.at(i); }

  PixelSet cell_union() const { return cube_union(shape_, cubes_); }

  friend bool operator==(const CubeFamily& a, const CubeFamily& b) {
    return a.shape_ == b.shape_ && a.h_ == b.h_ && a.cubes_ == b.cubes_;
  }

 private:
  void normalize();

  GridShape shape_;
  double h_ = 1.0;
  std::vector<GridCube> cubes_;
  std::vector<double> averages_;
};

/// dy(q0): every dyadic subcube of q0 down to single cells, q0 included.
/// Throws NonDyadicSide unless side is a power of two.
CubeFamily dyadic_descendants(const GridShape& shape, double h, const GridCube& q0);

/// Dyadic cubes of q0 that contain p, from q0 downwards. Empty when p is not
/// inside q0 or the side of q0 is not a power of two.
std::vector<GridCube> dyadic_ancestors_within(int dim, const GridCube& q0, const GridCube& p);

/// nullopt if complete, otherwise a dyadic cube that is missing.
std::optional<GridCube> dyadic_completeness_witness(const CubeFamily& fam);
inline bool is_dyadically_complete(const CubeFamily& fam) {
  return !dyadic_completeness_witness(fam).has_value();
}

/// Smallest dyadically complete superset.
CubeFamily dyadic_completion(const CubeFamily& fam);

/// Cubes Q with f_Q > f_P for every strictly larger P in the family that
/// contains Q. Same superlevel unions as the input at every level.
CubeFamily maximal_cube_reduction(const CubeFamily& fam, const GridFunction& f);

/// Every lattice cube inside the grid (all sides, all anchors).
CubeFamily all_cubes(const GridShape& shape, double h);

}  // namespace cubemax

#endif  // CUBEMAX_CUBE_HPP
