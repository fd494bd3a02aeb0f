#ifndef CUBEMAX_SUMMED_AREA_HPP
#define CUBEMAX_SUMMED_AREA_HPP

#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"

namespace cubemax {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Additions are error-free
/// until the exact result needs more than ~106 significant bits.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }

  friend DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    const DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return two_sum(s.hi, s.lo);
  }
  friend DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
  friend DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }
  DoubleDouble& operator+=(DoubleDouble b) { return *this = *this + b; }

  double value() const { return hi + lo; }
};

namespace detail {
inline DoubleDouble accumulate_cast(double v, DoubleDouble) { return {v, 0.0}; }
inline Index accumulate_cast(bool v, Index) { return v ? 1 : 0; }
inline double result_value(DoubleDouble v) { return v.value(); }
inline Index result_value(Index v) { return v; }
}  // namespace detail

/// d-dimensional prefix table with one extra leading slot per used axis.
/// Acc is DoubleDouble for real sums or Index for cell counts.
template <class Acc>
class PrefixTable {
 public:
  PrefixTable() = default;

  template <class Source>
  PrefixTable(const GridShape& shape, Source&& value_at) : shape_(shape) {
    for (int a = 0; a < 3; ++a) ext_[a] = a < shape.dim ? shape.n[a] + 1 : 1;
    table_.assign(std::size_t(ext_[0]) * ext_[1] * ext_[2], Acc{});
    for (int i0 = 0; i0 < shape.n[0]; ++i0)
      for (int i1 = 0; i1 < shape.n[1]; ++i1)
        for (int i2 = 0; i2 < shape.n[2]; ++i2) {
          const Coord c{i0, i1, i2};
          at(shifted(c)) = detail::accumulate_cast(value_at(shape.index(c)), Acc{});
        }
    // Separable cumulative sums, one axis at a time.
    for (int axis = 0; axis < shape.dim; ++axis) {
      const Index s = stride(axis);
      for (Index i = 0; i < Index(table_.size()); ++i) {
        const int ci = coord_along(i, axis);
        if (ci >= 1) table_[i] = table_[i] + table_[i - s];
      }
    }
  }

  /// Sum over the cells of the box [lo, lo + side) on every used axis.
  Acc box_sum(const Coord& lo, int side) const {
    Acc total{};
    const int corners = 1 << shape_.dim;
    for (int mask = 0; mask < corners; ++mask) {
      Coord p{0, 0, 0};
      int parity = 0;
      for (int a = 0; a < shape_.dim; ++a) {
        if (mask & (1 << a)) {
          p[a] = lo[a];
          ++parity;
        } else {
          p[a] = lo[a] + side;
        }
      }
      const Acc& v = table_[index(p)];
      total = (parity & 1) ? total - v : total + v;
    }
    return total;
  }

  const GridShape& shape() const { return shape_; }

 private:
  Coord shifted(const Coord& c) const {
    Coord s = c;
    for (int a = 0; a < shape_.dim; ++a) s[a] += 1;
    return s;
  }
  Index stride(int axis) const {
    if (axis == 0) return Index(ext_[1]) * ext_[2];
    if (axis == 1) return ext_[2];
    return 1;
  }
  int coord_along(Index i, int axis) const {
    return static_cast<int>((i / stride(axis)) % ext_[axis]);
  }
  Index index(const Coord& p) const { return (Index(p[0]) * ext_[1] + p[1]) * ext_[2] + p[2]; }
  Acc& at(const Coord& p) { return table_[index(p)]; }

  GridShape shape_;
  Coord ext_{1, 1, 1};
  std::vector<Acc> table_;
};

/// Compensated summed-area table of a grid function.
class SummedAreaTable {
 public:
  SummedAreaTable() = default;
  explicit SummedAreaTable(const GridFunction& f)
      : table_(f.shape(), [&](Index i) { return f[i]; }) {}

  double cube_sum(const Coord& anchor, int side) const { return table_.box_sum(anchor, side).value(); }
  double cube_average(const Coord& anchor, int side) const;

 private:
  PrefixTable<DoubleDouble> table_;
};

/// Integer cell counts of a pixel set over cubes.
class CountTable {
 public:
  CountTable() = default;
  explicit CountTable(const PixelSet& E) : table_(E.shape(), [&](Index i) { return E[i]; }) {}

  Index cube_count(const Coord& anchor, int side) const { return table_.box_sum(anchor, side); }

 private:
  PrefixTable<Index> table_;
};

inline double SummedAreaTable::cube_average(const Coord& anchor, int side) const {
  return cube_sum(anchor, side) / double(cube_cell_count(table_.shape().dim, side));
}

}  // namespace cubemax

#endif  // CUBEMAX_SUMMED_AREA_HPP
