#include "cubemax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cubemax/summed_area.hpp"

namespace cubemax {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Dense buffer over a (possibly partial) box of anchors or cells.
struct Buffer {
  Coord ext{1, 1, 1};
  std::vector<double> v;

  Index index(const Coord& c) const { return (Index(c[0]) * ext[1] + c[1]) * ext[2] + c[2]; }
  Index stride(int axis) const { return axis == 0 ? Index(ext[1]) * ext[2] : axis == 1 ? ext[2] : 1; }
};

// Grows `buf` along `axis` from m to m + s - 1 entries: each output cell x
// receives the max over anchors j in [x - s + 1, x].
Buffer expand_axis(const Buffer& buf, int axis, int s) {
  Buffer out;
  out.ext = buf.ext;
  const int m = buf.ext[axis];
  const int n = m + s - 1;
  out.ext[axis] = n;
  out.v.assign(std::size_t(out.ext[0]) * out.ext[1] * out.ext[2], kNegInf);

  std::vector<double> padded(std::size_t(n + s - 1), kNegInf);
  std::vector<double> line(static_cast<std::size_t>(n));
  Coord c{0, 0, 0};
  const int e0 = axis == 0 ? 1 : buf.ext[0];
  const int e1 = axis == 1 ? 1 : buf.ext[1];
  const int e2 = axis == 2 ? 1 : buf.ext[2];
  for (c[0] = 0; c[0] < e0; ++c[0])
    for (c[1] = 0; c[1] < e1; ++c[1])
      for (c[2] = 0; c[2] < e2; ++c[2]) {
        const Index in0 = buf.index(c);
        const Index out0 = out.index(c);
        for (int j = 0; j < m; ++j) padded[std::size_t(j + s - 1)] = buf.v[std::size_t(in0 + j * buf.stride(axis))];
        sliding_max(padded, s, line);
        for (int x = 0; x < n; ++x) out.v[std::size_t(out0 + x * out.stride(axis))] = line[std::size_t(x)];
      }
  return out;
}

// Shared driver: for each side s, `average(anchor, s)` returns the value of
// the cube or -inf when inadmissible; the running pointwise max is kept.
template <class AverageFn>
std::vector<double> sweep_all_sides(const GridShape& shape, AverageFn&& average) {
  std::vector<double> best(std::size_t(shape.size()), kNegInf);
  for (int s = 1; s <= shape.min_extent(); ++s) {
    Buffer anchors;
    for (int a = 0; a < shape.dim; ++a) anchors.ext[a] = shape.n[a] - s + 1;
    anchors.v.resize(std::size_t(anchors.ext[0]) * anchors.ext[1] * anchors.ext[2]);
    Coord c{0, 0, 0};
    for (c[0] = 0; c[0] < anchors.ext[0]; ++c[0])
      for (c[1] = 0; c[1] < anchors.ext[1]; ++c[1])
        for (c[2] = 0; c[2] < anchors.ext[2]; ++c[2]) anchors.v[std::size_t(anchors.index(c))] = average(c, s);
    Buffer cur = std::move(anchors);
    for (int a = 0; a < shape.dim; ++a) cur = expand_axis(cur, a, s);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], cur.v[i]);
  }
  return best;
}

}  // namespace

void sliding_max(std::span<const double> in, int window, std::span<double> out) {
  const std::size_t n = in.size();
  const std::size_t w = static_cast<std::size_t>(window);
  if (window < 1 || w > n || out.size() != n - w + 1)
    throw Error(Errc::invalid_argument, "sliding_max size mismatch");
  if (w == 1) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  // Prefix maxima inside blocks of length w, suffix maxima likewise.
  std::vector<double> g(n), hmax(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = (i % w == 0) ? in[i] : std::max(g[i - 1], in[i]);
  for (std::size_t i = n; i-- > 0;)
    hmax[i] = (i == n - 1 || (i + 1) % w == 0) ? in[i] : std::max(hmax[i + 1], in[i]);
  for (std::size_t x = 0; x + w <= n; ++x) out[x] = std::max(hmax[x], g[x + w - 1]);
}

MaxFunction maximal_global(const GridFunction& f) {
  const SummedAreaTable sat(f);
  std::vector<double> best =
      sweep_all_sides(f.shape(), [&](const Coord& a, int s) { return sat.cube_average(a, s); });
  Eigen::ArrayXd out(f.size());
  for (Index i = 0; i < f.size(); ++i) out[i] = std::max(f[i], best[std::size_t(i)]);
  return {GridFunction(f.shape(), f.h(), std::move(out)), Provenance::global, std::nullopt};
}

MaxFunction maximal_family(const GridFunction& f, const CubeFamily& fam, bool include_self) {
  if (!(fam.shape() == f.shape())) throw Error(Errc::dimension_mismatch, "family and function grids differ");
  CubeFamily bound = fam;
  if (!bound.has_averages()) bound.bind(f);
  Eigen::ArrayXd out = include_self ? f.values() : Eigen::ArrayXd::Constant(f.size(), kNegInf);
  const GridShape& shape = f.shape();
  for (std::size_t k = 0; k < bound.size(); ++k) {
    const GridCube& q = bound[k];
    const double avg = bound.average(k);
    const int e1 = shape.dim > 1 ? q.side : 1;
    const int e2 = shape.dim > 2 ? q.side : 1;
    for (int i0 = 0; i0 < q.side; ++i0)
      for (int i1 = 0; i1 < e1; ++i1)
        for (int i2 = 0; i2 < e2; ++i2) {
          const Index i = shape.index(Coord{q.anchor[0] + i0, q.anchor[1] + i1, q.anchor[2] + i2});
          out[i] = std::max(out[i], avg);
        }
  }
  return {GridFunction::with_sentinels(shape, f.h(), std::move(out)), Provenance::family, std::nullopt};
}

MaxFunction maximal_local(const GridFunction& f, const PixelSet& omega) {
  if (!(omega.shape() == f.shape())) throw Error(Errc::dimension_mismatch, "domain and function grids differ");
  if (omega.empty()) throw Error(Errc::empty_domain, "local maximal function needs a nonempty domain");
  const SummedAreaTable sat(f);
  const CountTable inside(omega);
  const int dim = f.dim();
  std::vector<double> best = sweep_all_sides(f.shape(), [&](const Coord& a, int s) {
    return inside.cube_count(a, s) == cube_cell_count(dim, s) ? sat.cube_average(a, s) : kNegInf;
  });
  Eigen::ArrayXd out(f.size());
  for (Index i = 0; i < f.size(); ++i)
    out[i] = omega[i] ? std::max(f[i], best[std::size_t(i)]) : std::numeric_limits<double>::quiet_NaN();
  return {GridFunction::with_sentinels(f.shape(), f.h(), std::move(out)), Provenance::local_masked, omega};
}

double variation_ratio(const GridFunction& f, const MaxFunction& mf, const PixelSet* mask) {
  const PixelSet* m = mask ? mask : mf.mask();
  const double vf = variation(f, m);
  if (vf == 0.0) throw Error(Errc::zero_variation_input, "var(f) is zero; the ratio is undefined");
  return variation(mf.values, m) / vf;
}

}  // namespace cubemax
