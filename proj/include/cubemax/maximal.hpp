#ifndef CUBEMAX_MAXIMAL_HPP
#define CUBEMAX_MAXIMAL_HPP

#include <optional>
#include <span>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"

namespace cubemax {

enum class Provenance { global, family, local_masked };

/// Values of a maximal function. For local_masked, cells outside the domain
/// hold NaN and `domain` is set.
struct MaxFunction {
  GridFunction values;
  Provenance provenance = Provenance::global;
  std::optional<PixelSet> domain;

  const PixelSet* mask() const { return domain ? &*domain : nullptr; }
};

/// out[i] = max(in[i], ..., in[i + window - 1]) in O(n) (van Herk / Gil-Werman).
/// out.size() must equal in.size() - window + 1.
void sliding_max(std::span<const double> in, int window, std::span<double> out);

/// Uncentered maximal function over all lattice cubes, maxed with f.
MaxFunction maximal_global(const GridFunction& f);

/// M_Q f. With include_self the pointwise max with f is taken; without it
/// cells covered by no cube of the family get -inf.
MaxFunction maximal_family(const GridFunction& f, const CubeFamily& fam, bool include_self = true);

/// Supremum over lattice cubes whose cells all lie in omega, maxed with f.
/// Throws EmptyDomain if omega is empty.
MaxFunction maximal_local(const GridFunction& f, const PixelSet& omega);

/// var(Mf) / var(f) over the same mask. Throws ZeroVariationInput when
/// var(f) == 0.
double variation_ratio(const GridFunction& f, const MaxFunction& mf, const PixelSet* mask = nullptr);

}  // namespace cubemax

#endif  // CUBEMAX_MAXIMAL_HPP
