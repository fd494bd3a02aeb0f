#ifndef CUBEMAX_ESTIMATES_HPP
#define CUBEMAX_ESTIMATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"
#include "cubemax/sparse.hpp"

namespace cubemax {

struct SparseMassEstimate {
  double lam0 = 0.0;
  double lhs = 0.0;  // |q0| (f_q0 - lam0)
  double rhs = 0.0;  // 2^(d+1) * integral above f_q0
  bool holds() const { return lhs <= rhs * (1.0 + 1e-12) + 1e-300; }
};

/// Mass of f above lam0 inside q0 against the mass carried by sparse
/// dyadic subcubes. Without lam0 the threshold lam_q0 is used; its density
/// condition is then checked as the limit from above.
/// Throws PreconditionDensity or NonDyadicSide.
SparseMassEstimate sparse_mass_estimate(const GridFunction& f, const GridCube& q0,
                                        std::optional<double> lam0 = std::nullopt);

/// Dyadic cubes of q0 whose E-density lies in [2^(-d-1), 1/2).
struct MidDensityCover {
  CubeFamily band;
  std::optional<Index> uncovered;  // an E-cell of q0 outside every band cube
  bool covers() const { return !uncovered.has_value(); }
};
MidDensityCover covering_middensity(const PixelSet& E, double h, const GridCube& q0);

/// E-density of (1 - eps)^2 q, with cells weighted by their overlap.
double contracted_density(const PixelSet& E, double h, const GridCube& q, double eps);
/// 2^(-d-2) < contracted_density < 1/2 + 2^(-d-2).
bool contract_density_check(const PixelSet& E, double h, const GridCube& q, double eps);

/// ||f - f_q||_p / var_q f with p = d/(d-1) (max norm for d = 1).
/// Throws ZeroVariationInput.
double poincare_ratio(const GridFunction& f, const GridCube& q);

/// |E|^((d-1)/d) / sigma(dE) for a set E; 0 when E is empty.
double isoperimetric_ratio(const PixelSet& E, double h);

/// (sigma(dE n q)^d, |E n q|^(d-1)). Throws PreconditionDensity when
/// |E n q| > (1 - delta) |q|.
std::pair<double, double> isoperimetric_significant(const PixelSet& E, double h, const GridCube& q,
                                                    double delta);

struct TheoremOptions {
  double eps = -1.0;  // contraction; negative selects default_contraction(d)
  double cap = 0.0;   // lhs <= cap * rhs is asserted when cap > 0
  bool proof_chain = true;
};

struct TheoremRow {
  double lam = 0.0, weight = 0.0;
  double lhs = 0.0, rhs = 0.0;          // integrands of the two sides
  double term1 = 0.0, term2 = 0.0;      // decomposition terms
  double hd_rhs = 0.0;                  // sigma(dE n U Q~^lam)
  std::size_t n0 = 0, n1 = 0, n2 = 0;
  std::size_t n_s = 0, n_d = 0, n_f = 0;
  int C = 0;
  double disjoint_lhs = 0.0, disjoint_rhs = 0.0;  // sum over F of sigma(dE n (1-eps)^2 Q); sigma(U S n dE)
  double level_lhs = 0.0;                          // sum over F of |Q| * sum 1/l(Q0)
};

struct TheoremReport {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
  double lhs_from_table = 0.0;
  std::size_t family_size = 0, reduced_size = 0, breakpoints = 0;
  std::vector<TheoremRow> rows;

  double high_density_integral = 0.0;  // integral of term1
  double q2_integral = 0.0;            // integral of term2
  double high_density_rhs = 0.0;       // integral of hd_rhs
  double high_density_ratio_max = 0.0;
  std::size_t decomposition_failures = 0;

  std::size_t sparse_size = 0;
  double sparse_rhs_sum = 0.0;
  double todyadic_ratio = 0.0;      // q2_integral / sparse_rhs_sum
  double massabove_ratio_max = 0.0;  // (f - lam) sigma(dQ0) / (l^-1 integral |U D|)
  double sparse_mass_ratio_max = 0.0;
  std::size_t sparse_mass_failures = 0;

  double eps = 0.0;
  int C_max = 0;
  double C1_max = 0.0, C2_max = 0.0;
  double massbelow_max = 0.0;  // l(Q) * sum over Q0 with Q in C2 Q0 of 1/l(Q0)
  double volume_to_boundary_min = 0.0;
  std::size_t disjoint_failures = 0;
  double level_ratio_max = 0.0;
  double mass_above_integral = 0.0;  // integral of level_lhs
  double sparse_boundary_integral = 0.0;  // integral of disjoint_rhs

  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Both sides of the main boundary estimate as exact level sums, together
/// with the quantities of every intermediate step.
/// Throws NotDyadicallyComplete.
TheoremReport theorem_main_evaluate(const GridFunction& f, const CubeFamily& fam,
                                    const TheoremOptions& opt = {});

}  // namespace cubemax

#endif  // CUBEMAX_ESTIMATES_HPP
