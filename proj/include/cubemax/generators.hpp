#ifndef CUBEMAX_GENERATORS_HPP
#define CUBEMAX_GENERATORS_HPP

#include <string>
#include <vector>

#include "cubemax/cube.hpp"
#include "cubemax/grid.hpp"
#include "cubemax/rng.hpp"

namespace cubemax {

enum class FunctionClass { indicator, simple, block_decreasing, radial, random_smooth, checkerboard, dumbbell };
enum class FamilyClass { all_cubes, dyadic, random_complete };

FunctionClass parse_function_class(const std::string& s);
FamilyClass parse_family_class(const std::string& s);
std::string to_string(FunctionClass c);
std::string to_string(FamilyClass c);

/// Indicator of a random union of 1 to 4 axis boxes; never constant.
GridFunction random_indicator(const GridShape& shape, double h, Rng& rng);
/// Random subset with each cell present with probability p.
PixelSet random_pixels(const GridShape& shape, double p, Rng& rng);
/// Weighted sum of 2 to 5 box indicators with small integer weights.
GridFunction random_simple(const GridShape& shape, double h, Rng& rng);
/// Nested boxes around a common center with positive weights: every
/// superlevel set is a box.
GridFunction random_block_decreasing(const GridShape& shape, double h, Rng& rng);
/// Decreasing profile of the distance to a random center.
GridFunction random_radial(const GridShape& shape, double h, Rng& rng);
/// Sum of a few Gaussian bumps sampled at cell centers.
GridFunction random_smooth(const GridShape& shape, double h, Rng& rng);
/// Piecewise constant 1-d function with random jumps.
GridFunction random_steps(int n, double h, Rng& rng);

/// Dispatches on the class; checkerboard and dumbbell are fixed examples
/// built by the experiments and are rejected here.
GridFunction generate_function(FunctionClass c, const GridShape& shape, double h, Rng& rng);

/// `count` cubes with random power-of-two sides (at most max_side) and
/// random anchors.
std::vector<GridCube> random_power_cubes(const GridShape& shape, int count, int max_side, Rng& rng);
/// dy(Q0) for the largest power-of-two cube at the origin.
CubeFamily dyadic_family(const GridShape& shape, double h);
CubeFamily generate_family(FamilyClass c, const GridShape& shape, double h, Rng& rng, int seed_cubes = 6);

/// Checkerboard example on (0,2)^2 with cell 2^-N_max: the indicator of (0,1)^2.
GridFunction checkerboard_function(int N_max);
/// The square (0,2)^2 and the 2^-N cells of (0,1)^2 with even index sum.
CubeFamily checkerboard_family(int N_max, int N);

/// Dumbbell domain (-5,5)x(-10,0) u (-1,1)x[0,2) on the box [-5,5)x[-10,2).
PixelSet dumbbell_domain(double h);
/// Exact cell averages of max(0, -14 - x1 - x2); zero outside the domain.
GridFunction dumbbell_function(double h);

}  // namespace cubemax

#endif  // CUBEMAX_GENERATORS_HPP
