#pragma once

// Named reference groups and points used by the tests, the acceptance suite and
// the example verifier.

#include "abdyn/structure.hpp"

#include <vector>

namespace abdyn::fixtures {

/// Identity plus a single entry `value` at (n-1, col).
ExactMatrix last_row_shear(std::size_t n, std::size_t col, const Scalar& value);

/// Real 3x3 shears adding x1 and x2 to the last coordinate.
GeneratorSet shear_3d();
/// Real 4x4 shears adding x1 and x2 to the last coordinate.
GeneratorSet shear_4d();
/// Complex 5x5 shears adding z1, z2 and z3 to the last coordinate.
GeneratorSet complex_shear_5d();
/// Real 4x4 shears adding (sqrt2 - 1) x1 + x2 and x1 to the last coordinate.
GeneratorSet radical_shear_4d();

/// Rotation by pi/3 of the real plane.
GeneratorSet rotation_pi_3();
/// Multiplication on C by two rotations of infinite order, 3/2 and 4/3; its orbits are dense in C.
GeneratorSet dense_complex_line();

/// Dense starting point (1+i, sqrt3+i sqrt2, sqrt2+i, 0, 0) for complex_shear_5d.
std::vector<Scalar> complex_shear_dense_point();

}  // namespace abdyn::fixtures
