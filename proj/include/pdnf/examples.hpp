#ifndef PDNF_EXAMPLES_HPP
#define PDNF_EXAMPLES_HPP

#include <optional>
#include <vector>

#include "pdnf/normalform.hpp"

namespace pdnf {

struct ExampleSystem {
  VectorField f;
  VectorField g;
  EigenData eigen;
  /// SO(3) example only: x.x, y.y, x.y.
  std::vector<ScalarPoly> invariants;
};

/// f = Au + (x^2+y^2)^k (x, y) with A = [[0,1],[-1,0]], and the symmetry
/// g = (x^2+y^2)^k (x, y). Throws std::invalid_argument unless k >= 1 and
/// N >= 2k + 1.
ExampleSystem build_example_rotation2d(unsigned k, int truncation);

/// n = 6, u = (x1, x2, x3, y1, y2, y3): f = Au + p(rho) u with A the block
/// rotation and g = (x.x + y.y)^k u. `p_choice` is a polynomial in the
/// three invariants (x.x, y.y, x.y) and must be homogeneous of degree k in
/// them; the default is (rho_1 + rho_2)^k. Throws std::invalid_argument for
/// k = 0, N < 2k + 1 or a badly shaped p_choice.
ExampleSystem build_example_so3(unsigned k, const std::optional<ScalarPoly>& p_choice, int truncation);

}  // namespace pdnf

#endif  // PDNF_EXAMPLES_HPP
