#pragma once

// Umbrella header: symplectic maps from rotation-invariant potentials into
// the flat, complex-hyperbolic, and projective space forms, with numerical
// certification of the pullback identities and admissibility conditions.

#include "symap/errors.hpp"
#include "symap/dual.hpp"
#include "symap/expr.hpp"
#include "symap/series.hpp"
#include "symap/lebrun.hpp"
#include "symap/potential.hpp"
#include "symap/space_forms.hpp"
#include "symap/geometry.hpp"
#include "symap/sampling.hpp"
#include "symap/special_maps.hpp"
#include "symap/pullback.hpp"
#include "symap/admissibility.hpp"
#include "symap/calabi.hpp"
#include "symap/lebrun_verify.hpp"

namespace symap {
inline constexpr const char* version = "0.1.0";
}
