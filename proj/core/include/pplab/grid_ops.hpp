#pragma once

#include "pplab/field.hpp"

namespace pplab {

/// What to do at an interior node whose difference stencil cannot be formed
/// (a neighbor is missing or non-finite).  `strict` treats it as a hard
/// error — the grid is too coarse for the masked domain.  `lenient` writes
/// NaN and lets the caller skip the node; used for derived fields such as
/// gradients of gradients, which legitimately thin out near the boundary.
enum class MissingPolicy { strict, lenient };

/// Discrete gradient: second-order central differences at nodes with both
/// axis neighbors available, one-sided second-order differences where only
/// one side is; exact on affine and quadratic fields.  Values are produced
/// at interior and boundary nodes (boundary nodes best-effort, falling back
/// to first-order one-sided before giving up with NaN).
VectorField gradient(const ScalarField& field, MissingPolicy policy = MissingPolicy::strict);

/// Discrete divergence with the same per-axis stencils as gradient, so that
/// divergence(gradient(f)) reproduces the 5-point Laplacian on the doubled
/// stencil away from the boundary (exact on quadratics).
ScalarField divergence(const VectorField& vf, MissingPolicy policy = MissingPolicy::strict);

/// Maximum of |field| over usable nodes within distance r of center.
/// Requires r >= 2*spacing; below that the discrete sup is resolution noise.
double sup_over_ball(const ScalarField& field, Vec2 center, double r);

/// Bilinear interpolation at p; NaN when the surrounding cell has a missing
/// or non-finite corner.
double bilinear(const ScalarField& field, Vec2 p);

}  // namespace pplab
