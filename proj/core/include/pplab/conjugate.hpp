#pragma once

#include <cstddef>

#include "pplab/field.hpp"

namespace pplab {

/// Order of the staircase integration paths used to build the conjugate.
enum class PathOrder { x_then_y, y_then_x };

/// Stream-function pair: v integrates the one-form
///   (v_x, v_y) = (-|grad u|^{p-2} u_y, |grad u|^{p-2} u_x)
/// along grid-aligned staircase paths from the base node.  In the continuum
/// v is p'-harmonic with |grad v|^{p'} = |grad u|^p, p' = p/(p-1).
struct ConjugatePair {
    ScalarField u;
    ScalarField v;
    double p = 0.0;
    double p_prime = 0.0;  // computed from p, never stored independently
    /// Largest absolute circulation of the one-form around an elementary grid
    /// cell: the discrete path-independence defect (zero in the continuum for
    /// p-harmonic u).  On multiply connected regions it also absorbs the
    /// period around holes.
    double curl_residual = 0.0;
    std::size_t floored_nodes = 0;      // |grad u| below the magnitude floor
    std::size_t unreachable_nodes = 0;  // no staircase path from the base
    int base_i = 0, base_j = 0;
};

/// Requires simply connected integration regions; the weight |grad u|^{p-2}
/// is singular at gradient zeros for p < 2, so such nodes are floored at
/// 1e-12 of the gradient scale and counted.  Exponents p > 1 are accepted
/// (the inverse transform runs at the dual exponent p' > 2).
ConjugatePair conjugate_function(const ScalarField& u, double p, int base_i, int base_j,
                                 PathOrder order = PathOrder::x_then_y);

struct ConjugateCheck {
    /// max over interior nodes of | |grad v|^{p'} - |grad u|^p | / (|grad u|^p + 1e-14)
    double norm_identity_error = 0.0;
    /// RMS residual of v against zero right-hand side at exponent p'.
    double dual_residual = 0.0;
    std::size_t nodes = 0;
};

ConjugateCheck verify_conjugate(const ConjugatePair& pair);

}  // namespace pplab
