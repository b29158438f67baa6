#pragma once

#include <cstddef>
#include <vector>

#include "pplab/field.hpp"

namespace pplab {

/// Complex gradient of a scalar field, f = u_x - i u_y, stored as the real
/// pair (u_x, -u_y).
VectorField complex_gradient(const ScalarField& u);

/// Discrete Wirtinger derivatives of a complex field f = f1 + i f2:
///   f_z    = ((f1_x + f2_y) + i (f2_x - f1_y)) / 2
///   f_zbar = ((f1_x - f2_y) + i (f2_x + f1_y)) / 2
/// Each stored as (re, im); NaN wherever a component stencil is unavailable.
struct WirtingerPair {
    VectorField fz;
    VectorField fzbar;
};

WirtingerPair wirtinger(const VectorField& f);

/// Empirical check of the dilatation inequality |f_zbar| <= ((p-2)/p) |f_z|
/// for the complex gradient of a p-harmonic field, p >= 2.  Nodes within
/// exclusion_radius of the boundary or of the gradient's zero set are
/// skipped, as are nodes with |f_z| below 1e-10 of its scale (counted).
struct DilatationReport {
    double sup_ratio = 0.0;
    std::size_t violations = 0;   // ratio > (p-2)/p + tol_discrete
    std::size_t admissible = 0;
    std::size_t skipped_small_fz = 0;
    double bound = 0.0;  // (p-2)/p
    double tol_discrete = 0.0;
};

DilatationReport dilatation_check(const ScalarField& u, double p, double exclusion_radius,
                                  double tol_discrete);

/// Dirichlet integrals I(r) = spacing^2 * sum_{B_r} |Df|^2 of the complex
/// gradient over balls centered at the grid origin, with the fitted log-log
/// growth exponent to compare against 2/(p-1).
struct GrowthReport {
    std::vector<double> radii;
    std::vector<double> integrals;
    double slope = 0.0;  // NaN when fewer than 4 radii are usable
    double r2 = 0.0;
    double two_alpha = 0.0;
    std::size_t usable = 0;
};

GrowthReport dirichlet_growth(const ScalarField& u, double p, std::vector<double> radii,
                              double inner_exclusion = 0.0);

/// Empirical constant of the universal gradient estimate for p-harmonic
/// fields:  [grad u]_{C^alpha(B_R)} * R^{1+alpha} / ||u||_{L^inf(B_2R)},
/// alpha = 1/(p-1).  Stability of the ratio under refinement is the test.
struct HolderRatioReport {
    double ratio = 0.0;
    double seminorm = 0.0;
    double sup_norm = 0.0;
    double alpha = 0.0;
    double radius = 0.0;
    bool subsampled = false;
};

HolderRatioReport gradient_holder_check(const ScalarField& u, double p, Vec2 center, double R,
                                        std::size_t pair_budget = 2'000'000);

/// Small-gradient estimate for 1 < p < 2 around a critical point:
/// sup_{2h <= |x-c| <= R} |grad u(x)| / |x-c|, scaled by R^2 / ||u||_{B_2R}.
/// Requires |grad u(center)| <= grad_zero_tol.
struct SmallGradientReport {
    double ratio = 0.0;
    double sup_quotient = 0.0;
    double sup_norm = 0.0;
    double radius = 0.0;
    std::size_t nodes = 0;
};

SmallGradientReport small_gradient_check(const ScalarField& u, double p, Vec2 center, double R,
                                         double grad_zero_tol);

}  // namespace pplab
