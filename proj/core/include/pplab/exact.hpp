#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "pplab/field.hpp"

namespace pplab {

/// A radially symmetric closed-form solution v(|x|) with its analytic radial
/// derivative.  Shipped profiles also carry the analytic derivative of the
/// radial flux r*|v'|^(p-2)*v' (valid for the profile's own exponent), which
/// calibrates the generic finite-difference path in radial_p_poisson_rhs.
struct RadialProfile {
    std::string label;
    std::function<double(double)> value;       // v(r)
    std::function<double(double)> derivative;  // v'(r)
    std::function<double(double)> flux_derivative;  // d/dr [ r |v'|^{p-2} v' ], optional
    double flux_p = 0.0;              // exponent the analytic flux derivative belongs to
    double r_max = std::numeric_limits<double>::infinity();  // validity: r < r_max
    bool singular_at_origin = false;  // value undefined at r = 0
};

/// Solution of the p-Laplace problem with constant right-hand side 2
/// ("torsional creep"): v(r) = ((p-1)/p) r^{p/(p-1)},  |v'(r)| = r^{1/(p-1)}.
RadialProfile torsional_creep(double p);

/// Radial solution whose p-Laplacian right-hand side is unbounded yet
/// L^q-integrable:  v'(r) = (r^{1-2/q} / |ln r|^{2/q})^{1/(p-1)}, valid for
/// 0 < r < 1.  Values are adaptive Gauss-Kronrod integrals of the derivative
/// (absolute tolerance 1e-10, cube-root substitution near 0).
RadialProfile lq_profile(double p, double q);

/// Radial p-harmonic function away from the origin: v(r) = r^{(p-2)/(p-1)}
/// (p != 2; singular at r = 0 when p < 2).
RadialProfile radial_p_harmonic(double p);

/// Right-hand side h(r) with div(|grad v|^{p-2} grad v) = h for the radial
/// field: h(r) = (1/r) d/dr [ r |v'(r)|^{p-2} v'(r) ].  Uses the profile's
/// analytic flux derivative when it matches p, else centered differences of
/// the flux with step 1e-5*r.
std::function<double(double)> radial_p_poisson_rhs(const RadialProfile& profile, double p);

/// Evaluate profile.value(|node - center|) at interior and boundary nodes.
/// The profile is centered at the grid origin unless `center` overrides it
/// (off-center domains probing a profile's far field).  Nodes outside the
/// profile's validity raise std::domain_error.
ScalarField render(const RadialProfile& profile, std::shared_ptr<const Grid2D> grid,
                   std::optional<Vec2> center = std::nullopt);

}  // namespace pplab
