#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pplab/field.hpp"

namespace pplab {

/// Sharp gradient Hölder exponent bundle for the p-Poisson problem with
/// L^q right-hand side:  beta - 1 is the gradient exponent, alpha the
/// homogeneous-equation rate 1/(p-1), kappa the optimal exponent of the
/// homogeneous equation.
struct ExponentParams {
    double p = 0.0;
    double q = 0.0;  // may be +infinity
    double beta = 0.0;
    double alpha = 0.0;
    double kappa = 0.0;

    static ExponentParams make(double p, double q, double epsilon_margin = 0.01);
};

/// beta(p, q):
///   1 < p < 2:  q = inf -> 2 - margin, q < inf -> 2 - 2/q
///   p > 2:      q = inf -> p/(p-1) - margin, q < inf -> (p - 2/q)/(p-1)
/// The margin realizes the open bound at q = inf; it is ignored for q < inf.
/// p = 2 is rejected (the exponent dichotomy excludes it), as is q <= 2.
double holder_beta(double p, double q, double epsilon_margin = 0.0);

/// Optimal gradient Hölder exponent of the homogeneous equation:
///   (1/6) ( p/(p-1) + sqrt(1 + 14/(p-1) + 1/(p-1)^2) ).
double p_harmonic_gradient_exponent(double p);

struct SeminormResult {
    double value = 0.0;
    bool subsampled = false;       // value is then a lower bound
    std::size_t pairs_evaluated = 0;
};

/// Discrete Hölder seminorm sup |u(x)-u(y)| / |x-y|^s over node pairs of the
/// region at distance >= 2*spacing.  When the pair count exceeds pair_budget
/// a deterministic subsample stratified by distance decade is used (fixed
/// stride per offset class, never randomized).
SeminormResult holder_seminorm(const ScalarField& field, double s,
                               std::span<const std::size_t> region, std::size_t pair_budget);

/// Same seminorm for 2-vector fields (Euclidean difference norm).
SeminormResult holder_seminorm(const VectorField& field, double s,
                               std::span<const std::size_t> region, std::size_t pair_budget);

/// Per-center table of excess quantities over shrinking balls:
///   s_osc(r) = sup_{|y-c|<=r} |v(y) - v(c)|
///   s_lin(r) = sup_{|y-c|<=r} |v(y) - v(c) - (y-c).grad v(c)|
/// with the discrete gradient of the supplied field at the center, and the
/// least-squares exponent of s_lin against r on log-log axes.
struct ExcessScan {
    Vec2 center;
    Vec2 center_gradient;
    std::vector<double> radii;  // decreasing
    std::vector<double> s_osc;
    std::vector<double> s_lin;
    double fitted_exponent = 0.0;  // NaN when fewer than 4 radii are usable
    double fit_r2 = 0.0;
    std::size_t usable_radii = 0;
};

ExcessScan excess_scan(const ScalarField& v, Vec2 center, std::vector<double> radii);

/// Log-spaced radii in [4h, 0.1 * domain radius], snapped to grid multiples;
/// the window widens toward 0.25 * dist(center, boundary) when the nominal
/// one is too narrow for the spacing.  Throws when no usable window exists.
std::vector<double> auto_scan_radii(const Grid2D& grid, Vec2 center, int count = 8);

struct PowerFit {
    double slope = 0.0;
    double log_prefactor = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares of log(value) against log(radius).  Requires at
/// least 4 positive, finite pairs.
PowerFit fit_exponent(std::span<const double> radii, std::span<const double> values);

/// Zoomed and normalized field V(x) = (v(x0 + r x) - v(x0)) / S on the target
/// grid (x measured from the target grid's origin), by bilinear interpolation.
ScalarField rescale_blowup(const ScalarField& v, Vec2 x0, double r, double S,
                           std::shared_ptr<const Grid2D> target);

/// Gradient-normalized zoom w(y) = (v(x0 + rho y) - v(x0)) / rho^beta with
/// rho = |grad v(x0)|^{1/(beta-1)}, so |grad w(0)| = 1.  Requires a nonzero
/// discrete gradient at x0.
ScalarField rescale_gradient(const ScalarField& v, Vec2 x0, double beta,
                             std::shared_ptr<const Grid2D> target);

/// Dyadic oscillation-decay probe along radii r0, 2 r0, 4 r0, ...:
/// per radius, (i) S_r <= C r^beta, or (ii) some k >= 1 in the chain has
/// S_r <= 2^{-k beta} S_{2^k r}.  c_star is the smallest constant making (i)
/// hold at every probed radius.
struct DyadicProbe {
    std::vector<double> radii;  // increasing dyadic chain
    std::vector<double> s_osc;
    std::vector<bool> alt_i;
    std::vector<bool> alt_ii;
    std::vector<int> alt_ii_k;  // smallest witness k, 0 if none
    double c_star = 0.0;
    double beta = 0.0;
    double c = 0.0;
};

DyadicProbe dyadic_alternative_probe(const ScalarField& v, Vec2 center, double r0, double beta,
                                     double C);

}  // namespace pplab
