#include "pplab/quasiregular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pplab/grid_ops.hpp"
#include "pplab/regularity.hpp"

namespace pplab {

VectorField complex_gradient(const ScalarField& u) {
    const VectorField g = gradient(u, MissingPolicy::strict);
    VectorField f(u.grid_ptr(), {kNaN, kNaN});
    for (std::size_t n = 0; n < u.grid().size(); ++n) f.set(n, {g.x(n), -g.y(n)});
    return f;
}

WirtingerPair wirtinger(const VectorField& f) {
    // Differentiating a derived field: stencils thin out near the boundary,
    // so missing neighbors yield NaN rather than errors.
    const VectorField d1 = gradient(f.component_x(), MissingPolicy::lenient);
    const VectorField d2 = gradient(f.component_y(), MissingPolicy::lenient);
    WirtingerPair wp{VectorField(f.grid_ptr(), {kNaN, kNaN}),
                     VectorField(f.grid_ptr(), {kNaN, kNaN})};
    for (std::size_t n = 0; n < f.grid().size(); ++n) {
        const double f1x = d1.x(n), f1y = d1.y(n);
        const double f2x = d2.x(n), f2y = d2.y(n);
        wp.fz.set(n, {0.5 * (f1x + f2y), 0.5 * (f2x - f1y)});
        wp.fzbar.set(n, {0.5 * (f1x - f2y), 0.5 * (f2x + f1y)});
    }
    return wp;
}

DilatationReport dilatation_check(const ScalarField& u, double p, double exclusion_radius,
                                  double tol_discrete) {
    if (!(p >= 2.0)) throw std::invalid_argument("dilatation_check: requires p >= 2");
    if (exclusion_radius < 0 || tol_discrete < 0)
        throw std::invalid_argument("dilatation_check: negative exclusion or tolerance");
    const Grid2D& g = u.grid();
    const VectorField f = complex_gradient(u);
    const WirtingerPair wp = wirtinger(f);

    // Scale of the gradient and its (near-)zero set.
    double grad_scale = 0.0;
    for (std::size_t n : g.interior_nodes())
        grad_scale = std::max(grad_scale, std::hypot(f.x(n), f.y(n)));
    std::vector<Vec2> zero_set;
    if (grad_scale > 0) {
        for (std::size_t n : g.interior_nodes())
            if (std::hypot(f.x(n), f.y(n)) < 1e-10 * grad_scale) zero_set.push_back(g.coord(n));
    }

    DilatationReport rep;
    rep.bound = (p - 2) / p;
    rep.tol_discrete = tol_discrete;

    double fz_scale = 0.0;
    std::vector<std::size_t> admissible;
    for (std::size_t n : g.interior_nodes()) {
        if (g.distance_to_domain_boundary(g.coord(n)) < exclusion_radius) continue;
        bool near_zero = false;
        for (const Vec2& z : zero_set) {
            if (norm(g.coord(n) - z) < exclusion_radius) {
                near_zero = true;
                break;
            }
        }
        if (near_zero) continue;
        const double a = std::hypot(wp.fz.x(n), wp.fz.y(n));
        const double b = std::hypot(wp.fzbar.x(n), wp.fzbar.y(n));
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        admissible.push_back(n);
        fz_scale = std::max(fz_scale, a);
    }
    if (admissible.empty())
        throw std::invalid_argument("dilatation_check: no admissible nodes after exclusions");

    for (std::size_t n : admissible) {
        const double a = std::hypot(wp.fz.x(n), wp.fz.y(n));
        const double b = std::hypot(wp.fzbar.x(n), wp.fzbar.y(n));
        if (a <= 1e-10 * fz_scale) {  // covers fz == 0 identically (affine u)
            ++rep.skipped_small_fz;
            continue;
        }
        ++rep.admissible;
        const double ratio = b / a;
        rep.sup_ratio = std::max(rep.sup_ratio, ratio);
        if (ratio > rep.bound + tol_discrete) ++rep.violations;
    }
    return rep;
}

GrowthReport dirichlet_growth(const ScalarField& u, double p, std::vector<double> radii,
                              double inner_exclusion) {
    if (!(p >= 2.0)) throw std::invalid_argument("dirichlet_growth: requires p >= 2");
    if (radii.size() < 4) throw std::invalid_argument("dirichlet_growth: needs at least 4 radii");
    std::sort(radii.begin(), radii.end());
    const Grid2D& g = u.grid();
    const VectorField f = complex_gradient(u);
    const VectorField d1 = gradient(f.component_x(), MissingPolicy::lenient);
    const VectorField d2 = gradient(f.component_y(), MissingPolicy::lenient);

    GrowthReport rep;
    rep.radii = radii;
    rep.two_alpha = 2.0 / (p - 1);
    rep.integrals.assign(radii.size(), 0.0);
    const double h2 = g.spacing() * g.spacing();
    for (std::size_t n : g.interior_nodes()) {
        const double r = norm(g.coord(n) - g.origin());
        if (r < inner_exclusion || r > radii.back()) continue;
        const double df2 = d1.x(n) * d1.x(n) + d1.y(n) * d1.y(n) + d2.x(n) * d2.x(n) +
                           d2.y(n) * d2.y(n);
        if (!std::isfinite(df2)) continue;
        for (std::size_t k = 0; k < radii.size(); ++k)
            if (r <= radii[k]) rep.integrals[k] += h2 * df2;
    }
    double scale = 0.0;
    for (double v : rep.integrals) scale = std::max(scale, v);
    std::vector<double> fr, fv;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (rep.integrals[k] > 1e-14 * std::max(scale, 1.0)) {
            fr.push_back(radii[k]);
            fv.push_back(rep.integrals[k]);
        }
    }
    rep.usable = fr.size();
    if (fr.size() >= 4) {
        const PowerFit fit = fit_exponent(fr, fv);
        rep.slope = fit.slope;
        rep.r2 = fit.r2;
    } else {
        rep.slope = kNaN;
        rep.r2 = kNaN;
    }
    return rep;
}

HolderRatioReport gradient_holder_check(const ScalarField& u, double p, Vec2 center, double R,
                                        std::size_t pair_budget) {
    if (!(p >= 2.0)) throw std::invalid_argument("gradient_holder_check: requires p >= 2");
    if (!(R > 0)) throw std::invalid_argument("gradient_holder_check: radius must be positive");
    const Grid2D& g = u.grid();
    HolderRatioReport rep;
    rep.alpha = 1.0 / (p - 1);
    rep.radius = R;
    const VectorField grad = gradient(u, MissingPolicy::strict);
    const auto region = g.nodes_in_ball(center, R, /*interior_only=*/true);
    const SeminormResult sem = holder_seminorm(grad, rep.alpha, region, pair_budget);
    rep.seminorm = sem.value;
    rep.subsampled = sem.subsampled;
    for (std::size_t n : g.nodes_in_ball(center, 2 * R, /*interior_only=*/true))
        rep.sup_norm = std::max(rep.sup_norm, std::abs(u[n]));
    if (rep.sup_norm > 0)
        rep.ratio = rep.seminorm * std::pow(R, 1.0 + rep.alpha) / rep.sup_norm;
    else
        rep.ratio = rep.seminorm == 0.0 ? 0.0 : kNaN;
    return rep;
}

SmallGradientReport small_gradient_check(const ScalarField& u, double p, Vec2 center, double R,
                                         double grad_zero_tol) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("small_gradient_check: requires 1 < p < 2");
    if (!(R > 0)) throw std::invalid_argument("small_gradient_check: radius must be positive");
    const Grid2D& g = u.grid();
    const double h = g.spacing();
    const VectorField grad = gradient(u, MissingPolicy::strict);
    const std::size_t cn = g.nearest_node(center);
    if (!g.interior(cn))
        throw std::invalid_argument("small_gradient_check: center is not interior");
    const Vec2 c = g.coord(cn);
    const double g0 = std::hypot(grad.x(cn), grad.y(cn));
    if (!(g0 <= grad_zero_tol))
        throw std::invalid_argument(
            "small_gradient_check: gradient at the center exceeds the zero tolerance");

    SmallGradientReport rep;
    rep.radius = R;
    for (std::size_t n : g.nodes_in_ball(c, R, /*interior_only=*/true)) {
        const double d = norm(g.coord(n) - c);
        if (d < 2 * h) continue;  // punctured: the quotient is stencil noise below resolution
        const double gn = std::hypot(grad.x(n), grad.y(n));
        if (!std::isfinite(gn)) continue;
        ++rep.nodes;
        rep.sup_quotient = std::max(rep.sup_quotient, gn / d);
    }
    if (rep.nodes == 0)
        throw std::invalid_argument("small_gradient_check: empty punctured region");
    for (std::size_t n : g.nodes_in_ball(c, 2 * R, /*interior_only=*/true))
        rep.sup_norm = std::max(rep.sup_norm, std::abs(u[n]));
    rep.ratio = rep.sup_norm > 0 ? rep.sup_quotient * R * R / rep.sup_norm : 0.0;
    return rep;
}

}  // namespace pplab
