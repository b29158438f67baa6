#include "pplab/exact.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pplab {

namespace {

double sign_pow(double g, double e) {
    // |g|^e with the sign of g; pow(0, e) = 0 for e > 0.
    return std::copysign(std::pow(std::abs(g), e), g);
}

void require_p_gt_1(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("exponent p must exceed 1");
}

}  // namespace

RadialProfile torsional_creep(double p) {
    require_p_gt_1(p);
    RadialProfile prof;
    prof.label = "torsional";
    prof.value = [p](double r) {
        if (r < 0) throw std::domain_error("torsional profile: negative radius");
        return (p - 1) / p * std::pow(r, p / (p - 1));
    };
    prof.derivative = [p](double r) {
        if (r < 0) throw std::domain_error("torsional profile: negative radius");
        return std::pow(r, 1 / (p - 1));
    };
    // Flux r * |v'|^{p-2} v' = r^2, hence h == 2.
    prof.flux_derivative = [](double r) { return 2 * r; };
    prof.flux_p = p;
    return prof;
}

RadialProfile lq_profile(double p, double q) {
    require_p_gt_1(p);
    if (!(q > 2.0)) throw std::invalid_argument("lq profile requires q > 2");
    const double a = (1 - 2 / q) / (p - 1);
    const double b = 2 / (q * (p - 1));
    auto deriv = [a, b](double r) {
        if (r <= 0) return 0.0;
        if (r >= 1) throw std::domain_error("lq profile: valid only for r < 1");
        return std::pow(r, a) * std::pow(-std::log(r), -b);
    };

    // v(r) = int_0^r v'(rho) drho.  Substituting rho = t^3 flattens the weak
    // endpoint singularity of the integrand's derivatives at 0.
    auto memo = std::make_shared<std::map<double, double>>();
    auto memo_mutex = std::make_shared<std::mutex>();
    auto value = [deriv, memo, memo_mutex](double r) {
        if (r < 0) throw std::domain_error("lq profile: negative radius");
        if (r >= 1) throw std::domain_error("lq profile: valid only for r < 1");
        if (r == 0) return 0.0;
        {
            std::lock_guard<std::mutex> lock(*memo_mutex);
            auto it = memo->find(r);
            if (it != memo->end()) return it->second;
        }
        auto integrand = [deriv](double t) {
            if (t <= 0) return 0.0;
            return 3 * t * t * deriv(t * t * t);
        };
        double err = 0.0;
        const double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            integrand, 0.0, std::cbrt(r), /*max_depth=*/15, /*tol=*/1e-12, &err);
        if (!(err < 1e-10))
            throw std::runtime_error("lq profile: quadrature did not reach 1e-10");
        std::lock_guard<std::mutex> lock(*memo_mutex);
        memo->emplace(r, val);
        return val;
    };

    RadialProfile prof;
    prof.label = "lq";
    prof.value = value;
    prof.derivative = deriv;
    // Flux r |v'|^{p-1} ... = r^{2-2/q} (-ln r)^{-2/q}; differentiate directly.
    prof.flux_derivative = [q](double r) {
        if (r <= 0 || r >= 1) throw std::domain_error("lq profile: flux valid for 0 < r < 1");
        const double L = -std::log(r);
        const double e = 2 / q;
        return std::pow(r, 1 - e) * std::pow(L, -e) * ((2 - e) + e / L);
    };
    prof.flux_p = p;
    prof.r_max = 1.0;
    return prof;
}

RadialProfile radial_p_harmonic(double p) {
    require_p_gt_1(p);
    if (p == 2.0)
        throw std::invalid_argument("radial_p_harmonic requires p != 2 (the p = 2 profile is constant)");
    const double g = (p - 2) / (p - 1);
    RadialProfile prof;
    prof.label = "p-harmonic";
    prof.singular_at_origin = p < 2;
    prof.value = [p, g](double r) {
        if (r < 0) throw std::domain_error("radial_p_harmonic: negative radius");
        if (r == 0 && p < 2)
            throw std::domain_error("radial_p_harmonic: singular at r = 0 for p < 2");
        return std::pow(r, g);
    };
    prof.derivative = [p, g](double r) {
        if (r <= 0) throw std::domain_error("radial_p_harmonic: derivative singular at r <= 0");
        return g * std::pow(r, -1 / (p - 1));
    };
    // Flux r |v'|^{p-2} v' is the constant sign(g)|g|^{p-1}.
    prof.flux_derivative = [](double) { return 0.0; };
    prof.flux_p = p;
    return prof;
}

std::function<double(double)> radial_p_poisson_rhs(const RadialProfile& profile, double p) {
    require_p_gt_1(p);
    if (profile.flux_derivative && profile.flux_p == p) {
        auto fd = profile.flux_derivative;
        return [fd](double r) {
            if (r <= 0) throw std::domain_error("radial_p_poisson_rhs: requires r > 0");
            return fd(r) / r;
        };
    }
    auto deriv = profile.derivative;
    return [deriv, p](double r) {
        if (r <= 0) throw std::domain_error("radial_p_poisson_rhs: requires r > 0");
        auto flux = [&](double s) { return s * sign_pow(deriv(s), p - 1); };
        const double step = 1e-5 * r;
        return (flux(r + step) - flux(r - step)) / (2 * step) / r;
    };
}

ScalarField render(const RadialProfile& profile, std::shared_ptr<const Grid2D> grid,
                   std::optional<Vec2> center) {
    const Vec2 c = center.value_or(grid->origin());
    ScalarField out(grid, kNaN);
    const Grid2D& g = *grid;
    // Symmetric grids repeat radii many times; profiles with expensive value
    // functions (quadrature) are evaluated once per distinct radius.
    std::map<double, double> cache;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!g.usable(n)) continue;
        const double r = norm(g.coord(n) - c);
        if (r >= profile.r_max)
            throw std::domain_error("render: node at radius " + std::to_string(r) +
                                    " outside the profile's validity");
        if (r == 0 && profile.singular_at_origin)
            throw std::domain_error("render: node at the profile's singular origin");
        auto it = cache.find(r);
        if (it == cache.end()) it = cache.emplace(r, profile.value(r)).first;
        out[n] = it->second;
    }
    return out;
}

}  // namespace pplab
