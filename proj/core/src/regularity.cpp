#include "pplab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pplab/grid_ops.hpp"

namespace pplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t snap_to_interior_node(const Grid2D& g, Vec2 center) {
    const std::size_t n = g.nearest_node(center);
    if (norm(g.coord(n) - center) > 0.5 * g.spacing() + 1e-12 || !g.interior(n))
        throw std::invalid_argument("scan center is not an interior grid node");
    return n;
}

Vec2 central_gradient_at(const ScalarField& v, std::size_t n) {
    const Grid2D& g = v.grid();
    auto [i, j] = g.ij(n);
    const double h = g.spacing();
    return {(v.at(i + 1, j) - v.at(i - 1, j)) / (2 * h),
            (v.at(i, j + 1) - v.at(i, j - 1)) / (2 * h)};
}

}  // namespace

double holder_beta(double p, double q, double epsilon_margin) {
    if (!(p > 1.0)) throw std::invalid_argument("holder_beta: p must exceed 1");
    if (p == 2.0)
        throw std::invalid_argument("holder_beta: p = 2 is outside the exponent dichotomy");
    if (!(q > 2.0)) throw std::invalid_argument("holder_beta: q must exceed 2");
    if (epsilon_margin < 0) throw std::invalid_argument("holder_beta: negative margin");
    if (p < 2.0) return std::isinf(q) ? 2.0 - epsilon_margin : 2.0 - 2.0 / q;
    return std::isinf(q) ? p / (p - 1) - epsilon_margin : (p - 2.0 / q) / (p - 1);
}

double p_harmonic_gradient_exponent(double p) {
    if (!(p > 1.0))
        throw std::invalid_argument("p_harmonic_gradient_exponent: p must exceed 1");
    const double s = 1.0 / (p - 1);
    return (p * s + std::sqrt(1.0 + 14.0 * s + s * s)) / 6.0;
}

ExponentParams ExponentParams::make(double p, double q, double epsilon_margin) {
    ExponentParams e;
    e.p = p;
    e.q = q;
    e.beta = holder_beta(p, q, epsilon_margin);
    e.alpha = 1.0 / (p - 1);
    e.kappa = p_harmonic_gradient_exponent(p);
    if (!(e.beta > 1.0 && e.beta < 2.0))
        throw std::invalid_argument("ExponentParams: beta outside (1, 2); check p, q, margin");
    return e;
}

namespace {

// Shared pair-sweep machinery for scalar and vector seminorms.  diff(a, b)
// returns |u(a) - u(b)| or NaN for a pair that must be skipped.
template <typename DiffFn>
SeminormResult seminorm_impl(const Grid2D& g, double s, std::span<const std::size_t> region,
                             std::size_t pair_budget, DiffFn&& diff) {
    if (!(s > 0.0 && s <= 1.0))
        throw std::invalid_argument("holder_seminorm: exponent must lie in (0, 1]");
    if (region.size() < 2)
        throw std::invalid_argument("holder_seminorm: region needs at least 2 nodes");
    const double h = g.spacing();
    const double min_dist = 2 * h;
    SeminormResult res;

    const std::size_t m = region.size();
    const std::size_t total_pairs = m * (m - 1) / 2;
    if (total_pairs <= pair_budget) {
        for (std::size_t a = 0; a < m; ++a) {
            const Vec2 pa = g.coord(region[a]);
            for (std::size_t b = a + 1; b < m; ++b) {
                const double dist = norm(g.coord(region[b]) - pa);
                if (dist < min_dist) continue;
                const double d = diff(region[a], region[b]);
                if (!std::isfinite(d)) continue;
                ++res.pairs_evaluated;
                res.value = std::max(res.value, d / std::pow(dist, s));
            }
        }
        if (res.pairs_evaluated == 0)
            throw std::invalid_argument("holder_seminorm: no admissible node pairs");
        return res;
    }

    // Deterministic stratified subsample.  Pairs are grouped by the offset
    // (di, dj) between their grid indices; offsets are binned into distance
    // decades, each decade receives an equal share of the budget, and within
    // an offset class base nodes are visited at a fixed stride.
    res.subsampled = true;
    std::vector<char> in_region(g.size(), 0);
    int i_lo = g.nx(), i_hi = 0, j_lo = g.ny(), j_hi = 0;
    for (std::size_t n : region) {
        in_region[n] = 1;
        auto [i, j] = g.ij(n);
        i_lo = std::min(i_lo, i);
        i_hi = std::max(i_hi, i);
        j_lo = std::min(j_lo, j);
        j_hi = std::max(j_hi, j);
    }
    const int span_i = i_hi - i_lo;
    const int span_j = j_hi - j_lo;
    const double span = std::hypot(span_i, span_j) * h;
    const int n_decades = std::max(1, static_cast<int>(std::ceil(std::log10(span / min_dist))));
    std::vector<std::size_t> offsets_per_decade(n_decades, 0);
    auto decade_of = [&](double dist) {
        const int t = static_cast<int>(std::floor(std::log10(dist / min_dist)));
        return std::clamp(t, 0, n_decades - 1);
    };
    // Offsets with di > 0, or di == 0 and dj > 0, cover each pair once.
    for (int dj = -span_j; dj <= span_j; ++dj) {
        for (int di = 0; di <= span_i; ++di) {
            if (di == 0 && dj <= 0) continue;
            const double dist = std::hypot(di, dj) * h;
            if (dist < min_dist || dist > span) continue;
            ++offsets_per_decade[decade_of(dist)];
        }
    }
    const std::size_t budget_per_decade = std::max<std::size_t>(1, pair_budget / n_decades);
    for (int dj = -span_j; dj <= span_j; ++dj) {
        for (int di = 0; di <= span_i; ++di) {
            if (di == 0 && dj <= 0) continue;
            const double dist = std::hypot(di, dj) * h;
            if (dist < min_dist || dist > span) continue;
            const int t = decade_of(dist);
            const std::size_t per_offset =
                std::max<std::size_t>(1, budget_per_decade / offsets_per_decade[t]);
            const std::size_t stride = std::max<std::size_t>(1, m / per_offset);
            const double denom = std::pow(dist, s);
            for (std::size_t a = 0; a < m; a += stride) {
                auto [i, j] = g.ij(region[a]);
                const int ii = i + di, jj = j + dj;
                if (!g.in_bounds(ii, jj)) continue;
                const std::size_t nb = g.index(ii, jj);
                if (!in_region[nb]) continue;
                const double d = diff(region[a], nb);
                if (!std::isfinite(d)) continue;
                ++res.pairs_evaluated;
                res.value = std::max(res.value, d / denom);
            }
        }
    }
    if (res.pairs_evaluated == 0)
        throw std::invalid_argument("holder_seminorm: no admissible node pairs");
    return res;
}

}  // namespace

SeminormResult holder_seminorm(const ScalarField& field, double s,
                               std::span<const std::size_t> region, std::size_t pair_budget) {
    return seminorm_impl(field.grid(), s, region, pair_budget,
                         [&field](std::size_t a, std::size_t b) {
                             return std::abs(field[a] - field[b]);
                         });
}

SeminormResult holder_seminorm(const VectorField& field, double s,
                               std::span<const std::size_t> region, std::size_t pair_budget) {
    return seminorm_impl(field.grid(), s, region, pair_budget,
                         [&field](std::size_t a, std::size_t b) {
                             return std::hypot(field.x(a) - field.x(b), field.y(a) - field.y(b));
                         });
}

namespace {

// Distances and excess values of all usable nodes within the largest radius,
// sorted by distance so per-radius sups are prefix maxima.
struct SortedExcess {
    std::vector<double> dist, osc, lin;
};

SortedExcess sorted_excess(const ScalarField& v, std::size_t center_node, Vec2 gc, double r_max) {
    const Grid2D& g = v.grid();
    const Vec2 c = g.coord(center_node);
    const double vc = v[center_node];
    auto nodes = g.nodes_in_ball(c, r_max, /*interior_only=*/false);
    std::vector<std::size_t> order(nodes.size());
    std::vector<double> d(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        order[k] = k;
        d[k] = norm(g.coord(nodes[k]) - c);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    SortedExcess out;
    out.dist.reserve(nodes.size());
    for (std::size_t k : order) {
        const std::size_t n = nodes[k];
        const double val = v[n];
        if (!std::isfinite(val)) continue;
        const Vec2 dy = g.coord(n) - c;
        out.dist.push_back(d[k]);
        out.osc.push_back(std::abs(val - vc));
        out.lin.push_back(std::abs(val - vc - dot(dy, gc)));
    }
    // Running maxima turn the per-radius sups into a lookup.
    for (std::size_t k = 1; k < out.dist.size(); ++k) {
        out.osc[k] = std::max(out.osc[k], out.osc[k - 1]);
        out.lin[k] = std::max(out.lin[k], out.lin[k - 1]);
    }
    return out;
}

double prefix_value(const std::vector<double>& dist, const std::vector<double>& pref, double r) {
    const auto it = std::upper_bound(dist.begin(), dist.end(), r);
    if (it == dist.begin()) return 0.0;
    return pref[static_cast<std::size_t>(it - dist.begin()) - 1];
}

}  // namespace

ExcessScan excess_scan(const ScalarField& v, Vec2 center, std::vector<double> radii) {
    const Grid2D& g = v.grid();
    const std::size_t cn = snap_to_interior_node(g, center);
    const Vec2 c = g.coord(cn);
    if (radii.empty()) throw std::invalid_argument("excess_scan: no radii");
    std::sort(radii.begin(), radii.end(), std::greater<>());
    const double h = g.spacing();
    const double limit = 0.25 * g.distance_to_domain_boundary(c);
    for (double r : radii)
        if (!(r >= 4 * h && r <= limit + 1e-12))
            throw std::invalid_argument(
                "excess_scan: radii must lie in [4*spacing, 0.25*dist(center, boundary)]");

    ExcessScan scan;
    scan.center = c;
    scan.center_gradient = central_gradient_at(v, cn);
    scan.radii = radii;
    const SortedExcess se = sorted_excess(v, cn, scan.center_gradient, radii.front());
    scan.s_osc.resize(radii.size());
    scan.s_lin.resize(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        scan.s_osc[k] = prefix_value(se.dist, se.osc, radii[k]);
        scan.s_lin[k] = prefix_value(se.dist, se.lin, radii[k]);
    }
    // Post-check: sups over nested balls must be monotone.
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (scan.s_osc[k] > scan.s_osc[k - 1] + 1e-15 || scan.s_lin[k] > scan.s_lin[k - 1] + 1e-15)
            throw std::logic_error("excess_scan: non-monotone excess values");

    std::vector<double> fr, fv;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (scan.s_lin[k] > 1e-14) {  // log of numerical zero is excluded
            fr.push_back(radii[k]);
            fv.push_back(scan.s_lin[k]);
        }
    }
    scan.usable_radii = fr.size();
    if (fr.size() >= 4) {
        const PowerFit fit = fit_exponent(fr, fv);
        scan.fitted_exponent = fit.slope;
        scan.fit_r2 = fit.r2;
    } else {
        scan.fitted_exponent = kNaN;
        scan.fit_r2 = kNaN;
    }
    return scan;
}

std::vector<double> auto_scan_radii(const Grid2D& grid, Vec2 center, int count) {
    const double h = grid.spacing();
    const double limit = 0.25 * grid.distance_to_domain_boundary(center);
    const double lo = 4 * h;
    double hi = 0.1 * grid.domain_radius();
    if (hi < 8 * h) hi = 24 * h;  // widen the nominal window on coarse grids
    hi = std::min(hi, limit);
    if (!(hi >= 2 * lo))
        throw std::invalid_argument("auto_scan_radii: no usable fit window at this spacing");
    std::vector<double> radii;
    for (int k = 0; k < count; ++k) {
        const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
        const double r = hi * std::pow(lo / hi, t);
        const double snapped = std::max(4.0, std::round(r / h)) * h;
        if (snapped <= limit + 1e-12) radii.push_back(snapped);
    }
    std::sort(radii.begin(), radii.end(), std::greater<>());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    if (radii.size() < 4)
        throw std::invalid_argument("auto_scan_radii: fewer than 4 distinct radii");
    return radii;
}

PowerFit fit_exponent(std::span<const double> radii, std::span<const double> values) {
    if (radii.size() != values.size())
        throw std::invalid_argument("fit_exponent: length mismatch");
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (radii[k] > 0 && values[k] > 0 && std::isfinite(radii[k]) && std::isfinite(values[k])) {
            xs.push_back(std::log(radii[k]));
            ys.push_back(std::log(values[k]));
        }
    }
    if (xs.size() < 4)
        throw std::invalid_argument("fit_exponent: needs at least 4 usable (r, value) pairs");
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0)) throw std::invalid_argument("fit_exponent: radii are all equal");
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.log_prefactor = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = ys[k] - (fit.log_prefactor + fit.slope * xs[k]);
        ss_res += e * e;
        ss_tot += (ys[k] - my) * (ys[k] - my);
    }
    fit.r2 = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = n;
    return fit;
}

ScalarField rescale_blowup(const ScalarField& v, Vec2 x0, double r, double S,
                           std::shared_ptr<const Grid2D> target) {
    if (!(r > 0)) throw std::invalid_argument("rescale_blowup: radius must be positive");
    if (!(S > 0)) throw std::invalid_argument("rescale_blowup: normalization must be positive");
    const double v0 = bilinear(v, x0);
    if (!std::isfinite(v0))
        throw std::invalid_argument("rescale_blowup: center outside the source domain");
    ScalarField out(target, kNaN);
    const Grid2D& tg = *target;
    for (std::size_t n = 0; n < tg.size(); ++n) {
        if (!tg.usable(n)) continue;
        const Vec2 x = tg.coord(n) - tg.origin();
        const double val = bilinear(v, x0 + r * x);
        if (!std::isfinite(val))
            throw std::invalid_argument("rescale_blowup: target node maps outside the source domain");
        out[n] = (val - v0) / S;
    }
    return out;
}

ScalarField rescale_gradient(const ScalarField& v, Vec2 x0, double beta,
                             std::shared_ptr<const Grid2D> target) {
    if (!(beta > 1.0 && beta < 2.0))
        throw std::invalid_argument("rescale_gradient: beta must lie in (1, 2)");
    const Grid2D& g = v.grid();
    const std::size_t cn = snap_to_interior_node(g, x0);
    const Vec2 gc = central_gradient_at(v, cn);
    const double gn = norm(gc);
    if (!(gn > 0))
        throw std::invalid_argument("rescale_gradient: zero gradient at the center (rho undefined)");
    const double rho = std::pow(gn, 1.0 / (beta - 1.0));
    const double denom = std::pow(rho, beta);
    const Vec2 c = g.coord(cn);
    const double v0 = v[cn];
    ScalarField out(target, kNaN);
    const Grid2D& tg = *target;
    for (std::size_t n = 0; n < tg.size(); ++n) {
        if (!tg.usable(n)) continue;
        const Vec2 y = tg.coord(n) - tg.origin();
        const double val = bilinear(v, c + rho * y);
        if (!std::isfinite(val))
            throw std::invalid_argument(
                "rescale_gradient: target node maps outside the source domain");
        out[n] = (val - v0) / denom;
    }
    return out;
}

DyadicProbe dyadic_alternative_probe(const ScalarField& v, Vec2 center, double r0, double beta,
                                     double C) {
    const Grid2D& g = v.grid();
    const std::size_t cn = snap_to_interior_node(g, center);
    const Vec2 c = g.coord(cn);
    const double h = g.spacing();
    if (!(r0 >= 4 * h))
        throw std::invalid_argument("dyadic_alternative_probe: r0 below 4*spacing");
    const double limit = 0.25 * g.distance_to_domain_boundary(c);
    DyadicProbe probe;
    probe.beta = beta;
    probe.c = C;
    for (double r = r0; r <= limit + 1e-12; r *= 2) probe.radii.push_back(r);
    if (probe.radii.size() < 3)
        throw std::invalid_argument("dyadic_alternative_probe: dyadic chain shorter than 3 radii");

    const Vec2 gc = central_gradient_at(v, cn);
    const SortedExcess se = sorted_excess(v, cn, gc, probe.radii.back());
    const std::size_t n = probe.radii.size();
    probe.s_osc.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        probe.s_osc[k] = prefix_value(se.dist, se.osc, probe.radii[k]);

    probe.alt_i.resize(n);
    probe.alt_ii.resize(n);
    probe.alt_ii_k.assign(n, 0);
    probe.c_star = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double rb = std::pow(probe.radii[k], beta);
        probe.alt_i[k] = probe.s_osc[k] <= C * rb;
        probe.c_star = std::max(probe.c_star, probe.s_osc[k] / rb);
        for (std::size_t m = 1; k + m < n; ++m) {
            if (probe.s_osc[k] <= std::pow(2.0, -static_cast<double>(m) * beta) * probe.s_osc[k + m]) {
                probe.alt_ii[k] = true;
                probe.alt_ii_k[k] = static_cast<int>(m);
                break;
            }
        }
    }
    return probe;
}

}  // namespace pplab
