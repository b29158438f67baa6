#include "pplab/conjugate.hpp"

#include <cmath>
#include <stdexcept>

#include "pplab/grid_ops.hpp"
#include "pplab/solver.hpp"

namespace pplab {

namespace {

// Trapezoidal update along one grid edge: contribution of the component
// `w` of the one-form when stepping from node a to node b (signed step h).
double edge_step(const ScalarField& w, std::size_t a, std::size_t b, double signed_h) {
    return 0.5 * signed_h * (w[a] + w[b]);
}

}  // namespace

ConjugatePair conjugate_function(const ScalarField& u, double p, int base_i, int base_j,
                                 PathOrder order) {
    if (!(p > 1.0)) throw std::invalid_argument("conjugate_function: p must exceed 1");
    const Grid2D& g = u.grid();
    if (!g.in_bounds(base_i, base_j) || !g.interior(g.index(base_i, base_j)))
        throw std::invalid_argument("conjugate_function: base point must be an interior node");
    const double h = g.spacing();

    const VectorField grad = gradient(u, MissingPolicy::strict);
    double scale = 0.0;
    for (std::size_t n : g.interior_nodes())
        scale = std::max(scale, std::hypot(grad.x(n), grad.y(n)));
    if (!(scale > 0))
        throw std::runtime_error(
            "conjugate_function: gradient vanishes identically; exclude the gradient's zero "
            "set from the integration region");
    const double floor = 1e-12 * scale;

    ConjugatePair pair{u, ScalarField(u.grid_ptr(), kNaN), p, p / (p - 1), 0.0, 0, 0,
                       base_i, base_j};

    // One-form components at usable nodes; NaN where the gradient is missing.
    ScalarField wx(u.grid_ptr(), kNaN), wy(u.grid_ptr(), kNaN);
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!g.usable(n)) continue;
        const double gx = grad.x(n), gy = grad.y(n);
        if (!std::isfinite(gx) || !std::isfinite(gy)) continue;
        double mag = std::hypot(gx, gy);
        if (mag < floor) {
            mag = floor;
            ++pair.floored_nodes;
        }
        const double w = std::pow(mag, p - 2);
        wx[n] = -w * gy;
        wy[n] = w * gx;
    }

    auto usable = [&](int i, int j) {
        return g.in_bounds(i, j) && g.usable(g.index(i, j)) &&
               std::isfinite(wx[g.index(i, j)]) && std::isfinite(wy[g.index(i, j)]);
    };

    ScalarField& v = pair.v;
    const std::size_t base = g.index(base_i, base_j);
    v[base] = 0.0;

    // March a full line from the base along one axis, then branch along the
    // other; first x then y by default.
    auto march = [&](const ScalarField& w, int i0, int j0, int di, int dj) {
        int i = i0, j = j0;
        for (;;) {
            const int ii = i + di, jj = j + dj;
            if (!usable(ii, jj)) break;
            const std::size_t a = g.index(i, j), b = g.index(ii, jj);
            if (!std::isfinite(v[a])) break;
            v[b] = v[a] + edge_step(w, a, b, h * (di + dj));
            i = ii;
            j = jj;
        }
    };

    if (order == PathOrder::x_then_y) {
        march(wx, base_i, base_j, 1, 0);
        march(wx, base_i, base_j, -1, 0);
        for (int i = 0; i < g.nx(); ++i) {
            if (!std::isfinite(v[g.index(i, base_j)])) continue;
            march(wy, i, base_j, 0, 1);
            march(wy, i, base_j, 0, -1);
        }
    } else {
        march(wy, base_i, base_j, 0, 1);
        march(wy, base_i, base_j, 0, -1);
        for (int j = 0; j < g.ny(); ++j) {
            if (!std::isfinite(v[g.index(base_i, j)])) continue;
            march(wx, base_i, j, 1, 0);
            march(wx, base_i, j, -1, 0);
        }
    }

    for (std::size_t n = 0; n < g.size(); ++n)
        if (g.usable(n) && !std::isfinite(v[n])) ++pair.unreachable_nodes;

    // Path-independence defect: circulation around each elementary cell.
    for (int j = 0; j + 1 < g.ny(); ++j) {
        for (int i = 0; i + 1 < g.nx(); ++i) {
            if (!usable(i, j) || !usable(i + 1, j) || !usable(i + 1, j + 1) || !usable(i, j + 1))
                continue;
            const std::size_t n00 = g.index(i, j), n10 = g.index(i + 1, j);
            const std::size_t n11 = g.index(i + 1, j + 1), n01 = g.index(i, j + 1);
            const double circ = edge_step(wx, n00, n10, h) + edge_step(wy, n10, n11, h) +
                                edge_step(wx, n11, n01, -h) + edge_step(wy, n01, n00, -h);
            pair.curl_residual = std::max(pair.curl_residual, std::abs(circ));
        }
    }
    return pair;
}

ConjugateCheck verify_conjugate(const ConjugatePair& pair) {
    const Grid2D& g = pair.u.grid();
    const VectorField gu = gradient(pair.u, MissingPolicy::strict);
    const VectorField gv = gradient(pair.v, MissingPolicy::lenient);
    ConjugateCheck check;
    for (std::size_t n : g.interior_nodes()) {
        const double mu = std::hypot(gu.x(n), gu.y(n));
        const double mv = std::hypot(gv.x(n), gv.y(n));
        if (!std::isfinite(mu) || !std::isfinite(mv)) continue;
        const double lhs = std::pow(mv, pair.p_prime);
        const double rhs = std::pow(mu, pair.p);
        check.norm_identity_error =
            std::max(check.norm_identity_error, std::abs(lhs - rhs) / (rhs + 1e-14));
        ++check.nodes;
    }
    if (check.nodes == 0)
        throw std::runtime_error("verify_conjugate: no interior nodes with both gradients");
    const ScalarField zero(pair.u.grid_ptr(), 0.0);
    check.dual_residual = residual_rms(pair.v, zero, pair.p_prime, 0.0);
    return check;
}

}  // namespace pplab
