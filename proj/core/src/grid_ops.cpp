#include "pplab/grid_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace pplab {

namespace {

struct AxisView {
    // Signed unit step in flat index space along the axis.
    const Grid2D* g;
    int di, dj;

    bool usable(const std::vector<double>& v, int i, int j) const {
        if (!g->in_bounds(i, j)) return false;
        const std::size_t n = g->index(i, j);
        return g->usable(n) && std::isfinite(v[n]);
    }
    double at(const std::vector<double>& v, int i, int j) const { return v[g->index(i, j)]; }
};

// One axis derivative at (i, j).  Order of preference: central, one-sided
// second-order (either direction), then first-order only at boundary nodes.
double axis_derivative(const AxisView& ax, const std::vector<double>& v, int i, int j,
                       double h, bool boundary_node, bool& ok) {
    const int di = ax.di, dj = ax.dj;
    const bool plus1 = ax.usable(v, i + di, j + dj);
    const bool minus1 = ax.usable(v, i - di, j - dj);
    ok = true;
    if (plus1 && minus1)
        return (ax.at(v, i + di, j + dj) - ax.at(v, i - di, j - dj)) / (2 * h);
    if (plus1 && ax.usable(v, i + 2 * di, j + 2 * dj))
        return (-3 * ax.at(v, i, j) + 4 * ax.at(v, i + di, j + dj) -
                ax.at(v, i + 2 * di, j + 2 * dj)) / (2 * h);
    if (minus1 && ax.usable(v, i - 2 * di, j - 2 * dj))
        return (3 * ax.at(v, i, j) - 4 * ax.at(v, i - di, j - dj) +
                ax.at(v, i - 2 * di, j - 2 * dj)) / (2 * h);
    if (boundary_node) {
        if (plus1) return (ax.at(v, i + di, j + dj) - ax.at(v, i, j)) / h;
        if (minus1) return (ax.at(v, i, j) - ax.at(v, i - di, j - dj)) / h;
    }
    ok = false;
    return kNaN;
}

}  // namespace

VectorField gradient(const ScalarField& field, MissingPolicy policy) {
    const Grid2D& g = field.grid();
    const double h = g.spacing();
    const auto& v = field.values();
    VectorField out(field.grid_ptr(), {kNaN, kNaN});
    const AxisView ax_x{&g, 1, 0};
    const AxisView ax_y{&g, 0, 1};
    for (std::size_t n = 0; n < g.size(); ++n) {
        const NodeClass cls = g.node_class(n);
        if (cls == NodeClass::exterior) continue;
        if (!std::isfinite(v[n])) {
            if (cls == NodeClass::interior && policy == MissingPolicy::strict)
                throw std::runtime_error("gradient: non-finite value at an interior node");
            continue;
        }
        auto [i, j] = g.ij(n);
        const bool bd = cls == NodeClass::boundary;
        bool okx = false, oky = false;
        const double gx = axis_derivative(ax_x, v, i, j, h, bd, okx);
        const double gy = axis_derivative(ax_y, v, i, j, h, bd, oky);
        if ((!okx || !oky) && cls == NodeClass::interior && policy == MissingPolicy::strict)
            throw std::runtime_error(
                "gradient: no usable neighbor pair at an interior node (grid too coarse)");
        out.set(n, {gx, gy});
    }
    return out;
}

ScalarField divergence(const VectorField& vf, MissingPolicy policy) {
    const Grid2D& g = vf.grid();
    const double h = g.spacing();
    ScalarField out(vf.grid_ptr(), kNaN);
    ScalarField fx = vf.component_x();
    ScalarField fy = vf.component_y();
    const AxisView ax_x{&g, 1, 0};
    const AxisView ax_y{&g, 0, 1};
    for (std::size_t n = 0; n < g.size(); ++n) {
        const NodeClass cls = g.node_class(n);
        if (cls == NodeClass::exterior) continue;
        auto [i, j] = g.ij(n);
        const bool bd = cls == NodeClass::boundary;
        bool okx = false, oky = false;
        double dxx = kNaN, dyy = kNaN;
        if (std::isfinite(fx[n])) dxx = axis_derivative(ax_x, fx.values(), i, j, h, bd, okx);
        if (std::isfinite(fy[n])) dyy = axis_derivative(ax_y, fy.values(), i, j, h, bd, oky);
        if (!okx || !oky) {
            if (cls == NodeClass::interior && policy == MissingPolicy::strict)
                throw std::runtime_error(
                    "divergence: no usable neighbor pair at an interior node (grid too coarse)");
            out[n] = kNaN;
            continue;
        }
        out[n] = dxx + dyy;
    }
    return out;
}

double sup_over_ball(const ScalarField& field, Vec2 center, double r) {
    const Grid2D& g = field.grid();
    if (!(r >= 2 * g.spacing()))
        throw std::invalid_argument("sup_over_ball: radius below 2*spacing is unreliable");
    double best = -1.0;
    for (std::size_t n : g.nodes_in_ball(center, r, /*interior_only=*/false)) {
        const double a = std::abs(field[n]);
        if (std::isfinite(a) && a > best) best = a;
    }
    if (best < 0)
        throw std::invalid_argument("sup_over_ball: ball does not intersect the domain");
    return best;
}

double bilinear(const ScalarField& field, Vec2 p) {
    const Grid2D& g = field.grid();
    const double fi = g.frac_i(p.x);
    const double fj = g.frac_j(p.y);
    int i0 = static_cast<int>(std::floor(fi));
    int j0 = static_cast<int>(std::floor(fj));
    // Snap exact node hits so that points on the last row/column still work.
    if (i0 == g.nx() - 1 && fi == i0) --i0;
    if (j0 == g.ny() - 1 && fj == j0) --j0;
    if (i0 < 0 || j0 < 0 || i0 + 1 >= g.nx() || j0 + 1 >= g.ny()) return kNaN;
    const double tx = fi - i0;
    const double ty = fj - j0;
    const double v00 = field.at(i0, j0), v10 = field.at(i0 + 1, j0);
    const double v01 = field.at(i0, j0 + 1), v11 = field.at(i0 + 1, j0 + 1);
    if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v01) || !std::isfinite(v11))
        return kNaN;
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

}  // namespace pplab
