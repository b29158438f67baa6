#include "pplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pplab {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::disc: return "disc";
        case DomainKind::square: return "square";
        case DomainKind::annulus: return "annulus";
    }
    throw std::logic_error("unknown DomainKind");
}

DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "disc") return DomainKind::disc;
    if (s == "square") return DomainKind::square;
    if (s == "annulus") return DomainKind::annulus;
    throw std::invalid_argument("unknown domain kind '" + s + "' (expected disc, square or annulus)");
}

namespace {

int half_extent_nodes(double extent, double spacing) {
    return static_cast<int>(std::ceil(extent / spacing)) + 2;
}

}  // namespace

std::shared_ptr<const Grid2D> Grid2D::disc(double radius, double spacing, Vec2 origin) {
    if (radius <= 0) throw std::invalid_argument("disc radius must be positive");
    const int n = half_extent_nodes(radius, spacing);
    return std::make_shared<Grid2D>(DomainKind::disc, radius, 0.0, spacing, origin,
                                    2 * n + 1, 2 * n + 1);
}

std::shared_ptr<const Grid2D> Grid2D::square(double half_width, double spacing, Vec2 origin) {
    if (half_width <= 0) throw std::invalid_argument("square half-width must be positive");
    const int n = half_extent_nodes(half_width, spacing);
    return std::make_shared<Grid2D>(DomainKind::square, half_width, 0.0, spacing, origin,
                                    2 * n + 1, 2 * n + 1);
}

std::shared_ptr<const Grid2D> Grid2D::annulus(double inner_radius, double outer_radius,
                                              double spacing, Vec2 origin) {
    if (inner_radius <= 0 || outer_radius <= inner_radius)
        throw std::invalid_argument("annulus requires 0 < inner < outer radius");
    const int n = half_extent_nodes(outer_radius, spacing);
    return std::make_shared<Grid2D>(DomainKind::annulus, outer_radius, inner_radius, spacing,
                                    origin, 2 * n + 1, 2 * n + 1);
}

Grid2D::Grid2D(DomainKind kind, double param1, double param2, double spacing, Vec2 origin,
               int nx, int ny)
    : kind_(kind), param1_(param1), param2_(param2), spacing_(spacing), origin_(origin),
      nx_(nx), ny_(ny) {
    if (!(spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
    if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
    if (param1 <= 0) throw std::invalid_argument("domain parameter must be positive");
    if (kind == DomainKind::annulus && !(param2 > 0 && param2 < param1))
        throw std::invalid_argument("annulus requires 0 < inner < outer radius");
    cx_ = (nx_ - 1) / 2;  // integer center when nx is odd; factories always make it odd
    cy_ = (ny_ - 1) / 2;
    classify();
}

void Grid2D::classify() {
    mask_.assign(size(), NodeClass::exterior);
    const double h = spacing_;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const Vec2 p = coord(i, j);
            const Vec2 d = p - origin_;
            bool inside = false;
            switch (kind_) {
                case DomainKind::disc:
                    inside = norm(d) < param1_ - h / 2;
                    break;
                case DomainKind::square:
                    inside = std::max(std::abs(d.x), std::abs(d.y)) < param1_ - h / 2;
                    break;
                case DomainKind::annulus: {
                    const double r = norm(d);
                    inside = r > param2_ + h / 2 && r < param1_ - h / 2;
                    break;
                }
            }
            if (inside) mask_[index(i, j)] = NodeClass::interior;
        }
    }
    // First layer of non-interior nodes touching the interior carries Dirichlet data.
    static constexpr int di[4] = {1, -1, 0, 0};
    static constexpr int dj[4] = {0, 0, 1, -1};
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (mask_[index(i, j)] != NodeClass::exterior) continue;
            for (int k = 0; k < 4; ++k) {
                const int ii = i + di[k], jj = j + dj[k];
                if (in_bounds(ii, jj) && mask_[index(ii, jj)] == NodeClass::interior) {
                    mask_[index(i, j)] = NodeClass::boundary;
                    break;
                }
            }
        }
    }
    interior_nodes_.clear();
    for (std::size_t n = 0; n < size(); ++n)
        if (mask_[n] == NodeClass::interior) interior_nodes_.push_back(n);
    if (interior_nodes_.empty())
        throw std::invalid_argument("domain has no interior nodes at this spacing");
    // Every interior node must have its 4 axis neighbors on the grid and usable.
    for (std::size_t n : interior_nodes_) {
        auto [i, j] = ij(n);
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k], jj = j + dj[k];
            if (!in_bounds(ii, jj) || mask_[index(ii, jj)] == NodeClass::exterior)
                throw std::logic_error("interior node with an exterior axis neighbor");
        }
    }
}

std::size_t Grid2D::nearest_node(Vec2 p) const {
    const int i = std::clamp(static_cast<int>(std::lround(frac_i(p.x))), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::lround(frac_j(p.y))), 0, ny_ - 1);
    return index(i, j);
}

double Grid2D::distance_to_domain_boundary(Vec2 p) const {
    const Vec2 d = p - origin_;
    switch (kind_) {
        case DomainKind::disc: return param1_ - norm(d);
        case DomainKind::square: return param1_ - std::max(std::abs(d.x), std::abs(d.y));
        case DomainKind::annulus: {
            const double r = norm(d);
            return std::min(param1_ - r, r - param2_);
        }
    }
    throw std::logic_error("unknown DomainKind");
}

std::vector<std::size_t> Grid2D::nodes_in_ball(Vec2 center, double r, bool interior_only) const {
    std::vector<std::size_t> out;
    const int i0 = std::max(0, static_cast<int>(std::floor(frac_i(center.x - r))));
    const int i1 = std::min(nx_ - 1, static_cast<int>(std::ceil(frac_i(center.x + r))));
    const int j0 = std::max(0, static_cast<int>(std::floor(frac_j(center.y - r))));
    const int j1 = std::min(ny_ - 1, static_cast<int>(std::ceil(frac_j(center.y + r))));
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const std::size_t n = index(i, j);
            if (interior_only ? !interior(n) : !usable(n)) continue;
            if (norm(coord(i, j) - center) <= r) out.push_back(n);
        }
    }
    return out;
}

}  // namespace pplab
