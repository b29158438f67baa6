#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pplab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

/// Node classification on the masked grid.  Boundary nodes are the first
/// layer of non-interior nodes adjacent (4-neighborhood) to the interior;
/// they carry Dirichlet data at their true node coordinates.
enum class NodeClass : unsigned char { exterior = 0, boundary = 1, interior = 2 };

enum class DomainKind { disc, square, annulus };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& s);

/// Uniform Cartesian grid whose mask selects a disc, square or annulus
/// centered at `origin`.  Node (i, j) sits at
/// origin + spacing * (i - cx, j - cy) with (cx, cy) the grid center.
///
/// Interior rules (half-spacing standoff avoids one-node-wide regions):
///   disc:    |x - origin| < radius - spacing/2
///   square:  max(|dx|, |dy|) < half_width - spacing/2
///   annulus: inner + spacing/2 < |x - origin| < outer - spacing/2
class Grid2D {
  public:
    static std::shared_ptr<const Grid2D> disc(double radius, double spacing, Vec2 origin = {});
    static std::shared_ptr<const Grid2D> square(double half_width, double spacing, Vec2 origin = {});
    static std::shared_ptr<const Grid2D> annulus(double inner_radius, double outer_radius,
                                                 double spacing, Vec2 origin = {});

    /// Explicit node counts; used by the CSV reader.  The mask is always
    /// recomputed from the domain rule, never stored in files.
    Grid2D(DomainKind kind, double param1, double param2, double spacing, Vec2 origin,
           int nx, int ny);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double spacing() const { return spacing_; }
    Vec2 origin() const { return origin_; }
    DomainKind domain_kind() const { return kind_; }
    /// Disc radius, square half-width, or annulus outer radius.
    double param1() const { return param1_; }
    /// Annulus inner radius; 0 otherwise.
    double param2() const { return param2_; }
    /// Outer geometric scale of the domain (radius-like), used for scan windows.
    double domain_radius() const { return param1_; }

    std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    std::pair<int, int> ij(std::size_t idx) const {
        const int j = static_cast<int>(idx / nx_);
        return {static_cast<int>(idx % nx_), j};
    }
    Vec2 coord(int i, int j) const {
        return {origin_.x + spacing_ * (i - cx_), origin_.y + spacing_ * (j - cy_)};
    }
    Vec2 coord(std::size_t idx) const {
        auto [i, j] = ij(idx);
        return coord(i, j);
    }

    /// Fractional node coordinates of a point (node (i, j) has frac (i, j)).
    double frac_i(double x) const { return (x - origin_.x) / spacing_ + cx_; }
    double frac_j(double y) const { return (y - origin_.y) / spacing_ + cy_; }

    NodeClass node_class(std::size_t idx) const { return mask_[idx]; }
    NodeClass node_class(int i, int j) const { return mask_[index(i, j)]; }
    bool interior(std::size_t idx) const { return mask_[idx] == NodeClass::interior; }
    /// Interior or boundary: a node that carries field values.
    bool usable(std::size_t idx) const { return mask_[idx] != NodeClass::exterior; }
    bool in_bounds(int i, int j) const { return i >= 0 && i < nx_ && j >= 0 && j < ny_; }

    /// Index of the grid node nearest to p (clamped to the grid box).
    std::size_t nearest_node(Vec2 p) const;

    /// Signed distance from p to the analytic domain boundary (positive inside).
    double distance_to_domain_boundary(Vec2 p) const;

    const std::vector<std::size_t>& interior_nodes() const { return interior_nodes_; }
    std::size_t interior_count() const { return interior_nodes_.size(); }

    /// Usable nodes within Euclidean distance r of center (interior only by default).
    std::vector<std::size_t> nodes_in_ball(Vec2 center, double r, bool interior_only = true) const;

  private:
    void classify();

    DomainKind kind_;
    double param1_ = 0.0;
    double param2_ = 0.0;
    double spacing_ = 0.0;
    Vec2 origin_;
    int nx_ = 0, ny_ = 0;
    double cx_ = 0.0, cy_ = 0.0;  // grid-center node offsets (integer-valued)
    std::vector<NodeClass> mask_;
    std::vector<std::size_t> interior_nodes_;
};

}  // namespace pplab
