#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "pplab/grid.hpp"

namespace pplab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Node-indexed real values on a Grid2D.  Exterior nodes hold NaN; interior
/// and boundary nodes are expected to hold finite values once populated.
class ScalarField {
  public:
    explicit ScalarField(std::shared_ptr<const Grid2D> grid, double fill = 0.0);

    /// Evaluate f at every interior and boundary node.
    static ScalarField sample(std::shared_ptr<const Grid2D> grid,
                              const std::function<double(Vec2)>& f);

    const Grid2D& grid() const { return *grid_; }
    const std::shared_ptr<const Grid2D>& grid_ptr() const { return grid_; }

    double operator[](std::size_t idx) const { return v_[idx]; }
    double& operator[](std::size_t idx) { return v_[idx]; }
    double at(int i, int j) const { return v_[grid_->index(i, j)]; }
    double& at(int i, int j) { return v_[grid_->index(i, j)]; }

    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

  private:
    std::shared_ptr<const Grid2D> grid_;
    std::vector<double> v_;
};

/// Node-indexed real 2-vectors on a Grid2D (gradients, complex parts, ...).
class VectorField {
  public:
    explicit VectorField(std::shared_ptr<const Grid2D> grid, Vec2 fill = {0.0, 0.0});

    static VectorField sample(std::shared_ptr<const Grid2D> grid,
                              const std::function<Vec2(Vec2)>& f);

    const Grid2D& grid() const { return *grid_; }
    const std::shared_ptr<const Grid2D>& grid_ptr() const { return grid_; }

    Vec2 operator[](std::size_t idx) const { return {x_[idx], y_[idx]}; }
    void set(std::size_t idx, Vec2 v) {
        x_[idx] = v.x;
        y_[idx] = v.y;
    }
    double x(std::size_t idx) const { return x_[idx]; }
    double y(std::size_t idx) const { return y_[idx]; }
    double& x(std::size_t idx) { return x_[idx]; }
    double& y(std::size_t idx) { return y_[idx]; }

    /// Component views as scalar fields (copies), for differential operators.
    ScalarField component_x() const;
    ScalarField component_y() const;

  private:
    std::shared_ptr<const Grid2D> grid_;
    std::vector<double> x_, y_;
};

}  // namespace pplab
