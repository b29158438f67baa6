#include "pplab/field.hpp"

#include <stdexcept>

namespace pplab {

ScalarField::ScalarField(std::shared_ptr<const Grid2D> grid, double fill)
    : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("ScalarField requires a grid");
    v_.resize(grid_->size());
    for (std::size_t n = 0; n < v_.size(); ++n) v_[n] = grid_->usable(n) ? fill : kNaN;
}

ScalarField ScalarField::sample(std::shared_ptr<const Grid2D> grid,
                                const std::function<double(Vec2)>& f) {
    ScalarField out(std::move(grid));
    const Grid2D& g = out.grid();
    for (std::size_t n = 0; n < g.size(); ++n)
        if (g.usable(n)) out[n] = f(g.coord(n));
    return out;
}

VectorField::VectorField(std::shared_ptr<const Grid2D> grid, Vec2 fill)
    : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("VectorField requires a grid");
    x_.resize(grid_->size());
    y_.resize(grid_->size());
    for (std::size_t n = 0; n < x_.size(); ++n) {
        x_[n] = grid_->usable(n) ? fill.x : kNaN;
        y_[n] = grid_->usable(n) ? fill.y : kNaN;
    }
}

VectorField VectorField::sample(std::shared_ptr<const Grid2D> grid,
                                const std::function<Vec2(Vec2)>& f) {
    VectorField out(std::move(grid));
    const Grid2D& g = out.grid();
    for (std::size_t n = 0; n < g.size(); ++n)
        if (g.usable(n)) out.set(n, f(g.coord(n)));
    return out;
}

ScalarField VectorField::component_x() const {
    ScalarField out(grid_);
    for (std::size_t n = 0; n < x_.size(); ++n) out[n] = x_[n];
    return out;
}

ScalarField VectorField::component_y() const {
    ScalarField out(grid_);
    for (std::size_t n = 0; n < y_.size(); ++n) out[n] = y_[n];
    return out;
}

}  // namespace pplab
