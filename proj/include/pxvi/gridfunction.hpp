#pragma once

#include <functional>

#include "pxvi/grid.hpp"

namespace pxvi {

/// Nodal scalar field over a grid. Entries at exterior nodes are kept at
/// zero and never enter quadrature (cells only touch non-exterior nodes).
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const Grid& g, double fill = 0.0)
        : grid_(&g), values_(static_cast<size_t>(g.node_count()), fill) {}

    static GridFunction sample(const Grid& g, const std::function<double(Vec2)>& f) {
        GridFunction u(g);
        for (int i = 0; i < g.node_count(); ++i)
            if (!g.is_exterior(i)) u[i] = f(g.coord(i));
        return u;
    }

    const Grid& grid() const { return *grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double& operator[](int i) { return values_[i]; }
    double operator[](int i) const { return values_[i]; }
    const std::vector<double>& data() const { return values_; }
    std::vector<double>& data() { return values_; }

    /// Mean of the corner values (value of the bilinear interpolant at the
    /// cell midpoint up to O(h^2)).
    double cell_value(int c) const {
        const Cell& cell = grid_->cell(c);
        if (grid_->dim() == 1) return 0.5 * (values_[cell.corners[0]] + values_[cell.corners[1]]);
        return 0.25 * (values_[cell.corners[0]] + values_[cell.corners[1]] +
                       values_[cell.corners[2]] + values_[cell.corners[3]]);
    }

    /// Gradient of the multilinear interpolant at the cell midpoint.
    Vec2 cell_gradient(int c) const {
        const Cell& cell = grid_->cell(c);
        const double h = grid_->h();
        if (grid_->dim() == 1)
            return {(values_[cell.corners[1]] - values_[cell.corners[0]]) / h, 0.0};
        const double u00 = values_[cell.corners[0]];
        const double u10 = values_[cell.corners[1]];
        const double u01 = values_[cell.corners[2]];
        const double u11 = values_[cell.corners[3]];
        return {(u10 + u11 - u00 - u01) / (2.0 * h), (u01 + u11 - u00 - u10) / (2.0 * h)};
    }

private:
    const Grid* grid_{nullptr};
    std::vector<double> values_;
};

/// d(cell gradient)/d(corner value): constant per corner slot.
inline Vec2 corner_gradient_weight(const Grid& g, int corner_slot) {
    const double h = g.h();
    if (g.dim() == 1) return corner_slot == 0 ? Vec2{-1.0 / h, 0.0} : Vec2{1.0 / h, 0.0};
    const double s = 1.0 / (2.0 * h);
    switch (corner_slot) {
    case 0: return {-s, -s};
    case 1: return {s, -s};
    case 2: return {-s, s};
    default: return {s, s};
    }
}

/// Integral over a cell subset of a per-cell functional.
template <class F>
double integrate_cells(const Grid& g, const std::vector<int>& cells, F&& f) {
    double acc = 0.0;
    for (int c : cells) acc += f(c);
    return acc * g.cell_area();
}

/// Integral over all in-domain cells.
template <class F>
double integrate_all(const Grid& g, F&& f) {
    double acc = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) acc += f(c);
    return acc * g.cell_area();
}

inline std::vector<int> all_cells(const Grid& g) {
    std::vector<int> v(static_cast<size_t>(g.cell_count()));
    for (int c = 0; c < g.cell_count(); ++c) v[static_cast<size_t>(c)] = c;
    return v;
}

} // namespace pxvi
