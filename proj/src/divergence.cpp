#include "pxvi/divergence.hpp"

namespace pxvi {

GridFunction flux_divergence(const GridFunction& psi, const Flux& flux) {
    const Grid& grid = psi.grid();
    GridFunction out(grid);
    const double area = grid.cell_area();
    const int full = grid.dim() == 1 ? 2 : 4;
    for (int id = 0; id < grid.node_count(); ++id) {
        if (!grid.is_interior(id)) continue;
        double acc = 0.0;
        for (int c : grid.node_cells(id)) {
            if (c < 0) continue;
            const Cell& cell = grid.cell(c);
            int corner = 0;
            for (int k = 0; k < full; ++k)
                if (cell.corners[k] == id) corner = k;
            Vec2 a = flux.eval(psi.cell_gradient(c), cell.center);
            acc += a.dot(corner_gradient_weight(grid, corner)) * area;
        }
        out[id] = -acc / grid.node_area(id);
    }
    return out;
}

} // namespace pxvi
