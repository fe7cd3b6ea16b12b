#pragma once

#include "pxvi/exponent.hpp"

namespace pxvi {

struct ModularNorm {
    double modular{0.0};   // sum over cells of |f|^{p(x_c)} area
    double luxemburg{0.0}; // inf { theta > 0 : modular(f/theta) <= 1 }
};

/// Modular of the cell values of a nodal field, and the Luxemburg norm by
/// bisection on the scaling. Bisection runs until the scaled modular is
/// within 1e-10 of one; the zero field returns (0, 0).
ModularNorm modular_and_luxemburg(const GridFunction& f, const ExponentField& field);

/// Same for an explicit per-cell value array (size = cell count).
ModularNorm modular_and_luxemburg_cells(const Grid& grid, const std::vector<double>& cell_values,
                                        const ExponentField& field);

} // namespace pxvi
