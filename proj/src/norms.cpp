#include "pxvi/norms.hpp"

#include <algorithm>
#include <cmath>

namespace pxvi {

namespace {

ModularNorm solve_norm(const Grid& grid, const std::vector<double>& vals,
                       const std::vector<double>& pvals) {
    ModularNorm out;
    const double area = grid.cell_area();
    auto modular_scaled = [&](double theta) {
        double acc = 0.0;
        for (size_t c = 0; c < vals.size(); ++c)
            acc += std::pow(std::abs(vals[c]) / theta, pvals[c]) * area;
        return acc;
    };
    double rho = 0.0;
    for (size_t c = 0; c < vals.size(); ++c)
        rho += std::pow(std::abs(vals[c]), pvals[c]) * area;
    out.modular = rho;
    if (rho == 0.0) return out;

    double pmin = *std::min_element(pvals.begin(), pvals.end());
    double pmax = *std::max_element(pvals.begin(), pvals.end());
    // unit-ball sandwich brackets the norm between rho^{1/p-} and rho^{1/p+}
    double lo = 0.5 * std::min(std::pow(rho, 1.0 / pmin), std::pow(rho, 1.0 / pmax));
    double hi = 2.0 * std::max(std::pow(rho, 1.0 / pmin), std::pow(rho, 1.0 / pmax));
    while (modular_scaled(lo) < 1.0) lo *= 0.5;
    while (modular_scaled(hi) > 1.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double m = modular_scaled(mid);
        if (std::abs(m - 1.0) <= 1e-10) {
            out.luxemburg = mid;
            return out;
        }
        (m > 1.0 ? lo : hi) = mid;
    }
    out.luxemburg = 0.5 * (lo + hi);
    return out;
}

} // namespace

ModularNorm modular_and_luxemburg(const GridFunction& f, const ExponentField& field) {
    const Grid& grid = f.grid();
    std::vector<double> vals(static_cast<size_t>(grid.cell_count()));
    std::vector<double> pvals(vals.size());
    for (int c = 0; c < grid.cell_count(); ++c) {
        vals[static_cast<size_t>(c)] = f.cell_value(c);
        pvals[static_cast<size_t>(c)] = field(grid.cell(c).center);
    }
    return solve_norm(grid, vals, pvals);
}

ModularNorm modular_and_luxemburg_cells(const Grid& grid, const std::vector<double>& cell_values,
                                        const ExponentField& field) {
    if (cell_values.size() != static_cast<size_t>(grid.cell_count()))
        throw std::invalid_argument("modular_and_luxemburg_cells: size mismatch");
    std::vector<double> pvals(cell_values.size());
    for (int c = 0; c < grid.cell_count(); ++c)
        pvals[static_cast<size_t>(c)] = field(grid.cell(c).center);
    return solve_norm(grid, cell_values, pvals);
}

} // namespace pxvi
