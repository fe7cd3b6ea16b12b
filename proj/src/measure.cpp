#include "pxvi/measure.hpp"

#include <algorithm>
#include <cmath>

namespace pxvi {

void MeasureData::validate(const Grid& grid) const {
    for (const Atom& a : atoms)
        if (!grid.contains_closed(a.x))
            throw InvariantError("MeasureData: atom outside the closed domain");
    if (density && &density->grid() != &grid)
        throw InvariantError("MeasureData: density sampled on a different grid");
}

namespace {

double bump(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

// Adaptive Simpson, enough for the smooth radial profiles below.
template <class F>
double simpson(F&& f, double a, double b, int depth, double fa, double fm, double fb,
               double whole, double tol) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, depth - 1, fa, flm, fm, left, 0.5 * tol) +
           simpson(f, m, b, depth - 1, fm, frm, fb, right, 0.5 * tol);
}

template <class F>
double integrate(F&& f, double a, double b, double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, 48, fa, fm, fb, whole, tol);
}

double normalizer(int dim) {
    if (dim == 1) {
        double mass = integrate([](double t) { return bump(t * t); }, -1.0, 1.0, 1e-13);
        return 1.0 / mass;
    }
    double mass =
        2.0 * M_PI * integrate([](double r) { return bump(r * r) * r; }, 0.0, 1.0, 1e-13);
    return 1.0 / mass;
}

} // namespace

double mollifier_normalizer(int dim) {
    static const double c1 = normalizer(1);
    static const double c2 = normalizer(2);
    if (dim == 1) return c1;
    if (dim == 2) return c2;
    throw std::invalid_argument("mollifier_normalizer: unsupported dimension");
}

double mollifier_value(int dim, const Vec2& x) {
    return mollifier_normalizer(dim) * bump(dim == 1 ? x.x * x.x : x.norm2());
}

double mollified_at(const MeasureData& mu, const Grid& grid, int i, const Vec2& x) {
    if (i < 1) throw std::invalid_argument("mollified_at: smoothing index must be >= 1");
    double v = 0.0;
    for (const Atom& a : mu.atoms) v += a.weight * mollifier_scaled(grid.dim(), i, x - a.x);
    if (mu.density) {
        const double area = grid.cell_area();
        const double rad = 1.0 / static_cast<double>(i);
        for (int c : grid.cells_in_ball(x, rad)) {
            v += mu.density->cell_value(c) * mollifier_scaled(grid.dim(), i, x - grid.cell(c).center) *
                 area;
        }
    }
    return v;
}

GridFunction mollify(const MeasureData& mu, const Grid& grid, int i) {
    mu.validate(grid);
    GridFunction out(grid);
    for (int id = 0; id < grid.node_count(); ++id) {
        if (grid.is_exterior(id)) continue;
        out[id] = mollified_at(mu, grid, i, grid.coord(id));
    }
    return out;
}

double total_variation(const MeasureData& mu, const Grid& grid, const Region& region) {
    std::vector<char> mark(static_cast<size_t>(grid.cell_count()), 0);
    for (int c : region.cells) mark[static_cast<size_t>(c)] = 1;
    double tv = 0.0;
    for (const Atom& a : mu.atoms) {
        int c = grid.containing_cell(a.x);
        if (c >= 0 && mark[static_cast<size_t>(c)]) tv += std::abs(a.weight);
    }
    if (mu.density) {
        for (int c : region.cells) tv += std::abs(mu.density->cell_value(c)) * grid.cell_area();
    }
    return tv;
}

double total_variation(const MeasureData& mu, const Grid& grid) {
    return total_variation(mu, grid, Region::whole(grid));
}

double augmented_mass(const MeasureData& mu, const Grid& grid, const Region& region) {
    return total_variation(mu, grid, region) +
           static_cast<double>(region.cells.size()) * grid.cell_area();
}

std::vector<MassCheckRow> l1_mass_check(const MeasureData& mu, const Grid& grid,
                                        const std::vector<int>& i_list, double tol) {
    const double tv = total_variation(mu, grid);
    std::vector<MassCheckRow> out;
    for (int i : i_list) {
        MassCheckRow row;
        row.i = i;
        double acc = 0.0;
        for (int c = 0; c < grid.cell_count(); ++c)
            acc += std::abs(mollified_at(mu, grid, i, grid.cell(c).center));
        row.mollified_l1 = acc * grid.cell_area();
        row.bound = tv + tol;
        row.within = row.mollified_l1 <= row.bound;
        row.deficit = tv - row.mollified_l1;
        out.push_back(row);
    }
    return out;
}

} // namespace pxvi
