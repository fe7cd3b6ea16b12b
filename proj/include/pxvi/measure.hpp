#pragma once

#include <optional>

#include "pxvi/gridfunction.hpp"

namespace pxvi {

struct Atom {
    Vec2 x;
    double weight{0.0};
};

/// Signed measure: finitely many atoms plus an optional absolutely
/// continuous part sampled at nodes. Extended by zero outside the domain.
struct MeasureData {
    std::vector<Atom> atoms;
    std::optional<GridFunction> density;

    /// Atoms must lie in the closed domain.
    void validate(const Grid& grid) const;
    bool empty() const { return atoms.empty() && !density.has_value(); }
};

/// Standard bump exp(-1/(1-|x|^2)) on |x|<1, normalized to unit mass per
/// dimension. Normalization constants come from adaptive quadrature and are
/// accurate to 1e-10.
double mollifier_value(int dim, const Vec2& x);
double mollifier_normalizer(int dim);

/// Scaled kernel i^n phi(i x).
inline double mollifier_scaled(int dim, int i, const Vec2& x) {
    return std::pow(static_cast<double>(i), dim) *
           mollifier_value(dim, {x.x * i, x.y * i});
}

/// Pointwise mollified measure at an arbitrary point: atoms hit the kernel
/// directly, the density part goes through midpoint cell quadrature.
double mollified_at(const MeasureData& mu, const Grid& grid, int i, const Vec2& x);

/// Nodal sample of the mollified measure.
GridFunction mollify(const MeasureData& mu, const Grid& grid, int i);

/// Cell subset a set function is evaluated on. An atom belongs to the region
/// iff its containing cell does (edge atoms resolve to the lower cell index).
struct Region {
    std::vector<int> cells;
    static Region whole(const Grid& g) { return {all_cells(g)}; }
};

/// |mu|(region): atom weights in absolute value plus cell quadrature of the
/// density magnitude.
double total_variation(const MeasureData& mu, const Grid& grid, const Region& region);
double total_variation(const MeasureData& mu, const Grid& grid);

/// kappa(region) = |mu|(region) + covered area. Monotone under region growth.
double augmented_mass(const MeasureData& mu, const Grid& grid, const Region& region);

struct MassCheckRow {
    int i{0};
    double mollified_l1{0.0}; // cell quadrature of |mu_i| over the domain
    double bound{0.0};        // |mu|(Omega) + tolerance
    bool within{false};
    double deficit{0.0};      // |mu|(Omega) - mollified_l1 (positive near the boundary)
};

/// Verifies the mollified L1 mass never exceeds the total variation beyond
/// the quadrature tolerance, for each smoothing index.
std::vector<MassCheckRow> l1_mass_check(const MeasureData& mu, const Grid& grid,
                                        const std::vector<int>& i_list, double tol = 1e-6);

} // namespace pxvi
