#pragma once

#include "pxvi/measure.hpp"

namespace pxvi {

/// Ball radius sweep and restriction for the maximal operators. The sweep is
/// geometric with ratio sqrt(2) from r_min (default h) to r_max (default the
/// domain diameter), so the continuum supremum of a nonnegative average is
/// undershot by at most a factor (sqrt 2)^n via ball nesting.
struct MaximalConfig {
    double r_min{0.0};             // 0 = grid spacing
    double r_max{0.0};             // 0 = domain diameter
    const Region* restrict_to{nullptr}; // cells the integrand lives on (0 = whole domain)

    std::vector<double> radii(const Grid& g) const;
};

/// Hardy-Littlewood maximal function of a cell-sampled integrand, evaluated
/// at every non-exterior node. The integrand is extended by zero outside the
/// restriction region; averages divide by the lattice ball area so a
/// constant function deep inside the domain comes back unchanged.
GridFunction hl_maximal_cells(const std::vector<double>& cell_values, const Grid& grid,
                              const MaximalConfig& cfg = {}, int threads = 1);
GridFunction hl_maximal(const GridFunction& f, const MaximalConfig& cfg = {}, int threads = 1);

struct FracMaximalResult {
    GridFunction field;
    std::vector<int> flagged_nodes; // nodes coinciding with an atom (2-D cap at r_min)
};

/// Fractional maximal function of order one of a measure:
/// max over the sweep of r |mu|(B_r(x)) / |B_r|, with the exact continuum
/// ball volume in the denominator and exact atom membership. In two
/// dimensions a node sitting on an atom reports the r_min evaluation and is
/// flagged (the continuum value there is infinite).
FracMaximalResult frac_maximal_measure(const MeasureData& mu, const Grid& grid,
                                       const MaximalConfig& cfg = {}, int threads = 1);

/// Same operator for kappa = |mu| + Lebesgue measure of the domain part.
FracMaximalResult frac_maximal_augmented(const MeasureData& mu, const Grid& grid,
                                         const MaximalConfig& cfg = {}, int threads = 1);

/// Fractional maximal function of order one of a cell-sampled function:
/// max over the sweep of r * (zero-extended cell average over B_r).
GridFunction frac_maximal_cells(const std::vector<double>& cell_values, const Grid& grid,
                                const MaximalConfig& cfg = {}, int threads = 1);
GridFunction frac_maximal(const GridFunction& f, const MaximalConfig& cfg = {}, int threads = 1);

struct DistributionSum {
    double sum{0.0};         // S = sum_{k>=1} m^{qk} |{|f| > lambda m^k}|
    int terms{0};            // number of nonzero summands until the level tops out
    double lower{0.0};       // lambda^q S
    double upper{0.0};       // lambda^q (|Omega| + S)
    double integral{0.0};    // discrete moment: sum over cells |f|^q area
    double c_emp{1.0};       // smallest c >= 1 with lower/c <= integral <= c upper
};

/// Distribution-level decomposition of the q-th moment of the cell values of
/// f against levels lambda m^k.
DistributionSum distribution_sum(const GridFunction& f, double lambda, double m, double q);
DistributionSum distribution_sum_cells(const Grid& grid, const std::vector<double>& cell_values,
                                       double lambda, double m, double q);

/// Cell values of a nodal field (corner means), the common integrand format.
std::vector<double> cell_values_of(const GridFunction& f);

} // namespace pxvi
