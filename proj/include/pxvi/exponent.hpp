#pragma once

#include <functional>
#include <string>

#include "pxvi/gridfunction.hpp"

namespace pxvi {

/// Variable exponent p(x) with declared bounds and continuity modulus.
/// Declared p_minus must exceed 2 - 1/n; construction enforces it and a
/// node sample of p(x) in [p_minus, p_plus].
struct ExponentField {
    std::function<double(Vec2)> p;
    double p_minus{2.0};
    double p_plus{2.0};
    /// Nondecreasing concave-ish modulus with omega(r) >= sup |p(x)-p(y)|,
    /// |x-y| <= r. Closed form for registered kinds, else a declared bound.
    std::function<double(double)> omega;
    double delta{1.0 / 8.0}; // smallness target for omega(r) log(1/r)
    double R{1.0};           // scale on which the smallness is declared

    double operator()(const Vec2& x) const { return p(x); }
    bool is_constant() const { return p_plus == p_minus; }

    /// Throws InvariantError when the bounds are inconsistent for dimension
    /// n or a sampled node value escapes [p_minus, p_plus].
    void validate(const Grid& grid) const;
};

ExponentField make_constant_exponent(double p);

/// p(x) = base + amp * sin(2 pi freq x_1); omega(r) = min(2 amp, 2 pi freq amp r).
ExponentField make_sine_exponent(double base, double amp, double freq);

/// p(x) = base + amp / log(1/|x - c|) capped at radius r_cap; the modulus
/// amp / log(1/r) violates every log-Holder level below amp.
ExponentField make_logspike_exponent(double base, double amp, Vec2 center, double r_cap = 0.3);

struct LogHolderReport {
    double worst_ratio{0.0};  // sup over the radius sweep of omega(r) log(1/r)
    double worst_radius{0.0};
    bool passes{false};       // worst_ratio <= delta
    std::vector<double> radii;
    std::vector<double> ratios;
};

/// Evaluate omega(r) log(1/r) over a geometric radius sweep r in [h, R_cap],
/// R_cap = min(R, 1/2). With use_empirical the modulus is measured by pair
/// sampling of node values instead of the declared closed form.
LogHolderReport check_log_holder(const ExponentField& field, const Grid& grid, double delta,
                                 bool use_empirical = false, int max_sample_nodes = 1500);

} // namespace pxvi
