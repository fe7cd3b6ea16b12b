#pragma once

#include <functional>
#include <string>

#include "pxvi/exponent.hpp"

namespace pxvi {

/// Weighted power-law flux  a(xi, x) = gamma(x) (|xi|^2 + eps^2)^{(p(x)-2)/2} xi,
/// with a(0, x) = 0 exactly. eps_reg > 0 regularizes the p < 2 singularity in
/// assembled energies; structure checks use the unregularized form.
struct Flux {
    const ExponentField* exponent{nullptr};
    std::function<double(Vec2)> gamma;
    double gamma_min{1.0};
    double gamma_max{1.0};
    double eps_reg{0.0};

    // Declared growth/ellipticity constants. For the model family the sharp
    // values are gamma_max (1 + max(1, p_plus - 1)) and gamma_min min(1, p_minus - 1).
    double lambda1{0.0};
    double lambda2{0.0};

    double p_at(const Vec2& x) const { return (*exponent)(x); }

    Vec2 eval(const Vec2& xi, const Vec2& x) const { return eval_p(xi, x, p_at(x)); }
    Vec2 eval_p(const Vec2& xi, const Vec2& x, double p) const {
        double m = xi.norm2() + eps_reg * eps_reg;
        if (m == 0.0) return {0.0, 0.0};
        if (xi.x == 0.0 && xi.y == 0.0 && eps_reg == 0.0) return {0.0, 0.0};
        return gamma(x) * std::pow(m, 0.5 * (p - 2.0)) * xi;
    }
    /// Unregularized flux, used by structure and oscillation checks.
    Vec2 eval_raw(const Vec2& xi, const Vec2& x) const {
        if (xi.x == 0.0 && xi.y == 0.0) return {0.0, 0.0};
        double p = p_at(x);
        return gamma(x) * std::pow(xi.norm2(), 0.5 * (p - 2.0)) * xi;
    }

    /// Analytic Jacobian d a / d xi at fixed x (regularized form).
    Mat2 jacobian(const Vec2& xi, const Vec2& x) const;
    /// Central-difference Jacobian with step fd_step * max(1, |xi|).
    Mat2 jacobian_fd(const Vec2& xi, const Vec2& x, double fd_step = 1e-6) const;

    /// Potential density W with dW/dxi = a: gamma/p (|xi|^2 + eps^2)^{p/2}.
    double potential(double grad_norm2, double p, double gamma_val) const {
        return gamma_val / p * std::pow(grad_norm2 + eps_reg * eps_reg, 0.5 * p);
    }
};

Flux make_constant_flux(const ExponentField& field, double gamma_value, double eps_reg = 0.0);
/// gamma(x) = 1 + jump * sign(x_1 - interface).
Flux make_step_flux(const ExponentField& field, double jump, double interface,
                    double eps_reg = 0.0);
Flux make_custom_flux(const ExponentField& field, std::function<double(Vec2)> gamma,
                      double gamma_min, double gamma_max, double eps_reg = 0.0);

struct StructureViolation {
    Vec2 xi, eta, x;
    std::string kind;
    double ratio;
};

/// Empirical extremes of the growth / ellipticity / monotonicity ratios over
/// seeded pseudo-random (xi, eta, x) samples. Jacobians by central
/// differences; declared constants flagged when exceeded beyond fd_tol.
struct StructureReport {
    double lambda1_emp{0.0};       // max (|a| + |xi| |Da|) / |xi|^{p-1}
    double lambda2_emp{0.0};       // min (Da eta . eta) / (|xi|^{p-2} |eta|^2)
    double lambda_mono_emp{0.0};   // min monotonicity ratio (p-dependent denominator)
    std::vector<StructureViolation> violations;
};

StructureReport verify_structure(const Flux& flux, const Grid& grid, int sample_count,
                                 uint64_t seed, double fd_tol = 1e-4);

/// Mean oscillation of the flux direction field over one ball:
/// average over in-domain cells of sup_xi |a(xi,x)/|xi|^{p(x)-1} - ball mean|.
double theta_average(const Flux& flux, const Grid& grid, const Vec2& center, double r,
                     int dir_samples = 8, int mag_samples = 5);

/// Largest theta_average over a node sweep and geometric radii up to R.
double bmo_oscillation(const Flux& flux, const Grid& grid, double R, int max_centers = 64);

/// Coefficient field frozen at the window's top exponent p2 and averaged
/// over the half-window cells: B(xi, x) = a0(xi, x) |xi|^{p2 - p(x)} with a0
/// the unregularized flux. For the model family this collapses to
/// gamma_bar |xi|^{p2 - 2} xi.
struct FrozenFlux {
    double p2{2.0};
    double gamma_bar{1.0};
    std::vector<std::pair<double, double>> cell_weights; // (gamma_c, p_c) per half-window cell

    /// Literal cell-average evaluation (matches gamma_bar |xi|^{p2-2} xi in
    /// exact arithmetic for the model family).
    Vec2 eval(const Vec2& xi) const {
        if (cell_weights.empty() || (xi.x == 0.0 && xi.y == 0.0)) return {0.0, 0.0};
        double s = xi.norm();
        double acc = 0.0;
        for (const auto& [g, p] : cell_weights)
            acc += g * std::pow(s, p - 2.0) * std::pow(s, p2 - p);
        return (acc / static_cast<double>(cell_weights.size())) * xi;
    }
    double potential(double grad_norm2) const {
        return gamma_bar / p2 * std::pow(grad_norm2, 0.5 * p2);
    }
};

/// Build the frozen field from the upper half of a window. Preconditions
/// (geometric setting flag, p2 - p1 <= omega(2 rho)) throw unless
/// require_admissible is cleared, in which case the caller is expected to
/// record the flag.
FrozenFlux freeze_flux(const Flux& flux, const SubWindow& win, bool require_admissible = true);

} // namespace pxvi
