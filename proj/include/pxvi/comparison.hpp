#pragma once

#include "pxvi/divergence.hpp"
#include "pxvi/vi_solver.hpp"

namespace pxvi {

/// Boundary window about x0 at base radius r (the node/cell subset covers
/// radius 8r). Carries the exponent spread, measure masses and the global
/// scale attributes that gate admissibility of the comparison machinery.
struct ComparisonWindow {
    const Grid* grid{nullptr};
    const Flux* flux{nullptr};
    Vec2 x0;
    double r{0.0};
    SubWindow win8;

    double p0{2.0}, p1{2.0}, p2{2.0};
    bool singular_scaling{false}; // p0 < 2 adds the correction summand

    double kappa_8r{0.0};   // |mu|(Omega_8r) + |Omega_8r|
    double divmass1{0.0};   // window integral of |div a(D psi_1)|
    double divmass2{0.0};
    double area_8r{0.0};

    // global attributes entering the admissible-radius caps
    double grad_mass{0.0};  // integral over Omega of |Du|
    double kappa_total{0.0};
    double divmass1_total{0.0};
    double divmass2_total{0.0};
    double M_attr{0.0};     // kappa + div masses + grad mass + 1
    double Q_attr{0.0};     // kappa + div masses + 1
    double M1_attr{0.0};    // grad mass + diam^{(n(p-2)+1)/(p-1)} Q^{1/(p-1)} + 1

    double R0{0.0};         // min{R/2, 1/M, 1/4, 1/(2 M1)}
    bool r_admissible{false};  // 8 r <= R0
    bool osc_ok{false};        // exponent-oscillation chain of inequalities
    double omega_16r{0.0};
    double omega_2R0{0.0};
    double tau0{0.1};
    double delta{1.0 / 8.0};
};

ComparisonWindow build_window(const Grid& grid, const Vec2& x0, double r, const Flux& flux,
                              const MeasureData& mu, const GridFunction& psi1,
                              const GridFunction& psi2, const GridFunction& u, double tau0 = 0.1,
                              double delta = 1.0 / 8.0);

/// The five-stage ladder away from the obstacle problem: stage fields are
/// full-grid arrays that agree with the parent solution outside their own
/// subdomain, so window quadratures read them directly.
struct ChainResult {
    GridFunction z;    // one-obstacle problem, source a(D psi_2), boundary u
    GridFunction h;    // equation with source a(D psi_1), boundary z
    GridFunction w;    // homogeneous equation, boundary h
    GridFunction v;    // frozen coefficient field on the 3r window, boundary w
    GridFunction vbar; // frozen field on the half-ball 2r, zero flat data,
                       // extended by zero over the 2r window
    SubWindow win3, win2;
    std::vector<int> half_cells_2r; // cells of the 2r half-ball
    FrozenFlux frozen;
    bool frozen_admissible{true};
    SolveReport rep_z, rep_h, rep_w, rep_v, rep_vbar;
};

ChainResult solve_chain(const ComparisonWindow& cw, const GridFunction& u,
                        const GridFunction& psi1, const GridFunction& psi2,
                        const SolverOptions& opt = {});

struct MetricRow {
    std::string stage;
    double r{0.0};
    double lhs{0.0};
    double rhs{0.0};
    double ratio{0.0};
    std::string flags;
};

/// L1 / p2-moment distances between consecutive chain stages against their
/// scale-form bounds (constant-free), one row per inequality.
std::vector<MetricRow> comparison_metrics(const ComparisonWindow& cw, const ChainResult& chain,
                                          const GridFunction& u, const GridFunction& psi2);

struct HigherIntegrabilityReport {
    double sigma{0.0}, beta{1.0};
    double lhs{0.0};      // (avg_{rho} |Dw|^{p(x)(1+sigma)})^{1/(1+sigma)}
    double rhs{0.0};      // (avg_{2rho} |Dw|^{p(x) beta})^{1/beta} + 1
    double ratio{0.0};
    double p2_moment_lhs{0.0}; // avg_{3r} |Dw|^{p2}
    double p2_moment_rhs{0.0}; // (avg_{8r} |Dw|)^{p2} + 1
    double p2_ratio{0.0};
};

/// Reverse-Holder diagnostics for the homogeneous stage on nested windows
/// rho = 2r inside 2 rho = 4r inside 8r.
HigherIntegrabilityReport higher_integrability_check(const GridFunction& w,
                                                     const ComparisonWindow& cw, double sigma,
                                                     double beta);

} // namespace pxvi
