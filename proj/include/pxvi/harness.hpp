#pragma once

#include "pxvi/comparison.hpp"
#include "pxvi/maximal.hpp"

namespace pxvi {

/// Parameters steering the level-set and moment studies. alpha is capped by
/// the scaling window (n/(n-1) - 1/(p_min - 1))/2; q is any positive moment.
struct HarnessConfig {
    double eps{0.01};        // level-set smallness, in (0,1)
    double N{2.0};           // level ratio, > 1
    double delta_small{0.01}; // data-set threshold knob, in (0,1)
    double q{1.0};
    double alpha{0.25};
    double tau0{0.1};
    double R0{0.0};          // 0 = derive the largest admissible value
    std::vector<int> mollify_indices{4, 8, 16};
    int k_max{60};
    int threads{1};

    void validate(double n, double p_minus) const;
};

/// Global solution/data attributes feeding the admissible-radius caps and
/// the scale normalizations. All integrals are discrete cell quadratures.
struct GlobalAttributes {
    double mass_mu{0.0};     // |mu|(Omega)
    double area{0.0};
    double kappa_total{0.0}; // mass_mu + area
    double psi1_mass{0.0};   // integral |div a(D psi_1)|
    double psi2_mass{0.0};
    double divg_mass{0.0};   // integral |div a(D g)|
    double gradg_mass{0.0};  // integral |Dg|
    double grad_mass{0.0};   // integral |Du|
    double M_attr{0.0};
    double Q_attr{0.0};
    double M1_attr{0.0};
    double R0{0.0};          // largest radius passing the caps, halved until
                             // the oscillation condition holds
    double omega_2R0{0.0};
    bool r0_floor_hit{false};
};

GlobalAttributes global_attributes(const Grid& grid, const Flux& flux, const MeasureData& mu,
                                   const GridFunction& u, const GridFunction& psi1,
                                   const GridFunction& psi2, const GridFunction& g, double tau0);

/// Weak divergence of the flux of a nodal field, with an optional analytic
/// form that, when supplied, becomes the consumed field while the discrete
/// one stays behind for the cross-check.
struct DivergenceField {
    GridFunction field;
    GridFunction discrete;
    bool analytic_used{false};
    double cross_check_max{0.0}; // max interior-node deviation analytic vs discrete
};

DivergenceField psi_divergence(const GridFunction& psi, const Flux& flux,
                               const std::function<double(const Vec2&)>* analytic = nullptr);

struct CauchyRow {
    int i{0}, j{0};
    int r_id{0};
    double modular{0.0};
    bool out_of_theory{false}; // r(x) reached min{n(p-1)/(n-1), p} somewhere
};

struct ApproximationReport {
    std::vector<int> indices;
    std::vector<CauchyRow> rows;          // all pairs i < j, per test exponent
    std::vector<double> l1_grad;          // integral |Du_i| per index
    GridFunction designated;              // finest-index solution
    double last_consecutive_modular{0.0}; // approximation error proxy, first r(.)
};

/// Solves the problem for each mollified measure and measures pairwise
/// gradient distances in the variable-exponent modulars below the duality
/// threshold.
ApproximationReport approximation_study(const ProblemSpec& base, const MeasureData& mu,
                                        const std::vector<int>& indices,
                                        const std::vector<std::function<double(const Vec2&)>>& r_list,
                                        const SolverOptions& opt = {});

struct EnergyEstimateReport {
    double lhs{0.0};       // integral |Du|
    double mass_mu{0.0};
    double divg_mass{0.0};
    double gradg_mass{0.0};
    double alpha{0.0};
    double exponent{0.0};  // 1/((p_min - 1)(1 - alpha))
    double rhs{0.0};       // (mass+divg+gradg+1) + (mass+divg+1)^exponent
    double ratio{0.0};
};

EnergyEstimateReport energy_l1_estimate(const GridFunction& u, const GridFunction& g,
                                        const MeasureData& mu, const Flux& flux, double alpha);

/// Shared nodal maximal fields for the level-set and moment studies; computed
/// once, reused across variants.
struct MaximalFields {
    GridFunction m_du;       // M(|Du|)
    GridFunction m1_mu;      // M_1(mu), pure measure
    GridFunction m1_kappa;   // M_1(kappa), measure + Lebesgue part
    GridFunction m1_psi1;    // M_1(|div a(D psi_1)|)
    GridFunction m1_psi2;
    GridFunction m1_g;       // M_1(|div a(D g)|)
    GridFunction m_dpsi1_p;  // M(|D psi_1|^{p(x)})
    GridFunction m_dpsi2_p;
    bool atom_flag{false};   // some measure-maximal value was capped at an atom node
};

MaximalFields maximal_fields(const Grid& grid, const Flux& flux, const MeasureData& mu,
                             const GridFunction& u, const GridFunction& psi1,
                             const GridFunction& psi2, const GridFunction& g, int threads = 1);

struct LevelSetRow {
    int k{0};
    double c_level{0.0};   // N^{k+1} lambda_0
    double c_size{0.0};    // |C_{N,k}|, node-area measure
    double d_size{0.0};    // |D_{N,k}|
    double covering_rhs{0.0};
    bool covering_ok{true};
    double s_term{0.0};    // N^{q(k+1)} |C_{N,k}|, the k+1-st summand of S
    double s_partial{0.0};
    double decay_ratio{0.0}; // N^q |C_k| / |C_{k-1}| for k >= 1
};

struct LevelSetReport {
    double lambda0{0.0};
    double eps{0.0}, N{0.0}, delta_small{0.0}, q{0.0}, R0{0.0};
    bool variant_p2{false};   // p_min >= 2 data thresholds in use
    int k_empty{-1};          // first k with C empty, -1 if never within cap
    std::vector<LevelSetRow> rows;
    double s_total{0.0};
    double tail_ratio{0.0};   // max decay ratio over the last nonzero terms
    bool decays{false};
    DistributionSum sandwich; // moment sandwich applied to M(|Du|)
    double s_bound{0.0};      // 4|Omega| + lambda0^{-q} (kappa/psi maximal moments)
    double s_bound_ratio{0.0};
    bool nesting_ok{true};    // C_{k+1} subset C_k subset D_k checked nodewise
};

LevelSetReport level_set_decay(const Grid& grid, const Flux& flux, const MaximalFields& mf,
                               const GlobalAttributes& attr, const HarnessConfig& cfg);

struct EstimateReport {
    std::string variant;    // general | p_minus_ge_2 | constant_p
    double q{0.0}, alpha{0.0};
    double lhs{0.0};        // integral |Du|^q
    double scale_v{0.0};    // V or W, zero for constant_p
    double term_scale{0.0}; // (V + V^theta)^{(n+1)q} or the g-potential term
    double term_mu{0.0};    // integral M_1(mu)^{q/(p(x)-1)}
    double term_psi1{0.0};  // M_1(Psi_1) or M(|D psi_1|^p) moment
    double term_psi2{0.0};
    double term_const{1.0};
    double rhs{0.0};
    double ratio{0.0};
    bool atom_flag{false};
    bool precondition_ok{true};
};

EstimateReport main_estimate_report(const Grid& grid, const Flux& flux, const MeasureData& mu,
                                    const GridFunction& u, const GridFunction& psi1,
                                    const GridFunction& psi2, const GridFunction& g,
                                    const MaximalFields& mf, const GlobalAttributes& attr,
                                    double q, double alpha, const std::string& variant);

} // namespace pxvi
