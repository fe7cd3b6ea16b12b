#include "pxvi/harness.hpp"

#include <algorithm>
#include <cmath>

namespace pxvi {

namespace {

double grad_l1(const GridFunction& f) {
    return integrate_all(f.grid(), [&](int c) { return f.cell_gradient(c).norm(); });
}

double abs_cell_mass(const GridFunction& nodal) {
    return integrate_all(nodal.grid(), [&](int c) { return std::abs(nodal.cell_value(c)); });
}

/// Nodal quadrature of field^{e(x)} with the node-area weights.
double nodal_moment(const Grid& g, const GridFunction& field,
                    const std::function<double(const Vec2&)>& expo) {
    double s = 0.0;
    for (int nd = 0; nd < g.node_count(); ++nd) {
        if (g.is_exterior(nd)) continue;
        double v = std::max(field[nd], 0.0);
        if (v == 0.0) continue;
        s += g.node_area(nd) * std::pow(v, expo(g.coord(nd)));
    }
    return s;
}

std::vector<double> abs_grad_cells(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<double> out(static_cast<size_t>(g.cell_count()));
    for (int c = 0; c < g.cell_count(); ++c) out[static_cast<size_t>(c)] = f.cell_gradient(c).norm();
    return out;
}

std::vector<double> abs_value_cells(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<double> out(static_cast<size_t>(g.cell_count()));
    for (int c = 0; c < g.cell_count(); ++c) out[static_cast<size_t>(c)] = std::abs(f.cell_value(c));
    return out;
}

} // namespace

void HarnessConfig::validate(double n, double p_minus) const {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("harness: eps must lie in (0,1)");
    if (!(N > 1.0)) throw ConfigError("harness: N must exceed 1");
    if (!(delta_small > 0.0 && delta_small < 1.0))
        throw ConfigError("harness: delta must lie in (0,1)");
    if (!(q > 0.0)) throw ConfigError("harness: q must be positive");
    double cap = n > 1.0 ? 0.5 * (n / (n - 1.0) - 1.0 / (p_minus - 1.0)) : 1.0;
    if (!(alpha > 0.0 && alpha <= cap + 1e-12))
        throw ConfigError("harness: alpha outside (0, (n/(n-1) - 1/(p_min-1))/2]");
    if (k_max < 1 || k_max > 60) throw ConfigError("harness: k_max must lie in [1,60]");
    for (size_t i = 1; i < mollify_indices.size(); ++i)
        if (mollify_indices[i] <= mollify_indices[i - 1])
            throw ConfigError("harness: mollification indices must increase");
}

GlobalAttributes global_attributes(const Grid& grid, const Flux& flux, const MeasureData& mu,
                                   const GridFunction& u, const GridFunction& psi1,
                                   const GridFunction& psi2, const GridFunction& g, double tau0) {
    GlobalAttributes a;
    a.mass_mu = total_variation(mu, grid);
    a.area = grid.domain_area();
    a.kappa_total = a.mass_mu + a.area;
    a.psi1_mass = abs_cell_mass(flux_divergence(psi1, flux));
    a.psi2_mass = abs_cell_mass(flux_divergence(psi2, flux));
    a.divg_mass = abs_cell_mass(flux_divergence(g, flux));
    a.gradg_mass = grad_l1(g);
    a.grad_mass = grad_l1(u);
    a.M_attr = a.kappa_total + a.psi1_mass + a.psi2_mass + a.grad_mass + 1.0;
    a.Q_attr = a.kappa_total + a.psi1_mass + a.psi2_mass + 1.0;

    const ExponentField& ef = *flux.exponent;
    double n = static_cast<double>(grid.dim());
    double pm = ef.p_minus;
    double diam_exp = (n * (pm - 2.0) + 1.0) / (pm - 1.0);
    a.M1_attr =
        a.grad_mass + std::pow(grid.diameter(), diam_exp) * std::pow(a.Q_attr, 1.0 / (pm - 1.0)) + 1.0;

    a.R0 = std::min({ef.R / 2.0, 1.0 / (6.0 * a.M1_attr), 1.0 / (a.M_attr + 1.0)});
    double cap = std::min({1.0 / (2.0 * n), flux.lambda2 / (2.0 * flux.lambda1), tau0 / 4.0});
    int halvings = 0;
    while (ef.omega && ef.omega(2.0 * a.R0) > cap && halvings < 60) {
        a.R0 *= 0.5;
        ++halvings;
    }
    a.r0_floor_hit = halvings == 60;
    a.omega_2R0 = ef.omega ? ef.omega(2.0 * a.R0) : 0.0;
    return a;
}

DivergenceField psi_divergence(const GridFunction& psi, const Flux& flux,
                               const std::function<double(const Vec2&)>* analytic) {
    DivergenceField out;
    out.discrete = flux_divergence(psi, flux);
    if (analytic && *analytic) {
        const Grid& g = psi.grid();
        out.field = GridFunction(g);
        out.analytic_used = true;
        for (int nd = 0; nd < g.node_count(); ++nd) {
            if (!g.is_interior(nd)) continue;
            out.field[nd] = (*analytic)(g.coord(nd));
            out.cross_check_max =
                std::max(out.cross_check_max, std::abs(out.field[nd] - out.discrete[nd]));
        }
    } else {
        out.field = out.discrete;
    }
    return out;
}

ApproximationReport approximation_study(const ProblemSpec& base, const MeasureData& mu,
                                        const std::vector<int>& indices,
                                        const std::vector<std::function<double(const Vec2&)>>& r_list,
                                        const SolverOptions& opt) {
    if (indices.empty()) throw ConfigError("approximation_study: empty index list");
    if (r_list.empty()) throw ConfigError("approximation_study: empty exponent list");
    if (!base.flux) throw ConfigError("approximation_study: spatial flux required");
    const Grid& grid = base.boundary.grid();

    std::vector<GridFunction> sols;
    std::vector<MeasureData> mollified(indices.size());
    ApproximationReport rep;
    rep.indices = indices;
    for (size_t k = 0; k < indices.size(); ++k) {
        mollified[k].density = mollify(mu, grid, indices[k]);
        ProblemSpec ps = base;
        ps.measure = &mollified[k];
        auto r = solve_problem(grid, ps, opt);
        rep.l1_grad.push_back(grad_l1(r.first));
        sols.push_back(std::move(r.first));
    }

    const ExponentField& ef = *base.flux->exponent;
    double n = static_cast<double>(grid.dim());
    std::vector<bool> oot(r_list.size(), false);
    for (size_t ri = 0; ri < r_list.size(); ++ri) {
        for (const Cell& c : grid.cells()) {
            double pc = ef.p(c.center);
            double thr = n > 1.0 ? std::min(n * (pc - 1.0) / (n - 1.0), pc) : pc;
            if (r_list[ri](c.center) >= thr - 1e-12) {
                oot[ri] = true;
                break;
            }
        }
    }

    for (size_t a = 0; a < sols.size(); ++a)
        for (size_t b = a + 1; b < sols.size(); ++b)
            for (size_t ri = 0; ri < r_list.size(); ++ri) {
                CauchyRow row;
                row.i = indices[a];
                row.j = indices[b];
                row.r_id = static_cast<int>(ri);
                row.modular = integrate_all(grid, [&](int c) {
                    double d = (sols[a].cell_gradient(c) - sols[b].cell_gradient(c)).norm();
                    return std::pow(d, r_list[ri](grid.cell(c).center));
                });
                row.out_of_theory = oot[ri];
                rep.rows.push_back(row);
                if (b == a + 1 && ri == 0 && b + 1 == sols.size())
                    rep.last_consecutive_modular = row.modular;
            }
    rep.designated = std::move(sols.back());
    return rep;
}

EnergyEstimateReport energy_l1_estimate(const GridFunction& u, const GridFunction& g,
                                        const MeasureData& mu, const Flux& flux, double alpha) {
    const Grid& grid = u.grid();
    EnergyEstimateReport r;
    r.alpha = alpha;
    r.lhs = grad_l1(u);
    r.mass_mu = total_variation(mu, grid);
    r.divg_mass = abs_cell_mass(flux_divergence(g, flux));
    r.gradg_mass = grad_l1(g);
    double pm = flux.exponent->p_minus;
    r.exponent = 1.0 / ((pm - 1.0) * (1.0 - alpha));
    r.rhs = (r.mass_mu + r.divg_mass + r.gradg_mass + 1.0) +
            std::pow(r.mass_mu + r.divg_mass + 1.0, r.exponent);
    r.ratio = r.lhs / r.rhs;
    return r;
}

MaximalFields maximal_fields(const Grid& grid, const Flux& flux, const MeasureData& mu,
                             const GridFunction& u, const GridFunction& psi1,
                             const GridFunction& psi2, const GridFunction& g, int threads) {
    MaximalFields mf;
    MaximalConfig cfg;
    mf.m_du = hl_maximal_cells(abs_grad_cells(u), grid, cfg, threads);

    auto mm = frac_maximal_measure(mu, grid, cfg, threads);
    mf.m1_mu = std::move(mm.field);
    auto mk = frac_maximal_augmented(mu, grid, cfg, threads);
    mf.m1_kappa = std::move(mk.field);
    mf.atom_flag = !mm.flagged_nodes.empty() || !mk.flagged_nodes.empty();

    mf.m1_psi1 = frac_maximal_cells(abs_value_cells(flux_divergence(psi1, flux)), grid, cfg, threads);
    mf.m1_psi2 = frac_maximal_cells(abs_value_cells(flux_divergence(psi2, flux)), grid, cfg, threads);
    mf.m1_g = frac_maximal_cells(abs_value_cells(flux_divergence(g, flux)), grid, cfg, threads);

    const ExponentField& ef = *flux.exponent;
    auto grad_pow_cells = [&](const GridFunction& f) {
        std::vector<double> out(static_cast<size_t>(grid.cell_count()));
        for (int c = 0; c < grid.cell_count(); ++c)
            out[static_cast<size_t>(c)] =
                std::pow(f.cell_gradient(c).norm(), ef.p(grid.cell(c).center));
        return out;
    };
    mf.m_dpsi1_p = hl_maximal_cells(grad_pow_cells(psi1), grid, cfg, threads);
    mf.m_dpsi2_p = hl_maximal_cells(grad_pow_cells(psi2), grid, cfg, threads);
    return mf;
}

LevelSetReport level_set_decay(const Grid& grid, const Flux& flux, const MaximalFields& mf,
                               const GlobalAttributes& attr, const HarnessConfig& cfg) {
    const ExponentField& ef = *flux.exponent;
    double n = static_cast<double>(grid.dim());
    LevelSetReport rep;
    rep.eps = cfg.eps;
    rep.N = cfg.N;
    rep.delta_small = cfg.delta_small;
    rep.q = cfg.q;
    rep.R0 = cfg.R0 > 0.0 ? cfg.R0 : attr.R0;
    rep.variant_p2 = ef.p_minus >= 2.0;
    rep.lambda0 = (attr.grad_mass + 1.0) / (cfg.eps * ball_volume(grid.dim(), rep.R0));
    if (!(rep.lambda0 > 1.0)) throw InvariantError("level_set_decay: lambda0 must exceed 1");

    // Per-node values entering the four sets; data thresholds carry their
    // exponent normalization so every set compares against delta N^k lambda0.
    int nn = grid.node_count();
    std::vector<double> va(nn, 0.0), vb(nn, 0.0), vc1(nn, 0.0), vc2(nn, 0.0), wts(nn, 0.0);
    for (int nd = 0; nd < nn; ++nd) {
        if (grid.is_exterior(nd)) continue;
        Vec2 x = grid.coord(nd);
        double p = ef.p(x);
        wts[nd] = grid.node_area(nd);
        va[nd] = mf.m_du[nd];
        vb[nd] = std::pow(std::max(mf.m1_kappa[nd], 0.0), 1.0 / (p - 1.0));
        if (rep.variant_p2) {
            vc1[nd] = std::pow(std::max(mf.m_dpsi1_p[nd], 0.0), 1.0 / p);
            vc2[nd] = std::pow(std::max(mf.m_dpsi2_p[nd], 0.0), 1.0 / p);
        } else {
            vc1[nd] = std::pow(std::max(mf.m1_psi1[nd], 0.0), 1.0 / (p - 1.0));
            vc2[nd] = std::pow(std::max(mf.m1_psi2[nd], 0.0), 1.0 / (p - 1.0));
        }
    }

    double cover_factor = cfg.eps * std::pow(80.0 / 7.0, n);
    double prev_c = -1.0;
    rep.k_empty = -1;
    for (int k = 0; k <= cfg.k_max; ++k) {
        double lc = std::pow(cfg.N, k + 1) * rep.lambda0;
        double ld = std::pow(cfg.N, k) * rep.lambda0;
        double dld = cfg.delta_small * ld;
        LevelSetRow row;
        row.k = k;
        row.c_level = lc;
        for (int nd = 0; nd < nn; ++nd) {
            if (wts[nd] == 0.0) continue;
            if (va[nd] > lc) row.c_size += wts[nd];
            if (va[nd] > ld || vb[nd] > dld || vc1[nd] > dld || vc2[nd] > dld)
                row.d_size += wts[nd];
        }
        row.covering_rhs = cover_factor * row.d_size;
        row.covering_ok = row.c_size <= row.covering_rhs + 1e-15;
        row.s_term = std::pow(cfg.N, cfg.q * (k + 1)) * row.c_size;
        rep.s_total += row.s_term;
        row.s_partial = rep.s_total;
        if (k >= 1 && prev_c > 0.0)
            row.decay_ratio = std::pow(cfg.N, cfg.q) * row.c_size / prev_c;
        if (prev_c >= 0.0 && row.c_size > prev_c + 1e-15) rep.nesting_ok = false;
        if (row.c_size > row.d_size + 1e-15) rep.nesting_ok = false;
        prev_c = row.c_size;
        rep.rows.push_back(row);
        if (row.c_size == 0.0) {
            rep.k_empty = k;
            break;
        }
    }

    int nonzero_pairs = 0;
    for (auto it = rep.rows.rbegin(); it != rep.rows.rend() && nonzero_pairs < 5; ++it) {
        if (it->decay_ratio > 0.0) {
            rep.tail_ratio = std::max(rep.tail_ratio, it->decay_ratio);
            ++nonzero_pairs;
        }
    }
    rep.decays = rep.k_empty >= 0 || rep.tail_ratio < 1.0;

    rep.sandwich = distribution_sum(mf.m_du, rep.lambda0, cfg.N, cfg.q);

    auto pexp = [&](const Vec2& x) { return cfg.q / (ef.p(x) - 1.0); };
    auto pexp2 = [&](const Vec2& x) { return cfg.q / ef.p(x); };
    double data_moments = nodal_moment(grid, mf.m1_kappa, pexp);
    if (rep.variant_p2) {
        data_moments += nodal_moment(grid, mf.m_dpsi1_p, pexp2);
        data_moments += nodal_moment(grid, mf.m_dpsi2_p, pexp2);
    } else {
        data_moments += nodal_moment(grid, mf.m1_psi1, pexp);
        data_moments += nodal_moment(grid, mf.m1_psi2, pexp);
    }
    rep.s_bound = 4.0 * attr.area + data_moments / std::pow(rep.lambda0, cfg.q);
    rep.s_bound_ratio = rep.s_total / rep.s_bound;
    return rep;
}

EstimateReport main_estimate_report(const Grid& grid, const Flux& flux, const MeasureData& mu,
                                    const GridFunction& u, const GridFunction& psi1,
                                    const GridFunction& psi2, const GridFunction& g,
                                    const MaximalFields& mf, const GlobalAttributes& attr,
                                    double q, double alpha, const std::string& variant) {
    const ExponentField& ef = *flux.exponent;
    double n = static_cast<double>(grid.dim());
    double pm = ef.p_minus;

    EstimateReport r;
    r.variant = variant;
    r.q = q;
    r.alpha = alpha;
    r.atom_flag = mf.atom_flag;
    r.lhs = integrate_all(grid, [&](int c) { return std::pow(u.cell_gradient(c).norm(), q); });

    double theta = 1.0 / ((pm - 1.0) * (1.0 - alpha));
    auto pexp = [&](const Vec2& x) { return q / (ef.p(x) - 1.0); };
    r.term_mu = nodal_moment(grid, mf.m1_mu, pexp);

    auto grad_modular = [&](const GridFunction& f) {
        return integrate_all(grid, [&](int c) {
            return std::pow(f.cell_gradient(c).norm(), ef.p(grid.cell(c).center));
        });
    };

    if (variant == "general") {
        r.scale_v = attr.mass_mu + attr.psi1_mass + attr.psi2_mass + attr.divg_mass + attr.gradg_mass;
        r.term_scale = std::pow(r.scale_v + std::pow(r.scale_v, theta), (n + 1.0) * q);
        r.term_psi1 = nodal_moment(grid, mf.m1_psi1, pexp);
        r.term_psi2 = nodal_moment(grid, mf.m1_psi2, pexp);
    } else if (variant == "p_minus_ge_2") {
        r.precondition_ok = pm >= 2.0;
        if (!r.precondition_ok)
            throw ConfigError("main_estimate_report: p_minus_ge_2 variant needs p_min >= 2");
        double w = attr.mass_mu + grad_modular(psi1) + grad_modular(psi2) + grad_modular(g);
        r.scale_v = w;
        r.term_scale = std::pow(w + std::pow(w, theta), (n + 1.0) * q);
        auto pexp2 = [&](const Vec2& x) { return q / ef.p(x); };
        r.term_psi1 = nodal_moment(grid, mf.m_dpsi1_p, pexp2);
        r.term_psi2 = nodal_moment(grid, mf.m_dpsi2_p, pexp2);
    } else if (variant == "constant_p") {
        r.precondition_ok = ef.p_plus - ef.p_minus <= 1e-14;
        if (!r.precondition_ok)
            throw ConfigError("main_estimate_report: constant_p variant needs a constant exponent");
        auto one_over = [&](const Vec2& x) { return 1.0 / (ef.p(x) - 1.0); };
        double g_pot = nodal_moment(grid, mf.m1_g, one_over) + attr.gradg_mass;
        r.term_scale = std::pow(g_pot, q);
        r.term_psi1 = nodal_moment(grid, mf.m1_psi1, pexp);
        r.term_psi2 = nodal_moment(grid, mf.m1_psi2, pexp);
    } else {
        throw ConfigError("main_estimate_report: unknown variant " + variant);
    }
    r.rhs = r.term_scale + r.term_mu + r.term_psi1 + r.term_psi2 + r.term_const;
    r.ratio = r.lhs / r.rhs;
    return r;
}

} // namespace pxvi
