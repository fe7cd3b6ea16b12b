#include "pxvi/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace pxvi {

namespace {

double window_omega(const ExponentField& f, double rr) { return f.omega ? f.omega(rr) : 0.0; }

double avg_cells(const std::vector<int>& cells, const std::function<double(int)>& fn) {
    if (cells.empty()) return 0.0;
    double s = 0.0;
    for (int c : cells) s += fn(c);
    return s / static_cast<double>(cells.size());
}

double avg_abs_grad(const GridFunction& f, const std::vector<int>& cells) {
    return avg_cells(cells, [&](int c) { return f.cell_gradient(c).norm(); });
}

double avg_grad_diff(const GridFunction& a, const GridFunction& b, const std::vector<int>& cells) {
    return avg_cells(cells, [&](int c) { return (a.cell_gradient(c) - b.cell_gradient(c)).norm(); });
}

double avg_grad_diff_pow(const GridFunction& a, const GridFunction& b,
                         const std::vector<int>& cells, double q) {
    return avg_cells(cells,
                     [&](int c) { return std::pow((a.cell_gradient(c) - b.cell_gradient(c)).norm(), q); });
}

double sup_abs_grad(const GridFunction& f, const std::vector<int>& cells) {
    double m = 0.0;
    for (int c : cells) m = std::max(m, f.cell_gradient(c).norm());
    return m;
}

std::vector<int> cells_in_half(const Grid& g, const std::vector<int>& cells, const Vec2& x0,
                               const Vec2& inward) {
    std::vector<int> out;
    for (int c : cells)
        if ((g.cell(c).center - x0).dot(inward) > 1e-12) out.push_back(c);
    return out;
}

} // namespace

ComparisonWindow build_window(const Grid& grid, const Vec2& x0, double r, const Flux& flux,
                              const MeasureData& mu, const GridFunction& psi1,
                              const GridFunction& psi2, const GridFunction& u, double tau0,
                              double delta) {
    ComparisonWindow cw;
    cw.grid = &grid;
    cw.flux = &flux;
    cw.x0 = x0;
    cw.r = r;
    cw.tau0 = tau0;
    cw.delta = delta;
    cw.win8 = window(grid, x0, 8.0 * r, delta);

    const ExponentField& ef = *flux.exponent;
    double lo = ef.p_plus, hi = ef.p_minus;
    for (int c : cw.win8.cells) {
        double pc = ef.p(grid.cell(c).center);
        lo = std::min(lo, pc);
        hi = std::max(hi, pc);
    }
    for (int nd : cw.win8.nodes) {
        double pn = ef.p(grid.coord(nd));
        lo = std::min(lo, pn);
        hi = std::max(hi, pn);
    }
    cw.p1 = lo;
    cw.p2 = hi;
    cw.p0 = lo;
    cw.singular_scaling = cw.p0 < 2.0;

    Region reg{cw.win8.cells};
    cw.area_8r = cw.win8.area();
    cw.kappa_8r = augmented_mass(mu, grid, reg);

    GridFunction d1 = flux_divergence(psi1, flux);
    GridFunction d2 = flux_divergence(psi2, flux);
    auto abs_mass = [&](const GridFunction& f, const std::vector<int>& cells) {
        return integrate_cells(grid, cells, [&](int c) { return std::abs(f.cell_value(c)); });
    };
    cw.divmass1 = abs_mass(d1, cw.win8.cells);
    cw.divmass2 = abs_mass(d2, cw.win8.cells);

    std::vector<int> all = all_cells(grid);
    cw.grad_mass = integrate_all(grid, [&](int c) { return u.cell_gradient(c).norm(); });
    cw.kappa_total = augmented_mass(mu, grid, Region::whole(grid));
    cw.divmass1_total = abs_mass(d1, all);
    cw.divmass2_total = abs_mass(d2, all);

    cw.M_attr = cw.kappa_total + cw.divmass1_total + cw.divmass2_total + cw.grad_mass + 1.0;
    cw.Q_attr = cw.kappa_total + cw.divmass1_total + cw.divmass2_total + 1.0;
    double n = static_cast<double>(grid.dim());
    double pm = ef.p_minus;
    double diam_exp = (n * (pm - 2.0) + 1.0) / (pm - 1.0);
    cw.M1_attr =
        cw.grad_mass + std::pow(grid.diameter(), diam_exp) * std::pow(cw.Q_attr, 1.0 / (pm - 1.0)) + 1.0;

    cw.R0 = std::min({ef.R / 2.0, 1.0 / cw.M_attr, 0.25, 1.0 / (2.0 * cw.M1_attr)});
    cw.r_admissible = 8.0 * r <= cw.R0 + 1e-15;
    cw.omega_16r = window_omega(ef, 16.0 * r);
    cw.omega_2R0 = window_omega(ef, 2.0 * cw.R0);
    double osc_cap = std::min({1.0 / (2.0 * n), flux.lambda2 / (2.0 * flux.lambda1), tau0 / 4.0});
    cw.osc_ok = (cw.p2 - cw.p1 <= cw.omega_16r + 1e-12) && (cw.omega_2R0 <= osc_cap + 1e-12);
    return cw;
}

ChainResult solve_chain(const ComparisonWindow& cw, const GridFunction& u,
                        const GridFunction& psi1, const GridFunction& psi2,
                        const SolverOptions& opt) {
    const Grid& grid = *cw.grid;
    ChainResult out;

    ProblemSpec pz;
    pz.flux = cw.flux;
    pz.boundary = u;
    pz.lower = psi1;
    pz.div_source = psi2;
    pz.cells = cw.win8.cells;
    auto rz = solve_problem(grid, pz, opt);
    out.z = std::move(rz.first);
    out.rep_z = rz.second;

    ProblemSpec ph;
    ph.flux = cw.flux;
    ph.boundary = out.z;
    ph.div_source = psi1;
    ph.cells = cw.win8.cells;
    auto rh = solve_problem(grid, ph, opt);
    out.h = std::move(rh.first);
    out.rep_h = rh.second;

    ProblemSpec pw;
    pw.flux = cw.flux;
    pw.boundary = out.h;
    pw.cells = cw.win8.cells;
    auto rw = solve_problem(grid, pw, opt);
    out.w = std::move(rw.first);
    out.rep_w = rw.second;

    out.win3 = window(grid, cw.x0, 3.0 * cw.r, cw.delta);
    out.frozen = freeze_flux(*cw.flux, out.win3, /*require_admissible=*/false);
    double osc3 = cw.flux->exponent->omega ? cw.flux->exponent->omega(6.0 * cw.r) : 0.0;
    double spread = 0.0;
    for (int c : out.win3.cells)
        spread = std::max(spread, cw.flux->p_at(grid.cell(c).center));
    double spread_lo = spread;
    for (int c : out.win3.cells)
        spread_lo = std::min(spread_lo, cw.flux->p_at(grid.cell(c).center));
    out.frozen_admissible = out.win3.setting_ok && (spread - spread_lo <= osc3 + 1e-12);

    ProblemSpec pv;
    pv.frozen = &out.frozen;
    pv.boundary = out.w;
    pv.cells = out.win3.cells;
    auto rv = solve_problem(grid, pv, opt);
    out.v = std::move(rv.first);
    out.rep_v = rv.second;

    out.win2 = window(grid, cw.x0, 2.0 * cw.r, cw.delta);
    out.half_cells_2r = cells_in_half(grid, out.win2.cells, cw.x0, out.win2.inward);

    ProblemSpec pb;
    pb.frozen = &out.frozen;
    pb.boundary = out.v;
    pb.cells = out.half_cells_2r;
    pb.zero_below_center = cw.x0;
    pb.zero_below_dir = out.win2.inward;
    auto rb = solve_problem(grid, pb, opt);
    out.rep_vbar = rb.second;

    // Zero extension: only corners of half-ball cells keep their solved or
    // trace values, every other node of the grid reads zero.
    out.vbar = GridFunction(grid);
    std::vector<char> keep(static_cast<size_t>(grid.node_count()), 0);
    int ncorner = grid.dim() == 1 ? 2 : 4;
    for (int c : out.half_cells_2r)
        for (int k = 0; k < ncorner; ++k) keep[static_cast<size_t>(grid.cell(c).corners[k])] = 1;
    for (int nd = 0; nd < grid.node_count(); ++nd)
        if (keep[static_cast<size_t>(nd)]) out.vbar[nd] = rb.first[nd];
    return out;
}

std::vector<MetricRow> comparison_metrics(const ComparisonWindow& cw, const ChainResult& chain,
                                          const GridFunction& u, const GridFunction& psi2) {
    const Grid& grid = *cw.grid;
    const ExponentField& ef = *cw.flux->exponent;
    double n = static_cast<double>(grid.dim());
    double r = cw.r;
    double rpow = std::pow(r, n - 1.0);
    double p0 = cw.p0;
    double p2 = cw.p2;
    bool chi = cw.singular_scaling;

    std::string base_flags;
    if (!cw.win8.setting_ok) base_flags += "setting-fail;";
    if (!cw.r_admissible || !cw.osc_ok) base_flags += "not-admissible;";
    if (!chain.frozen_admissible) base_flags += "frozen-forced;";

    std::vector<MetricRow> rows;
    auto push = [&](const std::string& stage, double lhs, double rhs, std::string extra = "") {
        MetricRow row;
        row.stage = stage;
        row.r = r;
        row.lhs = lhs;
        row.rhs = rhs;
        row.ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
        row.flags = base_flags + extra;
        if (rhs == 0.0) row.flags += "zero-rhs;";
        rows.push_back(row);
    };

    const auto& c8 = cw.win8.cells;
    const auto& c3 = chain.win3.cells;
    const auto& c2 = chain.win2.cells;

    double avg_du = avg_abs_grad(u, c8);

    {
        double data = (cw.kappa_8r + cw.divmass2) / rpow;
        double rhs = std::pow(data, 1.0 / (p0 - 1.0));
        if (chi) rhs += data * std::pow(avg_du, 2.0 - p0);
        push("u_z", avg_grad_diff(u, chain.z, c8), rhs);
    }
    {
        double data = (cw.area_8r + cw.divmass1 + cw.divmass2) / rpow;
        double rhs = std::pow(data, 1.0 / (p0 - 1.0));
        if (chi) rhs += data * std::pow(avg_abs_grad(chain.z, c8), 2.0 - p0);
        push("z_h", avg_grad_diff(chain.z, chain.h, c8), rhs);
    }
    {
        double data = (cw.area_8r + cw.divmass1) / rpow;
        double rhs = std::pow(data, 1.0 / (p0 - 1.0));
        if (chi) rhs += data * std::pow(avg_abs_grad(chain.h, c8), 2.0 - p0);
        push("h_w", avg_grad_diff(chain.h, chain.w, c8), rhs);
    }
    {
        double lhs = avg_grad_diff_pow(chain.w, chain.v, c3, p2);
        double avg_dw8 = avg_abs_grad(chain.w, c8);
        double rhs = std::pow(cw.delta, cw.tau0 / (4.0 + cw.tau0)) * (std::pow(avg_dw8, p2) + 1.0);
        push("w_v", lhs, rhs);
        push("w_v_root", std::pow(lhs, 1.0 / p2), std::pow(rhs, 1.0 / p2));
    }
    {
        // Observational: the half-ball zero extension against the frozen
        // field it restricts; the p2-th root of the ratio is the empirical
        // closeness epsilon.
        double lhs = avg_grad_diff_pow(chain.v, chain.vbar, c2, p2);
        double rhs = avg_cells(c3, [&](int c) { return std::pow(chain.v.cell_gradient(c).norm(), p2); });
        push("v_vbar", lhs, rhs, "observational;");
    }
    {
        SubWindow win1 = window(grid, cw.x0, cw.r, cw.delta);
        std::vector<int> half1 = cells_in_half(grid, win1.cells, cw.x0, win1.inward);
        push("vbar_lip", sup_abs_grad(chain.vbar, half1),
             avg_abs_grad(chain.vbar, chain.half_cells_2r));
        push("u_vbar", avg_grad_diff(u, chain.vbar, c2), avg_du);
        push("vbar_sup", sup_abs_grad(chain.vbar, win1.cells), avg_du);
    }
    if (ef.p_minus >= 2.0) {
        double rhs = std::pow(cw.kappa_8r / rpow, 1.0 / (p0 - 1.0));
        double mom = avg_cells(c8, [&](int c) {
            return std::pow(psi2.cell_gradient(c).norm(), ef.p(grid.cell(c).center));
        });
        rhs += std::pow(mom, 1.0 / p0);
        push("u_z_var2", avg_grad_diff(u, chain.z, c8), rhs);
    }
    return rows;
}

HigherIntegrabilityReport higher_integrability_check(const GridFunction& w,
                                                     const ComparisonWindow& cw, double sigma,
                                                     double beta) {
    if (sigma <= 0.0 || beta <= 0.0 || beta > 1.0)
        throw ConfigError("higher_integrability_check: need sigma > 0 and beta in (0,1]");
    const Grid& grid = *cw.grid;
    const ExponentField& ef = *cw.flux->exponent;
    SubWindow wr = window(grid, cw.x0, 2.0 * cw.r, cw.delta);
    SubWindow w2r = window(grid, cw.x0, 4.0 * cw.r, cw.delta);

    HigherIntegrabilityReport rep;
    rep.sigma = sigma;
    rep.beta = beta;
    auto moment = [&](const std::vector<int>& cells, double scale) {
        return avg_cells(cells, [&](int c) {
            return std::pow(w.cell_gradient(c).norm(), ef.p(grid.cell(c).center) * scale);
        });
    };
    rep.lhs = std::pow(moment(wr.cells, 1.0 + sigma), 1.0 / (1.0 + sigma));
    rep.rhs = std::pow(moment(w2r.cells, beta), 1.0 / beta) + 1.0;
    rep.ratio = rep.lhs / rep.rhs;

    SubWindow w3 = window(grid, cw.x0, 3.0 * cw.r, cw.delta);
    rep.p2_moment_lhs =
        avg_cells(w3.cells, [&](int c) { return std::pow(w.cell_gradient(c).norm(), cw.p2); });
    rep.p2_moment_rhs = std::pow(avg_abs_grad(w, cw.win8.cells), cw.p2) + 1.0;
    rep.p2_ratio = rep.p2_moment_lhs / rep.p2_moment_rhs;
    return rep;
}

} // namespace pxvi
