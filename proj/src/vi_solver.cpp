#include "pxvi/vi_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "pxvi/truncation.hpp"

namespace pxvi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DiscreteVI assemble(const Grid& grid, const ProblemSpec& spec) {
    if ((spec.flux == nullptr) == (spec.frozen == nullptr))
        throw std::invalid_argument("assemble: exactly one of flux/frozen must be set");
    DiscreteVI vi;
    vi.grid_ = &grid;
    vi.eps_reg_ = spec.flux ? spec.flux->eps_reg : 0.0;

    vi.cell_ids_ = spec.cells.empty() ? all_cells(grid) : spec.cells;
    std::vector<int> local_of_cell(static_cast<size_t>(grid.cell_count()), -1);
    vi.local_cells_.reserve(vi.cell_ids_.size());
    for (size_t k = 0; k < vi.cell_ids_.size(); ++k) {
        int c = vi.cell_ids_[k];
        local_of_cell[static_cast<size_t>(c)] = static_cast<int>(k);
        DiscreteVI::LocalCell lc;
        lc.id = c;
        if (spec.flux) {
            Vec2 xc = grid.cell(c).center;
            lc.gamma = spec.flux->gamma(xc);
            lc.p = spec.flux->p_at(xc);
        } else {
            lc.gamma = spec.frozen->gamma_bar;
            lc.p = spec.frozen->p2;
        }
        vi.local_cells_.push_back(lc);
    }

    // free nodes: interior to the parent grid with every incident lattice
    // cell inside the subdomain
    const int full = grid.dim() == 1 ? 2 : 4;
    std::vector<int> covered(static_cast<size_t>(grid.node_count()), 0);
    std::vector<char> touched(static_cast<size_t>(grid.node_count()), 0);
    for (int c : vi.cell_ids_) {
        const Cell& cell = grid.cell(c);
        for (int k = 0; k < full; ++k) {
            ++covered[static_cast<size_t>(cell.corners[k])];
            touched[static_cast<size_t>(cell.corners[k])] = 1;
        }
    }
    vi.incidence_.clear();
    for (int id = 0; id < grid.node_count(); ++id) {
        if (grid.is_interior(id) && covered[static_cast<size_t>(id)] == full)
            vi.free_nodes_.push_back(id);
    }
    std::vector<int> free_index(static_cast<size_t>(grid.node_count()), -1);
    for (size_t fi = 0; fi < vi.free_nodes_.size(); ++fi)
        free_index[static_cast<size_t>(vi.free_nodes_[fi])] = static_cast<int>(fi);
    vi.incidence_.assign(vi.free_nodes_.size(), {});
    for (size_t k = 0; k < vi.cell_ids_.size(); ++k) {
        const Cell& cell = grid.cell(vi.cell_ids_[k]);
        for (int corner = 0; corner < full; ++corner) {
            int fi = free_index[static_cast<size_t>(cell.corners[corner])];
            if (fi >= 0) vi.incidence_[static_cast<size_t>(fi)].push_back({static_cast<int>(k), corner});
        }
    }
    vi.uniform_p2_.assign(vi.free_nodes_.size(), 1);
    for (size_t fi = 0; fi < vi.free_nodes_.size(); ++fi)
        for (const auto& inc : vi.incidence_[fi])
            if (vi.local_cells_[static_cast<size_t>(inc.local_cell)].p != 2.0)
                vi.uniform_p2_[fi] = 0;

    // obstacles: +-inf when absent; infeasible boxes rejected on the subdomain
    vi.lower_.assign(static_cast<size_t>(grid.node_count()), -kInf);
    vi.upper_.assign(static_cast<size_t>(grid.node_count()), kInf);
    if (spec.lower)
        for (int id = 0; id < grid.node_count(); ++id) vi.lower_[static_cast<size_t>(id)] = (*spec.lower)[id];
    if (spec.upper)
        for (int id = 0; id < grid.node_count(); ++id) vi.upper_[static_cast<size_t>(id)] = (*spec.upper)[id];
    if (spec.lower && spec.upper) {
        for (int id = 0; id < grid.node_count(); ++id) {
            if (!touched[static_cast<size_t>(id)]) continue;
            if (vi.lower_[static_cast<size_t>(id)] > vi.upper_[static_cast<size_t>(id)])
                throw InvariantError("assemble: obstacles cross (empty box)");
        }
    }

    vi.boundary_ = spec.boundary;
    if (spec.zero_below_center) {
        for (int id = 0; id < grid.node_count(); ++id) {
            if (free_index[static_cast<size_t>(id)] >= 0 || !touched[static_cast<size_t>(id)]) continue;
            Vec2 d = grid.coord(id) - *spec.zero_below_center;
            if (d.dot(spec.zero_below_dir) <= 1e-12) vi.boundary_[id] = 0.0;
        }
    }

    // linear functional: measure part plus divergence-form part
    vi.load_.assign(static_cast<size_t>(grid.node_count()), 0.0);
    const double area = grid.cell_area();
    const double corner_frac = grid.dim() == 1 ? 0.5 : 0.25;
    if (spec.measure) {
        spec.measure->validate(grid);
        for (const Atom& a : spec.measure->atoms) {
            if (spec.hat_atoms) {
                int c = grid.containing_cell(a.x);
                if (c >= 0) {
                    const Cell& cell = grid.cell(c);
                    Vec2 p0 = grid.coord(cell.corners[0]);
                    double tx = (a.x.x - p0.x) / grid.h();
                    double ty = grid.dim() == 1 ? 0.0 : (a.x.y - p0.y) / grid.h();
                    double wts[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
                    for (int k = 0; k < full; ++k)
                        vi.load_[static_cast<size_t>(cell.corners[k])] += a.weight * wts[k];
                    continue;
                }
            }
            vi.load_[static_cast<size_t>(grid.nearest_node(a.x))] += a.weight;
        }
        if (spec.measure->density) {
            for (size_t k = 0; k < vi.cell_ids_.size(); ++k) {
                const Cell& cell = grid.cell(vi.cell_ids_[k]);
                double fc = spec.measure->density->cell_value(vi.cell_ids_[k]);
                for (int corner = 0; corner < full; ++corner)
                    vi.load_[static_cast<size_t>(cell.corners[corner])] += fc * area * corner_frac;
            }
        }
    }
    if (spec.div_source) {
        if (!spec.flux)
            throw std::invalid_argument("assemble: divergence source needs the spatial flux");
        for (size_t k = 0; k < vi.cell_ids_.size(); ++k) {
            int c = vi.cell_ids_[k];
            Vec2 gpsi = spec.div_source->cell_gradient(c);
            Vec2 src = spec.flux->eval(gpsi, grid.cell(c).center);
            for (int corner = 0; corner < full; ++corner) {
                Vec2 d = corner_gradient_weight(grid, corner);
                vi.load_[static_cast<size_t>(grid.cell(c).corners[corner])] += src.dot(d) * area;
            }
        }
    }
    return vi;
}

Vec2 DiscreteVI::flux_at(const Vec2& g, const LocalCell& lc) const {
    double m = g.norm2() + eps_reg_ * eps_reg_;
    if (m == 0.0) return {0.0, 0.0};
    return lc.gamma * std::pow(m, 0.5 * (lc.p - 2.0)) * g;
}

GridFunction DiscreteVI::initial_iterate() const {
    GridFunction u = boundary_;
    for (int id : free_nodes_)
        u[id] = std::min(upper_[static_cast<size_t>(id)],
                         std::max(lower_[static_cast<size_t>(id)], u[id]));
    return u;
}

double DiscreteVI::energy(const GridFunction& u) const {
    const double area = grid_->cell_area();
    double acc = 0.0;
    for (const LocalCell& lc : local_cells_) {
        double m = u.cell_gradient(lc.id).norm2() + eps_reg_ * eps_reg_;
        acc += lc.gamma / lc.p * std::pow(m, 0.5 * lc.p) * area;
    }
    for (int id : free_nodes_) acc -= load_[static_cast<size_t>(id)] * u[id];
    if (!std::isfinite(acc)) throw SolverError("energy evaluation is not finite");
    return acc;
}

double DiscreteVI::local_energy(const GridFunction& u, int fi, double t) const {
    const int node = free_nodes_[static_cast<size_t>(fi)];
    const double area = grid_->cell_area();
    double acc = -load_[static_cast<size_t>(node)] * t;
    for (const Incidence& inc : incidence_[static_cast<size_t>(fi)]) {
        const LocalCell& lc = local_cells_[static_cast<size_t>(inc.local_cell)];
        Vec2 d = corner_gradient_weight(*grid_, inc.corner);
        Vec2 g = u.cell_gradient(lc.id) + (t - u[node]) * d;
        acc += lc.gamma / lc.p * std::pow(g.norm2() + eps_reg_ * eps_reg_, 0.5 * lc.p) * area;
    }
    return acc;
}

double DiscreteVI::d_energy(const GridFunction& u, int fi, double t) const {
    const int node = free_nodes_[static_cast<size_t>(fi)];
    const double area = grid_->cell_area();
    double acc = -load_[static_cast<size_t>(node)];
    for (const Incidence& inc : incidence_[static_cast<size_t>(fi)]) {
        const LocalCell& lc = local_cells_[static_cast<size_t>(inc.local_cell)];
        Vec2 d = corner_gradient_weight(*grid_, inc.corner);
        Vec2 g = u.cell_gradient(lc.id) + (t - u[node]) * d;
        acc += flux_at(g, lc).dot(d) * area;
    }
    return acc;
}

double DiscreteVI::dd_energy(const GridFunction& u, int fi, double t) const {
    const int node = free_nodes_[static_cast<size_t>(fi)];
    const double area = grid_->cell_area();
    double acc = 0.0;
    for (const Incidence& inc : incidence_[static_cast<size_t>(fi)]) {
        const LocalCell& lc = local_cells_[static_cast<size_t>(inc.local_cell)];
        Vec2 d = corner_gradient_weight(*grid_, inc.corner);
        Vec2 g = u.cell_gradient(lc.id) + (t - u[node]) * d;
        double m = g.norm2() + eps_reg_ * eps_reg_;
        if (m == 0.0) {
            // curvature limit at a flat cell: gamma |d|^2 at p = 2, zero for
            // p > 2, unbounded for p < 2 (left to the bisection safeguard)
            if (lc.p == 2.0) acc += lc.gamma * d.norm2() * area;
            continue;
        }
        double base = std::pow(m, 0.5 * (lc.p - 2.0));
        double gd = g.dot(d);
        // gd^2 / m <= |d|^2, so this form stays finite even when m is denormal
        // and m^((p-4)/2) alone would overflow
        acc += lc.gamma * base * (d.norm2() + (lc.p - 2.0) * (gd * gd / m)) * area;
    }
    return acc;
}

double DiscreteVI::nodal_minimizer(const GridFunction& u, int fi) const {
    const int node = free_nodes_[static_cast<size_t>(fi)];
    const double t0 = u[node];
    if (uniform_p2_[static_cast<size_t>(fi)]) {
        double d = d_energy(u, fi, t0);
        double dd = dd_energy(u, fi, t0);
        if (!(dd > 0.0)) throw SolverError("nodal_minimizer: degenerate quadratic cell");
        return t0 - d / dd;
    }
    double d0 = d_energy(u, fi, t0);
    if (d0 == 0.0) return t0;
    double lo, hi;
    double step = std::max({grid_->h(), 0.1 * std::abs(t0), 1e-3});
    if (d0 > 0.0) {
        hi = t0;
        lo = t0 - step;
        int guard = 0;
        while (d_energy(u, fi, lo) > 0.0) {
            step *= 2.0;
            lo -= step;
            if (++guard > 200) throw SolverError("nodal_minimizer: bracket expansion failed");
        }
    } else {
        lo = t0;
        hi = t0 + step;
        int guard = 0;
        while (d_energy(u, fi, hi) < 0.0) {
            step *= 2.0;
            hi += step;
            if (++guard > 200) throw SolverError("nodal_minimizer: bracket expansion failed");
        }
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 120; ++it) {
        double d = d_energy(u, fi, t);
        if (d > 0.0)
            hi = t;
        else if (d < 0.0)
            lo = t;
        else
            return t;
        double dd = dd_energy(u, fi, t);
        double tn = dd > 0.0 ? t - d / dd : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) <= 1e-15 * std::max(1.0, std::abs(t))) return tn;
        t = tn;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi) + std::abs(lo))) break;
    }
    return t;
}

SolveReport DiscreteVI::solve(GridFunction& u, const SolverOptions& opt) const {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    const double omega =
        opt.relaxation > 0.0 ? opt.relaxation : 2.0 / (1.0 + std::sin(M_PI * grid_->h()));
    double energy_rec = energy(u);
    if (opt.record_trace) rep.energy_trace.push_back(energy_rec);

    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double max_update = 0.0;
        double sweep_delta = 0.0; // sum of nonpositive local energy changes
        for (size_t fi = 0; fi < free_nodes_.size(); ++fi) {
            const int node = free_nodes_[fi];
            const double cur = u[node];
            const double lo = lower_[static_cast<size_t>(node)];
            const double hi = upper_[static_cast<size_t>(node)];
            double t_free = nodal_minimizer(u, static_cast<int>(fi));
            double cand = std::min(hi, std::max(lo, cur + omega * (t_free - cur)));
            if (cand == cur) continue;
            double e_old = local_energy(u, static_cast<int>(fi), cur);
            double e_new = local_energy(u, static_cast<int>(fi), cand);
            if (!(e_new <= e_old)) {
                // over-relaxed point rejected; the exact box minimizer descends
                cand = std::min(hi, std::max(lo, t_free));
                if (cand == cur) continue;
                e_new = local_energy(u, static_cast<int>(fi), cand);
                if (!(e_new <= e_old)) continue;
            }
            if (!std::isfinite(e_new)) throw SolverError("solve: local energy not finite");
            u[node] = cand;
            sweep_delta += e_new - e_old; // each term <= 0, so the sum stays <= 0
            max_update = std::max(max_update, std::abs(cand - cur));
        }
        ++rep.sweeps;
        energy_rec += sweep_delta;
        if (opt.record_trace) rep.energy_trace.push_back(energy_rec);
        rep.final_max_update = max_update;
        if (max_update < opt.tol) {
            rep.converged = true;
            break;
        }
    }

    rep.final_energy = energy_rec;
    rep.recomputed_energy = energy(u);
    rep.complementarity = complementarity_residual(u);
    for (int id : free_nodes_) {
        if (u[id] == lower_[static_cast<size_t>(id)]) ++rep.active_lower;
        if (u[id] == upper_[static_cast<size_t>(id)]) ++rep.active_upper;
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (!rep.converged)
        throw SolverError("solve: sweep limit reached before the update tolerance");
    return rep;
}

double DiscreteVI::complementarity_residual(const GridFunction& u) const {
    double worst = 0.0;
    for (size_t fi = 0; fi < free_nodes_.size(); ++fi) {
        const int node = free_nodes_[fi];
        double g = d_energy(u, static_cast<int>(fi), u[node]);
        const double lo = lower_[static_cast<size_t>(node)];
        const double hi = upper_[static_cast<size_t>(node)];
        double viol;
        if (u[node] <= lo)
            viol = std::max(0.0, -g);
        else if (u[node] >= hi)
            viol = std::max(0.0, g);
        else
            viol = std::abs(g);
        worst = std::max(worst, viol);
    }
    return worst;
}

std::pair<GridFunction, SolveReport> solve_problem(const Grid& grid, const ProblemSpec& spec,
                                                   const SolverOptions& opt) {
    DiscreteVI vi = assemble(grid, spec);
    GridFunction u = vi.initial_iterate();
    SolveReport rep = vi.solve(u, opt);
    return {std::move(u), rep};
}

std::vector<TruncationEnergyRow> truncation_energy_check(const GridFunction& u,
                                                         const GridFunction& g,
                                                         const ExponentField& field,
                                                         const std::vector<double>& k_list,
                                                         double K) {
    const Grid& grid = u.grid();
    GridFunction diff(grid);
    for (int id = 0; id < grid.node_count(); ++id) diff[id] = u[id] - g[id];

    double g_modular = 0.0;
    for (int c = 0; c < grid.cell_count(); ++c) {
        double p = field(grid.cell(c).center);
        g_modular += std::pow(g.cell_gradient(c).norm(), p) * grid.cell_area();
    }

    std::vector<TruncationEnergyRow> rows;
    for (double k : k_list) {
        TruncationEnergyRow row;
        row.k = k;
        GridFunction tk(grid);
        for (int id = 0; id < grid.node_count(); ++id) tk[id] = truncate(diff[id], k);
        for (int c = 0; c < grid.cell_count(); ++c) {
            double p = field(grid.cell(c).center);
            double area = grid.cell_area();
            row.truncated_energy += std::pow(tk.cell_gradient(c).norm(), p) * area;
            double band = std::abs(diff.cell_value(c));
            if (band >= k && band < k + 1.0)
                row.band_energy += std::pow(diff.cell_gradient(c).norm(), p) * area;
        }
        row.linear_bound = k * K + g_modular;
        row.band_bound = K + g_modular;
        row.ratio = row.linear_bound > 0.0 ? row.truncated_energy / row.linear_bound : 0.0;
        row.band_ratio = row.band_bound > 0.0 ? row.band_energy / row.band_bound : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace pxvi
