#include "pxvi/runner.hpp"

#include "pxvi/csv.hpp"
#include "pxvi/norms.hpp"
#include "pxvi/truncation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pxvi {

namespace {

std::string flag_name(NodeFlag f) {
    switch (f) {
    case NodeFlag::Interior: return "interior";
    case NodeFlag::Dirichlet: return "dirichlet";
    case NodeFlag::Exterior: return "exterior";
    }
    return "?";
}

double grad_l1_of(const GridFunction& u) {
    const Grid& g = u.grid();
    double s = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) s += u.cell_gradient(c).norm() * g.cell_area();
    return s;
}

// Closed-form check target: on the unit interval with p = 2, unit gamma and
// point loads, the solution is a superposition of Green kernels
// G(x,s) = min(x,s)(1 - max(x,s)), which is itself a nodal hat combination
// once each load sits on a node. Snapping the atoms makes the discrete
// solution nodally exact.
bool green_oracle_applies(const Instance& inst) {
    const RunConfig& c = inst.cfg;
    if (c.domain_kind != DomainKind::Interval) return false;
    if (!inst.exponent.is_constant() || std::abs(inst.exponent.p_minus - 2.0) > 0.0) return false;
    if (c.gamma_kind != "constant" || c.gamma_value != 1.0) return false;
    if (inst.measure.atoms.empty() || inst.measure.density) return false;
    if (c.hat_atoms) return false;
    if (c.lower_active || c.upper_active) return false;
    if (c.g.kind != "constant") return false;
    for (double v : c.g.params)
        if (v != 0.0) return false;
    return true;
}

double green_oracle_error(const Instance& inst, const GridFunction& u) {
    const Grid& g = inst.grid;
    double worst = 0.0;
    for (int id = 0; id < g.node_count(); ++id) {
        if (g.is_exterior(id)) continue;
        const double x = g.coord(id).x;
        double exact = 0.0;
        for (const Atom& a : inst.measure.atoms) {
            const double s = g.coord(g.nearest_node(a.x)).x;
            exact += a.weight * std::min(x, s) * (1.0 - std::max(x, s));
        }
        worst = std::max(worst, std::abs(u[id] - exact));
    }
    return worst;
}

void stage_solution(RunResult& out, const Instance& inst, const GridFunction& u) {
    const Grid& g = inst.grid;
    CsvTable t({"node", "i", "j", "x", "y", "flag", "value"});
    for (int id = 0; id < g.node_count(); ++id) {
        const Vec2 x = g.coord(id);
        t.add(id)
            .add(id % g.nx())
            .add(id / g.nx())
            .add(x.x)
            .add(x.y)
            .add(flag_name(g.flag(id)))
            .add(u[id]);
        t.end_row();
    }
    out.artifacts["solution.csv"] = t.str();
}

void stage_trace(RunResult& out, const SolveReport& rep) {
    CsvTable t({"sweep", "energy"});
    for (size_t k = 0; k < rep.energy_trace.size(); ++k) {
        t.add(static_cast<int>(k)).add(rep.energy_trace[k]);
        t.end_row();
    }
    out.artifacts["energy_trace.csv"] = t.str();
}

RunResult run_solve(const RunConfig& cfg) {
    RunResult out;
    auto inst = build_instance(cfg);
    auto [u, rep] = solve_problem(inst->grid, problem_of(*inst), cfg.solver);
    if (!rep.converged) throw SolverError("solve: not converged within the sweep budget");

    stage_solution(out, *inst, u);
    stage_trace(out, rep);

    CsvTable t({"kind", "n", "h", "sweeps", "converged", "energy_initial", "energy_final",
                "energy_recomputed", "complementarity", "active_lower", "active_upper", "grad_l1",
                "mass_mu", "oracle_error"});
    t.add(domain_kind_name(cfg.domain_kind))
        .add(cfg.grid_n)
        .add(inst->grid.h())
        .add(rep.sweeps)
        .add(rep.converged)
        .add(rep.energy_trace.empty() ? rep.final_energy : rep.energy_trace.front())
        .add(rep.final_energy)
        .add(rep.recomputed_energy)
        .add(rep.complementarity)
        .add(rep.active_lower)
        .add(rep.active_upper)
        .add(grad_l1_of(u))
        .add(total_variation(inst->measure, inst->grid));
    if (green_oracle_applies(*inst))
        t.add(green_oracle_error(*inst, u));
    else
        t.add("");
    t.end_row();
    out.artifacts["summary.csv"] = t.str();
    out.message = "solve: " + std::to_string(rep.sweeps) + " sweeps, energy " +
                  csv_num(rep.final_energy);
    return out;
}

RunResult run_chain(const RunConfig& cfg) {
    RunResult out;
    auto inst = build_instance(cfg);
    auto [u, rep] = solve_problem(inst->grid, problem_of(*inst), cfg.solver);
    if (!rep.converged) throw SolverError("chain: base solve not converged");

    CsvTable metrics({"radius", "stage", "lhs", "rhs", "ratio", "flags"});
    CsvTable summary({"radius", "p0", "p1", "p2", "kappa_8r", "divmass1", "divmass2", "area_8r",
                      "setting_ok", "r_admissible", "osc_ok", "frozen_admissible", "R0",
                      "omega_16r", "sweeps_z", "sweeps_h", "sweeps_w", "sweeps_v", "sweeps_vbar"});
    CsvTable hi({"radius", "sigma", "beta", "lhs", "rhs", "ratio", "p2_moment_lhs",
                 "p2_moment_rhs", "p2_ratio"});

    for (double r : cfg.window_radii) {
        ComparisonWindow cw = build_window(inst->grid, cfg.window_center, r, inst->flux,
                                           inst->measure, inst->psi1, inst->psi2, u,
                                           cfg.harness.tau0);
        ChainResult chain = solve_chain(cw, u, inst->psi1, inst->psi2, cfg.solver);
        for (const MetricRow& row : comparison_metrics(cw, chain, u, inst->psi2)) {
            metrics.add(r).add(row.stage).add(row.lhs).add(row.rhs).add(row.ratio).add(row.flags);
            metrics.end_row();
        }
        summary.add(r)
            .add(cw.p0)
            .add(cw.p1)
            .add(cw.p2)
            .add(cw.kappa_8r)
            .add(cw.divmass1)
            .add(cw.divmass2)
            .add(cw.area_8r)
            .add(cw.win8.setting_ok)
            .add(cw.r_admissible)
            .add(cw.osc_ok)
            .add(chain.frozen_admissible)
            .add(cw.R0)
            .add(cw.omega_16r)
            .add(chain.rep_z.sweeps)
            .add(chain.rep_h.sweeps)
            .add(chain.rep_w.sweeps)
            .add(chain.rep_v.sweeps)
            .add(chain.rep_vbar.sweeps);
        summary.end_row();
        HigherIntegrabilityReport h = higher_integrability_check(chain.w, cw, cfg.hi_sigma,
                                                                 cfg.hi_beta);
        hi.add(r)
            .add(h.sigma)
            .add(h.beta)
            .add(h.lhs)
            .add(h.rhs)
            .add(h.ratio)
            .add(h.p2_moment_lhs)
            .add(h.p2_moment_rhs)
            .add(h.p2_ratio);
        hi.end_row();
    }
    out.artifacts["chain_metrics.csv"] = metrics.str();
    out.artifacts["chain_summary.csv"] = summary.str();
    out.artifacts["higher_integrability.csv"] = hi.str();
    out.message = "chain: " + std::to_string(cfg.window_radii.size()) + " window(s)";
    return out;
}

std::vector<std::function<double(const Vec2&)>> test_exponents(const RunConfig& cfg, int dim) {
    std::vector<std::function<double(const Vec2&)>> r_list;
    for (const ScalarSpec& s : cfg.r_specs) {
        ScalarEntry e = make_scalar(s.kind, s.params, dim);
        r_list.push_back(e.value);
    }
    if (r_list.empty()) r_list.push_back([](const Vec2&) { return 1.0; });
    return r_list;
}

void stage_attributes(RunResult& out, const GlobalAttributes& a,
                      const std::vector<std::pair<std::string, double>>& extra) {
    CsvTable t({"name", "value"});
    auto row = [&](const char* k, double v) {
        t.add(k).add(v);
        t.end_row();
    };
    row("mass_mu", a.mass_mu);
    row("area", a.area);
    row("kappa_total", a.kappa_total);
    row("psi1_mass", a.psi1_mass);
    row("psi2_mass", a.psi2_mass);
    row("divg_mass", a.divg_mass);
    row("gradg_mass", a.gradg_mass);
    row("grad_mass", a.grad_mass);
    row("M", a.M_attr);
    row("Q", a.Q_attr);
    row("M1", a.M1_attr);
    row("R0", a.R0);
    row("omega_2R0", a.omega_2R0);
    row("r0_floor_hit", a.r0_floor_hit ? 1.0 : 0.0);
    for (const auto& [k, v] : extra) row(k.c_str(), v);
    out.artifacts["attributes.csv"] = t.str();
}

void stage_estimates(CsvTable& t, const Instance& inst, const GridFunction& u,
                     const MaximalFields& mf, const GlobalAttributes& attr,
                     const RunConfig& cfg, const int* n_override) {
    for (const std::string& variant : cfg.variants) {
        for (double q : cfg.q_list) {
            for (double alpha : cfg.alpha_list) {
                EstimateReport er;
                try {
                    er = main_estimate_report(inst.grid, inst.flux, inst.measure, u, inst.psi1,
                                              inst.psi2, inst.g, mf, attr, q, alpha, variant);
                } catch (const ConfigError&) {
                    er.variant = variant;
                    er.q = q;
                    er.alpha = alpha;
                    er.precondition_ok = false;
                }
                if (n_override) t.add(*n_override).add(inst.grid.h());
                t.add(er.variant)
                    .add(er.q)
                    .add(er.alpha)
                    .add(er.lhs)
                    .add(er.scale_v)
                    .add(er.term_scale)
                    .add(er.term_mu)
                    .add(er.term_psi1)
                    .add(er.term_psi2)
                    .add(er.rhs)
                    .add(er.ratio)
                    .add(er.atom_flag)
                    .add(er.precondition_ok);
                t.end_row();
            }
        }
    }
}

RunResult run_verify(const RunConfig& cfg) {
    RunResult out;
    auto inst = build_instance(cfg);
    const Grid& grid = inst->grid;
    cfg.harness.validate(grid.dim(), inst->exponent.p_minus);

    GridFunction u(grid);
    std::vector<std::pair<std::string, double>> extra;
    if (!inst->measure.empty()) {
        ApproximationReport ar = approximation_study(problem_of(*inst), inst->measure,
                                                     cfg.harness.mollify_indices,
                                                     test_exponents(cfg, grid.dim()), cfg.solver);
        u = ar.designated;
        CsvTable ct({"i", "j", "r_id", "modular", "out_of_theory"});
        for (const CauchyRow& row : ar.rows) {
            ct.add(row.i).add(row.j).add(row.r_id).add(row.modular).add(row.out_of_theory);
            ct.end_row();
        }
        out.artifacts["cauchy_table.csv"] = ct.str();
        CsvTable gt({"index", "grad_l1"});
        for (size_t k = 0; k < ar.indices.size(); ++k) {
            gt.add(ar.indices[k]).add(ar.l1_grad[k]);
            gt.end_row();
        }
        out.artifacts["approx_grad.csv"] = gt.str();
        extra.emplace_back("approx_last_modular", ar.last_consecutive_modular);

        CsvTable mt({"i", "mollified_l1", "bound", "within", "deficit"});
        for (const MassCheckRow& row : l1_mass_check(inst->measure, grid,
                                                     cfg.harness.mollify_indices)) {
            mt.add(row.i).add(row.mollified_l1).add(row.bound).add(row.within).add(row.deficit);
            mt.end_row();
        }
        out.artifacts["mass_check.csv"] = mt.str();
    } else {
        auto [u0, rep] = solve_problem(grid, problem_of(*inst), cfg.solver);
        if (!rep.converged) throw SolverError("verify: solve not converged");
        u = u0;
    }

    GlobalAttributes attr = global_attributes(grid, inst->flux, inst->measure, u, inst->psi1,
                                              inst->psi2, inst->g, cfg.harness.tau0);
    MaximalFields mf = maximal_fields(grid, inst->flux, inst->measure, u, inst->psi1, inst->psi2,
                                      inst->g, cfg.threads);

    LevelSetReport ls = level_set_decay(grid, inst->flux, mf, attr, cfg.harness);
    {
        CsvTable t({"k", "c_level", "c_size", "d_size", "covering_rhs", "covering_ok", "s_term",
                    "s_partial", "decay_ratio"});
        for (const LevelSetRow& row : ls.rows) {
            t.add(row.k)
                .add(row.c_level)
                .add(row.c_size)
                .add(row.d_size)
                .add(row.covering_rhs)
                .add(row.covering_ok)
                .add(row.s_term)
                .add(row.s_partial)
                .add(row.decay_ratio);
            t.end_row();
        }
        out.artifacts["decay_table.csv"] = t.str();
        CsvTable s({"lambda0", "eps", "level_ratio", "delta", "q", "R0", "variant_p2", "k_empty",
                    "s_total", "tail_ratio", "decays", "s_bound", "s_bound_ratio", "nesting_ok",
                    "sandwich_lower", "sandwich_integral", "sandwich_upper", "sandwich_c"});
        s.add(ls.lambda0)
            .add(ls.eps)
            .add(ls.N)
            .add(ls.delta_small)
            .add(ls.q)
            .add(ls.R0)
            .add(ls.variant_p2)
            .add(ls.k_empty)
            .add(ls.s_total)
            .add(ls.tail_ratio)
            .add(ls.decays)
            .add(ls.s_bound)
            .add(ls.s_bound_ratio)
            .add(ls.nesting_ok)
            .add(ls.sandwich.lower)
            .add(ls.sandwich.integral)
            .add(ls.sandwich.upper)
            .add(ls.sandwich.c_emp);
        s.end_row();
        out.artifacts["decay_summary.csv"] = s.str();
    }

    {
        CsvTable t({"variant", "q", "alpha", "lhs", "scale", "term_scale", "term_mu", "term_psi1",
                    "term_psi2", "rhs", "ratio", "atom_flag", "precondition_ok"});
        stage_estimates(t, *inst, u, mf, attr, cfg, nullptr);
        out.artifacts["estimate_report.csv"] = t.str();
    }

    {
        CsvTable t({"alpha", "exponent", "lhs", "mass_mu", "divg_mass", "gradg_mass", "rhs",
                    "ratio"});
        for (double alpha : cfg.alpha_list) {
            EnergyEstimateReport er = energy_l1_estimate(u, inst->g, inst->measure, inst->flux,
                                                         alpha);
            t.add(er.alpha)
                .add(er.exponent)
                .add(er.lhs)
                .add(er.mass_mu)
                .add(er.divg_mass)
                .add(er.gradg_mass)
                .add(er.rhs)
                .add(er.ratio);
            t.end_row();
        }
        out.artifacts["energy_l1.csv"] = t.str();
    }

    {
        StructureReport sr = verify_structure(inst->flux, grid, 500, cfg.seed);
        CsvTable t({"lambda1", "lambda2", "lambda1_emp", "lambda2_emp", "lambda_mono_emp",
                    "violations"});
        t.add(inst->flux.lambda1)
            .add(inst->flux.lambda2)
            .add(sr.lambda1_emp)
            .add(sr.lambda2_emp)
            .add(sr.lambda_mono_emp)
            .add(static_cast<int>(sr.violations.size()));
        t.end_row();
        out.artifacts["structure.csv"] = t.str();
        extra.emplace_back("structure_violations", static_cast<double>(sr.violations.size()));
    }

    {
        LogHolderReport lh = check_log_holder(inst->exponent, grid, inst->exponent.delta);
        CsvTable t({"radius", "ratio"});
        for (size_t k = 0; k < lh.radii.size(); ++k) {
            t.add(lh.radii[k]).add(lh.ratios[k]);
            t.end_row();
        }
        out.artifacts["log_holder.csv"] = t.str();
        extra.emplace_back("log_holder_worst_ratio", lh.worst_ratio);
        extra.emplace_back("log_holder_passes", lh.passes ? 1.0 : 0.0);
    }

    extra.emplace_back("lambda0", ls.lambda0);
    stage_attributes(out, attr, extra);
    out.message = "verify: lambda0 " + csv_num(ls.lambda0) + ", S " + csv_num(ls.s_total) +
                  (ls.decays ? ", decays" : ", no decay");
    return out;
}

RunResult run_sweep(const RunConfig& cfg) {
    RunResult out;
    CsvTable t({"n", "h", "variant", "q", "alpha", "lhs", "scale", "term_scale", "term_mu",
                "term_psi1", "term_psi2", "rhs", "ratio", "atom_flag", "precondition_ok"});
    for (int n : cfg.sweep_n) {
        RunConfig local = cfg;
        local.grid_n = n;
        auto inst = build_instance(local);
        auto [u, rep] = solve_problem(inst->grid, problem_of(*inst), local.solver);
        if (!rep.converged)
            throw SolverError("sweep: solve not converged at n = " + std::to_string(n));
        GlobalAttributes attr = global_attributes(inst->grid, inst->flux, inst->measure, u,
                                                  inst->psi1, inst->psi2, inst->g,
                                                  local.harness.tau0);
        MaximalFields mf = maximal_fields(inst->grid, inst->flux, inst->measure, u, inst->psi1,
                                          inst->psi2, inst->g, local.threads);
        stage_estimates(t, *inst, u, mf, attr, local, &n);
    }
    out.artifacts["sweep.csv"] = t.str();
    out.message = "sweep: " + std::to_string(cfg.sweep_n.size()) + " grid size(s)";
    return out;
}

// Small deterministic generator for the self-test samples; the statistical
// tests elsewhere use verify_structure's own seeding.
struct SplitMix {
    uint64_t s;
    double next() {
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

RunResult run_selftest(const RunConfig& cfg) {
    RunResult out;
    CsvTable t({"check", "ok", "detail"});
    bool all_ok = true;
    std::ostringstream msg;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        t.add(name).add(ok).add(detail);
        t.end_row();
        all_ok = all_ok && ok;
        msg << (ok ? "ok   " : "FAIL ") << name << ": " << detail << "\n";
    };

    {
        SplitMix rng{cfg.seed};
        bool ok = true;
        double worst = 0.0;
        for (int it = 0; it < 10000 && ok; ++it) {
            double k = 10.0 * rng.next();
            double a = 40.0 * (rng.next() - 0.5);
            double b = 40.0 * (rng.next() - 0.5);
            if (a > b) std::swap(a, b);
            double ta = truncate(a, k), tb = truncate(b, k);
            ok = ok && std::abs(ta) <= k + 1e-15 && ta <= tb + 1e-15;
            if (std::abs(a) <= k) ok = ok && ta == a;
            double e = unit_excess(a, k);
            ok = ok && std::abs(e) <= 1.0 && (std::abs(a) <= k ? e == 0.0 : true);
            if (std::abs(a) >= k + 1.0) ok = ok && std::abs(e) == 1.0;
            worst = std::max(worst, std::abs(ta) - k);
        }
        check("truncation", ok, "10000 samples, overshoot " + csv_num(worst));
    }

    {
        RunConfig c;
        c.domain_kind = DomainKind::Interval;
        c.grid_n = 65;
        c.eps_reg = 0.0;
        c.solver.tol = 1e-12;
        c.atoms = {{{0.375, 0.0}, 1.0}};
        auto inst = build_instance(c);
        auto [u, rep] = solve_problem(inst->grid, problem_of(*inst), c.solver);
        double err = green_oracle_error(*inst, u);
        double s = 0.375;
        double l1 = grad_l1_of(u);
        double l1_exact = 2.0 * s * (1.0 - s);
        bool ok = rep.converged && err <= 1e-8 && std::abs(l1 - l1_exact) <= 1e-8;
        check("green_1d", ok, "nodal error " + csv_num(err) + ", grad L1 error " +
                                  csv_num(std::abs(l1 - l1_exact)));
    }

    {
        Grid grid(DomainKind::Interval, 65);
        MeasureData mu;
        mu.atoms = {{{0.5, 0.0}, 1.0}};
        FracMaximalResult res = frac_maximal_measure(mu, grid, {}, 1);
        double worst = 0.0;
        for (int id = 0; id < grid.node_count(); ++id)
            if (!grid.is_exterior(id)) worst = std::max(worst, std::abs(res.field[id] - 0.5));
        check("dirac_maximal_1d", worst <= 1e-12, "max deviation from 1/2: " + csv_num(worst));
    }

    {
        Grid grid(DomainKind::Interval, 129);
        MeasureData mu;
        mu.atoms = {{{0.5, 0.0}, 2.0}};
        auto rows = l1_mass_check(mu, grid, {2, 4});
        bool ok = !rows.empty();
        double deficit = 0.0;
        for (const MassCheckRow& r : rows) {
            ok = ok && r.within;
            deficit = std::max(deficit, std::abs(r.deficit));
        }
        check("mollifier_mass", ok && deficit <= 1e-6,
              "worst interior mass deficit " + csv_num(deficit));
    }

    {
        RunConfig c;
        c.domain_kind = DomainKind::Square;
        c.grid_n = 33;
        c.eps_reg = 0.0;
        c.solver.tol = 1e-11;
        c.g = {"affine", {0.2, 0.5, -0.3}};
        c.psi1 = {"constant", {-1e9}};
        c.psi2 = {"constant", {1e9}};
        c.lower_active = true;
        c.upper_active = true;
        auto inst = build_instance(c);
        auto [u, rep] = solve_problem(inst->grid, problem_of(*inst), c.solver);
        ComparisonWindow cw = build_window(inst->grid, {0.5, 0.0}, 1.0 / 16.0, inst->flux,
                                           inst->measure, inst->psi1, inst->psi2, u);
        ChainResult chain = solve_chain(cw, u, inst->psi1, inst->psi2, c.solver);
        double d_uz = 0.0, d_zh = 0.0, d_hw = 0.0, d_wv = 0.0;
        for (int id = 0; id < inst->grid.node_count(); ++id) {
            d_uz = std::max(d_uz, std::abs(u[id] - chain.z[id]));
            d_zh = std::max(d_zh, std::abs(chain.z[id] - chain.h[id]));
            d_hw = std::max(d_hw, std::abs(chain.h[id] - chain.w[id]));
            d_wv = std::max(d_wv, std::abs(chain.w[id] - chain.v[id]));
        }
        double worst = std::max(std::max(d_uz, d_zh), std::max(d_hw, d_wv));
        check("collapsed_chain", rep.converged && worst <= 1e-6,
              "stagewise max gap " + csv_num(worst));
    }

    {
        Grid grid(DomainKind::Square, 17);
        auto field = make_constant_exponent(2.0);
        GridFunction f(grid, 0.7);
        ModularNorm mn = modular_and_luxemburg(f, field);
        bool ok = std::abs(mn.modular - 0.49) <= 1e-8 && std::abs(mn.luxemburg - 0.7) <= 1e-8;
        check("luxemburg_p2", ok,
              "modular " + csv_num(mn.modular) + ", norm " + csv_num(mn.luxemburg));
    }

    {
        Grid grid(DomainKind::Square, 17);
        auto field = make_sine_exponent(2.4, 0.2, 1.0);
        Flux flux = make_constant_flux(field, 1.0, 1e-8);
        StructureReport sr = verify_structure(flux, grid, 200, cfg.seed);
        check("flux_structure", sr.violations.empty(),
              std::to_string(sr.violations.size()) + " violations, lambda1_emp " +
                  csv_num(sr.lambda1_emp));
    }

    out.artifacts["selftest.csv"] = t.str();
    out.message = msg.str() + (all_ok ? "selftest: all checks passed" : "selftest: FAILURES");
    out.status = all_ok ? 0 : 4;
    return out;
}

} // namespace

RunResult run_subcommand(const std::string& cmd, const RunConfig& cfg) {
    try {
        if (cmd == "solve") return run_solve(cfg);
        if (cmd == "chain") return run_chain(cfg);
        if (cmd == "verify") return run_verify(cfg);
        if (cmd == "sweep") return run_sweep(cfg);
        if (cmd == "selftest") return run_selftest(cfg);
        RunResult bad;
        bad.status = 2;
        bad.message = "unknown subcommand: " + cmd;
        return bad;
    } catch (const ConfigError& e) {
        return {2, {}, std::string("config error: ") + e.what()};
    } catch (const std::invalid_argument& e) {
        return {2, {}, std::string("config error: ") + e.what()};
    } catch (const SolverError& e) {
        return {3, {}, std::string("solver error: ") + e.what()};
    } catch (const InvariantError& e) {
        return {4, {}, std::string("invariant violated: ") + e.what()};
    } catch (const std::exception& e) {
        return {1, {}, std::string("error: ") + e.what()};
    }
}

void write_artifacts(const RunResult& result, const std::string& out_dir) {
    if (result.status != 0) return;
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : result.artifacts) {
        std::ofstream f(std::filesystem::path(out_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write artifact: " + name);
        f << content;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"variable-exponent double-obstacle laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    uint64_t seed_override = 0;
    int threads_override = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("-c,--config", config_path, "JSON experiment description");
        if (config_required) opt->required();
        sub->add_option("-o,--out", out_override, "artifact directory override");
        sub->add_option("--seed", seed_override, "RNG seed override")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--threads", threads_override, "worker threads for the maximal sweeps");
    };
    add_common(app.add_subcommand("solve", "solve one instance and dump the field"), true);
    add_common(app.add_subcommand("chain", "boundary-window comparison ladder"), true);
    add_common(app.add_subcommand("verify", "level-set decay and moment estimates"), true);
    add_common(app.add_subcommand("sweep", "estimates across grid sizes"), true);
    add_common(app.add_subcommand("selftest", "built-in closed-form checks"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    RunConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = load_config(config_path);
        } catch (const ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (have_seed) cfg.seed = seed_override;
    if (threads_override > 0) cfg.threads = threads_override;

    const std::string cmd = app.get_subcommands().front()->get_name();
    RunResult result = run_subcommand(cmd, cfg);
    if (!result.message.empty())
        std::fprintf(result.status == 0 ? stdout : stderr, "%s\n", result.message.c_str());
    if (result.status == 0) {
        write_artifacts(result, cfg.out_dir);
        for (const auto& [name, content] : result.artifacts)
            std::fprintf(stdout, "wrote %s/%s (%zu bytes)\n", cfg.out_dir.c_str(), name.c_str(),
                         content.size());
    }
    return result.status;
}

} // namespace pxvi
