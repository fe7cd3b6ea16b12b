// Acceptance gate for the laboratory: every check prints one line and the
// process exits with the number of unexpected failures. The alpha-direction
// check is expected to stay red; its line explains the measured monotonicity.

#include "pxvi/config.hpp"
#include "pxvi/runner.hpp"
#include "pxvi/truncation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

using namespace pxvi;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

uint64_t splitmix(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform(uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53);
}

/// Unit point mass at the square's center, solved with the quadratic flux.
struct DiracCase {
    Grid grid;
    ExponentField field;
    Flux flux;
    MeasureData mu;
    GridFunction zero;
    GridFunction u;

    DiracCase(int n, double weight, double tol)
        : grid(DomainKind::Square, n),
          field(make_constant_exponent(2.0)),
          flux(make_constant_flux(field, 1.0)),
          zero(grid, 0.0),
          u(grid, 0.0) {
        mu.atoms.push_back({{0.5, 0.5}, weight});
        ProblemSpec spec;
        spec.flux = &flux;
        spec.boundary = zero;
        spec.measure = &mu;
        SolverOptions opt;
        opt.tol = tol;
        auto [sol, rep] = solve_problem(grid, spec, opt);
        if (!rep.converged) throw SolverError("point-mass case did not converge");
        u = sol;
    }
};

double grad_moment(const GridFunction& u, double q) {
    const Grid& g = u.grid();
    double acc = 0.0;
    for (int c = 0; c < g.cell_count(); ++c)
        acc += std::pow(u.cell_gradient(c).norm(), q) * g.cell_area();
    return acc;
}

Outcome interval_point_load() {
    constexpr double kSolveBudget = 1.0;
    const double qs[] = {0.5, 1.0, 2.0};
    double worst_err = 0.0, worst_moment = 0.0, worst_mass = 0.0, tmax = 0.0;
    for (int n : {33, 65, 129}) {
        Grid g(DomainKind::Interval, n);
        ExponentField field = make_constant_exponent(2.0);
        Flux flux = make_constant_flux(field, 1.0);
        MeasureData mu;
        mu.atoms.push_back({{0.5, 0.0}, 1.0});
        ProblemSpec spec;
        spec.flux = &flux;
        spec.boundary = GridFunction(g, 0.0);
        spec.measure = &mu;
        SolverOptions opt;
        opt.tol = 1e-12;
        auto t0 = std::chrono::steady_clock::now();
        auto [u, rep] = solve_problem(g, spec, opt);
        tmax = std::max(tmax, seconds_since(t0));
        if (!rep.converged) return {false, "interval solve n=" + std::to_string(n) + " diverged"};

        double h = g.h(), err = 0.0;
        for (int node = 0; node < g.node_count(); ++node) {
            double x = g.coord(node).x;
            double green = 0.5 * std::min(x, 1.0 - x);
            err = std::max(err, std::abs(u[node] - green));
        }
        worst_err = std::max(worst_err, err / h);
        worst_mass = std::max(worst_mass, std::abs(grad_moment(u, 1.0) - 0.5) / (2.0 * h));
        for (double q : qs) {
            double gap = std::abs(grad_moment(u, q) - std::pow(0.5, q));
            worst_moment = std::max(worst_moment, gap / (5.0 * q * h));
        }
    }
    bool pass = worst_err <= 1.0 && worst_mass <= 1.0 && worst_moment <= 1.0 &&
                tmax <= kSolveBudget;
    return {pass, "err/h=" + num(worst_err) + " mass_margin=" + num(worst_mass) +
                      " moment_margin=" + num(worst_moment) + " slowest_solve=" + num(tmax) +
                      "s"};
}

Outcome obstacle_pinching() {
    constexpr double kTol = 1e-10;
    Grid g(DomainKind::Square, 33);
    ExponentField field = make_sine_exponent(2.4, 0.05, 1.0);
    Flux flux = make_constant_flux(field, 1.0, 1e-8);
    ScalarEntry shape = make_scalar("sine", {0.3, 1.0, 1.0}, 2);
    GridFunction psi = GridFunction::sample(g, [&](const Vec2& x) { return shape.value(x); });
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 1.0});

    ProblemSpec pinned;
    pinned.flux = &flux;
    pinned.boundary = psi;
    pinned.lower = psi;
    pinned.upper = psi;
    pinned.measure = &mu;
    SolverOptions opt;
    opt.tol = kTol;
    auto [up, rp] = solve_problem(g, pinned, opt);
    double pin_gap = 0.0;
    for (int node = 0; node < g.node_count(); ++node)
        pin_gap = std::max(pin_gap, std::abs(up[node] - psi[node]));

    ProblemSpec open;
    open.flux = &flux;
    open.boundary = GridFunction(g, 0.0);
    open.measure = &mu;
    auto [u0, r0] = solve_problem(g, open, opt);
    ProblemSpec wide = open;
    wide.lower = GridFunction(g, -1e9);
    wide.upper = GridFunction(g, 1e9);
    auto [u1, r1] = solve_problem(g, wide, opt);
    double box_gap = 0.0;
    for (int node = 0; node < g.node_count(); ++node)
        box_gap = std::max(box_gap, std::abs(u0[node] - u1[node]));

    bool pass = rp.converged && rp.sweeps <= 2 && pin_gap == 0.0 && r0.converged &&
                r1.converged && box_gap <= 10.0 * kTol && r1.active_lower == 0 &&
                r1.active_upper == 0;
    return {pass, "pin_sweeps=" + std::to_string(rp.sweeps) + " pin_gap=" + num(pin_gap) +
                      " inactive_box_gap=" + num(box_gap)};
}

Outcome truncation_identities() {
    constexpr int kSamples = 10000;
    uint64_t rng = 42;
    int violations = 0;
    for (int s = 0; s < kSamples; ++s) {
        double t = uniform(rng, -10.0, 10.0);
        double k = uniform(rng, 0.05, 4.0);
        double tk = truncate(t, k);
        double ek = unit_excess(t, k);
        if (std::abs(tk) > k) ++violations;
        if (std::abs(t) <= k && tk != t) ++violations;
        if (std::abs(ek) > 1.0) ++violations;
        if (std::abs(t) <= k && ek != 0.0) ++violations;
        // saturation is |t| - k >= 1; comparing |t| against fl(k + 1) misfires
        // when k + 1 rounds down
        if (std::abs(t) - k >= 1.0 && std::abs(ek) != 1.0) ++violations;
        if (std::abs(truncate(t, k + 1.0) - tk - ek) > 1e-12) ++violations;
        if (unit_excess(-t, k) != -ek) ++violations;
        double t2 = uniform(rng, -10.0, 10.0);
        if ((truncate(t2, k) - tk) * (t2 - t) < 0.0) ++violations;
    }
    return {violations == 0,
            "samples=" + std::to_string(kSamples) + " violations=" + std::to_string(violations)};
}

Outcome point_mass_maximal() {
    constexpr double kBudget = 10.0;
    constexpr double kBand = 1e-9;
    auto t0 = std::chrono::steady_clock::now();

    Grid g1(DomainKind::Interval, 129);
    MeasureData m1;
    m1.atoms.push_back({{0.5, 0.0}, 1.0});
    FracMaximalResult r1 = frac_maximal_measure(m1, g1);
    double dev1 = 0.0;
    for (int node = 0; node < g1.node_count(); ++node)
        if (!g1.is_exterior(node)) dev1 = std::max(dev1, std::abs(r1.field[node] - 0.5));

    Grid g2(DomainKind::Square, 129);
    MeasureData m2;
    m2.atoms.push_back({{0.5, 0.5}, 1.0});
    FracMaximalResult r2 = frac_maximal_measure(m2, g2);
    int probes = 0, banded = 0;
    double h = g2.h();
    for (int node = 0; node < g2.node_count() && probes < 100; ++node) {
        double d = (g2.coord(node) - Vec2{0.5, 0.5}).norm();
        if (d < 2.0 * h || d > 0.4) continue;
        ++probes;
        double scaled = r2.field[node] * M_PI * d;
        if (scaled >= 1.0 / std::sqrt(2.0) * (1.0 - kBand) &&
            scaled <= std::sqrt(2.0) * (1.0 + kBand))
            ++banded;
    }
    double elapsed = seconds_since(t0);
    bool pass = dev1 <= 1e-12 && probes == 100 && banded == 100 && elapsed <= kBudget;
    return {pass, "interval_dev=" + num(dev1) + " probes_in_band=" + std::to_string(banded) +
                      "/" + std::to_string(probes) + " time=" + num(elapsed) + "s"};
}

Outcome mollified_mass() {
    Grid g(DomainKind::Square, 129);
    MeasureData deep;
    deep.atoms.push_back({{0.5, 0.5}, 2.0});
    MeasureData near;
    near.atoms.push_back({{0.02, 0.5}, 1.0});

    auto deep_rows = l1_mass_check(deep, g, {2, 4});
    auto near_rows = l1_mass_check(near, g, {4});

    bool pass = true;
    double worst_deep = 0.0;
    for (const MassCheckRow& row : deep_rows) {
        worst_deep = std::max(worst_deep, std::abs(row.deficit));
        if (!row.within || std::abs(row.deficit) > 1e-6) pass = false;
    }
    double near_deficit = near_rows[0].deficit;
    if (!near_rows[0].within || near_deficit <= 1e-3) pass = false;
    return {pass, "interior_drift=" + num(worst_deep) +
                      " boundary_leak=" + num(near_deficit)};
}

Outcome descent_on_shipped_configs() {
    const char* names[] = {"configs/green_1d.json", "configs/dirac_square.json",
                           "configs/obstacle_bump.json", "configs/chain_window.json",
                           "configs/step_logspike.json"};
    int checked = 0;
    for (const char* name : names) {
        RunConfig cfg = load_config(name);
        auto inst = build_instance(cfg);
        ProblemSpec spec = problem_of(*inst);
        SolverOptions opt = cfg.solver;
        opt.record_trace = true;
        auto [u, rep] = solve_problem(inst->grid, spec, opt);
        if (!rep.converged) return {false, std::string(name) + " diverged"};
        for (size_t k = 1; k < rep.energy_trace.size(); ++k)
            if (rep.energy_trace[k] > rep.energy_trace[k - 1])
                return {false, std::string(name) + " energy rose at sweep " + std::to_string(k)};
        double drift = std::abs(rep.final_energy - rep.recomputed_energy) /
                       (1.0 + std::abs(rep.recomputed_energy));
        if (drift > 1e-6)
            return {false, std::string(name) + " recorded/recomputed drift " + num(drift)};
        ++checked;
    }
    return {true, std::to_string(checked) + " configs, every recorded sweep non-increasing"};
}

Outcome mollified_family_cauchy() {
    constexpr double kBudget = 120.0;
    auto t0 = std::chrono::steady_clock::now();
    Grid g(DomainKind::Square, 65);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 1.0});

    ProblemSpec base;
    base.flux = &flux;
    base.boundary = GridFunction(g, 0.0);
    std::vector<std::function<double(const Vec2&)>> r_list;
    r_list.push_back([](const Vec2&) { return 1.5; });
    SolverOptions opt;
    opt.tol = 1e-11;
    ApproximationReport rep = approximation_study(base, mu, {4, 8, 16, 32}, r_list, opt);

    auto modular_of = [&](int i, int j) {
        for (const CauchyRow& row : rep.rows)
            if (row.i == i && row.j == j && row.r_id == 0) return row.modular;
        return -1.0;
    };
    double m48 = modular_of(4, 8), m816 = modular_of(8, 16), m1632 = modular_of(16, 32);
    double elapsed = seconds_since(t0);
    bool theory = true;
    for (const CauchyRow& row : rep.rows) theory = theory && !row.out_of_theory;
    bool pass = m48 > m816 && m816 > m1632 && m1632 > 0.0 && theory && elapsed <= kBudget;
    return {pass, "consecutive modulars " + num(m48) + " > " + num(m816) + " > " + num(m1632) +
                      ", time=" + num(elapsed) + "s"};
}

/// Obstacle-rich boundary-window instance for the chain stability check.
struct WindowCase {
    Grid grid;
    ExponentField field;
    Flux flux;
    MeasureData mu;
    GridFunction psi1, psi2, gbd;
    GridFunction u;

    WindowCase(int n, bool with_data, double tol)
        : grid(DomainKind::Square, n),
          field(make_constant_exponent(2.0)),
          flux(make_constant_flux(field, 1.0)),
          psi1(grid, -1e9),
          psi2(grid, 1e9),
          gbd(grid, 0.0),
          u(grid, 0.0) {
        ProblemSpec spec;
        spec.flux = &flux;
        if (with_data) {
            mu.atoms.push_back({{0.5, 0.1}, 1.0});
            ScalarEntry hump = make_scalar("bump", {0.3, 0.5, 0.3, 0.25}, 2);
            psi1 = GridFunction::sample(grid, [&](const Vec2& x) { return hump.value(x); });
            psi2 = GridFunction(grid, 1.0);
            spec.lower = psi1;
            spec.upper = psi2;
            spec.measure = &mu;
        } else {
            ScalarEntry aff = make_scalar("affine", {0.2, 0.5, -0.3}, 2);
            gbd = GridFunction::sample(grid, [&](const Vec2& x) { return aff.value(x); });
        }
        spec.boundary = gbd;
        SolverOptions opt;
        opt.tol = tol;
        auto [sol, rep] = solve_problem(grid, spec, opt);
        if (!rep.converged) throw SolverError("window case did not converge");
        u = sol;
    }
};

Outcome chain_window_stability() {
    constexpr double kBudget = 300.0;
    constexpr double kTol = 1e-11;
    auto t0 = std::chrono::steady_clock::now();
    WindowCase rich(129, true, kTol);

    // 8r must clear the side walls of the unit square for the flat-boundary
    // template at (0.5, 0) to apply
    const double radii[] = {0.05, 0.035, 0.025};
    const char* stages[] = {"u_z", "z_h", "h_w"};
    double ratio[3][3];
    SolverOptions opt;
    opt.tol = kTol;
    for (int ri = 0; ri < 3; ++ri) {
        ComparisonWindow cw = build_window(rich.grid, {0.5, 0.0}, radii[ri], rich.flux, rich.mu,
                                           rich.psi1, rich.psi2, rich.u);
        if (!cw.win8.setting_ok) return {false, "window template failed at r=" + num(radii[ri])};
        ChainResult chain = solve_chain(cw, rich.u, rich.psi1, rich.psi2, opt);
        auto rows = comparison_metrics(cw, chain, rich.u, rich.psi2);
        for (int si = 0; si < 3; ++si) {
            auto it = std::find_if(rows.begin(), rows.end(),
                                   [&](const MetricRow& m) { return m.stage == stages[si]; });
            if (it == rows.end()) return {false, std::string("missing row ") + stages[si]};
            ratio[si][ri] = it->ratio;
        }
    }
    std::string spread;
    bool stable = true;
    for (int si = 0; si < 3; ++si) {
        double med = median3(ratio[si][0], ratio[si][1], ratio[si][2]);
        double worst = std::max({ratio[si][0], ratio[si][1], ratio[si][2]});
        double low = std::min({ratio[si][0], ratio[si][1], ratio[si][2]});
        if (!(low > 0.0) || !(worst <= 3.0 * med)) stable = false;
        spread += std::string(stages[si]) + "=" + num(worst / med) + "x ";
    }

    WindowCase flat(129, false, kTol);
    ComparisonWindow cw = build_window(flat.grid, {0.5, 0.0}, 0.05, flat.flux, flat.mu, flat.psi1,
                                       flat.psi2, flat.u);
    ChainResult chain = solve_chain(cw, flat.u, flat.psi1, flat.psi2, opt);
    auto rows = comparison_metrics(cw, chain, flat.u, flat.psi2);
    double collapsed = 0.0;
    for (const char* name : stages) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const MetricRow& m) { return m.stage == name; });
        if (it == rows.end()) return {false, std::string("missing collapsed row ") + name};
        collapsed = std::max(collapsed, it->lhs);
    }
    double elapsed = seconds_since(t0);
    bool pass = stable && collapsed <= 10.0 * kTol && elapsed <= kBudget;
    return {pass, "ratio spread " + spread + "collapsed_lhs=" + num(collapsed) +
                      " time=" + num(elapsed) + "s"};
}

Outcome frozen_stage_identity() {
    constexpr double kTol = 1e-10;
    Grid grid(DomainKind::Square, 65);
    ExponentField field = make_constant_exponent(2.3);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.1}, 1.0});
    GridFunction psi1(grid, -1e9), psi2(grid, 1e9), zero(grid, 0.0);

    ProblemSpec spec;
    spec.flux = &flux;
    spec.boundary = zero;
    spec.measure = &mu;
    SolverOptions opt;
    opt.tol = kTol;
    auto [u, rep] = solve_problem(grid, spec, opt);
    if (!rep.converged) return {false, "base solve diverged"};

    ComparisonWindow cw = build_window(grid, {0.5, 0.0}, 1.0 / 16.0, flux, mu, psi1, psi2, u);
    ChainResult chain = solve_chain(cw, u, psi1, psi2, opt);
    if (!chain.frozen_admissible) return {false, "constant-exponent freeze flagged"};
    double gap = 0.0;
    for (int node : chain.win3.nodes)
        gap = std::max(gap, std::abs(chain.v[node] - chain.w[node]));
    bool pass = gap <= 10.0 * kTol && chain.frozen.p2 == 2.3 && chain.rep_v.converged;
    return {pass, "max|v-w|=" + num(gap) + " frozen_p=" + num(chain.frozen.p2)};
}

Outcome level_set_cascade() {
    DiracCase dc(129, 5.0, 1e-10);
    GlobalAttributes attr =
        global_attributes(dc.grid, dc.flux, dc.mu, dc.u, dc.zero, dc.zero, dc.zero, 0.1);
    MaximalFields mf =
        maximal_fields(dc.grid, dc.flux, dc.mu, dc.u, dc.zero, dc.zero, dc.zero, 4);

    HarnessConfig cfg;
    cfg.eps = 0.92;
    cfg.N = 2.0;
    cfg.delta_small = 0.01;
    cfg.q = 1.0;
    cfg.R0 = 1.1;
    cfg.threads = 4;
    LevelSetReport lr = level_set_decay(dc.grid, dc.flux, mf, attr, cfg);

    std::vector<const LevelSetRow*> nonzero;
    for (const LevelSetRow& row : lr.rows)
        if (row.c_size > 0.0) nonzero.push_back(&row);
    bool tail_decays = !nonzero.empty();
    size_t start = nonzero.size() > 5 ? nonzero.size() - 5 : 0;
    for (size_t i = start; i < nonzero.size(); ++i)
        if (nonzero[i]->k >= 1 && !(nonzero[i]->decay_ratio < 1.0)) tail_decays = false;

    double nq = std::pow(lr.N, lr.q);
    bool sandwich_upper = lr.sandwich.integral <= nq * lr.sandwich.upper * (1.0 + 1e-12);
    bool sandwich_lower =
        lr.sandwich.lower <= nq / (nq - 1.0) * lr.sandwich.integral * (1.0 + 1e-12);

    bool pass = lr.lambda0 > 1.0 && lr.nesting_ok && nonzero.size() >= 3 && tail_decays &&
                sandwich_upper && sandwich_lower;
    return {pass, "lambda0=" + num(lr.lambda0) + " nonzero_rows=" +
                      std::to_string(nonzero.size()) + " nesting=" +
                      (lr.nesting_ok ? "exact" : "broken") + " tail_decays=" +
                      (tail_decays ? "yes" : "no") + " sandwich=" +
                      (sandwich_upper && sandwich_lower ? "holds" : "broken")};
}

Outcome moment_estimate_stability() {
    constexpr double kBudget = 600.0;
    constexpr double kDrift = 0.20;
    auto t0 = std::chrono::steady_clock::now();
    const double qs[] = {0.5, 1.0, 1.5};
    const char* variants[] = {"general", "constant_p"};
    double ratios[2][3][3];
    double shared_gap = 0.0;

    const int grids[] = {33, 65, 129};
    for (int gi = 0; gi < 3; ++gi) {
        DiracCase dc(grids[gi], 5.0, 1e-10);
        GlobalAttributes attr =
            global_attributes(dc.grid, dc.flux, dc.mu, dc.u, dc.zero, dc.zero, dc.zero, 0.1);
        MaximalFields mf =
            maximal_fields(dc.grid, dc.flux, dc.mu, dc.u, dc.zero, dc.zero, dc.zero, 4);
        for (int qi = 0; qi < 3; ++qi) {
            EstimateReport reps[2];
            for (int vi = 0; vi < 2; ++vi) {
                reps[vi] = main_estimate_report(dc.grid, dc.flux, dc.mu, dc.u, dc.zero, dc.zero,
                                                dc.zero, mf, attr, qs[qi], 0.25, variants[vi]);
                if (!reps[vi].precondition_ok || !std::isfinite(reps[vi].ratio) ||
                    reps[vi].ratio <= 0.0)
                    return {false, std::string(variants[vi]) + " ratio degenerate at n=" +
                                       std::to_string(grids[gi])};
                ratios[vi][qi][gi] = reps[vi].ratio;
            }
            double ref = std::max(1.0, std::abs(reps[0].term_mu));
            shared_gap = std::max(shared_gap,
                                  std::abs(reps[0].term_mu - reps[1].term_mu) / ref);
            shared_gap = std::max(shared_gap, std::abs(reps[0].lhs - reps[1].lhs) /
                                                  std::max(1.0, std::abs(reps[0].lhs)));
        }
    }
    double worst_drift = 0.0;
    for (int vi = 0; vi < 2; ++vi)
        for (int qi = 0; qi < 3; ++qi) {
            double lo = std::min({ratios[vi][qi][0], ratios[vi][qi][1], ratios[vi][qi][2]});
            double hi = std::max({ratios[vi][qi][0], ratios[vi][qi][1], ratios[vi][qi][2]});
            worst_drift = std::max(worst_drift, (hi - lo) / hi);
        }
    double elapsed = seconds_since(t0);
    bool pass = worst_drift < kDrift && shared_gap <= 1e-12 && elapsed <= kBudget;
    return {pass, "worst_grid_drift=" + num(worst_drift) + " shared_term_gap=" +
                      num(shared_gap) + " time=" + num(elapsed) + "s"};
}

Outcome scale_interpolation_direction() {
    DiracCase dc(65, 5.0, 1e-10);
    const double alphas[] = {0.4, 0.2, 0.1, 0.05};
    double rhs[4];
    for (int i = 0; i < 4; ++i)
        rhs[i] = energy_l1_estimate(dc.u, dc.zero, dc.mu, dc.flux, alphas[i]).rhs;
    // asserted: the bound grows as alpha falls
    bool increasing = rhs[1] > rhs[0] && rhs[2] > rhs[1] && rhs[3] > rhs[2];
    std::string series = num(rhs[0]) + " -> " + num(rhs[1]) + " -> " + num(rhs[2]) + " -> " +
                         num(rhs[3]);
    return {increasing,
            "rhs over alpha 0.4->0.05: " + series +
                "; the interpolation exponent 1/((p_min-1)(1-alpha)) falls with alpha, so for "
                "data mass above one the bound shrinks instead of growing"};
}

Outcome reproducible_verify() {
    RunConfig cfg = load_config("configs/dirac_square.json");
    RunResult a = run_subcommand("verify", cfg);
    RunResult b = run_subcommand("verify", cfg);
    if (a.status != 0 || b.status != 0)
        return {false, "verify exited with " + std::to_string(a.status) + "/" +
                           std::to_string(b.status)};
    if (a.artifacts.size() != b.artifacts.size() || a.artifacts.empty())
        return {false, "artifact sets differ in size"};
    for (const auto& [name, body] : a.artifacts) {
        auto it = b.artifacts.find(name);
        if (it == b.artifacts.end() || it->second != body)
            return {false, name + " differs between runs"};
    }
    return {true, std::to_string(a.artifacts.size()) + " artifacts byte-identical across runs"};
}

struct Criterion {
    int id;
    const char* name;
    bool expect_red;
    Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "interval point-load exactness", false, interval_point_load},
    {2, "obstacle pinching and inactive-box equivalence", false, obstacle_pinching},
    {3, "signed truncation identities", false, truncation_identities},
    {4, "point-mass fractional maximal values", false, point_mass_maximal},
    {5, "mollified mass conservation", false, mollified_mass},
    {6, "monotone energy descent on shipped configs", false, descent_on_shipped_configs},
    {7, "mollified solution family is Cauchy", false, mollified_family_cauchy},
    {8, "comparison chain stability at the flat boundary", false, chain_window_stability},
    {9, "frozen stage reproduces the homogeneous stage", false, frozen_stage_identity},
    {10, "level-set cascade decay and moment sandwich", false, level_set_cascade},
    {11, "gradient moment estimate is grid-stable", false, moment_estimate_stability},
    {12, "interpolation bound grows as alpha falls", true, scale_interpolation_direction},
    {13, "verify artifacts are bit-reproducible", false, reproducible_verify},
};

} // namespace

int main() {
    int unexpected = 0, green = 0, expected_red = 0;
    for (const Criterion& c : kCriteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double elapsed = seconds_since(t0);
        char head[64];
        std::snprintf(head, sizeof head, "[%s] %02d ", out.pass ? "PASS" : "FAIL", c.id);
        std::string line = std::string(head) + c.name + " | " + out.detail + " (" +
                           num(elapsed) + "s)";
        if (!out.pass && c.expect_red) {
            line += " [expected red]";
            ++expected_red;
        } else if (!out.pass) {
            ++unexpected;
        } else {
            if (c.expect_red) line += " [expected red, currently green]";
            ++green;
        }
        std::cout << line << std::endl;
    }
    std::cout << green << " green, " << expected_red << " red as documented, " << unexpected
              << " unexpected failures" << std::endl;
    return unexpected;
}
