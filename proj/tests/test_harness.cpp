#include <doctest.h>

#include "pxvi/harness.hpp"
#include "pxvi/registry.hpp"

#include <algorithm>
#include <cmath>

using namespace pxvi;

TEST_CASE("harness parameter validation") {
    HarnessConfig cfg;
    CHECK_NOTHROW(cfg.validate(2.0, 2.2));

    HarnessConfig bad = cfg;
    bad.eps = 0.0;
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.eps = 1.0;
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.N = 1.0;
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.q = 0.0;
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.alpha = 0.6; // cap for p_min = 2 in the plane is 0.5
    CHECK_THROWS_AS(bad.validate(2.0, 2.0), ConfigError);
    bad = cfg;
    bad.k_max = 0;
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.mollify_indices = {8, 4};
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
    bad = cfg;
    bad.mollify_indices = {4, 4};
    CHECK_THROWS_AS(bad.validate(2.0, 2.2), ConfigError);
}

TEST_CASE("global attributes of the trivial instance") {
    Grid g(DomainKind::Square, 33);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    GridFunction zero(g, 0.0);

    GlobalAttributes attr = global_attributes(g, flux, mu, zero, zero, zero, zero, 0.1);
    CHECK(attr.mass_mu == 0.0);
    CHECK(attr.area == doctest::Approx(1.0));
    CHECK(attr.kappa_total == doctest::Approx(1.0));
    CHECK(attr.psi1_mass == doctest::Approx(0.0));
    CHECK(attr.divg_mass == doctest::Approx(0.0));
    CHECK(attr.gradg_mass == doctest::Approx(0.0));
    CHECK(attr.grad_mass == doctest::Approx(0.0));
    CHECK(attr.M_attr == doctest::Approx(2.0));
    CHECK(attr.Q_attr == doctest::Approx(2.0));
    double m1 = 2.0 * std::sqrt(2.0) + 1.0;
    CHECK(attr.M1_attr == doctest::Approx(m1));
    CHECK(attr.R0 == doctest::Approx(1.0 / (6.0 * m1)));
    CHECK(attr.omega_2R0 == doctest::Approx(0.0));
    CHECK(!attr.r0_floor_hit);
}

TEST_CASE("weak flux divergence of a paraboloid is exact inside") {
    Grid g(DomainKind::Square, 17);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    ScalarEntry para = make_scalar("paraboloid", {1.5, 0.4, 0.5}, 2);
    GridFunction psi = GridFunction::sample(g, [&](const Vec2& x) { return para.value(x); });

    DivergenceField plain = psi_divergence(psi, flux);
    CHECK(!plain.analytic_used);
    for (int node = 0; node < g.node_count(); ++node) {
        if (g.is_interior(node))
            CHECK(plain.field[node] == doctest::Approx(3.0).epsilon(1e-9));
        else
            CHECK(plain.field[node] == 0.0);
    }

    REQUIRE(static_cast<bool>(para.flux_div_p2));
    std::function<double(const Vec2&)> analytic = para.flux_div_p2;
    DivergenceField withform = psi_divergence(psi, flux, &analytic);
    CHECK(withform.analytic_used);
    CHECK(withform.cross_check_max <= 1e-9);
    for (int node = 0; node < g.node_count(); ++node)
        if (g.is_interior(node)) CHECK(withform.field[node] == doctest::Approx(3.0));
}

TEST_CASE("mollified solutions form a Cauchy family") {
    Grid g(DomainKind::Square, 17);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 1.0});

    ProblemSpec base;
    base.flux = &flux;
    base.boundary = GridFunction(g, 0.0);

    std::vector<std::function<double(const Vec2&)>> r_list;
    r_list.push_back([](const Vec2&) { return 1.0; });
    r_list.push_back([](const Vec2&) { return 3.0; });

    SolverOptions opt;
    opt.tol = 1e-10;
    ApproximationReport rep = approximation_study(base, mu, {2, 4}, r_list, opt);
    REQUIRE(rep.indices == std::vector<int>{2, 4});
    REQUIRE(rep.l1_grad.size() == 2);
    CHECK(rep.l1_grad[0] > 0.0);
    // one index pair, once per test exponent
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].i == 2);
    CHECK(rep.rows[0].j == 4);
    CHECK(rep.rows[0].r_id == 0);
    CHECK(!rep.rows[0].out_of_theory);
    CHECK(rep.rows[1].r_id == 1);
    CHECK(rep.rows[1].out_of_theory); // r = 3 exceeds min{n(p-1)/(n-1), p} = 2
    CHECK(rep.rows[0].modular > 0.0);
    CHECK(rep.last_consecutive_modular == doctest::Approx(rep.rows[0].modular));

    // the designated solution is the plain solve of the finest mollification
    MeasureData fine;
    fine.density = mollify(mu, g, 4);
    ProblemSpec direct = base;
    direct.measure = &fine;
    auto [uref, rref] = solve_problem(g, direct, opt);
    REQUIRE(rref.converged);
    double gap = 0.0;
    for (int node = 0; node < g.node_count(); ++node)
        gap = std::max(gap, std::abs(rep.designated[node] - uref[node]));
    CHECK(gap <= 1e-9);

    CHECK_THROWS_AS(approximation_study(base, mu, {}, r_list, opt), ConfigError);
    CHECK_THROWS_AS(approximation_study(base, mu, {2, 4}, {}, opt), ConfigError);
    ProblemSpec nofueled;
    CHECK_THROWS_AS(approximation_study(nofueled, mu, {2, 4}, r_list, opt), ConfigError);
}

TEST_CASE("gradient mass estimate closed form on the interval") {
    Grid g(DomainKind::Interval, 129);
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
    auto [u, rep] = solve_problem(g, spec, opt);
    REQUIRE(rep.converged);

    GridFunction zero(g, 0.0);
    EnergyEstimateReport er = energy_l1_estimate(u, zero, mu, flux, 0.25);
    CHECK(er.lhs == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(er.mass_mu == doctest::Approx(1.0));
    CHECK(er.exponent == doctest::Approx(4.0 / 3.0));
    double rhs = 2.0 + std::pow(2.0, 4.0 / 3.0);
    CHECK(er.rhs == doctest::Approx(rhs));
    CHECK(er.ratio == doctest::Approx(0.5 / rhs).epsilon(1e-7));
}

TEST_CASE("maximal fields of a nodal atom") {
    Grid g(DomainKind::Square, 33);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 1.0});
    GridFunction zero(g, 0.0);

    MaximalFields mf = maximal_fields(g, flux, mu, zero, zero, zero, zero);
    CHECK(mf.atom_flag);
    for (int node = 0; node < g.node_count(); ++node) {
        CHECK(mf.m_du[node] == 0.0);
        CHECK(mf.m1_psi1[node] == 0.0);
        CHECK(mf.m_dpsi1_p[node] == 0.0);
        CHECK(mf.m1_kappa[node] >= mf.m1_mu[node] - 1e-12);
    }
    // away from the atom the pure-measure field follows the first catching radius
    MaximalConfig mc;
    auto radii = mc.radii(g);
    double d = 6.0 * g.h();
    double rstar = 0.0;
    for (double r : radii)
        if (r > d) { rstar = r; break; }
    int probe = g.node_id(16 + 6, 16);
    CHECK(mf.m1_mu[probe] == doctest::Approx(1.0 / (M_PI * rstar)));
}

TEST_CASE("level set decay bookkeeping") {
    Grid g(DomainKind::Square, 33);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 5.0});
    GridFunction zero(g, 0.0);

    ProblemSpec spec;
    spec.flux = &flux;
    spec.boundary = zero;
    spec.measure = &mu;
    auto [u, rep] = solve_problem(g, spec);
    REQUIRE(rep.converged);

    GlobalAttributes attr = global_attributes(g, flux, mu, u, zero, zero, zero, 0.1);
    MaximalFields mf = maximal_fields(g, flux, mu, u, zero, zero, zero);

    HarnessConfig cfg;
    cfg.eps = 0.9;
    cfg.N = 2.0;
    cfg.delta_small = 0.01;
    cfg.q = 1.0;
    cfg.R0 = 0.5;
    LevelSetReport lr = level_set_decay(g, flux, mf, attr, cfg);

    CHECK(lr.lambda0 > 1.0);
    CHECK(lr.R0 == doctest::Approx(0.5));
    CHECK(lr.variant_p2); // p_min = 2 switches the data thresholds on
    CHECK(lr.nesting_ok);
    REQUIRE(!lr.rows.empty());
    double prev_c = std::numeric_limits<double>::infinity();
    double prev_partial = 0.0;
    for (const LevelSetRow& row : lr.rows) {
        CHECK(row.c_size <= prev_c + 1e-15);
        CHECK(row.c_size <= row.d_size + 1e-15);
        CHECK(row.s_term == doctest::Approx(std::pow(2.0, row.k + 1) * row.c_size));
        CHECK(row.s_partial >= prev_partial - 1e-15);
        prev_c = row.c_size;
        prev_partial = row.s_partial;
    }
    CHECK(lr.k_empty >= 0);
    CHECK(lr.s_total == doctest::Approx(lr.rows.back().s_partial));
    CHECK(lr.sandwich.lower <= lr.sandwich.integral * lr.sandwich.c_emp + 1e-12);

    // a huge reference ball drives the base level below one
    HarnessConfig badcfg = cfg;
    badcfg.R0 = 10.0;
    CHECK_THROWS_AS(level_set_decay(g, flux, mf, attr, badcfg), InvariantError);
}

TEST_CASE("moment estimate variants share the measure term") {
    Grid g(DomainKind::Square, 33);
    ExponentField field = make_constant_exponent(2.0);
    Flux flux = make_constant_flux(field, 1.0);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 5.0});
    GridFunction zero(g, 0.0);

    ProblemSpec spec;
    spec.flux = &flux;
    spec.boundary = zero;
    spec.measure = &mu;
    auto [u, rep] = solve_problem(g, spec);
    REQUIRE(rep.converged);

    GlobalAttributes attr = global_attributes(g, flux, mu, u, zero, zero, zero, 0.1);
    MaximalFields mf = maximal_fields(g, flux, mu, u, zero, zero, zero);

    EstimateReport general =
        main_estimate_report(g, flux, mu, u, zero, zero, zero, mf, attr, 1.0, 0.25, "general");
    CHECK(general.precondition_ok);
    CHECK(general.lhs > 0.0);
    CHECK(general.rhs > 0.0);
    CHECK(general.term_const == doctest::Approx(1.0));
    CHECK(std::isfinite(general.ratio));
    CHECK(general.atom_flag);

    EstimateReport p2var = main_estimate_report(g, flux, mu, u, zero, zero, zero, mf, attr, 1.0,
                                                0.25, "p_minus_ge_2");
    EstimateReport constp = main_estimate_report(g, flux, mu, u, zero, zero, zero, mf, attr, 1.0,
                                                 0.25, "constant_p");
    CHECK(p2var.term_mu == general.term_mu);
    CHECK(constp.term_mu == general.term_mu);
    CHECK(p2var.lhs == general.lhs);
    CHECK(constp.scale_v == 0.0);

    CHECK_THROWS_AS(main_estimate_report(g, flux, mu, u, zero, zero, zero, mf, attr, 1.0, 0.25,
                                         "mystery"),
                    ConfigError);

    ExponentField low = make_sine_exponent(1.9, 0.05, 1.0);
    Flux lowflux = make_constant_flux(low, 1.0, 1e-8);
    GlobalAttributes lattr = global_attributes(g, lowflux, mu, u, zero, zero, zero, 0.1);
    MaximalFields lmf = maximal_fields(g, lowflux, mu, u, zero, zero, zero);
    CHECK_THROWS_AS(main_estimate_report(g, lowflux, mu, u, zero, zero, zero, lmf, lattr, 1.0,
                                         0.1, "p_minus_ge_2"),
                    ConfigError);
    CHECK_THROWS_AS(main_estimate_report(g, lowflux, mu, u, zero, zero, zero, lmf, lattr, 1.0,
                                         0.1, "constant_p"),
                    ConfigError);
}
