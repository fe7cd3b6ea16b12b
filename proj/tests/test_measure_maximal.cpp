#include <doctest.h>

#include "pxvi/maximal.hpp"
#include "pxvi/truncation.hpp"

#include <cmath>

using namespace pxvi;

TEST_CASE("mollifier kernel normalization and support") {
    // midpoint quadrature of the 1-D kernel over its support
    const int n = 4000;
    double dx = 2.0 / n, acc = 0.0;
    for (int k = 0; k < n; ++k) acc += mollifier_value(1, {-1.0 + (k + 0.5) * dx, 0.0}) * dx;
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-8));

    // 2-D mass via polar midpoint quadrature
    const int m = 4000;
    double dr = 1.0 / m, acc2 = 0.0;
    for (int k = 0; k < m; ++k) {
        double r = (k + 0.5) * dr;
        acc2 += mollifier_value(2, {r, 0.0}) * 2.0 * M_PI * r * dr;
    }
    CHECK(acc2 == doctest::Approx(1.0).epsilon(1e-8));

    CHECK(mollifier_value(1, {1.0, 0.0}) == 0.0);
    CHECK(mollifier_value(2, {0.8, 0.7}) == 0.0);
    CHECK(mollifier_value(2, {0.3, -0.2}) == mollifier_value(2, {-0.3, 0.2}));
    // scaling preserves mass: i^n phi(i x) integrates against dx to 1
    double acc3 = 0.0;
    for (int k = 0; k < n; ++k) acc3 += mollifier_scaled(1, 4, {-0.25 + (k + 0.5) * 0.5 / n, 0.0}) * 0.5 / n;
    CHECK(acc3 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mollified atoms keep their mass away from the boundary") {
    Grid g(DomainKind::Interval, 129);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.0}, 2.0});
    mu.validate(g);

    auto rows = l1_mass_check(mu, g, {2, 4});
    REQUIRE(rows.size() == 2);
    for (const MassCheckRow& row : rows) {
        CHECK(row.within);
        CHECK(std::abs(row.deficit) <= 1e-6);
        CHECK(row.bound == doctest::Approx(2.0 + 1e-6));
    }

    // nodal sample agrees with the pointwise evaluation
    GridFunction mi = mollify(mu, g, 4);
    for (int node : {40, 64, 80})
        CHECK(mi[node] == doctest::Approx(mollified_at(mu, g, 4, g.coord(node))));
}

TEST_CASE("boundary-adjacent atom loses mass outside the domain") {
    Grid g(DomainKind::Interval, 129);
    MeasureData mu;
    mu.atoms.push_back({{0.05, 0.0}, 1.0});
    auto rows = l1_mass_check(mu, g, {2});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].within);
    CHECK(rows[0].deficit > 0.1);
}

TEST_CASE("atom outside the closed domain is rejected") {
    Grid g(DomainKind::Square, 9);
    MeasureData mu;
    mu.atoms.push_back({{1.2, 0.5}, 1.0});
    CHECK_THROWS_AS(mu.validate(g), InvariantError);
}

TEST_CASE("total variation respects regions and signs") {
    Grid g(DomainKind::Interval, 65);
    MeasureData mu;
    mu.atoms.push_back({{0.25, 0.0}, -0.5});
    mu.atoms.push_back({{0.75, 0.0}, 2.0});
    CHECK(total_variation(mu, g) == doctest::Approx(2.5));

    Region left;
    for (int c = 0; c < g.cell_count(); ++c)
        if (g.cell(c).center.x < 0.5) left.cells.push_back(c);
    CHECK(total_variation(mu, g, left) == doctest::Approx(0.5));

    // density magnitude contributes through cell quadrature
    MeasureData md;
    md.density = GridFunction(g, -1.0);
    CHECK(total_variation(md, g) == doctest::Approx(1.0));

    // augmented mass adds the covered area and grows with the region
    CHECK(augmented_mass(mu, g, Region::whole(g)) == doctest::Approx(3.5));
    CHECK(augmented_mass(mu, g, left) <= augmented_mass(mu, g, Region::whole(g)));
}

TEST_CASE("maximal average of the constant function") {
    Grid g(DomainKind::Square, 17);
    GridFunction one(g, 1.0);
    GridFunction m = hl_maximal(one);
    // deep inside: some ball realizes the full average exactly
    CHECK(m[g.node_id(8, 8)] == doctest::Approx(1.0));
    // straight edge: every lattice ball is half inside
    CHECK(m[g.node_id(8, 0)] == doctest::Approx(0.5));
    // corner: quarter
    CHECK(m[g.node_id(0, 0)] == doctest::Approx(0.25));
    for (int node = 0; node < g.node_count(); ++node)
        if (!g.is_exterior(node)) CHECK(m[node] <= 1.0 + 1e-12);
}

TEST_CASE("fractional maximal value of a planar point mass") {
    Grid g(DomainKind::Square, 65);
    MeasureData mu;
    mu.atoms.push_back({{0.5, 0.5}, 3.0});

    MaximalConfig cfg;
    auto radii = cfg.radii(g);
    double d = 4.0 * g.h();
    int probe = g.node_id(32 + 4, 32);

    FracMaximalResult res = frac_maximal_measure(mu, g, cfg);
    double rstar = 0.0;
    for (double r : radii)
        if (r > d) { rstar = r; break; }
    REQUIRE(rstar > 0.0);
    CHECK(res.field[probe] == doctest::Approx(3.0 / (M_PI * rstar)));

    // the node on the atom reports the smallest-radius evaluation and is flagged
    int at = g.node_id(32, 32);
    CHECK(std::find(res.flagged_nodes.begin(), res.flagged_nodes.end(), at) !=
          res.flagged_nodes.end());
    CHECK(res.field[at] == doctest::Approx(3.0 / (M_PI * radii.front())));

    // augmenting with the Lebesgue part only increases the field
    FracMaximalResult aug = frac_maximal_augmented(mu, g, cfg);
    for (int node = 0; node < g.node_count(); ++node)
        CHECK(aug.field[node] >= res.field[node] - 1e-12);
}

TEST_CASE("distribution sum of a constant field") {
    Grid g(DomainKind::Square, 9);
    GridFunction f(g, 5.0);

    DistributionSum d1 = distribution_sum(f, 1.0, 2.0, 1.0);
    CHECK(d1.terms == 2);
    CHECK(d1.sum == doctest::Approx(6.0));
    CHECK(d1.lower == doctest::Approx(6.0));
    CHECK(d1.upper == doctest::Approx(7.0));
    CHECK(d1.integral == doctest::Approx(5.0));
    CHECK(d1.c_emp == doctest::Approx(1.2));

    DistributionSum d2 = distribution_sum(f, 1.0, 2.0, 2.0);
    CHECK(d2.sum == doctest::Approx(20.0));
    CHECK(d2.integral == doctest::Approx(25.0));
    CHECK(d2.c_emp == doctest::Approx(25.0 / 21.0));

    GridFunction z(g, 0.0);
    DistributionSum dz = distribution_sum(z, 1.0, 2.0, 1.0);
    CHECK(dz.terms == 0);
    CHECK(dz.sum == 0.0);
    CHECK(dz.integral == 0.0);
    CHECK(dz.c_emp == doctest::Approx(1.0));
}

TEST_CASE("truncation band identity") {
    const double ks[] = {0.5, 1.0, 3.0};
    for (double k : ks)
        for (int s = -40; s <= 40; ++s) {
            double t = 0.11 * s;
            CHECK(truncate(t, k + 1.0) - truncate(t, k) == doctest::Approx(unit_excess(t, k)));
            CHECK(unit_excess(-t, k) == doctest::Approx(-unit_excess(t, k)));
        }
}
