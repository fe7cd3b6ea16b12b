#include "pxvi/exponent.hpp"

#include <algorithm>
#include <cmath>

namespace pxvi {

void ExponentField::validate(const Grid& grid) const {
    const double n = static_cast<double>(grid.dim());
    if (!(p_minus > 2.0 - 1.0 / n))
        throw InvariantError("ExponentField: p_minus must exceed 2 - 1/n");
    if (!(p_plus >= p_minus)) throw InvariantError("ExponentField: p_plus < p_minus");
    if (!(p_plus < std::numeric_limits<double>::infinity()))
        throw InvariantError("ExponentField: p_plus must be finite");
    const double slack = 1e-12;
    for (int i = 0; i < grid.node_count(); ++i) {
        if (grid.is_exterior(i)) continue;
        double v = p(grid.coord(i));
        if (v < p_minus - slack || v > p_plus + slack)
            throw InvariantError("ExponentField: sampled exponent escapes [p_minus, p_plus]");
    }
}

ExponentField make_constant_exponent(double pval) {
    ExponentField f;
    f.p = [pval](Vec2) { return pval; };
    f.p_minus = pval;
    f.p_plus = pval;
    f.omega = [](double) { return 0.0; };
    return f;
}

ExponentField make_sine_exponent(double base, double amp, double freq) {
    ExponentField f;
    f.p = [base, amp, freq](Vec2 x) { return base + amp * std::sin(2.0 * M_PI * freq * x.x); };
    f.p_minus = base - amp;
    f.p_plus = base + amp;
    f.omega = [amp, freq](double r) {
        return std::min(2.0 * amp, 2.0 * M_PI * freq * amp * std::max(r, 0.0));
    };
    return f;
}

ExponentField make_logspike_exponent(double base, double amp, Vec2 center, double r_cap) {
    if (!(r_cap > 0.0 && r_cap < 1.0))
        throw std::invalid_argument("make_logspike_exponent: r_cap must be in (0,1)");
    ExponentField f;
    f.p = [base, amp, center, r_cap](Vec2 x) {
        double d = (x - center).norm();
        if (d <= 0.0) return base;
        double de = std::min(d, r_cap);
        return base + amp / std::log(1.0 / de);
    };
    f.p_minus = base;
    f.p_plus = base + amp / std::log(1.0 / r_cap);
    f.omega = [amp, r_cap](double r) {
        if (r <= 0.0) return 0.0;
        double re = std::min(r, r_cap);
        return amp / std::log(1.0 / re);
    };
    return f;
}

LogHolderReport check_log_holder(const ExponentField& field, const Grid& grid, double delta,
                                 bool use_empirical, int max_sample_nodes) {
    LogHolderReport rep;
    const double r_lo = grid.h();
    const double r_hi = std::min(field.R, 0.5); // log(1/r) must stay positive
    std::vector<double> radii;
    for (double r = r_lo; r < r_hi; r *= std::sqrt(2.0)) radii.push_back(r);
    if (radii.empty() || radii.back() < r_hi) radii.push_back(r_hi);

    std::vector<int> nodes;
    std::vector<double> pvals;
    if (use_empirical) {
        // deterministic stride keeps the pair scan quadratic in a bounded count
        std::vector<int> usable;
        for (int i = 0; i < grid.node_count(); ++i)
            if (!grid.is_exterior(i)) usable.push_back(i);
        int stride = std::max<size_t>(1, usable.size() / static_cast<size_t>(max_sample_nodes));
        for (size_t k = 0; k < usable.size(); k += stride) nodes.push_back(usable[k]);
        pvals.reserve(nodes.size());
        for (int id : nodes) pvals.push_back(field.p(grid.coord(id)));
    }

    rep.radii = radii;
    for (double r : radii) {
        double om;
        if (use_empirical) {
            om = 0.0;
            for (size_t a = 0; a < nodes.size(); ++a) {
                for (size_t b = a + 1; b < nodes.size(); ++b) {
                    if ((grid.coord(nodes[a]) - grid.coord(nodes[b])).norm() <= r)
                        om = std::max(om, std::abs(pvals[a] - pvals[b]));
                }
            }
        } else {
            om = field.omega(r);
        }
        double ratio = om * std::log(1.0 / r);
        rep.ratios.push_back(ratio);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_radius = r;
        }
    }
    rep.passes = rep.worst_ratio <= delta;
    return rep;
}

} // namespace pxvi
