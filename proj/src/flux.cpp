#include "pxvi/flux.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pxvi {

Mat2 Flux::jacobian(const Vec2& xi, const Vec2& x) const {
    const double p = p_at(x);
    const double g = gamma(x);
    const double m = xi.norm2() + eps_reg * eps_reg;
    Mat2 J;
    if (m == 0.0) return J;
    const double base = std::pow(m, 0.5 * (p - 2.0));
    const double rank1 = (p - 2.0) * std::pow(m, 0.5 * (p - 4.0));
    J.xx = g * (base + rank1 * xi.x * xi.x);
    J.xy = g * rank1 * xi.x * xi.y;
    J.yx = J.xy;
    J.yy = g * (base + rank1 * xi.y * xi.y);
    return J;
}

Mat2 Flux::jacobian_fd(const Vec2& xi, const Vec2& x, double fd_step) const {
    const double s = fd_step * std::max(1.0, xi.norm());
    Mat2 J;
    Vec2 ax1 = eval({xi.x + s, xi.y}, x), ax0 = eval({xi.x - s, xi.y}, x);
    Vec2 ay1 = eval({xi.x, xi.y + s}, x), ay0 = eval({xi.x, xi.y - s}, x);
    J.xx = (ax1.x - ax0.x) / (2.0 * s);
    J.yx = (ax1.y - ax0.y) / (2.0 * s);
    J.xy = (ay1.x - ay0.x) / (2.0 * s);
    J.yy = (ay1.y - ay0.y) / (2.0 * s);
    return J;
}

namespace {

Flux base_flux(const ExponentField& field, std::function<double(Vec2)> gamma, double gmin,
               double gmax, double eps_reg) {
    Flux f;
    f.exponent = &field;
    f.gamma = std::move(gamma);
    f.gamma_min = gmin;
    f.gamma_max = gmax;
    f.eps_reg = eps_reg;
    f.lambda1 = gmax * (1.0 + std::max(1.0, field.p_plus - 1.0));
    f.lambda2 = gmin * std::min(1.0, field.p_minus - 1.0);
    if (!(gmin > 0.0)) throw InvariantError("Flux: gamma_min must be positive");
    return f;
}

} // namespace

Flux make_constant_flux(const ExponentField& field, double gamma_value, double eps_reg) {
    return base_flux(
        field, [gamma_value](Vec2) { return gamma_value; }, gamma_value, gamma_value, eps_reg);
}

Flux make_step_flux(const ExponentField& field, double jump, double interface, double eps_reg) {
    if (!(std::abs(jump) < 1.0)) throw std::invalid_argument("make_step_flux: |jump| < 1 required");
    auto g = [jump, interface](Vec2 x) {
        return 1.0 + jump * (x.x > interface ? 1.0 : (x.x < interface ? -1.0 : 0.0));
    };
    return base_flux(field, g, 1.0 - std::abs(jump), 1.0 + std::abs(jump), eps_reg);
}

Flux make_custom_flux(const ExponentField& field, std::function<double(Vec2)> gamma,
                      double gamma_min, double gamma_max, double eps_reg) {
    return base_flux(field, std::move(gamma), gamma_min, gamma_max, eps_reg);
}

StructureReport verify_structure(const Flux& flux, const Grid& grid, int sample_count,
                                 uint64_t seed, double fd_tol) {
    StructureReport rep;
    rep.lambda2_emp = std::numeric_limits<double>::infinity();
    rep.lambda_mono_emp = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> logmag(-3.0, 3.0);

    auto random_dir = [&]() {
        double t = 2.0 * M_PI * uni(rng);
        return grid.dim() == 1 ? Vec2{uni(rng) < 0.5 ? -1.0 : 1.0, 0.0}
                               : Vec2{std::cos(t), std::sin(t)};
    };
    auto random_x = [&]() {
        for (int tries = 0; tries < 256; ++tries) {
            Vec2 p{grid.origin().x + uni(rng) * (grid.nx() - 1) * grid.h(),
                   grid.dim() == 1 ? 0.0 : grid.origin().y + uni(rng) * (grid.ny() - 1) * grid.h()};
            if (grid.contains_open(p)) return p;
        }
        throw InvariantError("verify_structure: could not sample a domain point");
    };

    for (int s = 0; s < sample_count; ++s) {
        Vec2 x = random_x();
        double p = flux.p_at(x);
        Vec2 xi = std::pow(10.0, logmag(rng)) * random_dir();
        Vec2 eta_dir = random_dir();
        Vec2 eta = std::pow(10.0, logmag(rng)) * random_dir();

        Mat2 J = flux.jacobian_fd(xi, x);
        Vec2 a = flux.eval(xi, x);
        double xin = xi.norm();
        double growth = (a.norm() + xin * J.opnorm()) / std::pow(xin, p - 1.0);
        rep.lambda1_emp = std::max(rep.lambda1_emp, growth);
        if (growth > flux.lambda1 * (1.0 + fd_tol))
            rep.violations.push_back({xi, eta_dir, x, "growth", growth});

        double ell = J.apply(eta_dir).dot(eta_dir) / std::pow(xin, p - 2.0);
        rep.lambda2_emp = std::min(rep.lambda2_emp, ell);
        if (ell < flux.lambda2 * (1.0 - fd_tol) - fd_tol)
            rep.violations.push_back({xi, eta_dir, x, "ellipticity", ell});

        // monotonicity pair; coincident samples are degenerate 0/0 and skipped
        Vec2 d = xi - eta;
        if (d.norm2() > 0.0) {
            double num = (flux.eval(xi, x) - flux.eval(eta, x)).dot(d);
            double den = p >= 2.0
                             ? std::pow(d.norm(), p)
                             : std::pow(xi.norm2() + eta.norm2(), 0.5 * (p - 2.0)) * d.norm2();
            rep.lambda_mono_emp = std::min(rep.lambda_mono_emp, num / den);
        }
    }
    return rep;
}

double theta_average(const Flux& flux, const Grid& grid, const Vec2& center, double r,
                     int dir_samples, int mag_samples) {
    std::vector<int> cells = grid.cells_in_ball(center, r);
    if (cells.empty()) return 0.0;
    double worst = 0.0;
    for (int d = 0; d < dir_samples; ++d) {
        double t = 2.0 * M_PI * (static_cast<double>(d) / dir_samples) + 0.37;
        Vec2 dir = grid.dim() == 1 ? Vec2{d % 2 == 0 ? 1.0 : -1.0, 0.0}
                                   : Vec2{std::cos(t), std::sin(t)};
        for (int m = 0; m < mag_samples; ++m) {
            double mag = std::pow(10.0, -3.0 + 6.0 * m / std::max(1, mag_samples - 1));
            Vec2 xi = mag * dir;
            // direction-field quotient a(xi,x)/|xi|^{p(x)-1} per cell
            Vec2 mean{0.0, 0.0};
            std::vector<Vec2> q(cells.size());
            for (size_t k = 0; k < cells.size(); ++k) {
                Vec2 xc = grid.cell(cells[k]).center;
                double p = flux.p_at(xc);
                q[k] = flux.eval_raw(xi, xc) * (1.0 / std::pow(mag, p - 1.0));
                mean = mean + q[k];
            }
            mean = mean * (1.0 / static_cast<double>(cells.size()));
            double acc = 0.0;
            for (const Vec2& qq : q) acc += (qq - mean).norm();
            worst = std::max(worst, acc / static_cast<double>(cells.size()));
        }
    }
    return worst;
}

double bmo_oscillation(const Flux& flux, const Grid& grid, double R, int max_centers) {
    std::vector<int> usable;
    for (int i = 0; i < grid.node_count(); ++i)
        if (!grid.is_exterior(i)) usable.push_back(i);
    size_t stride = std::max<size_t>(1, usable.size() / static_cast<size_t>(max_centers));
    double worst = 0.0;
    for (size_t k = 0; k < usable.size(); k += stride) {
        Vec2 y = grid.coord(usable[k]);
        for (double r = grid.h(); r <= R * (1.0 + 1e-12); r *= std::sqrt(2.0))
            worst = std::max(worst, theta_average(flux, grid, y, r));
    }
    return worst;
}

FrozenFlux freeze_flux(const Flux& flux, const SubWindow& win, bool require_admissible) {
    const Grid& grid = *win.grid;
    double p1 = std::numeric_limits<double>::infinity();
    double p2 = -p1;
    for (int id : win.nodes) {
        double v = flux.p_at(grid.coord(id));
        p1 = std::min(p1, v);
        p2 = std::max(p2, v);
    }
    for (int c : win.cells) {
        double v = flux.p_at(grid.cell(c).center);
        p1 = std::min(p1, v);
        p2 = std::max(p2, v);
    }
    const double osc_bound = flux.exponent->omega(2.0 * win.radius);
    if (require_admissible) {
        if (!win.setting_ok)
            throw std::invalid_argument("freeze_flux: window fails the geometric setting");
        if (p2 - p1 > osc_bound + 1e-12)
            throw std::invalid_argument("freeze_flux: exponent oscillation exceeds omega(2 rho)");
    }
    FrozenFlux fr;
    fr.p2 = p2;
    double acc = 0.0;
    for (int c : win.cells) {
        Vec2 xc = grid.cell(c).center;
        if ((xc - win.center).dot(win.inward) <= 0.0) continue;
        fr.cell_weights.emplace_back(flux.gamma(xc), flux.p_at(xc));
        acc += flux.gamma(xc);
    }
    if (fr.cell_weights.empty())
        throw std::invalid_argument("freeze_flux: empty half-window");
    fr.gamma_bar = acc / static_cast<double>(fr.cell_weights.size());
    return fr;
}

} // namespace pxvi
