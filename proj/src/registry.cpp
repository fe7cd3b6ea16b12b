#include "pxvi/registry.hpp"

#include "pxvi/common.hpp"

#include <cmath>

namespace pxvi {

namespace {

double param(const std::vector<double>& p, size_t i, double fallback) {
    return i < p.size() ? p[i] : fallback;
}

} // namespace

ScalarEntry make_scalar(const std::string& kind, const std::vector<double>& params, int dim) {
    ScalarEntry e;
    e.kind = kind;
    const double pi = std::acos(-1.0);
    if (kind == "constant") {
        double c = param(params, 0, 0.0);
        e.value = [c](const Vec2&) { return c; };
        e.gradient = [](const Vec2&) { return Vec2{0.0, 0.0}; };
        e.flux_div_p2 = [](const Vec2&) { return 0.0; };
    } else if (kind == "affine") {
        double c = param(params, 0, 0.0), bx = param(params, 1, 0.0), by = param(params, 2, 0.0);
        e.value = [=](const Vec2& x) { return c + bx * x.x + by * x.y; };
        e.gradient = [=](const Vec2&) { return Vec2{bx, by}; };
        e.flux_div_p2 = [](const Vec2&) { return 0.0; };
    } else if (kind == "paraboloid") {
        double s = param(params, 0, 1.0), cx = param(params, 1, 0.0), cy = param(params, 2, 0.0);
        e.value = [=](const Vec2& x) {
            Vec2 d{x.x - cx, dim > 1 ? x.y - cy : 0.0};
            return 0.5 * s * d.norm2();
        };
        e.gradient = [=](const Vec2& x) {
            return Vec2{s * (x.x - cx), dim > 1 ? s * (x.y - cy) : 0.0};
        };
        double n = static_cast<double>(dim);
        e.flux_div_p2 = [=](const Vec2&) { return s * n; };
    } else if (kind == "sine") {
        double a = param(params, 0, 1.0), fx = param(params, 1, 1.0), fy = param(params, 2, 1.0);
        if (dim == 1) {
            e.value = [=](const Vec2& x) { return a * std::sin(pi * fx * x.x); };
            e.gradient = [=](const Vec2& x) { return Vec2{a * pi * fx * std::cos(pi * fx * x.x), 0.0}; };
            e.flux_div_p2 = [=](const Vec2& x) {
                return -a * pi * pi * fx * fx * std::sin(pi * fx * x.x);
            };
        } else {
            e.value = [=](const Vec2& x) {
                return a * std::sin(pi * fx * x.x) * std::sin(pi * fy * x.y);
            };
            e.gradient = [=](const Vec2& x) {
                return Vec2{a * pi * fx * std::cos(pi * fx * x.x) * std::sin(pi * fy * x.y),
                            a * pi * fy * std::sin(pi * fx * x.x) * std::cos(pi * fy * x.y)};
            };
            e.flux_div_p2 = [=](const Vec2& x) {
                return -a * pi * pi * (fx * fx + fy * fy) * std::sin(pi * fx * x.x) *
                       std::sin(pi * fy * x.y);
            };
        }
    } else if (kind == "cone") {
        double s = param(params, 0, 1.0), cx = param(params, 1, 0.0), cy = param(params, 2, 0.0);
        e.value = [=](const Vec2& x) {
            Vec2 d{x.x - cx, dim > 1 ? x.y - cy : 0.0};
            return s * d.norm();
        };
        e.gradient = [=](const Vec2& x) {
            Vec2 d{x.x - cx, dim > 1 ? x.y - cy : 0.0};
            double r = d.norm();
            if (r == 0.0) return Vec2{0.0, 0.0};
            return Vec2{s * d.x / r, s * d.y / r};
        };
    } else if (kind == "bump") {
        double a = param(params, 0, 1.0), cx = param(params, 1, 0.5), cy = param(params, 2, 0.5);
        double r = param(params, 3, 0.25);
        if (r <= 0.0) throw ConfigError("registry: bump radius must be positive");
        e.value = [=](const Vec2& x) {
            Vec2 d{x.x - cx, dim > 1 ? x.y - cy : 0.0};
            double s2 = d.norm2() / (r * r);
            if (s2 >= 1.0) return 0.0;
            return a * std::exp(1.0 - 1.0 / (1.0 - s2));
        };
        e.gradient = [=](const Vec2& x) {
            Vec2 d{x.x - cx, dim > 1 ? x.y - cy : 0.0};
            double s2 = d.norm2() / (r * r);
            if (s2 >= 1.0) return Vec2{0.0, 0.0};
            double t = 1.0 - s2;
            double f = a * std::exp(1.0 - 1.0 / t);
            double scale = -2.0 * f / (t * t * r * r);
            return Vec2{scale * d.x, scale * d.y};
        };
    } else {
        std::string known;
        for (const auto& k : registered_scalar_kinds()) known += " " + k;
        throw ConfigError("registry: unknown scalar kind '" + kind + "'; known:" + known);
    }
    return e;
}

std::vector<std::string> registered_scalar_kinds() {
    return {"constant", "affine", "paraboloid", "sine", "cone", "bump"};
}

} // namespace pxvi
