#pragma once

#include "pxvi/gridfunction.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pxvi {

/// A named closed-form scalar field with whatever analytic extras the shape
/// affords. flux_div_p2 is the divergence of the p = 2, unit-gamma flux of
/// the field (the Laplacian), present only where it has a closed form.
struct ScalarEntry {
    std::string kind;
    std::function<double(const Vec2&)> value;
    std::function<Vec2(const Vec2&)> gradient;
    std::function<double(const Vec2&)> flux_div_p2; // null when no closed form

    bool valid() const { return static_cast<bool>(value); }
};

/// Shapes: constant {c}; affine {c, bx, by}; paraboloid {s, cx, cy} giving
/// s |x-c|^2 / 2; sine {a, fx, fy} giving a sin(pi fx x) sin(pi fy y) (the y
/// factor drops in one dimension); cone {s, cx, cy} giving s |x-c|;
/// bump {a, cx, cy, r} a smooth compactly supported hump of height a.
ScalarEntry make_scalar(const std::string& kind, const std::vector<double>& params, int dim);

/// Names available to configs, one line each for error messages.
std::vector<std::string> registered_scalar_kinds();

} // namespace pxvi
