#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pxvi {

/// Planar point / vector. 1-D data uses x and keeps y == 0.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2() = default;
    Vec2(double xx, double yy) : x(xx), y(yy) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Symmetric 2x2 matrix, used for flux Jacobians.
struct Mat2 {
    double xx{0.0}, xy{0.0}, yx{0.0}, yy{0.0};

    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }

    /// Spectral (operator 2-)norm.
    double opnorm() const {
        const double a = xx * xx + yx * yx;
        const double b = xx * xy + yx * yy;
        const double c = xy * xy + yy * yy;
        const double tr = a + c;
        const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
        return std::sqrt(std::max(0.0, 0.5 * (tr + disc)));
    }
};

/// Volume of the unit ball in dimension n (n = 1 or 2 here).
inline double unit_ball_volume(int dim) {
    if (dim == 1) return 2.0;
    if (dim == 2) return M_PI;
    throw std::invalid_argument("unit_ball_volume: unsupported dimension");
}

inline double ball_volume(int dim, double r) {
    return unit_ball_volume(dim) * std::pow(r, dim);
}

// Error taxonomy. The CLI maps these to exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pxvi
