#pragma once

#include <cmath>
#include <string>

#include "necklace/errors.hpp"

namespace necklace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

using Point = Vec2;

inline double dist(Point a, Point b) { return (a - b).norm(); }

// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    static Mat2 identity() { return {}; }
    static Mat2 scale(double s) { return {s, 0, 0, s}; }
    static Mat2 rotation(double theta) {
        double co = std::cos(theta), si = std::sin(theta);
        return {co, -si, si, co};
    }
    // Reflection across the x-axis (complex conjugation).
    static Mat2 conjugation() { return {1, 0, 0, -1}; }

    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    double det() const { return a * d - b * c; }

    // Largest singular value.
    double op_norm() const {
        double t = a * a + b * b + c * c + d * d;
        double dd = det();
        double disc = t * t - 4.0 * dd * dd;
        if (disc < 0) disc = 0;
        return std::sqrt(0.5 * (t + std::sqrt(disc)));
    }

    double max_abs() const {
        return std::max(std::max(std::fabs(a), std::fabs(b)),
                        std::max(std::fabs(c), std::fabs(d)));
    }

    Mat2 inverse() const {
        double de = det();
        if (de == 0.0 || !std::isfinite(de))
            throw SingularMatrixError("matrix is singular, not a homeomorphism");
        double inv = 1.0 / de;
        return {d * inv, -b * inv, -c * inv, a * inv};
    }
};

// Invertible affine map of the plane, p -> linear*p + translation.
// Systems require these to be contractions; intermediate algebra (inverses,
// relative maps) may carry norms >= 1.
struct AffineMap {
    Mat2 linear;
    Vec2 translation;

    AffineMap() = default;
    AffineMap(Mat2 l, Vec2 t) : linear(l), translation(t) {}

    static AffineMap similitude(double ratio, double angle, Vec2 t, bool reflect = false) {
        Mat2 m = Mat2::rotation(angle) * Mat2::scale(ratio);
        if (reflect) m = m * Mat2::conjugation();
        return {m, t};
    }

    Point operator()(Point p) const { return linear * p + translation; }
};

inline Point apply(const AffineMap& m, Point p) { return m(p); }

inline AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
    return {outer.linear * inner.linear, outer.linear * inner.translation + outer.translation};
}

inline AffineMap inverse(const AffineMap& m) {
    Mat2 li = m.linear.inverse();
    return {li, -(li * m.translation)};
}

// Operator norm of the linear part; error when the map is not a contraction.
inline double contraction_factor(const AffineMap& m) {
    double n = m.linear.op_norm();
    if (!(n < 1.0))
        throw NotContractiveError("operator norm " + std::to_string(n) + " is not < 1");
    if (m.linear.det() == 0.0)
        throw SingularMatrixError("linear part is singular");
    return n;
}

// Unique fixed point of a contraction: (I - A) p = t.
inline Point fixed_point(const AffineMap& m) {
    Mat2 ia{1.0 - m.linear.a, -m.linear.b, -m.linear.c, 1.0 - m.linear.d};
    Mat2 inv = ia.inverse();
    return inv * m.translation;
}

struct Ball {
    Point center;
    double radius = 0.0;

    Ball() = default;
    Ball(Point c, double r) : center(c), radius(r) {}

    bool contains(Point p, double slack = 0.0) const {
        return dist(p, center) <= radius + slack;
    }
};

// Outer enclosure of the image of a ball; radii scale by operator norm.
inline Ball map_ball(const AffineMap& m, const Ball& b) {
    return {m(b.center), m.linear.op_norm() * b.radius};
}

inline double ball_gap(const Ball& a, const Ball& b) {
    return dist(a.center, b.center) - a.radius - b.radius;
}

}  // namespace necklace
