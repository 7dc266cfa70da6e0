#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include <Eigen/Core>

namespace uavbs {

template <typename Scalar>
struct Circle {
    Eigen::Matrix<Scalar, 2, 1> center = Eigen::Matrix<Scalar, 2, 1>::Zero();
    Scalar radius = Scalar(0);

    bool contains(const Eigen::Matrix<Scalar, 2, 1>& p, Scalar tol = Scalar(1e-9)) const
    {
        return (p - center).norm() <= radius + tol * (Scalar(1) + radius);
    }
};

template <typename Scalar>
Circle<Scalar> circle_from(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b)
{
    const Eigen::Matrix<Scalar, 2, 1> c = (a + b) / Scalar(2);
    return {c, (a - c).norm()};
}

/// Circumcircle; collinear triples fall back to the circle on the widest pair.
template <typename Scalar>
Circle<Scalar> circle_from(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b,
                           const Eigen::Matrix<Scalar, 2, 1>& c)
{
    const Eigen::Matrix<Scalar, 2, 1> ab = b - a, ac = c - a;
    const Scalar det = Scalar(2) * (ab.x() * ac.y() - ab.y() * ac.x());
    const Scalar scale = ab.squaredNorm() + ac.squaredNorm();
    if (std::abs(det) <= Scalar(1e-14) * scale) {
        Circle<Scalar> best = circle_from(a, b);
        for (const auto& cand : {circle_from(a, c), circle_from(b, c)})
            if (cand.radius > best.radius)
                best = cand;
        return best;
    }
    const Scalar b2 = ab.squaredNorm(), c2 = ac.squaredNorm();
    const Eigen::Matrix<Scalar, 2, 1> off((ac.y() * b2 - ab.y() * c2) / det, (ab.x() * c2 - ac.x() * b2) / det);
    return {a + off, off.norm()};
}

/// Smallest circle containing every point (incremental Welzl construction,
/// expected linear for shuffled input, cubic worst case).
template <typename Scalar>
Circle<Scalar> minimal_enclosing_circle(std::span<const Eigen::Matrix<Scalar, 2, 1>> pts)
{
    if (pts.empty())
        throw std::invalid_argument("minimal_enclosing_circle: empty point set");
    const Scalar tol = Scalar(1e-12);
    Circle<Scalar> c{pts[0], Scalar(0)};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (c.contains(pts[i], tol))
            continue;
        c = {pts[i], Scalar(0)};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(pts[j], tol))
                continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k)
                if (!c.contains(pts[k], tol))
                    c = circle_from(pts[i], pts[j], pts[k]);
        }
    }
    return c;
}

} // namespace uavbs
