#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace uavbs {

// Scene coordinates are in grid units; Scene::scale_m_per_unit converts to meters.
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Integer lattice cell a UAV can occupy.
using Cell = Eigen::Vector3i;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

template <typename Scalar>
struct Box3T {
    Eigen::Matrix<Scalar, 3, 1> lo = Eigen::Matrix<Scalar, 3, 1>::Zero();
    Eigen::Matrix<Scalar, 3, 1> hi = Eigen::Matrix<Scalar, 3, 1>::Zero();

    bool contains(const Eigen::Matrix<Scalar, 3, 1>& p) const
    {
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }
    bool empty() const { return (hi.array() < lo.array()).any(); }
    bool operator==(const Box3T&) const = default;
};

using Box3 = Box3T<double>;
using CellBox = Box3T<int>;

inline std::int64_t cell_count(const CellBox& box)
{
    if (box.empty())
        return 0;
    const Eigen::Vector3i ext = box.hi - box.lo + Eigen::Vector3i::Ones();
    return std::int64_t(ext.x()) * ext.y() * ext.z();
}

struct CellHash {
    std::size_t operator()(const Cell& c) const noexcept
    {
        std::uint64_t h = std::uint32_t(c.x());
        h = h * 0x9E3779B97F4A7C15ULL ^ std::uint32_t(c.y());
        h = h * 0x9E3779B97F4A7C15ULL ^ std::uint32_t(c.z());
        return std::size_t(h ^ (h >> 29));
    }
};

struct CellEqual {
    bool operator()(const Cell& a, const Cell& b) const noexcept { return a == b; }
};

} // namespace uavbs
