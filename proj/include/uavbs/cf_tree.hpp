#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "uavbs/types.hpp"

namespace uavbs {

/// BIRCH clustering feature: sample count, linear sum and sum of squared norms.
/// Additive, so a parent's feature is the sum of its children's.
template <typename Scalar, int Dim>
struct ClusteringFeature {
    using Vector = Eigen::Matrix<Scalar, Dim, 1>;

    Eigen::Index n = 0;
    Vector ls = Vector::Zero();
    Scalar ss = Scalar(0);

    static ClusteringFeature of(const Vector& x) { return {1, x, x.squaredNorm()}; }

    ClusteringFeature& operator+=(const ClusteringFeature& o)
    {
        n += o.n;
        ls += o.ls;
        ss += o.ss;
        return *this;
    }
    friend ClusteringFeature operator+(ClusteringFeature a, const ClusteringFeature& b) { return a += b; }

    Vector centroid() const { return ls / Scalar(n); }

    /// Root-mean-square distance of members from the centroid; clamped at 0
    /// against cancellation.
    Scalar radius() const
    {
        if (n == 0)
            return Scalar(0);
        const Scalar r2 = ss / Scalar(n) - centroid().squaredNorm();
        return std::sqrt(std::max(r2, Scalar(0)));
    }
};

using Feature2 = ClusteringFeature<double, 2>;

/// CF tree over 2D points (phase one of BIRCH). Leaves hold the member ids
/// of each entry so clusters can be read back directly.
class CfTree {
public:
    struct Entry {
        Feature2 cf;
        int child = -1;           // node index for internal entries
        std::vector<int> members; // point ids for leaf entries
    };
    struct Node {
        bool leaf = true;
        std::vector<Entry> entries;
    };

    /// `threshold` bounds the radius of a leaf entry after absorbing a point.
    CfTree(double threshold, int branching = 8, int leaf_size = 8);

    void insert(const Vec2& point, int id);

    /// Member sets of every leaf entry in depth-first order.
    std::vector<std::vector<int>> clusters() const;

    const Node& node(int index) const { return nodes_[std::size_t(index)]; }
    int root() const { return root_; }
    std::size_t node_count() const { return nodes_.size(); }
    Eigen::Index size() const;
    double threshold() const { return threshold_; }

    /// Throws InvariantError when a stored feature differs from the sum of its
    /// children beyond `tol` or an entry limit is exceeded.
    void check_invariants(double tol = 1e-9) const;

private:
    struct Split {
        Entry first, second;
    };

    bool insert_into(int node, const Vec2& point, int id, Split& split);
    Split split_node(int node);
    Feature2 node_feature(int node) const;

    double threshold_;
    int branching_;
    int leaf_size_;
    int root_ = 0;
    std::vector<Node> nodes_;
};

/// Builds a tree with ids inserted in the given order and returns its clusters.
std::vector<std::vector<int>> birch_clusters(const std::vector<Vec2>& points, const std::vector<int>& ids,
                                             double threshold, int branching, int leaf_size);

} // namespace uavbs
