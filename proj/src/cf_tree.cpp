#include "uavbs/cf_tree.hpp"

#include <limits>
#include <string>

namespace uavbs {

namespace {

std::size_t nearest_entry(const std::vector<CfTree::Entry>& entries, const Vec2& point)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double d = (entries[i].cf.centroid() - point).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

CfTree::CfTree(double threshold, int branching, int leaf_size)
    : threshold_(threshold), branching_(branching), leaf_size_(leaf_size)
{
    if (!(threshold > 0.0))
        throw ConfigError("CF tree threshold must be positive");
    if (branching < 2 || leaf_size < 2)
        throw ConfigError("CF tree branching and leaf limits must be at least 2");
    nodes_.push_back(Node{true, {}});
}

Feature2 CfTree::node_feature(int node) const
{
    Feature2 sum;
    for (const auto& e : nodes_[std::size_t(node)].entries)
        sum += e.cf;
    return sum;
}

void CfTree::insert(const Vec2& point, int id)
{
    Split split;
    if (!insert_into(root_, point, id, split))
        return;
    // Root overflowed: grow a level.
    Node top{false, {}};
    top.entries.push_back(std::move(split.first));
    top.entries.push_back(std::move(split.second));
    nodes_.push_back(std::move(top));
    root_ = int(nodes_.size()) - 1;
}

bool CfTree::insert_into(int node_index, const Vec2& point, int id, Split& split)
{
    const auto ni = std::size_t(node_index);
    const Feature2 single = Feature2::of(point);

    if (nodes_[ni].leaf) {
        auto& entries = nodes_[ni].entries;
        if (!entries.empty()) {
            Entry& closest = entries[nearest_entry(entries, point)];
            if ((closest.cf + single).radius() <= threshold_) {
                closest.cf += single;
                closest.members.push_back(id);
                return false;
            }
        }
        entries.push_back(Entry{single, -1, {id}});
        if (int(entries.size()) <= leaf_size_)
            return false;
        split = split_node(node_index);
        return true;
    }

    const std::size_t k = nearest_entry(nodes_[ni].entries, point);
    const int child = nodes_[ni].entries[k].child;
    Split child_split;
    if (!insert_into(child, point, id, child_split)) {
        nodes_[ni].entries[k].cf += single;
        return false;
    }
    auto& entries = nodes_[ni].entries;
    entries[k] = std::move(child_split.first);
    entries.insert(entries.begin() + std::ptrdiff_t(k) + 1, std::move(child_split.second));
    if (int(entries.size()) <= branching_)
        return false;
    split = split_node(node_index);
    return true;
}

CfTree::Split CfTree::split_node(int node_index)
{
    const auto ni = std::size_t(node_index);
    std::vector<Entry> entries = std::move(nodes_[ni].entries);
    const bool leaf = nodes_[ni].leaf;

    // Seeds: the farthest pair of entry centroids, lowest indices on ties.
    std::size_t a = 0, b = 1;
    double far = -1.0;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            const double d = (entries[i].cf.centroid() - entries[j].cf.centroid()).squaredNorm();
            if (d > far) {
                far = d;
                a = i;
                b = j;
            }
        }

    const Vec2 ca = entries[a].cf.centroid();
    const Vec2 cb = entries[b].cf.centroid();
    Node first{leaf, {}}, second{leaf, {}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Vec2 c = entries[i].cf.centroid();
        const bool to_first = i == a || (i != b && (c - ca).squaredNorm() <= (c - cb).squaredNorm());
        (to_first ? first : second).entries.push_back(std::move(entries[i]));
    }

    nodes_[ni] = std::move(first);
    nodes_.push_back(std::move(second));
    const int second_index = int(nodes_.size()) - 1;

    Split s;
    s.first = Entry{node_feature(node_index), node_index, {}};
    s.second = Entry{node_feature(second_index), second_index, {}};
    return s;
}

std::vector<std::vector<int>> CfTree::clusters() const
{
    std::vector<std::vector<int>> out;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const Node& n = nodes_[std::size_t(stack.back())];
        stack.pop_back();
        if (n.leaf) {
            for (const auto& e : n.entries)
                out.push_back(e.members);
            continue;
        }
        for (auto it = n.entries.rbegin(); it != n.entries.rend(); ++it)
            stack.push_back(it->child);
    }
    return out;
}

Eigen::Index CfTree::size() const { return node_feature(root_).n; }

void CfTree::check_invariants(double tol) const
{
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const Node& n = nodes_[std::size_t(idx)];
        const int limit = n.leaf ? leaf_size_ : branching_;
        if (int(n.entries.size()) > limit)
            throw InvariantError("CF node " + std::to_string(idx) + " exceeds its entry limit");
        for (const auto& e : n.entries) {
            if (n.leaf) {
                if (e.cf.n != Eigen::Index(e.members.size()))
                    throw InvariantError("CF leaf entry count differs from its member list");
                continue;
            }
            const Feature2 sum = node_feature(e.child);
            const double scale = 1.0 + std::abs(e.cf.ss);
            if (sum.n != e.cf.n || (sum.ls - e.cf.ls).norm() > tol * scale || std::abs(sum.ss - e.cf.ss) > tol * scale)
                throw InvariantError("CF of node " + std::to_string(idx) + " differs from the sum of its children");
            stack.push_back(e.child);
        }
    }
}

std::vector<std::vector<int>> birch_clusters(const std::vector<Vec2>& points, const std::vector<int>& ids,
                                             double threshold, int branching, int leaf_size)
{
    CfTree tree(threshold, branching, leaf_size);
    for (std::size_t i = 0; i < points.size(); ++i)
        tree.insert(points[i], ids[i]);
    return tree.clusters();
}

} // namespace uavbs
