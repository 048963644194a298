#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "topometric/geometry.hpp"
#include "topometric/odometry.hpp"

namespace topometric {

using NodeId = long;

struct TopoNode {
    NodeId id = 0;
    Pose2 pose;
    // Place-recognition front ends may attach an appearance descriptor here.
    std::optional<std::vector<double>> descriptor;
};

struct NodeDetection {
    long timestep = 0;
    NodeId node_id = 0;
    double confidence = 0.0;

    friend bool operator==(const NodeDetection&, const NodeDetection&) = default;
};

struct NearestNode {
    NodeId id = 0;
    double distance = 0.0;
};

/// Key-frame nodes with globally referenced poses. Ids are dense in
/// creation order; any two nodes are at least `d_th` apart in the plane.
class TopoMap {
public:
    TopoMap() = default;

    /// Builds a map from explicit nodes, e.g. when loading from disk. Ids must
    /// be 0..N-1 in order and the spacing invariant must hold.
    TopoMap(std::vector<TopoNode> nodes, double d_th) : nodes_(std::move(nodes)), d_th_(d_th) {
        if (!(d_th_ > 0.0)) {
            throw std::invalid_argument("TopoMap: d_th must be positive");
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].id != static_cast<NodeId>(i)) {
                throw std::invalid_argument("TopoMap: node ids must be dense and ordered");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (planar_distance(nodes_[i].pose, nodes_[j].pose) < d_th_) {
                    throw std::invalid_argument("TopoMap: nodes " + std::to_string(j) + " and " +
                                                std::to_string(i) + " closer than d_th");
                }
            }
        }
    }

    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    double d_th() const { return d_th_; }
    const std::vector<TopoNode>& nodes() const { return nodes_; }
    bool contains(NodeId id) const { return id >= 0 && static_cast<std::size_t>(id) < nodes_.size(); }

    const Pose2& lookup(NodeId id) const {
        if (!contains(id)) {
            throw std::out_of_range("TopoMap::lookup: unknown node id " + std::to_string(id));
        }
        return nodes_[static_cast<std::size_t>(id)].pose;
    }

    /// Closest node in the plane; ties go to the lowest id.
    NearestNode nearest_node(const Pose2& pose) const {
        if (nodes_.empty()) {
            throw std::logic_error("TopoMap::nearest_node: empty map");
        }
        NearestNode best{0, planar_distance(nodes_[0].pose, pose)};
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            const double d = planar_distance(nodes_[i].pose, pose);
            if (d < best.distance) {
                best = {static_cast<NodeId>(i), d};
            }
        }
        return best;
    }

private:
    std::vector<TopoNode> nodes_;
    double d_th_ = 1.0;
};

/// Greedy key-frame selection: the first pose is node 0, and each later pose
/// becomes a node when it is at least `d_th` from every node chosen so far.
inline TopoMap build_map(const Trajectory& reference, double d_th = 1.0) {
    if (!(d_th > 0.0)) {
        throw std::invalid_argument("build_map: d_th must be positive");
    }
    if (reference.empty()) {
        throw std::invalid_argument("build_map: empty reference trajectory");
    }
    std::vector<TopoNode> nodes;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const Pose2& p = reference.pose(i);
        bool far_enough = true;
        for (const auto& n : nodes) {
            if (planar_distance(n.pose, p) < d_th) {
                far_enough = false;
                break;
            }
        }
        if (far_enough) {
            nodes.push_back({static_cast<NodeId>(nodes.size()), p, std::nullopt});
        }
    }
    return TopoMap(std::move(nodes), d_th);
}

}  // namespace topometric
