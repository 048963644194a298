#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "topometric/simulator.hpp"
#include "topometric/topo_map.hpp"

using namespace topometric;

namespace {

Trajectory straight_line(int metres) {
    std::vector<Pose2> poses;
    for (int i = 0; i <= metres; ++i) {
        poses.emplace_back(static_cast<double>(i), 0.0, 0.0);
    }
    return Trajectory::from_poses(poses);
}

}  // namespace

TEST(BuildMap, OneMetreSpacingOnStraightLine) {
    const TopoMap map = build_map(straight_line(10), 1.0);
    EXPECT_EQ(map.size(), 11u);
}

TEST(BuildMap, IdenticalPosesGiveOneNode) {
    const std::vector<Pose2> poses(20, Pose2(3.0, 4.0, 1.0));
    EXPECT_EQ(build_map(Trajectory::from_poses(poses), 0.5).size(), 1u);
}

TEST(BuildMap, RejectsBadInput) {
    EXPECT_THROW(build_map(Trajectory{}, 1.0), std::invalid_argument);
    EXPECT_THROW(build_map(straight_line(3), 0.0), std::invalid_argument);
}

TEST(BuildMap, PairwiseSpacingOnRandomTrajectories) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Trajectory t = generate_path(PathKind::RandomWalk, 300.0, 0.37, seed);
        for (double d_th : {0.5, 1.0, 2.5}) {
            const TopoMap map = build_map(t, d_th);
            const auto& nodes = map.nodes();
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                EXPECT_EQ(nodes[i].id, static_cast<NodeId>(i));
                for (std::size_t j = 0; j < i; ++j) {
                    EXPECT_GE(std::hypot(nodes[i].pose.x - nodes[j].pose.x, nodes[i].pose.y - nodes[j].pose.y), d_th);
                }
            }
            // Every pose of the reference lies within d_th of some node.
            for (std::size_t k = 0; k < t.size(); ++k) {
                EXPECT_LT(map.nearest_node(t.pose(k)).distance, d_th);
            }
        }
    }
}

TEST(Lookup, ReturnsSelectedPoses) {
    const Trajectory ref = Trajectory::from_poses(std::vector<Pose2>{
        Pose2(0, 0, 0), Pose2(0.4, 0, 0), Pose2(1.2, 0, 0.1), Pose2(1.5, 0, 0), Pose2(2.5, 0.1, 0.2)});
    const TopoMap map = build_map(ref, 1.0);
    ASSERT_EQ(map.size(), 3u);
    EXPECT_EQ(map.lookup(0), ref.pose(0));
    EXPECT_EQ(map.lookup(2), ref.pose(4));
    for (const auto& n : map.nodes()) {
        EXPECT_EQ(map.lookup(n.id), n.pose);
    }
    EXPECT_THROW(map.lookup(3), std::out_of_range);
    EXPECT_THROW(map.lookup(-1), std::out_of_range);
}

TEST(NearestNode, FixedCases) {
    const TopoMap map = build_map(straight_line(5), 1.0);
    const auto at = map.nearest_node(map.lookup(3));
    EXPECT_EQ(at.id, 3);
    EXPECT_DOUBLE_EQ(at.distance, 0.0);
    const auto tie = map.nearest_node(Pose2(1.5, 0.0, 0.0));
    EXPECT_EQ(tie.id, 1);
    EXPECT_DOUBLE_EQ(tie.distance, 0.5);
    EXPECT_THROW(TopoMap{}.nearest_node(Pose2{}), std::logic_error);
}

TEST(NearestNode, MatchesLinearScan) {
    const TopoMap map = build_map(generate_path(PathKind::Loop, 120.0, 0.5, 3), 1.0);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-30.0, 60.0);
    for (int i = 0; i < 500; ++i) {
        const Pose2 q(u(gen), u(gen), 0.0);
        NodeId best = -1;
        double best_d = INFINITY;
        for (const auto& n : map.nodes()) {
            const double d = std::sqrt((n.pose.x - q.x) * (n.pose.x - q.x) + (n.pose.y - q.y) * (n.pose.y - q.y));
            if (d < best_d) {
                best_d = d;
                best = n.id;
            }
        }
        const auto got = map.nearest_node(q);
        EXPECT_EQ(got.id, best);
        EXPECT_NEAR(got.distance, best_d, 1e-12);
    }
}

TEST(TopoMap, ExplicitConstructionChecksInvariants) {
    EXPECT_THROW(TopoMap({{1, Pose2{}, std::nullopt}}, 1.0), std::invalid_argument);
    EXPECT_THROW(TopoMap({{0, Pose2{}, std::nullopt}, {1, Pose2(0.5, 0, 0), std::nullopt}}, 1.0),
                 std::invalid_argument);
    const TopoMap ok({{0, Pose2{}, std::vector<double>{1.0, 2.0}}, {1, Pose2(1.0, 0, 0), std::nullopt}}, 1.0);
    EXPECT_EQ(ok.size(), 2u);
    EXPECT_TRUE(ok.nodes()[0].descriptor.has_value());
}
