#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "topometric/fusion.hpp"
#include "topometric/smoothing.hpp"

using namespace topometric;

namespace {

using oracle::brute_force_loess;

std::vector<double> iota_d(std::size_t n) {
    std::vector<double> v(n);
    std::iota(v.begin(), v.end(), 0.0);
    return v;
}

}  // namespace

TEST(Tricube, Endpoints) {
    EXPECT_DOUBLE_EQ(tricube(0.0), 1.0);
    EXPECT_DOUBLE_EQ(tricube(1.0), 0.0);
    EXPECT_DOUBLE_EQ(tricube(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(tricube(2.0), 0.0);
    EXPECT_NEAR(tricube(0.5), std::pow(1.0 - 0.125, 3.0), 1e-15);
}

TEST(QuadraticLoess, RejectsBadInput) {
    EXPECT_THROW(QuadraticLoess(0.0), std::invalid_argument);
    EXPECT_THROW(QuadraticLoess(1.5), std::invalid_argument);
    const QuadraticLoess l(1.0);
    const std::vector<double> two{0.0, 1.0};
    EXPECT_THROW(l.fit(two, two), std::invalid_argument);
    const std::vector<double> flat{0.0, 1.0, 1.0};
    EXPECT_THROW(l.fit(flat, flat), std::invalid_argument);
}

TEST(QuadraticLoess, ExactQuadraticIsFixedPoint) {
    for (std::size_t n : {3u, 4u, 17u, 200u}) {
        for (double span : {1.0, 0.3, 0.1}) {
            const auto t = iota_d(n);
            std::vector<double> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * t[i] * t[i] - 3.0 * t[i] + 7.0;
            const auto fit = QuadraticLoess(span).fit(t, y);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(fit[i], y[i], 1e-8) << "n=" << n << " span=" << span << " i=" << i;
            }
        }
    }
}

TEST(QuadraticLoess, MatchesNormalEquationsOnRandomData) {
    std::mt19937_64 gen(21);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 60 + static_cast<std::size_t>(trial);
        const auto t = iota_d(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(0.1 * t[i]) * 10.0 + noise(gen);
        for (double span : {0.1, 0.35, 1.0}) {
            const auto got = QuadraticLoess(span).fit(t, y);
            const auto want = brute_force_loess(t, y, span);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(got[i], want[i], 1e-7);
            }
        }
    }
}

TEST(QuadraticLoess, IrregularAbscissae) {
    const std::vector<double> t{0.0, 1.0, 4.0, 5.0, 9.0, 10.0, 11.0, 20.0};
    const std::vector<double> y{1.0, 2.0, 0.5, 3.0, 2.0, 1.0, 4.0, 0.0};
    const auto got = QuadraticLoess(0.6).fit(t, y);
    const auto want = brute_force_loess(t, y, 0.6);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], 1e-9);
    }
}

TEST(Smooth, QuadraticTrajectoryUnchanged) {
    std::vector<Pose2> poses;
    for (int t = 0; t < 40; ++t) poses.emplace_back(t * t, 2.0 * t, 0.01 * t);
    const Trajectory traj = Trajectory::from_poses(poses);
    FusionConfig cfg;
    cfg.bandwidth = 1.0;
    const Trajectory out = smooth(traj, cfg);
    ASSERT_EQ(out.size(), traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_NEAR(out.pose(i).x, traj.pose(i).x, 1e-8);
        EXPECT_NEAR(out.pose(i).y, traj.pose(i).y, 1e-8);
        EXPECT_EQ(out.pose(i).theta, traj.pose(i).theta);
        EXPECT_EQ(out.timestep(i), traj.timestep(i));
    }
}

TEST(Smooth, OutlierPulledTowardLineHeadingsUntouched) {
    std::vector<Pose2> poses;
    for (int t = 0; t < 21; ++t) poses.emplace_back(static_cast<double>(t), 0.0, 0.05 * t - 0.3);
    poses[10].y = 3.0;
    const Trajectory traj = Trajectory::from_poses(poses);
    FusionConfig cfg;
    cfg.bandwidth = 0.5;
    const Trajectory out = smooth(traj, cfg);

    std::vector<double> t(21), ys(21);
    for (int i = 0; i < 21; ++i) {
        t[i] = i;
        ys[i] = traj.pose(i).y;
    }
    const auto want = brute_force_loess(t, ys, 0.5);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_NEAR(out.pose(i).y, want[i], 1e-7);
        EXPECT_EQ(out.pose(i).theta, traj.pose(i).theta);
    }
    EXPECT_LT(std::abs(out.pose(10).y), 3.0);
    EXPECT_GT(out.pose(10).y, 0.0);
}

TEST(Smooth, NeedsThreePoses) {
    const Trajectory two = Trajectory::from_poses(std::vector<Pose2>{Pose2{}, Pose2(1, 0, 0)});
    EXPECT_THROW(smooth(two, FusionConfig{}), std::invalid_argument);
}
