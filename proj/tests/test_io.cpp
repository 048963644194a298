#include <clocale>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "topometric/io.hpp"
#include "topometric/rng.hpp"
#include "topometric/simulator.hpp"

using namespace topometric;

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(-2.0), "-2");
    EXPECT_EQ(io::format_number(42L), "42");
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal(0.0, 1e3);
        EXPECT_EQ(io::detail::parse_field<double>(io::format_number(v), "x", 1), v);
    }
}

TEST(FormatNumber, IgnoresLocale) {
    // de_DE may be missing in the container; the C locale is still checked.
    std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
    EXPECT_EQ(io::format_number(1.5), "1.5");
    std::setlocale(LC_NUMERIC, "C");
}

TEST(TrajectoryFormat, RoundTripIsExact) {
    const Trajectory t = generate_path(PathKind::RandomWalk, 80.0, 0.7, 3);
    EXPECT_EQ(io::parse_trajectory(io::format_trajectory(t)), t);
}

TEST(TrajectoryFormat, CommentsAndBlankLines) {
    const Trajectory t = io::parse_trajectory("# t x y theta\n\n0 0 0 0\n1 1 0 0.5\n");
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.pose(1).theta, 0.5);
}

TEST(TrajectoryFormat, Errors) {
    EXPECT_THROW(io::parse_trajectory("0 0 0\n"), ScenarioError);
    EXPECT_THROW(io::parse_trajectory("0 0 0 zero\n"), ScenarioError);
    EXPECT_THROW(io::parse_trajectory("1 0 0 0\n"), ScenarioError);
    EXPECT_THROW(io::parse_trajectory("0 0 0 0\n0 1 0 0\n"), ScenarioError);
    EXPECT_THROW(io::parse_trajectory(""), ScenarioError);
}

TEST(MapFormat, RoundTripKeepsSpacing) {
    const TopoMap m = build_map(generate_path(PathKind::Loop, 60.0, 0.5, 1), 2.5);
    const TopoMap back = io::parse_map(io::format_map(m));
    EXPECT_EQ(back.d_th(), 2.5);
    ASSERT_EQ(back.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        EXPECT_EQ(back.nodes()[i].id, m.nodes()[i].id);
        EXPECT_EQ(back.nodes()[i].pose, m.nodes()[i].pose);
    }
}

TEST(MapFormat, Errors) {
    EXPECT_THROW(io::parse_map("# d_th 1\n0 0 0 0\n1 0.5 0 0\n"), ScenarioError);
    EXPECT_THROW(io::parse_map("# d_th 1\n1 0 0 0\n"), ScenarioError);
}

TEST(MotionFormat, RoundTripIsExact) {
    const auto m = corrupt_odometry(generate_path(PathKind::Loop, 50.0, 1.0, 2), OdometryNoiseModel{0.01, 0.02, 0.0, 0.01, 4});
    EXPECT_EQ(io::parse_motions(io::format_motions(m)), m);
}

TEST(MotionFormat, Errors) {
    EXPECT_THROW(io::parse_motions("1 1 0 0 1\n"), ScenarioError);
    EXPECT_THROW(io::parse_motions("0 1 0 0.5 0.5\n"), ScenarioError);
    EXPECT_THROW(io::parse_motions("0 1 0 0\n"), ScenarioError);
}

TEST(DetectionFormat, RoundTripIsExact) {
    const std::vector<NodeDetection> d{{0, 0, 0.95}, {3, 2, 0.123456789}, {7, 5, 1.0}};
    EXPECT_EQ(io::parse_detections(io::format_detections(d)), d);
    EXPECT_THROW(io::parse_detections("0 1.5 0.9\n"), ScenarioError);
}

TEST(Files, ReadWriteAndMissing) {
    const auto dir = std::filesystem::temp_directory_path() / "topometric_io_test";
    io::ensure_directory(dir / "a" / "b");
    io::write_file(dir / "a" / "b" / "f.txt", "hello\n");
    EXPECT_EQ(io::read_file(dir / "a" / "b" / "f.txt"), "hello\n");
    EXPECT_THROW(io::read_file(dir / "nope.txt"), IoError);
    io::write_file(dir / "file", "x");
    EXPECT_THROW(io::ensure_directory(dir / "file"), IoError);
    std::filesystem::remove_all(dir);
}
