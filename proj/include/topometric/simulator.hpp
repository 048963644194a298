#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "topometric/geometry.hpp"
#include "topometric/odometry.hpp"
#include "topometric/rng.hpp"
#include "topometric/topo_map.hpp"

namespace topometric {

enum class PathKind { Loop, FigureEight, RandomWalk };

inline PathKind parse_path_kind(std::string_view name) {
    if (name == "loop") return PathKind::Loop;
    if (name == "figure-eight") return PathKind::FigureEight;
    if (name == "random-walk") return PathKind::RandomWalk;
    throw std::invalid_argument("unknown path kind '" + std::string(name) + "'");
}

inline std::string_view to_string(PathKind kind) {
    switch (kind) {
        case PathKind::Loop: return "loop";
        case PathKind::FigureEight: return "figure-eight";
        case PathKind::RandomWalk: return "random-walk";
    }
    return "unknown";
}

/// Odometry error surrogate: a systematic scale error on translation, a
/// heading bias proportional to distance travelled, and per-step Gaussian
/// noise on both.
struct OdometryNoiseModel {
    double trans_bias = 0.0;   // fraction
    double trans_sigma = 0.0;  // m per step, per axis
    double rot_bias = 0.0;     // rad per metre
    double rot_sigma = 0.0;    // rad per step
    std::uint64_t seed = 0;

    void validate() const {
        if (!(trans_sigma >= 0.0) || !(rot_sigma >= 0.0)) {
            throw std::invalid_argument("OdometryNoiseModel: sigmas must be non-negative");
        }
        if (!std::isfinite(trans_bias) || !std::isfinite(rot_bias)) {
            throw std::invalid_argument("OdometryNoiseModel: biases must be finite");
        }
    }
};

/// Place-recognition surrogate. Confidence of a correct match is drawn from
/// N(true_confidence_mean, confidence_sigma) clamped to [0, 1]. Wrong matches
/// use false_confidence_mean when set, the correct-match mean otherwise.
struct DetectorModel {
    double detect_radius = 0.5;  // m
    double true_confidence_mean = 0.95;
    std::optional<double> false_confidence_mean;
    double false_rate = 0.1;  // per emitted detection
    double confidence_sigma = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        auto is_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!(detect_radius >= 0.0)) {
            throw std::invalid_argument("DetectorModel: detect_radius must be non-negative");
        }
        if (!is_prob(true_confidence_mean) || !is_prob(false_rate) ||
            (false_confidence_mean && !is_prob(*false_confidence_mean))) {
            throw std::invalid_argument("DetectorModel: probabilities must lie in [0, 1]");
        }
        if (!(confidence_sigma >= 0.0)) {
            throw std::invalid_argument("DetectorModel: confidence_sigma must be non-negative");
        }
    }
};

struct Scenario {
    Trajectory ground_truth;
    TopoMap map;
    std::vector<RelativeMotion> motions;
    std::vector<NodeDetection> detections;
};

namespace detail {

struct Polyline {
    std::vector<double> x, y, arc;
};

// Resamples a densely sampled curve at equal arc-length steps, scaled so the
// whole curve is `length` long. Headings follow the curve tangent.
inline std::vector<Pose2> resample(const Polyline& dense, double length, double step) {
    const double scale = length / dense.arc.back();
    const auto count = static_cast<std::size_t>(std::floor(length / step + 1e-9));
    std::vector<Pose2> out;
    out.reserve(count + 1);
    std::size_t seg = 0;
    for (std::size_t k = 0; k <= count; ++k) {
        const double s = std::min(static_cast<double>(k) * step / scale, dense.arc.back());
        while (seg + 2 < dense.arc.size() && dense.arc[seg + 1] < s) {
            ++seg;
        }
        const double seg_len = dense.arc[seg + 1] - dense.arc[seg];
        const double f = seg_len > 0.0 ? (s - dense.arc[seg]) / seg_len : 0.0;
        const double dx = dense.x[seg + 1] - dense.x[seg];
        const double dy = dense.y[seg + 1] - dense.y[seg];
        out.emplace_back(scale * (dense.x[seg] + f * dx), scale * (dense.y[seg] + f * dy), std::atan2(dy, dx));
    }
    return out;
}

template <class Curve>
Polyline sample_closed_curve(Curve&& curve, std::size_t samples) {
    Polyline p;
    p.x.resize(samples + 1);
    p.y.resize(samples + 1);
    p.arc.resize(samples + 1);
    for (std::size_t i = 0; i <= samples; ++i) {
        const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(samples);
        const auto [cx, cy] = curve(phi);
        p.x[i] = cx;
        p.y[i] = cy;
        p.arc[i] = i == 0 ? 0.0 : p.arc[i - 1] + std::hypot(p.x[i] - p.x[i - 1], p.y[i] - p.y[i - 1]);
    }
    return p;
}

// Re-expresses every pose in the frame of the first one.
inline std::vector<Pose2> anchor_at_origin(const std::vector<Pose2>& poses) {
    std::vector<Pose2> out;
    out.reserve(poses.size());
    const Pose2 first = poses.front();
    for (const auto& p : poses) {
        const RelativeMotion r = relative_between(first, p);
        out.emplace_back(r.dx(), r.dy(), r.dtheta());
    }
    out.front() = Pose2{};
    return out;
}

}  // namespace detail

/// Ground-truth path starting at the origin with heading 0. Closed kinds
/// return to the start; the shape is perturbed by `seed`.
inline Trajectory generate_path(PathKind kind, double length, double step, std::uint64_t seed) {
    if (!(step > 0.0) || !(length > step)) {
        throw std::invalid_argument("generate_path: need length > step > 0");
    }
    Rng rng(seed);
    const std::size_t dense = std::max<std::size_t>(20000, static_cast<std::size_t>(40.0 * length / step));
    std::vector<Pose2> poses;

    switch (kind) {
        case PathKind::Loop: {
            const double a = 0.05 + 0.15 * rng.uniform();
            const double b = 0.06 * rng.uniform();
            const double p1 = 2.0 * kPi * rng.uniform();
            const double p2 = 2.0 * kPi * rng.uniform();
            auto curve = [&](double phi) {
                const double r = 1.0 + a * std::cos(2.0 * phi + p1) + b * std::cos(3.0 * phi + p2);
                return std::pair{r * std::cos(phi), r * std::sin(phi)};
            };
            poses = detail::resample(detail::sample_closed_curve(curve, dense), length, step);
            break;
        }
        case PathKind::FigureEight: {
            const double aspect = 0.8 + 0.4 * rng.uniform();
            auto curve = [&](double phi) {
                return std::pair{std::cos(phi), aspect * std::sin(phi) * std::cos(phi)};
            };
            poses = detail::resample(detail::sample_closed_curve(curve, dense), length, step);
            break;
        }
        case PathKind::RandomWalk: {
            const auto count = static_cast<std::size_t>(std::floor(length / step + 1e-9));
            double x = 0.0;
            double y = 0.0;
            double heading = 0.0;
            double curvature = 0.0;  // rad per metre
            poses.reserve(count + 1);
            for (std::size_t k = 0; k <= count; ++k) {
                poses.emplace_back(x, y, heading);
                x += step * std::cos(heading);
                y += step * std::sin(heading);
                curvature = 0.9 * curvature + rng.normal(0.0, 0.02);
                heading += curvature * step;
            }
            break;
        }
    }
    return Trajectory::from_poses(detail::anchor_at_origin(poses));
}

/// Noisy relative motions between consecutive ground-truth poses.
inline std::vector<RelativeMotion> corrupt_odometry(const Trajectory& truth, const OdometryNoiseModel& model) {
    model.validate();
    if (truth.size() < 2) {
        throw std::invalid_argument("corrupt_odometry: need at least 2 poses");
    }
    Rng rng(model.seed);
    std::vector<RelativeMotion> out;
    out.reserve(truth.size() - 1);
    for (std::size_t t = 0; t + 1 < truth.size(); ++t) {
        const RelativeMotion exact = relative_between(truth.pose(t), truth.pose(t + 1));
        const double dist = std::hypot(exact.dx(), exact.dy());
        const double nx = rng.normal(0.0, model.trans_sigma);
        const double ny = rng.normal(0.0, model.trans_sigma);
        const double rot_error = model.rot_bias * dist + rng.normal(0.0, model.rot_sigma);
        const double dx = exact.dx() * (1.0 + model.trans_bias) + nx;
        const double dy = exact.dy() * (1.0 + model.trans_bias) + ny;
        if (rot_error == 0.0) {
            out.emplace_back(dx, dy, exact.sin_dtheta(), exact.cos_dtheta());
        } else {
            out.push_back(RelativeMotion::from_angle(dx, dy, exact.dtheta() + rot_error));
        }
    }
    return out;
}

/// Place-recognition detections along the true path. A timestep whose true
/// pose is strictly within detect_radius of its nearest node yields at most
/// one detection: the nearest node, or with probability false_rate a
/// uniformly chosen other node.
inline std::vector<NodeDetection> detect_nodes(const Trajectory& truth, const TopoMap& map,
                                               const DetectorModel& model) {
    model.validate();
    if (map.empty()) {
        throw std::invalid_argument("detect_nodes: empty map");
    }
    Rng rng(model.seed);
    const double false_mean = model.false_confidence_mean.value_or(model.true_confidence_mean);
    std::vector<NodeDetection> out;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        const NearestNode nearest = map.nearest_node(truth.pose(t));
        if (!(nearest.distance < model.detect_radius)) {
            continue;
        }
        // Fixed draw order keeps the stream aligned across parameter values.
        const double u = rng.uniform();
        const double z = rng.normal();
        const std::uint64_t pick = map.size() > 1 ? rng.below(map.size() - 1) : 0;

        NodeDetection det{truth.timestep(t), nearest.id, 0.0};
        double mean = model.true_confidence_mean;
        if (u < model.false_rate && map.size() > 1) {
            const auto wrong = static_cast<NodeId>(pick);
            det.node_id = wrong >= nearest.id ? wrong + 1 : wrong;
            mean = false_mean;
        }
        det.confidence = std::clamp(mean + model.confidence_sigma * z, 0.0, 1.0);
        out.push_back(det);
    }
    return out;
}

struct ScenarioParams {
    PathKind kind = PathKind::Loop;
    double length = 262.0;
    double step = 1.0;
    double d_th = 1.0;
    std::uint64_t seed = 1;
    OdometryNoiseModel odometry;
    DetectorModel detector;
};

/// Loop close to the 262 m sequence. Integration-only translation drift
/// averages about 1.5 % under the default metrics. Wrong detections carry a
/// low confidence, so a 0.9 threshold rejects nearly all of them.
inline ScenarioParams short_loop_preset() {
    ScenarioParams p;
    p.kind = PathKind::Loop;
    p.length = 262.0;
    p.odometry = {0.018, 0.005, 0.0, 0.001, 0};
    p.detector.false_confidence_mean = 0.5;
    return p;
}

/// Loop close to the 446 m sequence, with about 3.8 % drift.
inline ScenarioParams long_loop_preset() {
    ScenarioParams p = short_loop_preset();
    p.length = 446.0;
    p.odometry = {0.04, 0.01, 0.0002, 0.002, 0};
    return p;
}

/// Full scenario; the path, odometry and detector streams are derived from
/// the single scenario seed.
inline Scenario make_scenario(const ScenarioParams& params) {
    Scenario sc;
    sc.ground_truth = generate_path(params.kind, params.length, params.step, params.seed);
    sc.map = build_map(sc.ground_truth, params.d_th);
    OdometryNoiseModel odo = params.odometry;
    odo.seed = mix_seed(params.seed ^ 0x6f646f6d6574ULL);
    DetectorModel det = params.detector;
    det.seed = mix_seed(params.seed ^ 0x646574656374ULL);
    sc.motions = corrupt_odometry(sc.ground_truth, odo);
    sc.detections = detect_nodes(sc.ground_truth, sc.map, det);
    return sc;
}

}  // namespace topometric
