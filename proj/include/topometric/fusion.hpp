#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "topometric/geometry.hpp"
#include "topometric/odometry.hpp"
#include "topometric/smoothing.hpp"
#include "topometric/topo_map.hpp"

namespace topometric {

struct FusionConfig {
    double delta = 0.9;         // detection confidence must exceed this
    double lambda_s = 1.0;      // smoothing weight
    double lambda_tr = 0.5;     // backward translational decay per timestep
    double lambda_theta = 0.5;  // backward rotational decay per timestep
    long t_w = 10;              // backward window in timesteps
    double bandwidth = 0.1;     // LOESS span as a fraction of trajectory length

    void validate() const {
        if (!(delta > 0.0 && delta <= 1.0)) {
            throw std::invalid_argument("FusionConfig: delta must lie in (0, 1]");
        }
        if (!(lambda_s > 0.0) || !std::isfinite(lambda_s)) {
            throw std::invalid_argument("FusionConfig: lambda_s must be positive and finite");
        }
        if (!(lambda_tr > 0.0)) {
            throw std::invalid_argument("FusionConfig: lambda_tr must be positive");
        }
        if (!(lambda_theta > 0.0)) {
            throw std::invalid_argument("FusionConfig: lambda_theta must be positive");
        }
        if (t_w < 1) {
            throw std::invalid_argument("FusionConfig: t_w must be at least 1");
        }
        if (!(bandwidth > 0.0 && bandwidth <= 1.0)) {
            throw std::invalid_argument("FusionConfig: bandwidth must lie in (0, 1]");
        }
    }

    /// Weight of the smoothed path in the final blend, lambda / (1 + lambda).
    double smoothing_blend() const { return lambda_s / (1.0 + lambda_s); }
};

/// Global-frame pose difference (node minus estimate), heading wrap-aware.
struct PoseOffset {
    double dx = 0.0;
    double dy = 0.0;
    double dtheta = 0.0;

    friend bool operator==(const PoseOffset&, const PoseOffset&) = default;
};

struct ConfidentMatch {
    long timestep = 0;
    NodeId node_id = 0;
};

/// Loop-carried state of the forward pass. The offset was measured at
/// `anchor`, the dead-reckoned pose of the last confident match. It acts on
/// later dead-reckoned poses as a rigid motion: translate by (dx, dy) and
/// rotate by dtheta about the anchor, so motion after the match is re-headed
/// as well as shifted.
struct CorrectionState {
    PoseOffset pending_offset;
    Pose2 anchor;
    std::optional<ConfidentMatch> last_confident;

    Pose2 apply(const Pose2& dead_reckoned) const {
        if (!last_confident) {
            return dead_reckoned;
        }
        const double c = std::cos(pending_offset.dtheta);
        const double s = std::sin(pending_offset.dtheta);
        const double vx = dead_reckoned.x - anchor.x;
        const double vy = dead_reckoned.y - anchor.y;
        return Pose2(anchor.x + pending_offset.dx + c * vx - s * vy,
                     anchor.y + pending_offset.dy + s * vx + c * vy,
                     dead_reckoned.theta + pending_offset.dtheta);
    }
};

inline PoseOffset pose_residual(const Pose2& target, const Pose2& estimate) {
    return {target.x - estimate.x, target.y - estimate.y, angle_diff(target.theta, estimate.theta)};
}

/// Forward drift correction. `dead_reckoned` is the uncorrected integrated
/// pose at the detection's timestep. A detection above `delta` snaps the pose
/// onto the node and replaces the pending offset; anything else just applies
/// the current offset.
inline std::pair<Pose2, CorrectionState> forward_correct(const CorrectionState& state,
                                                         const Pose2& dead_reckoned,
                                                         const NodeDetection& detection, const TopoMap& map,
                                                         const FusionConfig& cfg) {
    const Pose2& node = map.lookup(detection.node_id);
    if (!(detection.confidence > cfg.delta)) {
        return {state.apply(dead_reckoned), state};
    }
    CorrectionState next;
    next.pending_offset = pose_residual(node, dead_reckoned);
    next.anchor = dead_reckoned;
    next.last_confident = ConfidentMatch{detection.timestep, detection.node_id};
    return {node, next};
}

namespace detail {

inline void backward_correct_in_place(Trajectory& traj, std::size_t idx, const Pose2& node_pose,
                                      const FusionConfig& cfg) {
    const long t = traj.timestep(idx);
    const PoseOffset r = pose_residual(node_pose, traj.pose(idx));
    for (std::size_t k = idx; k-- > 0;) {
        const long age = t - traj.timestep(k);
        if (age > cfg.t_w) {
            break;
        }
        const double w_tr = std::exp(-cfg.lambda_tr * static_cast<double>(age));
        const double w_th = std::exp(-cfg.lambda_theta * static_cast<double>(age));
        const Pose2& p = traj.pose(k);
        traj.set_pose(k, Pose2(p.x + w_tr * r.dx, p.y + w_tr * r.dy, p.theta + w_th * r.dtheta));
    }
}

}  // namespace detail

/// Backward correction: poses in [t - t_w, t - 1] move toward `node_pose` by
/// the residual at t, decayed as exp(-lambda * (t - tau)) separately for
/// translation and heading. Pose t itself and everything outside the window
/// is left untouched.
inline Trajectory backward_correct(const Trajectory& trajectory, long t, const Pose2& node_pose,
                                   const FusionConfig& cfg) {
    const std::size_t idx = trajectory.index_of(t);
    if (idx == trajectory.size()) {
        throw std::out_of_range("backward_correct: timestep " + std::to_string(t) + " not in trajectory");
    }
    Trajectory out = trajectory;
    detail::backward_correct_in_place(out, idx, node_pose, cfg);
    return out;
}

/// Replaces x and y by their local quadratic regression over timesteps.
/// Headings are copied through unchanged.
inline Trajectory smooth(const Trajectory& trajectory, const FusionConfig& cfg) {
    const std::size_t n = trajectory.size();
    if (n < 3) {
        throw std::invalid_argument("smooth: need at least 3 poses");
    }
    std::vector<double> t(n);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = static_cast<double>(trajectory.timestep(i));
        xs[i] = trajectory.pose(i).x;
        ys[i] = trajectory.pose(i).y;
    }
    const QuadraticLoess loess(cfg.bandwidth);
    const std::vector<double> fx = loess.fit(t, xs);
    const std::vector<double> fy = loess.fit(t, ys);

    Trajectory out = trajectory;
    for (std::size_t i = 0; i < n; ++i) {
        Pose2 p = trajectory.pose(i);
        p.x = fx[i];
        p.y = fy[i];
        out.set_pose(i, p);
    }
    return out;
}

/// Convex blend of translations; headings come from `corrected`.
inline Trajectory blend_translation(const Trajectory& corrected, const Trajectory& smoothed, double weight) {
    if (corrected.size() != smoothed.size()) {
        throw std::invalid_argument("blend_translation: size mismatch");
    }
    Trajectory out = corrected;
    for (std::size_t i = 0; i < corrected.size(); ++i) {
        Pose2 p = corrected.pose(i);
        p.x = (1.0 - weight) * p.x + weight * smoothed.pose(i).x;
        p.y = (1.0 - weight) * p.y + weight * smoothed.pose(i).y;
        out.set_pose(i, p);
    }
    return out;
}

inline void check_detections(std::span<const NodeDetection> detections, std::size_t num_motions,
                             const TopoMap& map) {
    for (std::size_t i = 0; i < detections.size(); ++i) {
        const auto& d = detections[i];
        if (d.timestep < 0 || static_cast<std::size_t>(d.timestep) > num_motions) {
            throw std::out_of_range("fuse: detection timestep " + std::to_string(d.timestep) +
                                    " outside trajectory");
        }
        if (i > 0 && d.timestep <= detections[i - 1].timestep) {
            throw std::invalid_argument("fuse: detections must be sorted with one per timestep");
        }
        if (!map.contains(d.node_id)) {
            throw std::out_of_range("fuse: unknown node id " + std::to_string(d.node_id));
        }
        if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
            throw std::invalid_argument("fuse: confidence outside [0, 1]");
        }
    }
}

/// Online stage only: integrate, forward-correct at detections and run the
/// backward correction at every confident one.
inline Trajectory fuse_online(std::span<const RelativeMotion> motions, std::span<const NodeDetection> detections,
                              const TopoMap& map, const Pose2& origin, const FusionConfig& cfg) {
    cfg.validate();
    check_detections(detections, motions.size(), map);

    std::vector<Pose2> init(motions.size() + 1, origin);
    Trajectory traj = Trajectory::from_poses(init);

    CorrectionState state;
    Pose2 dead_reckoned = origin;
    std::size_t next_det = 0;
    for (std::size_t t = 0; t <= motions.size(); ++t) {
        if (t > 0) {
            dead_reckoned = compose(dead_reckoned, motions[t - 1]);
        }
        const bool has_det =
            next_det < detections.size() && detections[next_det].timestep == static_cast<long>(t);
        if (!has_det) {
            traj.set_pose(t, state.apply(dead_reckoned));
            continue;
        }
        const NodeDetection& det = detections[next_det++];
        const Pose2 before = state.apply(dead_reckoned);
        auto [pose, next_state] = forward_correct(state, dead_reckoned, det, map, cfg);
        if (det.confidence > cfg.delta) {
            traj.set_pose(t, before);
            detail::backward_correct_in_place(traj, t, pose, cfg);
        }
        traj.set_pose(t, pose);
        state = next_state;
    }
    return traj;
}

/// Full topometric fusion: the online stage followed by one LOESS pass over
/// translation, blended in with weight lambda_s / (1 + lambda_s).
inline Trajectory fuse(std::span<const RelativeMotion> motions, std::span<const NodeDetection> detections,
                       const TopoMap& map, const Pose2& origin, const FusionConfig& cfg) {
    const Trajectory corrected = fuse_online(motions, detections, map, origin, cfg);
    return blend_translation(corrected, smooth(corrected, cfg), cfg.smoothing_blend());
}

}  // namespace topometric
