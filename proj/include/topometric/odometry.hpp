#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topometric/geometry.hpp"

namespace topometric {

struct StampedPose {
    long timestep = 0;
    Pose2 pose;

    friend bool operator==(const StampedPose&, const StampedPose&) = default;
};

/// Poses ordered by strictly increasing timestep, starting at 0.
class Trajectory {
public:
    Trajectory() = default;

    explicit Trajectory(std::vector<StampedPose> poses) : poses_(std::move(poses)) {
        if (poses_.empty()) {
            throw std::invalid_argument("Trajectory: no poses");
        }
        if (poses_.front().timestep != 0) {
            throw std::invalid_argument("Trajectory: first timestep must be 0");
        }
        for (std::size_t i = 1; i < poses_.size(); ++i) {
            if (poses_[i].timestep <= poses_[i - 1].timestep) {
                throw std::invalid_argument("Trajectory: timesteps not strictly increasing at index " +
                                            std::to_string(i));
            }
        }
    }

    /// Dense timesteps 0..n-1.
    static Trajectory from_poses(std::span<const Pose2> poses) {
        std::vector<StampedPose> stamped;
        stamped.reserve(poses.size());
        for (std::size_t i = 0; i < poses.size(); ++i) {
            stamped.push_back({static_cast<long>(i), poses[i]});
        }
        return Trajectory(std::move(stamped));
    }

    std::size_t size() const { return poses_.size(); }
    bool empty() const { return poses_.empty(); }
    const Pose2& origin() const { return poses_.front().pose; }

    const StampedPose& operator[](std::size_t i) const { return poses_[i]; }
    const Pose2& pose(std::size_t i) const { return poses_[i].pose; }
    long timestep(std::size_t i) const { return poses_[i].timestep; }

    // Timesteps are fixed; only the pose values may be edited in place.
    void set_pose(std::size_t i, const Pose2& p) { poses_.at(i).pose = p; }

    /// Index holding `timestep`, or size() if absent.
    std::size_t index_of(long timestep) const {
        std::size_t lo = 0;
        std::size_t hi = poses_.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (poses_[mid].timestep < timestep) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return (lo < poses_.size() && poses_[lo].timestep == timestep) ? lo : poses_.size();
    }

    const std::vector<StampedPose>& stamped() const { return poses_; }

    std::vector<Pose2> poses() const {
        std::vector<Pose2> out;
        out.reserve(poses_.size());
        for (const auto& sp : poses_) {
            out.push_back(sp.pose);
        }
        return out;
    }

    /// Total planar arc length.
    double path_length() const {
        double len = 0.0;
        for (std::size_t i = 1; i < poses_.size(); ++i) {
            len += planar_distance(poses_[i - 1].pose, poses_[i].pose);
        }
        return len;
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::vector<StampedPose> poses_;
};

/// Dead-reckons `motions` from `origin`; the result has motions.size() + 1 poses.
inline Trajectory integrate(const Pose2& origin, std::span<const RelativeMotion> motions) {
    std::vector<Pose2> poses;
    poses.reserve(motions.size() + 1);
    poses.push_back(origin);
    for (const auto& m : motions) {
        poses.push_back(compose(poses.back(), m));
    }
    return Trajectory::from_poses(poses);
}

/// Consecutive motions of a trajectory, the inverse of integrate().
inline std::vector<RelativeMotion> motions_of(const Trajectory& traj) {
    std::vector<RelativeMotion> out;
    out.reserve(traj.size() > 0 ? traj.size() - 1 : 0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        out.push_back(relative_between(traj.pose(i - 1), traj.pose(i)));
    }
    return out;
}

/// Translation error plus beta times the error of the (sin, cos) rotation
/// encoding, both as plain Euclidean norms.
inline double vo_loss(const RelativeMotion& pred, const RelativeMotion& truth, double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("vo_loss: beta must be positive");
    }
    const double trans = std::hypot(pred.dx() - truth.dx(), pred.dy() - truth.dy());
    const double rot =
        std::hypot(pred.sin_dtheta() - truth.sin_dtheta(), pred.cos_dtheta() - truth.cos_dtheta());
    return trans + beta * rot;
}

}  // namespace topometric
