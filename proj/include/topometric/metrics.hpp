#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topometric/geometry.hpp"
#include "topometric/odometry.hpp"

namespace topometric {

inline const std::vector<double>& default_sub_lengths() {
    static const std::vector<double> lengths{10.0, 25.0, 50.0, 100.0, 150.0, 200.0};
    return lengths;
}

struct LengthError {
    double sub_length = 0.0;     // m
    double trans_pct = 0.0;      // %
    double rot_deg_per_m = 0.0;  // deg/m
    std::size_t windows = 0;
};

struct ErrorReport {
    double avg_translation_pct = 0.0;
    double avg_rotation_deg_per_m = 0.0;
    std::vector<LengthError> per_length;
    double endpoint_error = 0.0;  // m
    // Requested sub-lengths longer than the path; they contribute nothing.
    std::vector<double> skipped_sub_lengths;
};

/// Cumulative planar arc length, arc[0] = 0.
inline std::vector<double> arc_lengths(const Trajectory& traj) {
    std::vector<double> arc(traj.size(), 0.0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        arc[i] = arc[i - 1] + planar_distance(traj.pose(i - 1), traj.pose(i));
    }
    return arc;
}

inline void check_comparable(const Trajectory& estimate, const Trajectory& truth) {
    if (estimate.size() != truth.size()) {
        throw std::invalid_argument("trajectories differ in length (" + std::to_string(estimate.size()) +
                                    " vs " + std::to_string(truth.size()) + ")");
    }
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (estimate.timestep(i) != truth.timestep(i)) {
            throw std::invalid_argument("trajectories differ in timestep at index " + std::to_string(i));
        }
    }
}

/// Windowed drift metrics. For every start index and sub-length L the window
/// ends where the true arc length first reaches L; the error is the
/// difference of the start-frame relative displacements divided by L, and the
/// wrapped difference of the relative rotations divided by L. Means are taken
/// over windows per L, then over the sub-lengths that fit in the path.
inline ErrorReport evaluate(const Trajectory& estimate, const Trajectory& truth,
                            std::span<const double> sub_lengths) {
    check_comparable(estimate, truth);
    if (truth.size() < 2) {
        throw std::invalid_argument("evaluate: need at least 2 poses");
    }
    for (double L : sub_lengths) {
        if (!(L > 0.0)) {
            throw std::invalid_argument("evaluate: sub-lengths must be positive");
        }
    }

    const std::vector<double> arc = arc_lengths(truth);
    ErrorReport report;
    for (double L : sub_lengths) {
        double trans_sum = 0.0;
        double rot_sum = 0.0;
        std::size_t windows = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const auto end = std::lower_bound(arc.begin() + static_cast<std::ptrdiff_t>(i), arc.end(), arc[i] + L);
            if (end == arc.end()) {
                break;
            }
            const auto j = static_cast<std::size_t>(end - arc.begin());
            const RelativeMotion est = relative_between(estimate.pose(i), estimate.pose(j));
            const RelativeMotion ref = relative_between(truth.pose(i), truth.pose(j));
            trans_sum += std::hypot(est.dx() - ref.dx(), est.dy() - ref.dy()) / L;
            rot_sum += angular_error(est.dtheta(), ref.dtheta()) / L;
            ++windows;
        }
        if (windows == 0) {
            report.skipped_sub_lengths.push_back(L);
            continue;
        }
        const auto n = static_cast<double>(windows);
        report.per_length.push_back({L, 100.0 * trans_sum / n, rot_sum / n * 180.0 / kPi, windows});
    }
    if (report.per_length.empty()) {
        throw std::domain_error("evaluate: no sub-length fits within the path");
    }
    for (const auto& le : report.per_length) {
        report.avg_translation_pct += le.trans_pct;
        report.avg_rotation_deg_per_m += le.rot_deg_per_m;
    }
    const auto used = static_cast<double>(report.per_length.size());
    report.avg_translation_pct /= used;
    report.avg_rotation_deg_per_m /= used;
    report.endpoint_error = planar_distance(estimate.pose(estimate.size() - 1), truth.pose(truth.size() - 1));
    return report;
}

inline ErrorReport evaluate(const Trajectory& estimate, const Trajectory& truth) {
    return evaluate(estimate, truth, default_sub_lengths());
}

/// Absolute planar position error at every pose.
inline std::vector<double> translation_errors(const Trajectory& estimate, const Trajectory& truth) {
    check_comparable(estimate, truth);
    std::vector<double> out(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        out[i] = planar_distance(estimate.pose(i), truth.pose(i));
    }
    return out;
}

inline double max_translation_error(const Trajectory& estimate, const Trajectory& truth) {
    const std::vector<double> errs = translation_errors(estimate, truth);
    return *std::max_element(errs.begin(), errs.end());
}

}  // namespace topometric
