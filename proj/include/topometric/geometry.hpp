#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace topometric {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle into (-pi, pi]. Rejects NaN and infinities.
inline double normalize_angle(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("normalize_angle: non-finite angle");
    }
    double r = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

/// Signed shortest rotation taking `from` onto `to`, in (-pi, pi].
inline double angle_diff(double to, double from) {
    return normalize_angle(to - from);
}

/// Magnitude of the shortest angular difference, in [0, pi].
inline double angular_error(double a, double b) {
    return std::abs(angle_diff(a, b));
}

struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose2() = default;
    Pose2(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

    friend bool operator==(const Pose2&, const Pose2&) = default;
};

/// Body-frame motion between two poses. The rotation is stored as the
/// (sin, cos) pair of the heading change.
class RelativeMotion {
public:
    /// Drift from the unit circle up to this bound is re-projected.
    static constexpr double kExactTol = 1e-9;
    /// Drift beyond this bound is rejected.
    static constexpr double kRejectTol = 1e-6;

    RelativeMotion() = default;

    RelativeMotion(double dx, double dy, double sin_dtheta, double cos_dtheta)
        : dx_(dx), dy_(dy), sin_(sin_dtheta), cos_(cos_dtheta) {
        if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(sin_dtheta) ||
            !std::isfinite(cos_dtheta)) {
            throw std::invalid_argument("RelativeMotion: non-finite component");
        }
        const double norm2 = sin_ * sin_ + cos_ * cos_;
        const double drift = std::abs(norm2 - 1.0);
        if (drift > kRejectTol) {
            throw std::invalid_argument("RelativeMotion: (sin, cos) off the unit circle by " +
                                        std::to_string(drift));
        }
        if (drift > kExactTol) {
            const double n = std::sqrt(norm2);
            sin_ /= n;
            cos_ /= n;
        }
    }

    static RelativeMotion from_angle(double dx, double dy, double dtheta) {
        return RelativeMotion(dx, dy, std::sin(dtheta), std::cos(dtheta));
    }

    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double sin_dtheta() const { return sin_; }
    double cos_dtheta() const { return cos_; }
    double dtheta() const { return std::atan2(sin_, cos_); }

    friend bool operator==(const RelativeMotion&, const RelativeMotion&) = default;

private:
    double dx_ = 0.0;
    double dy_ = 0.0;
    double sin_ = 0.0;
    double cos_ = 1.0;
};

/// a ⊕ rel: translation applied in the frame of `a`, heading advanced by the
/// motion's rotation.
inline Pose2 compose(const Pose2& a, const RelativeMotion& rel) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return Pose2(a.x + c * rel.dx() - s * rel.dy(),
                 a.y + s * rel.dx() + c * rel.dy(),
                 a.theta + rel.dtheta());
}

/// Motion from `a` to `b` expressed in the frame of `a`, so that
/// compose(a, relative_between(a, b)) == b.
inline RelativeMotion relative_between(const Pose2& a, const Pose2& b) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    const double gx = b.x - a.x;
    const double gy = b.y - a.y;
    const double dtheta = angle_diff(b.theta, a.theta);
    return RelativeMotion(c * gx + s * gy, -s * gx + c * gy, std::sin(dtheta), std::cos(dtheta));
}

inline double planar_distance(const Pose2& a, const Pose2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace topometric
