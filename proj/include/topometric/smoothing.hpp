#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace topometric {

/// Tricube kernel (1 - u^3)^3 on |u| < 1, zero outside.
inline double tricube(double u) {
    const double a = std::abs(u);
    if (a >= 1.0) {
        return 0.0;
    }
    const double t = 1.0 - a * a * a;
    return t * t * t;
}

/// Neighbourhood of one query point for local regression.
struct LocalWindow {
    std::size_t first = 0;  // inclusive
    std::size_t last = 0;   // inclusive
    double radius = 1.0;    // distances are divided by this before the kernel
};

/// Number of neighbours used per local fit for a span fraction in (0, 1].
inline std::size_t neighbour_count(std::size_t n, double span) {
    const auto q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    return std::clamp<std::size_t>(q, std::min<std::size_t>(3, n), n);
}

/// The q abscissae nearest to abscissa[i] form a contiguous run in a sorted
/// sequence. Ties prefer the left neighbour. The kernel radius is one unit
/// beyond the farthest neighbour, so every neighbour keeps a positive weight.
inline LocalWindow local_window(std::span<const double> abscissa, std::size_t i, std::size_t q) {
    const std::size_t n = abscissa.size();
    std::size_t lo = i;
    std::size_t hi = i;
    while (hi - lo + 1 < q) {
        if (lo == 0) {
            ++hi;
        } else if (hi + 1 == n) {
            --lo;
        } else if (abscissa[i] - abscissa[lo - 1] <= abscissa[hi + 1] - abscissa[i]) {
            --lo;
        } else {
            ++hi;
        }
    }
    const double reach = std::max(abscissa[i] - abscissa[lo], abscissa[hi] - abscissa[i]);
    return {lo, hi, reach + 1.0};
}

/// Locally weighted quadratic regression (LOESS, degree 2, tricube weights)
/// evaluated at every abscissa. `abscissa` must be strictly increasing.
class QuadraticLoess {
public:
    explicit QuadraticLoess(double span) : span_(span) {
        if (!(span > 0.0 && span <= 1.0)) {
            throw std::invalid_argument("QuadraticLoess: span must lie in (0, 1]");
        }
    }

    std::vector<double> fit(std::span<const double> abscissa, std::span<const double> values) const {
        const std::size_t n = abscissa.size();
        if (values.size() != n) {
            throw std::invalid_argument("QuadraticLoess: abscissa/value size mismatch");
        }
        if (n < 3) {
            throw std::invalid_argument("QuadraticLoess: need at least 3 points");
        }
        for (std::size_t i = 1; i < n; ++i) {
            if (!(abscissa[i] > abscissa[i - 1])) {
                throw std::invalid_argument("QuadraticLoess: abscissa not strictly increasing");
            }
        }

        const std::size_t q = neighbour_count(n, span_);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = fit_at(abscissa, values, i, local_window(abscissa, i, q));
        }
        return out;
    }

    double span() const { return span_; }

private:
    static double fit_at(std::span<const double> abscissa, std::span<const double> values, std::size_t i,
                         const LocalWindow& win) {
        const auto m = static_cast<Eigen::Index>(win.last - win.first + 1);
        // Centred on the query point and scaled by the radius: the fitted value
        // is the intercept and the columns stay well conditioned.
        Eigen::MatrixXd design(m, 3);
        Eigen::VectorXd rhs(m);
        double weight_sum = 0.0;
        for (Eigen::Index r = 0; r < m; ++r) {
            const std::size_t j = win.first + static_cast<std::size_t>(r);
            const double d = (abscissa[j] - abscissa[i]) / win.radius;
            const double w = tricube(d);
            weight_sum += w;
            const double sw = std::sqrt(w);
            design(r, 0) = sw;
            design(r, 1) = sw * d;
            design(r, 2) = sw * d * d;
            rhs(r) = sw * values[j];
        }
        if (!(weight_sum > 0.0)) {
            throw std::domain_error("QuadraticLoess: all neighbour weights are zero");
        }
        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < 3) {
            throw std::domain_error("QuadraticLoess: degenerate local window");
        }
        const Eigen::Vector3d coeff = qr.solve(rhs);
        return coeff(0);
    }

    double span_;
};

}  // namespace topometric
