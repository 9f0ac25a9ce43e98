#pragma once

#include "bpsgcn/ad.hpp"
#include "bpsgcn/rng.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace test_util {

using bpsgcn::ad::Mat;

/// Worst relative error between `analytic` and central finite differences of
/// `loss` over every entry of `x`. `loss` must read `x` afresh on each call.
/// Entries where both gradients are below 1e-6 are compared absolutely.
inline double grad_rel_err(const std::function<double()>& loss, Mat& x, const Mat& analytic,
                           double h = 1e-5) {
    double worst = 0.0;
    for (long c = 0; c < x.cols(); ++c) {
        for (long r = 0; r < x.rows(); ++r) {
            const double keep = x(r, c);
            x(r, c) = keep + h;
            const double up = loss();
            x(r, c) = keep - h;
            const double down = loss();
            x(r, c) = keep;
            const double fd = (up - down) / (2.0 * h);
            const double an = analytic(r, c);
            const double mag = std::max(std::abs(fd), std::abs(an));
            const double err = mag < 1e-6 ? std::abs(fd - an) : std::abs(fd - an) / mag;
            worst = std::max(worst, err);
        }
    }
    return worst;
}

inline Mat random_mat(long rows, long cols, bpsgcn::Rng& rng, double scale = 1.0) {
    Mat m(rows, cols);
    for (long c = 0; c < cols; ++c)
        for (long r = 0; r < rows; ++r) m(r, c) = scale * rng.normal();
    return m;
}

/// Hard DTW by exhaustive enumeration of monotone alignment paths with
/// squared-Euclidean step cost. Exponential; lengths <= ~6 only. Independent
/// of the production dynamic program.
inline double hard_dtw_enumerate(const Mat& a, const Mat& b) {
    const long m = a.rows(), n = b.rows();
    double best = std::numeric_limits<double>::infinity();
    std::function<void(long, long, double)> walk = [&](long i, long j, double acc) {
        acc += (a.row(i) - b.row(j)).squaredNorm();
        if (acc >= best) return;
        if (i == m - 1 && j == n - 1) {
            best = acc;
            return;
        }
        if (i + 1 < m) walk(i + 1, j, acc);
        if (j + 1 < n) walk(i, j + 1, acc);
        if (i + 1 < m && j + 1 < n) walk(i + 1, j + 1, acc);
    };
    walk(0, 0, 0.0);
    return best;
}

} // namespace test_util
