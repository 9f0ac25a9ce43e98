#include "bpsgcn/softdtw.hpp"

#include "bpsgcn/errors.hpp"

#include <cmath>
#include <limits>

namespace bpsgcn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double softmin3(double a, double b, double c, double gamma) {
    a /= -gamma;
    b /= -gamma;
    c /= -gamma;
    const double m = std::max(std::max(a, b), c);
    if (m == -kInf) return kInf; // all alternatives unreachable
    const double sum = std::exp(a - m) + std::exp(b - m) + std::exp(c - m);
    return -gamma * (std::log(sum) + m);
}

ad::Mat pairwise_sq_dist(const ad::Mat& a, const ad::Mat& b) {
    ad::Mat d(a.rows(), b.rows());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < b.rows(); ++j) d(i, j) = (a.row(i) - b.row(j)).squaredNorm();
    return d;
}

void check_inputs(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg) {
    if (a.rows() == 0 || b.rows() == 0)
        throw ArgumentError("soft_dtw: sequences must be nonempty");
    if (a.cols() != b.cols()) throw ArgumentError("soft_dtw: feature dimensions differ");
    if (!(cfg.gamma > 0.0)) throw ArgumentError("soft_dtw: gamma must be positive");
}

// Forward DP over the padded (m+2) x (n+2) table. R(0,0) = 0 and infinite
// borders make the first row/column accumulate without alternatives.
ad::Mat forward_table(const ad::Mat& d, double gamma) {
    const long m = d.rows(), n = d.cols();
    ad::Mat r = ad::Mat::Constant(m + 2, n + 2, kInf);
    r(0, 0) = 0.0;
    for (long i = 1; i <= m; ++i)
        for (long j = 1; j <= n; ++j)
            r(i, j) = d(i - 1, j - 1) +
                      softmin3(r(i - 1, j), r(i, j - 1), r(i - 1, j - 1), gamma);
    return r;
}

// Backward recursion over alignment weights: E(i,j) = d(value)/d(D(i,j)).
ad::Mat alignment_table(const ad::Mat& d, ad::Mat r, double gamma) {
    const long m = d.rows(), n = d.cols();
    ad::Mat dpad = ad::Mat::Zero(m + 2, n + 2);
    dpad.block(1, 1, m, n) = d;
    for (long i = 1; i <= m; ++i) r(i, n + 1) = -kInf;
    for (long j = 1; j <= n; ++j) r(m + 1, j) = -kInf;
    r(m + 1, n + 1) = r(m, n);
    ad::Mat e = ad::Mat::Zero(m + 2, n + 2);
    e(m + 1, n + 1) = 1.0;
    for (long j = n; j >= 1; --j) {
        for (long i = m; i >= 1; --i) {
            const double wa = std::exp((r(i + 1, j) - r(i, j) - dpad(i + 1, j)) / gamma);
            const double wb = std::exp((r(i, j + 1) - r(i, j) - dpad(i, j + 1)) / gamma);
            const double wc =
                std::exp((r(i + 1, j + 1) - r(i, j) - dpad(i + 1, j + 1)) / gamma);
            e(i, j) = e(i + 1, j) * wa + e(i, j + 1) * wb + e(i + 1, j + 1) * wc;
        }
    }
    return e.block(1, 1, m, n);
}

} // namespace

double soft_dtw(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg) {
    check_inputs(a, b, cfg);
    const ad::Mat d = pairwise_sq_dist(a, b);
    const ad::Mat r = forward_table(d, cfg.gamma);
    return r(a.rows(), b.rows());
}

SoftDtwResult soft_dtw_full(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg) {
    check_inputs(a, b, cfg);
    const ad::Mat d = pairwise_sq_dist(a, b);
    ad::Mat r = forward_table(d, cfg.gamma);
    SoftDtwResult res;
    res.value = r(a.rows(), b.rows());
    res.alignment = alignment_table(d, std::move(r), cfg.gamma);
    return res;
}

ad::Mat soft_dtw_grad(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg) {
    const SoftDtwResult res = soft_dtw_full(a, b, cfg);
    // chain rule through D(i,j) = |a_i - b_j|^2
    ad::Mat grad = ad::Mat::Zero(a.rows(), a.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < b.rows(); ++j)
            grad.row(i) += res.alignment(i, j) * 2.0 * (a.row(i) - b.row(j));
    return grad;
}

double vrnn_softdtw_loss(const std::vector<ad::Mat>& decoded_means,
                         const std::vector<ad::Mat>& observed, const SoftDtwConfig& cfg) {
    if (decoded_means.size() != observed.size())
        throw ArgumentError("vrnn_softdtw_loss: agent counts differ");
    if (decoded_means.empty()) throw ArgumentError("vrnn_softdtw_loss: no agents");
    double total = 0.0;
    for (std::size_t i = 0; i < decoded_means.size(); ++i) {
        const double t_obs = static_cast<double>(observed[i].rows());
        total += soft_dtw(decoded_means[i], observed[i], cfg) / t_obs;
    }
    return total / static_cast<double>(decoded_means.size());
}

ad::Value softdtw_loss_node(ad::Tape& tape, const std::vector<ad::Value>& decoded_steps,
                            const std::vector<ad::Mat>& observed, const SoftDtwConfig& cfg) {
    if (decoded_steps.empty()) throw ArgumentError("softdtw_loss_node: no decoded steps");
    const long n_agents = tape.val(decoded_steps.front()).rows();
    const long dim = tape.val(decoded_steps.front()).cols();
    if (static_cast<long>(observed.size()) != n_agents)
        throw ArgumentError("softdtw_loss_node: agent counts differ");
    const long t_dec = static_cast<long>(decoded_steps.size());

    // per-agent decoded sequence, alignment, and residual chain
    double total = 0.0;
    std::vector<ad::Mat> per_agent_grads(t_dec, ad::Mat::Zero(n_agents, dim));
    for (long i = 0; i < n_agents; ++i) {
        ad::Mat seq(t_dec, dim);
        for (long t = 0; t < t_dec; ++t) seq.row(t) = tape.val(decoded_steps[t]).row(i);
        const SoftDtwResult res = soft_dtw_full(seq, observed[i], cfg);
        const double t_obs = static_cast<double>(observed[i].rows());
        total += res.value / t_obs;
        const double scale = 1.0 / (t_obs * static_cast<double>(n_agents));
        for (long t = 0; t < t_dec; ++t) {
            Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(dim);
            for (long j = 0; j < observed[i].rows(); ++j)
                g += res.alignment(t, j) * 2.0 * (seq.row(t) - observed[i].row(j));
            per_agent_grads[t].row(i) = scale * g;
        }
    }
    ad::Mat value(1, 1);
    value(0, 0) = total / static_cast<double>(n_agents);

    return tape.custom(std::move(value),
                       [decoded_steps, per_agent_grads](ad::Tape& tp, const ad::Mat& g) {
                           const double s = g(0, 0);
                           for (std::size_t t = 0; t < decoded_steps.size(); ++t)
                               tp.accumulate(decoded_steps[t], s * per_agent_grads[t]);
                       });
}

} // namespace bpsgcn
