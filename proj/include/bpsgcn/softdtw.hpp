#pragma once

#include "bpsgcn/ad.hpp"

#include <vector>

namespace bpsgcn {

/// Smoothed dynamic time warping with squared-Euclidean step cost.
/// gamma controls the softness of the min (acceptable alignment distortion);
/// gamma -> 0 recovers hard DTW from above (softmin <= min).
struct SoftDtwConfig {
    double gamma = 0.1;
};

struct SoftDtwResult {
    double value = 0.0;
    /// d(value)/d(cost matrix), m x n alignment weights.
    ad::Mat alignment;
};

/// Sequences as row-per-step matrices (m x d and n x d). Both nonempty.
double soft_dtw(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg);

/// Value plus the alignment-weight matrix used for gradients.
SoftDtwResult soft_dtw_full(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg);

/// Exact gradient of soft_dtw(a, b) with respect to a (m x d).
ad::Mat soft_dtw_grad(const ad::Mat& a, const ad::Mat& b, const SoftDtwConfig& cfg);

/// Mean over agents of soft_dtw(decoded[i], observed[i]) / T, where T is the
/// observed feature-sequence length. Plain (non-differentiating) form.
double vrnn_softdtw_loss(const std::vector<ad::Mat>& decoded_means,
                         const std::vector<ad::Mat>& observed, const SoftDtwConfig& cfg);

/// Same loss as a tape node. decoded_steps[t] is the batch of decoded means
/// at step t (N x d); observed[i] is agent i's feature sequence (T x d).
/// Gradient flows into every decoded step.
ad::Value softdtw_loss_node(ad::Tape& tape, const std::vector<ad::Value>& decoded_steps,
                            const std::vector<ad::Mat>& observed, const SoftDtwConfig& cfg);

} // namespace bpsgcn
