#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace bpsgcn::ad {

using Mat = Eigen::MatrixXd;

class Tape;

/// Handle to one node of a Tape. Cheap to copy; only meaningful together
/// with the tape that produced it.
struct Value {
    Tape* tape = nullptr;
    int id = -1;
};

/// Define-by-run reverse-mode differentiation over dense double matrices.
///
/// Nodes are appended in evaluation order, so walking the node list backwards
/// is a reverse topological order. Each node carries a closure that pulls the
/// gradient at the node into its parents. Constants are not tracked and
/// receive no gradient storage.
///
/// A tape is single-threaded; build one per forward/backward pass and let it
/// go out of scope to release memory.
class Tape {
public:
    /// Leaf with no gradient tracking.
    Value constant(Mat v);

    /// Leaf that accumulates a gradient (parameters, differentiable inputs).
    Value input(Mat v);

    /// Node with a caller-supplied backward. `back` receives the gradient at
    /// this node and must accumulate into the parents it captured. Pass
    /// tracked=false when no parent is tracked.
    Value custom(Mat v, std::function<void(Tape&, const Mat&)> back, bool tracked = true);

    const Mat& val(const Value& v) const;

    /// Gradient accumulated at `v`; zeros if backward never reached it.
    Mat grad(const Value& v) const;

    bool tracked(const Value& v) const;

    /// Adds `g` to the gradient at `v`. No-op on untracked nodes.
    void accumulate(const Value& v, const Mat& g);

    /// Seeds d(root)/d(root) = 1 (root must be 1x1) and back-propagates.
    /// Gradients accumulate; reuse of the tape for a second backward without
    /// clearing adds into existing gradients.
    void backward(const Value& root);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Mat value;
        Mat grad; // empty until first accumulation
        std::function<void(Tape&, const Mat&)> back;
        bool tracked = false;
    };
    std::vector<Node> nodes_;
};

/// 1x1 constant.
Value scalar(Tape& t, double x);

/// Value of a 1x1 node.
double item(const Value& v);

// Elementwise arithmetic. Shapes must match exactly; broadcasting is explicit
// via the *_row/*_col variants below.
Value add(const Value& a, const Value& b);
Value sub(const Value& a, const Value& b);
Value mul(const Value& a, const Value& b);
Value div(const Value& a, const Value& b);

Value neg(const Value& a);
Value add_scalar(const Value& a, double s);
Value mul_scalar(const Value& a, double s);

/// a (N x D) + row (1 x D), broadcast over rows.
Value add_row(const Value& a, const Value& row);
/// a (N x D) + col (N x 1), broadcast over columns.
Value add_col(const Value& a, const Value& col);
/// a (N x D) * col (N x 1), broadcast over columns.
Value mul_col(const Value& a, const Value& col);

Value matmul(const Value& a, const Value& b);
Value transpose(const Value& a);

Value sigmoid(const Value& a);
Value tanh_(const Value& a);
Value softplus(const Value& a);
Value exp_(const Value& a);
Value log_(const Value& a);
Value sqrt_(const Value& a);
Value square(const Value& a);
Value pow_const(const Value& a, double p);
Value relu(const Value& a);

Value sum_all(const Value& a);  // 1x1
Value mean_all(const Value& a); // 1x1
Value row_sum(const Value& a);  // N x 1
Value col_sum(const Value& a);  // 1 x D

Value concat_cols(const Value& a, const Value& b);
Value concat_rows(const std::vector<Value>& parts);
Value slice_rows(const Value& a, int r0, int nrows);
Value slice_cols(const Value& a, int c0, int ncols);

/// Column-major reinterpretation, same element count.
Value reshape(const Value& a, int rows, int cols);

/// Numerically stable softmax over each row.
Value softmax_rows(const Value& a);

/// Each row divided by its sum. Rows must have nonzero sum.
Value normalize_rows(const Value& a);

} // namespace bpsgcn::ad
