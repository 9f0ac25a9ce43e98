#include "bpsgcn/ad.hpp"

#include "bpsgcn/errors.hpp"

#include <cmath>

namespace bpsgcn::ad {

namespace {

void check_same_tape(const Value& a, const Value& b) {
    if (a.tape == nullptr || a.tape != b.tape)
        throw ArgumentError("ad: operands live on different tapes");
}

void check_same_shape(const Mat& a, const Mat& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ArgumentError(std::string("ad: shape mismatch in ") + op + ": " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

// Unary elementwise helper: y = f(x), dx += g .* dfdx(x, y).
template <typename F, typename DF>
Value unary(const Value& a, F f, DF dfdx) {
    Tape& t = *a.tape;
    const Mat& x = t.val(a);
    Mat y = x.unaryExpr(f);
    if (!t.tracked(a)) return t.constant(std::move(y));
    Value av = a;
    Mat yc = y;
    return t.custom(std::move(y), [av, xc = x, yc = std::move(yc), dfdx](Tape& tp, const Mat& g) {
        tp.accumulate(av, g.cwiseProduct(xc.binaryExpr(yc, dfdx)));
    });
}

} // namespace

Value Tape::constant(Mat v) {
    nodes_.push_back(Node{std::move(v), Mat(), nullptr, false});
    return Value{this, static_cast<int>(nodes_.size()) - 1};
}

Value Tape::input(Mat v) {
    nodes_.push_back(Node{std::move(v), Mat(), nullptr, true});
    return Value{this, static_cast<int>(nodes_.size()) - 1};
}

Value Tape::custom(Mat v, std::function<void(Tape&, const Mat&)> back, bool tracked) {
    if (!v.allFinite()) throw NumericError("ad: non-finite node value");
    nodes_.push_back(Node{std::move(v), Mat(), tracked ? std::move(back) : nullptr, tracked});
    return Value{this, static_cast<int>(nodes_.size()) - 1};
}

const Mat& Tape::val(const Value& v) const { return nodes_.at(v.id).value; }

Mat Tape::grad(const Value& v) const {
    const Node& n = nodes_.at(v.id);
    if (n.grad.size() == 0) return Mat::Zero(n.value.rows(), n.value.cols());
    return n.grad;
}

bool Tape::tracked(const Value& v) const { return nodes_.at(v.id).tracked; }

void Tape::accumulate(const Value& v, const Mat& g) {
    Node& n = nodes_.at(v.id);
    if (!n.tracked) return;
    if (n.grad.size() == 0)
        n.grad = g;
    else
        n.grad += g;
}

void Tape::backward(const Value& root) {
    if (root.tape != this) throw ArgumentError("ad: backward on foreign value");
    const Node& r = nodes_.at(root.id);
    if (r.value.size() != 1) throw ArgumentError("ad: backward root must be 1x1");
    accumulate(root, Mat::Ones(1, 1));
    for (int i = root.id; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.back && n.grad.size() != 0) n.back(*this, n.grad);
    }
}

Value scalar(Tape& t, double x) {
    Mat m(1, 1);
    m(0, 0) = x;
    return t.constant(std::move(m));
}

double item(const Value& v) {
    const Mat& m = v.tape->val(v);
    if (m.size() != 1) throw ArgumentError("ad: item() on non-scalar");
    return m(0, 0);
}

Value add(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    check_same_shape(t.val(a), t.val(b), "add");
    Mat y = t.val(a) + t.val(b);
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a, b](Tape& tp, const Mat& g) {
        tp.accumulate(a, g);
        tp.accumulate(b, g);
    });
}

Value sub(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    check_same_shape(t.val(a), t.val(b), "sub");
    Mat y = t.val(a) - t.val(b);
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a, b](Tape& tp, const Mat& g) {
        tp.accumulate(a, g);
        tp.accumulate(b, -g);
    });
}

Value mul(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    check_same_shape(t.val(a), t.val(b), "mul");
    Mat y = t.val(a).cwiseProduct(t.val(b));
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    Mat va = t.val(a), vb = t.val(b);
    return t.custom(std::move(y), [a, b, va, vb](Tape& tp, const Mat& g) {
        tp.accumulate(a, g.cwiseProduct(vb));
        tp.accumulate(b, g.cwiseProduct(va));
    });
}

Value div(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    check_same_shape(t.val(a), t.val(b), "div");
    Mat y = t.val(a).cwiseQuotient(t.val(b));
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    Mat va = t.val(a), vb = t.val(b);
    return t.custom(std::move(y), [a, b, va, vb](Tape& tp, const Mat& g) {
        tp.accumulate(a, g.cwiseQuotient(vb));
        tp.accumulate(b, -g.cwiseProduct(va).cwiseQuotient(vb.cwiseProduct(vb)));
    });
}

Value neg(const Value& a) { return mul_scalar(a, -1.0); }

Value add_scalar(const Value& a, double s) {
    Tape& t = *a.tape;
    Mat y = t.val(a).array() + s;
    if (!t.tracked(a)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a](Tape& tp, const Mat& g) { tp.accumulate(a, g); });
}

Value mul_scalar(const Value& a, double s) {
    Tape& t = *a.tape;
    Mat y = t.val(a) * s;
    if (!t.tracked(a)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a, s](Tape& tp, const Mat& g) { tp.accumulate(a, g * s); });
}

Value add_row(const Value& a, const Value& row) {
    check_same_tape(a, row);
    Tape& t = *a.tape;
    const Mat& x = t.val(a);
    const Mat& r = t.val(row);
    if (r.rows() != 1 || r.cols() != x.cols()) throw ArgumentError("ad: add_row shape");
    Mat y = x.rowwise() + r.row(0);
    if (!t.tracked(a) && !t.tracked(row)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a, row](Tape& tp, const Mat& g) {
        tp.accumulate(a, g);
        tp.accumulate(row, g.colwise().sum());
    });
}

Value add_col(const Value& a, const Value& col) {
    check_same_tape(a, col);
    Tape& t = *a.tape;
    const Mat& x = t.val(a);
    const Mat& c = t.val(col);
    if (c.cols() != 1 || c.rows() != x.rows()) throw ArgumentError("ad: add_col shape");
    Mat y = x.colwise() + c.col(0);
    if (!t.tracked(a) && !t.tracked(col)) return t.constant(std::move(y));
    return t.custom(std::move(y), [a, col](Tape& tp, const Mat& g) {
        tp.accumulate(a, g);
        tp.accumulate(col, g.rowwise().sum());
    });
}

Value mul_col(const Value& a, const Value& col) {
    check_same_tape(a, col);
    Tape& t = *a.tape;
    const Mat& x = t.val(a);
    const Mat& c = t.val(col);
    if (c.cols() != 1 || c.rows() != x.rows()) throw ArgumentError("ad: mul_col shape");
    Mat y = x.array().colwise() * c.col(0).array();
    if (!t.tracked(a) && !t.tracked(col)) return t.constant(std::move(y));
    Mat xc = x, cc = c;
    return t.custom(std::move(y), [a, col, xc, cc](Tape& tp, const Mat& g) {
        tp.accumulate(a, g.array().colwise() * cc.col(0).array());
        tp.accumulate(col, g.cwiseProduct(xc).rowwise().sum());
    });
}

Value matmul(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    const Mat& A = t.val(a);
    const Mat& B = t.val(b);
    if (A.cols() != B.rows()) throw ArgumentError("ad: matmul inner dimensions");
    Mat y = A * B;
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    Mat Ac = A, Bc = B;
    return t.custom(std::move(y), [a, b, Ac, Bc](Tape& tp, const Mat& g) {
        tp.accumulate(a, g * Bc.transpose());
        tp.accumulate(b, Ac.transpose() * g);
    });
}

Value transpose(const Value& a) {
    Tape& t = *a.tape;
    Mat y = t.val(a).transpose();
    if (!t.tracked(a)) return t.constant(std::move(y));
    return t.custom(std::move(y),
                    [a](Tape& tp, const Mat& g) { tp.accumulate(a, g.transpose()); });
}

Value sigmoid(const Value& a) {
    return unary(
        a,
        [](double x) {
            return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        },
        [](double, double y) { return y * (1.0 - y); });
}

Value tanh_(const Value& a) {
    return unary(a, [](double x) { return std::tanh(x); },
                 [](double, double y) { return 1.0 - y * y; });
}

Value softplus(const Value& a) {
    return unary(
        a,
        [](double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); },
        [](double x, double) {
            return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
        });
}

Value exp_(const Value& a) {
    return unary(a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Value log_(const Value& a) {
    return unary(a, [](double x) { return std::log(x); },
                 [](double x, double) { return 1.0 / x; });
}

Value sqrt_(const Value& a) {
    return unary(a, [](double x) { return std::sqrt(x); },
                 [](double, double y) { return 0.5 / y; });
}

Value square(const Value& a) {
    return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Value pow_const(const Value& a, double p) {
    return unary(a, [p](double x) { return std::pow(x, p); },
                 [p](double x, double) { return p * std::pow(x, p - 1.0); });
}

Value relu(const Value& a) {
    return unary(a, [](double x) { return x > 0.0 ? x : 0.0; },
                 [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Value sum_all(const Value& a) {
    Tape& t = *a.tape;
    Mat y(1, 1);
    y(0, 0) = t.val(a).sum();
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long r = t.val(a).rows(), c = t.val(a).cols();
    return t.custom(std::move(y), [a, r, c](Tape& tp, const Mat& g) {
        tp.accumulate(a, Mat::Constant(r, c, g(0, 0)));
    });
}

Value mean_all(const Value& a) {
    const double n = static_cast<double>(a.tape->val(a).size());
    return mul_scalar(sum_all(a), 1.0 / n);
}

Value row_sum(const Value& a) {
    Tape& t = *a.tape;
    Mat y = t.val(a).rowwise().sum();
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long c = t.val(a).cols();
    return t.custom(std::move(y), [a, c](Tape& tp, const Mat& g) {
        tp.accumulate(a, g * Mat::Ones(1, c));
    });
}

Value col_sum(const Value& a) {
    Tape& t = *a.tape;
    Mat y = t.val(a).colwise().sum();
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long r = t.val(a).rows();
    return t.custom(std::move(y), [a, r](Tape& tp, const Mat& g) {
        tp.accumulate(a, Mat::Ones(r, 1) * g);
    });
}

Value concat_cols(const Value& a, const Value& b) {
    check_same_tape(a, b);
    Tape& t = *a.tape;
    const Mat& A = t.val(a);
    const Mat& B = t.val(b);
    if (A.rows() != B.rows()) throw ArgumentError("ad: concat_cols row mismatch");
    Mat y(A.rows(), A.cols() + B.cols());
    y << A, B;
    if (!t.tracked(a) && !t.tracked(b)) return t.constant(std::move(y));
    const long ca = A.cols(), cb = B.cols();
    return t.custom(std::move(y), [a, b, ca, cb](Tape& tp, const Mat& g) {
        tp.accumulate(a, g.leftCols(ca));
        tp.accumulate(b, g.rightCols(cb));
    });
}

Value concat_rows(const std::vector<Value>& parts) {
    if (parts.empty()) throw ArgumentError("ad: concat_rows of nothing");
    Tape& t = *parts.front().tape;
    long rows = 0;
    const long cols = t.val(parts.front()).cols();
    bool any_tracked = false;
    for (const Value& p : parts) {
        check_same_tape(parts.front(), p);
        if (t.val(p).cols() != cols) throw ArgumentError("ad: concat_rows col mismatch");
        rows += t.val(p).rows();
        any_tracked = any_tracked || t.tracked(p);
    }
    Mat y(rows, cols);
    long r = 0;
    for (const Value& p : parts) {
        y.middleRows(r, t.val(p).rows()) = t.val(p);
        r += t.val(p).rows();
    }
    if (!any_tracked) return t.constant(std::move(y));
    std::vector<long> heights;
    heights.reserve(parts.size());
    for (const Value& p : parts) heights.push_back(t.val(p).rows());
    return t.custom(std::move(y), [parts, heights](Tape& tp, const Mat& g) {
        long r0 = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            tp.accumulate(parts[i], g.middleRows(r0, heights[i]));
            r0 += heights[i];
        }
    });
}

Value slice_rows(const Value& a, int r0, int nrows) {
    Tape& t = *a.tape;
    const Mat& A = t.val(a);
    if (r0 < 0 || nrows < 0 || r0 + nrows > A.rows()) throw ArgumentError("ad: slice_rows range");
    Mat y = A.middleRows(r0, nrows);
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long pr = A.rows(), pc = A.cols();
    return t.custom(std::move(y), [a, r0, nrows, pr, pc](Tape& tp, const Mat& g) {
        Mat full = Mat::Zero(pr, pc);
        full.middleRows(r0, nrows) = g;
        tp.accumulate(a, full);
    });
}

Value slice_cols(const Value& a, int c0, int ncols) {
    Tape& t = *a.tape;
    const Mat& A = t.val(a);
    if (c0 < 0 || ncols < 0 || c0 + ncols > A.cols()) throw ArgumentError("ad: slice_cols range");
    Mat y = A.middleCols(c0, ncols);
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long pr = A.rows(), pc = A.cols();
    return t.custom(std::move(y), [a, c0, ncols, pr, pc](Tape& tp, const Mat& g) {
        Mat full = Mat::Zero(pr, pc);
        full.middleCols(c0, ncols) = g;
        tp.accumulate(a, full);
    });
}

Value reshape(const Value& a, int rows, int cols) {
    Tape& t = *a.tape;
    const Mat& A = t.val(a);
    if (static_cast<long>(rows) * cols != A.size()) throw ArgumentError("ad: reshape size");
    Mat y = Eigen::Map<const Mat>(A.data(), rows, cols);
    if (!t.tracked(a)) return t.constant(std::move(y));
    const long pr = A.rows(), pc = A.cols();
    return t.custom(std::move(y), [a, pr, pc](Tape& tp, const Mat& g) {
        tp.accumulate(a, Eigen::Map<const Mat>(g.data(), pr, pc));
    });
}

Value softmax_rows(const Value& a) {
    Tape& t = *a.tape;
    const Mat& X = t.val(a);
    Mat y(X.rows(), X.cols());
    for (long i = 0; i < X.rows(); ++i) {
        const double m = X.row(i).maxCoeff();
        Eigen::RowVectorXd e = (X.row(i).array() - m).exp();
        y.row(i) = e / e.sum();
    }
    if (!t.tracked(a)) return t.constant(std::move(y));
    Mat yc = y;
    return t.custom(std::move(y), [a, yc](Tape& tp, const Mat& g) {
        // dx_i = y_i .* (g_i - <g_i, y_i>)
        Mat dx(g.rows(), g.cols());
        for (long i = 0; i < g.rows(); ++i) {
            const double dot = g.row(i).dot(yc.row(i));
            dx.row(i) = yc.row(i).array() * (g.row(i).array() - dot);
        }
        tp.accumulate(a, dx);
    });
}

Value normalize_rows(const Value& a) {
    Tape& t = *a.tape;
    const Mat& X = t.val(a);
    Eigen::VectorXd s = X.rowwise().sum();
    Mat y = X.array().colwise() / s.array();
    if (!t.tracked(a)) return t.constant(std::move(y));
    Mat yc = y;
    return t.custom(std::move(y), [a, yc, s](Tape& tp, const Mat& g) {
        // dx_ij = (g_ij - <g_i, y_i>) / s_i
        Mat dx(g.rows(), g.cols());
        for (long i = 0; i < g.rows(); ++i) {
            const double dot = g.row(i).dot(yc.row(i));
            dx.row(i) = (g.row(i).array() - dot) / s(i);
        }
        tp.accumulate(a, dx);
    });
}

} // namespace bpsgcn::ad
