#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace opsum {

using Vec = std::vector<double>;

// Dense row-major matrix. All model tensors are tiny, so no BLAS.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat from_row(const Vec& v) {
        Mat m(1, v.size());
        m.data = v;
        return m;
    }

    bool operator==(const Mat& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

inline double dot(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// y = A x
inline Vec matvec(const Mat& a, std::span<const double> x) {
    if (a.cols != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    Vec y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) y[i] = dot(a.row(i), x);
    return y;
}

// y = A^T x
inline Vec matvec_t(const Mat& a, std::span<const double> x) {
    if (a.rows != x.size()) throw std::invalid_argument("matvec_t: shape mismatch");
    Vec y(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) axpy(x[i], a.row(i), y);
    return y;
}

// A += scale * u v^T
inline void add_outer(Mat& a, std::span<const double> u, std::span<const double> v,
                      double scale = 1.0) {
    for (std::size_t i = 0; i < a.rows; ++i) axpy(scale * u[i], v, a.row(i));
}

inline Vec softmax(std::span<const double> logits) {
    double m = logits[0];
    for (double x : logits) m = std::max(m, x);
    Vec p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        z += p[i];
    }
    for (double& x : p) x /= z;
    return p;
}

// Given dL/dp for p = softmax(u), returns dL/du = p .* dp - (p . dp) p
inline Vec softmax_backward(std::span<const double> p, std::span<const double> dp) {
    double s = dot(p, dp);
    Vec du(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) du[i] = p[i] * (dp[i] - s);
    return du;
}

inline double squared_distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double diff = u[i] - v[i];
        s += diff * diff;
    }
    return s;
}

// Cosine similarity; defined as 0 when either vector has zero norm.
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
    double nu = norm(u), nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot(u, v) / (nu * nv);
}

// Adam with bias correction. One state per parameter tensor.
class Adam {
public:
    Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    struct State {
        Vec m, v;
        long t = 0;
    };

    void step(std::span<double> params, std::span<const double> grads, State& st) const {
        if (st.m.empty()) {
            st.m.assign(params.size(), 0.0);
            st.v.assign(params.size(), 0.0);
        }
        ++st.t;
        const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(st.t));
        const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(st.t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            st.m[i] = beta1_ * st.m[i] + (1.0 - beta1_) * grads[i];
            st.v[i] = beta2_ * st.v[i] + (1.0 - beta2_) * grads[i] * grads[i];
            params[i] -= lr_ * (st.m[i] / c1) / (std::sqrt(st.v[i] / c2) + eps_);
        }
    }

private:
    double lr_, beta1_, beta2_, eps_;
};

}  // namespace opsum
