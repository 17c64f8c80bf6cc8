#pragma once

#include "seriescast/error.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace seriescast::detail {

/// Dense row-major matrix, just big enough for the small regressions
/// and state-space solves used here (dimensions stay below ~100).
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Mat mat_mul(const Mat& a, const Mat& b) {
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

inline Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// A is consumed by value. Throws DomainError on (numerical) singularity.
inline std::vector<double> solve_dense(Mat a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a(r, col)) > best) {
                best = std::fabs(a(r, col));
                pivot = r;
            }
        }
        if (best < 1e-300) {
            throw DomainError("solve_dense: singular matrix");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

/// In-place Cholesky of a symmetric positive definite matrix; returns
/// the lower factor. Throws DomainError if the matrix is not PD.
inline Mat cholesky(const Mat& a) {
    const std::size_t n = a.rows();
    Mat l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw DomainError("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

/// Solves L L' x = b given the lower Cholesky factor.
inline std::vector<double> cholesky_solve(const Mat& l, std::vector<double> b) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * b[k];
        b[i] = s / l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
        b[i] = s / l(i, i);
    }
    return b;
}

struct LeastSquaresFit {
    std::vector<double> coef;
    std::vector<double> std_err; ///< per-coefficient OLS standard errors
    double rss = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares via normal equations with a tiny ridge
/// fallback when X'X is numerically singular.
inline LeastSquaresFit least_squares(const Mat& x, const std::vector<double>& y) {
    const std::size_t n = x.rows();
    const std::size_t k = x.cols();
    if (n <= k) throw SizeError("least_squares: more parameters than observations");

    Mat xtx(k, k);
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += x(i, a) * y[i];
            for (std::size_t b = a; b < k; ++b) xtx(a, b) += x(i, a) * x(i, b);
        }
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);

    Mat l;
    try {
        l = cholesky(xtx);
    } catch (const DomainError&) {
        double scale = 0.0;
        for (std::size_t a = 0; a < k; ++a) scale = std::max(scale, xtx(a, a));
        if (scale <= 0.0) throw DomainError("least_squares: degenerate regressors");
        for (std::size_t a = 0; a < k; ++a) xtx(a, a) += 1e-10 * scale;
        l = cholesky(xtx);
    }

    LeastSquaresFit fit;
    fit.coef = cholesky_solve(l, xty);
    fit.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0.0;
        for (std::size_t a = 0; a < k; ++a) pred += x(i, a) * fit.coef[a];
        const double e = y[i] - pred;
        fit.rss += e * e;
    }
    const double dof = static_cast<double>(n - k);
    const double s2 = fit.rss / dof;
    fit.std_err.resize(k);
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> e(k, 0.0);
        e[a] = 1.0;
        const auto col = cholesky_solve(l, e); // a-th column of (X'X)^{-1}
        fit.std_err[a] = std::sqrt(s2 * col[a]);
    }
    return fit;
}

} // namespace seriescast::detail
