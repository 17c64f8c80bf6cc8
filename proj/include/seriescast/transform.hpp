#pragma once

#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace seriescast {

/// Box-Cox power transform: (y^lambda - 1)/lambda, or ln(y) at lambda = 0.
inline std::vector<double> box_cox(const std::vector<double>& values, double lambda) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double y = values[i];
        if (y <= 0.0 && lambda <= 0.0) {
            throw DomainError("box_cox: non-positive value with lambda <= 0");
        }
        out[i] = lambda == 0.0 ? std::log(y) : (std::pow(y, lambda) - 1.0) / lambda;
    }
    return out;
}

inline TimeSeries box_cox(const TimeSeries& series, double lambda) {
    return series.with_values(box_cox(series.values(), lambda));
}

/// Exact inverse of box_cox. Requires lambda*z + 1 > 0 when lambda != 0.
inline std::vector<double> inv_box_cox(const std::vector<double>& values, double lambda) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double z = values[i];
        if (lambda == 0.0) {
            out[i] = std::exp(z);
        } else {
            const double base = lambda * z + 1.0;
            if (base <= 0.0) {
                throw DomainError("inv_box_cox: lambda*z + 1 must be positive");
            }
            out[i] = std::pow(base, 1.0 / lambda);
        }
    }
    return out;
}

inline TimeSeries inv_box_cox(const TimeSeries& series, double lambda) {
    return series.with_values(inv_box_cox(series.values(), lambda));
}

namespace detail {

/// Band back-transform: like inv_box_cox but maps out-of-domain values
/// to the boundary (0 for lambda > 0) instead of throwing, so that
/// prediction bands far from the data stay representable.
inline double inv_box_cox_clamped(double z, double lambda) {
    if (lambda == 0.0) return std::exp(z);
    const double base = lambda * z + 1.0;
    if (base <= 0.0) return lambda > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(base, 1.0 / lambda);
}

} // namespace detail

/**
 * Guerrero's method for picking the Box-Cox lambda: split the series
 * into length-2 subseries and choose the lambda in [-1, 2] minimizing
 * the coefficient of variation of s_i / m_i^(1-lambda), where m_i and
 * s_i are the subseries mean and standard deviation.
 */
inline double guerrero_lambda(const TimeSeries& series) {
    const auto& y = series.values();
    if (y.size() < 8) throw SizeError("guerrero_lambda: need at least 8 observations");
    for (double v : y) {
        if (v <= 0.0) throw DomainError("guerrero_lambda: series must be strictly positive");
    }

    constexpr std::size_t block = 2;
    const std::size_t nblocks = y.size() / block;
    std::vector<double> means(nblocks), sds(nblocks);
    // align blocks to the end of the series so recent behavior dominates
    const std::size_t offset = y.size() - nblocks * block;
    for (std::size_t b = 0; b < nblocks; ++b) {
        double m = 0.0;
        for (std::size_t j = 0; j < block; ++j) m += y[offset + b * block + j];
        m /= block;
        double s = 0.0;
        for (std::size_t j = 0; j < block; ++j) {
            const double d = y[offset + b * block + j] - m;
            s += d * d;
        }
        means[b] = m;
        sds[b] = std::sqrt(s / (block - 1));
    }

    const auto coef_variation = [&](double lambda) {
        std::vector<double> ratio(nblocks);
        for (std::size_t b = 0; b < nblocks; ++b) {
            ratio[b] = sds[b] / std::pow(means[b], 1.0 - lambda);
        }
        const double m = detail::mean(ratio);
        if (m <= 0.0) return std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (double r : ratio) s += (r - m) * (r - m);
        return std::sqrt(s / (nblocks - 1)) / m;
    };

    double best_lambda = 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 600; ++i) {
        const double lambda = -1.0 + i * 0.005;
        const double cv = coef_variation(lambda);
        if (cv < best) {
            best = cv;
            best_lambda = lambda;
        }
    }
    return std::min(2.0, std::max(-1.0, best_lambda));
}

/// d-fold differencing; the result drops the first d observations.
inline std::vector<double> difference(const std::vector<double>& values, int d) {
    if (d < 0) throw DomainError("difference: d must be non-negative");
    if (static_cast<std::size_t>(d) >= values.size() && d > 0) {
        throw SizeError("difference: series length must exceed d");
    }
    std::vector<double> out = values;
    for (int round = 0; round < d; ++round) {
        for (std::size_t i = out.size() - 1; i > 0; --i) out[i] -= out[i - 1];
        out.erase(out.begin());
    }
    return out;
}

inline TimeSeries difference(const TimeSeries& series, int d) {
    if (d == 0) return series;
    if (static_cast<std::size_t>(d) >= series.size()) {
        throw SizeError("difference: series length must exceed d");
    }
    return TimeSeries(series.date_at(static_cast<std::size_t>(d)),
                      difference(series.values(), d));
}

/// Undoes d-fold differencing given the first d original observations.
inline std::vector<double> integrate(const std::vector<double>& diffed,
                                     const std::vector<double>& initial_values, int d) {
    if (static_cast<int>(initial_values.size()) != d) {
        throw SizeError("integrate: initial_values must have length d");
    }
    std::vector<double> out = diffed;
    for (int round = d; round-- > 0;) {
        // prepend the d-th initial value at this depth, then cumulative-sum
        std::vector<double> init_head(initial_values.begin(), initial_values.begin() + round + 1);
        const std::vector<double> head_diff = difference(init_head, round);
        out.insert(out.begin(), head_diff.back());
        for (std::size_t i = 1; i < out.size(); ++i) out[i] += out[i - 1];
    }
    return out;
}

inline TimeSeries integrate(const TimeSeries& diffed, const std::vector<double>& initial_values,
                            int d) {
    if (d == 0) return diffed;
    return TimeSeries(diffed.start_date().plus_days(-d),
                      integrate(diffed.values(), initial_values, d));
}

} // namespace seriescast
