#pragma once

#include "seriescast/detail/linalg.hpp"
#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"
#include "seriescast/transform.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

namespace seriescast {

enum class UnitRootTest { adf, kpss };

struct UnitRootResult {
    double statistic = 0.0;
    double critical_value_5pct = 0.0;
    bool reject_null = false;
    UnitRootTest test_kind = UnitRootTest::adf;
    int lags = 0; ///< augmentation lags (ADF) or bandwidth (KPSS)
};

namespace detail {

inline void require_non_constant(const std::vector<double>& y, const char* who) {
    const double m = mean(y);
    for (double v : y) {
        if (v != m) return;
    }
    throw DomainError(std::string(who) + ": constant series has no unit-root information");
}

} // namespace detail

/**
 * Augmented Dickey-Fuller test with constant, no trend. The
 * augmentation order is chosen by AICc over 0..max_lag on a common
 * estimation sample; the null of a unit root is rejected when the
 * t-statistic on the lagged level falls below the 5% asymptotic
 * critical value -2.86.
 */
inline UnitRootResult adf_test(const TimeSeries& series, int max_lag) {
    const auto& y = series.values();
    const int n = static_cast<int>(y.size());
    if (max_lag < 0) throw DomainError("adf_test: max_lag must be non-negative");
    if (n < max_lag + 10) throw SizeError("adf_test: series too short for requested max_lag");
    detail::require_non_constant(y, "adf_test");

    std::vector<double> dy(n - 1);
    for (int t = 1; t < n; ++t) dy[t - 1] = y[t] - y[t - 1];

    // regression sample common to all candidate lag orders
    const int first = max_lag + 1; // index into dy
    const int rows = static_cast<int>(dy.size()) - first;

    double best_aicc = std::numeric_limits<double>::infinity();
    int best_lag = 0;
    double best_tstat = 0.0;

    for (int k = 0; k <= max_lag; ++k) {
        const int ncoef = 2 + k; // constant, y_{t-1}, k lagged differences
        if (rows <= ncoef + 2) break;
        detail::Mat x(rows, ncoef);
        std::vector<double> rhs(rows);
        for (int i = 0; i < rows; ++i) {
            const int t = first + i; // dy index being explained
            x(i, 0) = 1.0;
            x(i, 1) = y[t]; // level lagged one period relative to dy[t]
            for (int j = 0; j < k; ++j) x(i, 2 + j) = dy[t - 1 - j];
            rhs[i] = dy[t];
        }
        detail::LeastSquaresFit fit;
        try {
            fit = detail::least_squares(x, rhs);
        } catch (const DomainError&) {
            continue;
        }
        const double sigma2 = fit.rss / rows;
        if (sigma2 <= 0.0) continue;
        const double loglik = -0.5 * rows * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
        const int kparams = ncoef + 1;
        if (rows <= kparams + 1) continue;
        const double aic = -2.0 * loglik + 2.0 * kparams;
        const double aicc_value = aic + 2.0 * kparams * (kparams + 1.0) / (rows - kparams - 1.0);
        if (aicc_value < best_aicc) {
            best_aicc = aicc_value;
            best_lag = k;
            best_tstat = fit.coef[1] / fit.std_err[1];
        }
    }
    if (!std::isfinite(best_aicc)) {
        throw EstimationError("adf_test: every candidate regression was degenerate");
    }

    UnitRootResult result;
    result.test_kind = UnitRootTest::adf;
    result.statistic = best_tstat;
    result.critical_value_5pct = -2.86;
    result.reject_null = best_tstat < result.critical_value_5pct;
    result.lags = best_lag;
    return result;
}

/// ADF with the usual rule-of-thumb cap 12*(n/100)^(1/4) on lags.
inline UnitRootResult adf_test(const TimeSeries& series) {
    const double n = static_cast<double>(series.size());
    const int max_lag = static_cast<int>(12.0 * std::pow(n / 100.0, 0.25));
    return adf_test(series, max_lag);
}

/**
 * KPSS level-stationarity test: partial sums of the demeaned series
 * scaled by a Newey-West long-run variance with Bartlett weights and
 * bandwidth floor(4 * (n/100)^(1/4)). Null = stationary; rejected when
 * the statistic exceeds the 5% critical value 0.463.
 */
inline UnitRootResult kpss_test(const TimeSeries& series) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    if (n < 20) throw SizeError("kpss_test: need at least 20 observations");
    detail::require_non_constant(y, "kpss_test");

    const double m = detail::mean(y);
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t) e[t] = y[t] - m;

    double cumulative = 0.0;
    double s2_sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        cumulative += e[t];
        s2_sum += cumulative * cumulative;
    }

    const int bandwidth = static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 0.25)));
    double lrv = 0.0;
    for (double v : e) lrv += v * v;
    lrv /= static_cast<double>(n);
    for (int l = 1; l <= bandwidth; ++l) {
        double gamma = 0.0;
        for (std::size_t t = l; t < n; ++t) gamma += e[t] * e[t - l];
        gamma /= static_cast<double>(n);
        lrv += 2.0 * (1.0 - l / (bandwidth + 1.0)) * gamma;
    }
    if (lrv <= 0.0) throw DomainError("kpss_test: non-positive long-run variance");

    UnitRootResult result;
    result.test_kind = UnitRootTest::kpss;
    result.statistic = s2_sum / (static_cast<double>(n) * static_cast<double>(n) * lrv);
    result.critical_value_5pct = 0.463;
    result.reject_null = result.statistic > result.critical_value_5pct;
    result.lags = bandwidth;
    return result;
}

/**
 * Differencing order for ARIMA: the smallest d <= max_d whose d-th
 * difference passes the KPSS stationarity test; max_d when none does.
 */
inline int ndiffs(const TimeSeries& series, int max_d = 2) {
    if (series.size() < 20) throw SizeError("ndiffs: need at least 20 observations");
    TimeSeries current = series;
    for (int d = 0; d <= max_d; ++d) {
        if (d > 0) current = difference(current, 1);
        bool rejects;
        try {
            rejects = kpss_test(current).reject_null;
        } catch (const DomainError&) {
            return d; // constant after differencing: trivially stationary
        }
        if (!rejects) return d;
    }
    return max_d;
}

} // namespace seriescast
