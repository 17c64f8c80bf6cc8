#pragma once

#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace seriescast {

/// Sample autocorrelation at the given lag, biased (1/n) normalization.
inline double acf(const std::vector<double>& values, int lag) {
    const std::size_t n = values.size();
    if (lag <= 0) throw DomainError("acf: lag must be positive");
    if (n <= static_cast<std::size_t>(lag)) throw SizeError("acf: series length must exceed lag");

    const double m = detail::mean(values);
    double denom = 0.0;
    for (double v : values) denom += (v - m) * (v - m);
    if (denom <= 0.0) throw DomainError("acf: series has zero variance");

    double num = 0.0;
    for (std::size_t t = static_cast<std::size_t>(lag); t < n; ++t) {
        num += (values[t] - m) * (values[t - lag] - m);
    }
    return num / denom;
}

inline double acf(const TimeSeries& series, int lag) { return acf(series.values(), lag); }

/**
 * The forecast-accuracy suite: MAE, MAPE (percent), MASE (scaled by
 * the training set's one-step naive MAE), RMSE, lag-1 residual
 * autocorrelation, and Theil's U (RMSE ratio against the no-change
 * forecast over the same actuals).
 */
struct AccuracyReport {
    double mae = 0.0;
    double mape = 0.0;
    double mase = 0.0;
    double rmse = 0.0;
    double acf1 = 0.0;
    double theils_u = 0.0;
};

inline AccuracyReport accuracy(const std::vector<double>& actual,
                               const std::vector<double>& predicted,
                               const std::vector<double>& training) {
    const std::size_t m = actual.size();
    if (m == 0 || predicted.size() != m) {
        throw SizeError("accuracy: actual and predicted must have equal positive length");
    }
    if (training.size() < 2) {
        throw SizeError("accuracy: training needs at least 2 points for MASE scaling");
    }

    double abs_sum = 0.0, pct_sum = 0.0, sq_sum = 0.0;
    std::vector<double> errors(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double e = actual[i] - predicted[i];
        errors[i] = e;
        abs_sum += std::fabs(e);
        sq_sum += e * e;
        if (actual[i] == 0.0) throw DomainError("accuracy: zero actual value breaks MAPE");
        pct_sum += std::fabs(e / actual[i]);
    }

    AccuracyReport report;
    report.mae = abs_sum / static_cast<double>(m);
    report.mape = 100.0 * pct_sum / static_cast<double>(m);
    report.rmse = std::sqrt(sq_sum / static_cast<double>(m));

    double naive_abs = 0.0;
    for (std::size_t t = 1; t < training.size(); ++t) {
        naive_abs += std::fabs(training[t] - training[t - 1]);
    }
    naive_abs /= static_cast<double>(training.size() - 1);
    if (naive_abs == 0.0) throw DomainError("accuracy: constant training set breaks MASE scaling");
    report.mase = report.mae / naive_abs;

    // residual lag-1 autocorrelation; 0 when residuals are degenerate
    try {
        report.acf1 = m > 1 ? acf(errors, 1) : 0.0;
    } catch (const DomainError&) {
        report.acf1 = 0.0;
    }

    // Theil's U over the indices where a previous actual exists
    if (m > 1) {
        double model_sq = 0.0, naive_sq = 0.0;
        for (std::size_t i = 1; i < m; ++i) {
            model_sq += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
            naive_sq += (actual[i] - actual[i - 1]) * (actual[i] - actual[i - 1]);
        }
        report.theils_u =
            naive_sq > 0.0 ? std::sqrt(model_sq / naive_sq) : std::numeric_limits<double>::quiet_NaN();
    } else {
        report.theils_u = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

inline AccuracyReport accuracy(const std::vector<double>& actual,
                               const std::vector<double>& predicted,
                               const TimeSeries& training) {
    return accuracy(actual, predicted, training.values());
}

/// Headline accuracy figure: 100 - MAPE, in percent.
inline double forecast_accuracy_pct(const AccuracyReport& report) { return 100.0 - report.mape; }

} // namespace seriescast
