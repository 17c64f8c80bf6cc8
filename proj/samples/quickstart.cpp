// Minimal library walkthrough: simulate a trending series, fit the
// three model families and a hybrid, and print 7-day forecasts.

#include "seriescast/seriescast.hpp"

#include <cstdio>
#include <vector>

int main() {
    using namespace seriescast;

    // a noisy upward-curving series
    detail::Rng rng(7);
    std::vector<double> values;
    for (int t = 0; t < 120; ++t) {
        values.push_back(50.0 + 0.8 * t + 0.01 * t * t + 2.0 * rng.normal());
    }
    const TimeSeries series(Date{2020, 1, 1}, values);

    const ArimaModel arima = auto_arima(series);
    std::printf("ARIMA %s  aicc=%.2f\n", arima.order.to_string().c_str(), arima.aicc);

    const EtsModel ets = auto_ets(series);
    std::printf("ETS %s  alpha=%.3f  aicc=%.2f\n", ets.spec.to_string().c_str(), ets.alpha,
                ets.aicc);

    const int p = select_lags(series);
    const NnarModel nnar = fit_nnar(series, p, 20, 42);
    std::printf("NNAR (%d,%d)\n", nnar.p, nnar.k);

    const HybridEnsemble hybrid =
        fit_hybrid(series, {{ComponentKind::arima}, {ComponentKind::ets}, {ComponentKind::nnar}},
                   42);
    std::printf("hybrid lambda=%.3f weights:", hybrid.lambda);
    for (const auto& c : hybrid.components) std::printf(" %.3f", c.weight);
    std::printf("\n");

    const Forecast forecast = forecast_hybrid(hybrid, 7, {0.80, 0.95});
    const auto& band = forecast.intervals.at(0.95);
    std::printf("hybrid 7-day forecast (95%% band):\n");
    for (int s = 0; s < forecast.horizon; ++s) {
        std::printf("  %s  %8.2f  [%8.2f, %8.2f]\n",
                    series.end_date().plus_days(s + 1).to_string().c_str(), forecast.points[s],
                    band.lower[s], band.upper[s]);
    }
    return 0;
}
