#pragma once

#include "seriescast/arima.hpp"
#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/ets.hpp"
#include "seriescast/metrics.hpp"
#include "seriescast/nnar.hpp"
#include "seriescast/time_series.hpp"
#include "seriescast/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace seriescast {

enum class ComponentKind { arima, ets, nnar };

inline std::string to_string(ComponentKind kind) {
    switch (kind) {
    case ComponentKind::arima: return "ARIMA";
    case ComponentKind::ets: return "ETS";
    default: return "NNAR";
    }
}

/// Requests one auto-selected component of the given family.
struct ComponentSpec {
    ComponentKind kind = ComponentKind::arima;
};

using ComponentModel = std::variant<ArimaModel, EtsModel, NnarModel>;

struct HybridComponent {
    ComponentKind kind = ComponentKind::arima;
    ComponentModel model;
    double cv_rmse = 0.0;
    double weight = 0.0;
};

/**
 * Cross-validation-weighted forecast combination. All components are
 * fitted on the Box-Cox transformed series that lambda describes;
 * weights are nonnegative and sum to one.
 */
struct HybridEnsemble {
    std::vector<HybridComponent> components;
    double lambda = 1.0;
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
};

struct HybridOptions {
    double min_train_fraction = 0.7;
    int cv_horizon = 1;
    int origin_stride = 0; ///< 0 = every 3rd origin when n > 150, else every origin
    int nnar_repeats = 20;
    int interval_paths = 1000;
    int nnar_max_p = 10;
};

/// Forecaster used by cross-validation: fit on the prefix, return
/// `horizon` point forecasts.
using FitForecastFn = std::function<std::vector<double>(const TimeSeries& train, int horizon)>;

/**
 * Rolling-origin cross-validation error. For each kept origin t
 * (prefix length), the forecaster is refitted on the first t
 * observations and its horizon-step-ahead error is recorded; the
 * returned value is the RMSE over all recorded errors. Failed folds
 * are skipped unless they exceed half of the folds.
 */
inline double cv_rmse(const TimeSeries& series, int min_train, int horizon,
                      const FitForecastFn& fit_forecast, int origin_stride = 1) {
    const int n = static_cast<int>(series.size());
    if (horizon < 1) throw DomainError("cv_rmse: horizon must be positive");
    if (min_train < 2) throw DomainError("cv_rmse: min_train must be at least 2");
    if (n < min_train + horizon + 5) throw SizeError("cv_rmse: series too short for the scheme");
    if (origin_stride < 1) throw DomainError("cv_rmse: origin_stride must be positive");

    double sq_sum = 0.0;
    int recorded = 0;
    int failed = 0;
    int folds = 0;
    for (int t = min_train; t <= n - horizon; t += origin_stride) {
        ++folds;
        try {
            const auto points = fit_forecast(series.head(static_cast<std::size_t>(t)), horizon);
            if (static_cast<int>(points.size()) < horizon || !std::isfinite(points[horizon - 1])) {
                ++failed;
                continue;
            }
            const double e = series[static_cast<std::size_t>(t + horizon - 1)] - points[horizon - 1];
            sq_sum += e * e;
            ++recorded;
        } catch (const std::runtime_error&) {
            ++failed;
        }
    }
    if (recorded == 0 || failed * 2 > folds) {
        throw EstimationError("cv_rmse: more than half of the folds failed");
    }
    return std::sqrt(sq_sum / recorded);
}

/// Inverse-error weights: w_i = (1/e_i) / sum_j (1/e_j). Components
/// with zero error share the whole weight equally.
inline std::vector<double> compute_weights(const std::vector<double>& cv_errors) {
    if (cv_errors.empty()) throw SizeError("compute_weights: no errors given");
    int zeros = 0;
    for (double e : cv_errors) {
        if (e < 0.0) throw DomainError("compute_weights: negative error");
        if (e == 0.0) ++zeros;
    }
    std::vector<double> weights(cv_errors.size(), 0.0);
    if (zeros > 0) {
        for (std::size_t i = 0; i < cv_errors.size(); ++i) {
            if (cv_errors[i] == 0.0) weights[i] = 1.0 / zeros;
        }
        return weights;
    }
    double total = 0.0;
    for (double e : cv_errors) total += 1.0 / e;
    for (std::size_t i = 0; i < cv_errors.size(); ++i) weights[i] = (1.0 / cv_errors[i]) / total;
    return weights;
}

namespace detail {

inline std::uint64_t fold_seed(std::uint64_t seed, std::size_t train_size) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (train_size + 17));
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

/// Cross-validation refits reuse the structure already selected on the
/// full series (order / spec / lag count); only parameters are re-estimated.
inline FitForecastFn component_cv_forecaster(const HybridComponent& component,
                                             std::uint64_t seed, const HybridOptions& options) {
    if (std::holds_alternative<ArimaModel>(component.model)) {
        const auto& fitted = std::get<ArimaModel>(component.model);
        const ArimaOrder order = fitted.order;
        const bool with_mean = fitted.include_mean;
        return [order, with_mean](const TimeSeries& train, int horizon) {
            ArimaOptions fit_options;
            fit_options.include_mean = with_mean;
            const ArimaModel model = fit_arima(train, order, fit_options);
            return forecast_arima(model, horizon, {}).points;
        };
    }
    if (std::holds_alternative<EtsModel>(component.model)) {
        const EtsSpec spec = std::get<EtsModel>(component.model).spec;
        return [spec](const TimeSeries& train, int horizon) {
            const EtsModel model = fit_ets(train, spec);
            return forecast_ets(model, horizon, {}).points;
        };
    }
    const auto& fitted = std::get<NnarModel>(component.model);
    const int p = fitted.p;
    const int repeats = options.nnar_repeats;
    return [p, repeats, seed](const TimeSeries& train, int horizon) {
        const NnarModel model = fit_nnar(train, p, repeats, fold_seed(seed, train.size()));
        return forecast_nnar(model, horizon);
    };
}

} // namespace detail

/**
 * Fits one auto-selected component family on the Box-Cox transformed
 * series; structure selection happens here, once.
 */
inline HybridComponent fit_component(const TimeSeries& transformed, ComponentSpec spec,
                                     std::uint64_t seed, const HybridOptions& options = {}) {
    HybridComponent component;
    component.kind = spec.kind;
    switch (spec.kind) {
    case ComponentKind::arima:
        component.model = auto_arima(transformed);
        break;
    case ComponentKind::ets:
        component.model = auto_ets(transformed);
        break;
    case ComponentKind::nnar: {
        const int p = select_lags(transformed, options.nnar_max_p);
        component.model = fit_nnar(transformed, p, options.nnar_repeats, seed);
        break;
    }
    }
    return component;
}

/// Cross-validation RMSE of one auto-selected component family on the
/// given series (structure chosen on the full series, then refits).
inline double cv_rmse(ComponentSpec spec, const TimeSeries& series, int min_train,
                      int horizon = 1, std::uint64_t seed = 1, const HybridOptions& options = {}) {
    HybridComponent component = fit_component(series, spec, seed, options);
    int stride = options.origin_stride;
    if (stride == 0) stride = series.size() > 150 ? 3 : 1;
    return cv_rmse(series, min_train, horizon,
                   detail::component_cv_forecaster(component, seed, options), stride);
}

/**
 * Builds a hybrid ensemble: one shared Guerrero lambda, auto-selected
 * components on the transformed inputs, rolling-origin CV errors on
 * the same origin set for every component, inverse-error weights.
 */
inline HybridEnsemble fit_hybrid(const TimeSeries& series, const std::vector<ComponentSpec>& specs,
                                 std::uint64_t seed, const HybridOptions& options = {}) {
    if (specs.size() < 2) throw DomainError("fit_hybrid: need at least two component kinds");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::size_t j = i + 1; j < specs.size(); ++j) {
            if (specs[i].kind == specs[j].kind) {
                throw DomainError("fit_hybrid: duplicate component kind " +
                                  to_string(specs[i].kind));
            }
        }
    }

    HybridEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.train_size = series.size();
    ensemble.lambda = guerrero_lambda(series);
    const TimeSeries transformed = box_cox(series, ensemble.lambda);

    const int n = static_cast<int>(series.size());
    const int min_train = std::max(
        10, static_cast<int>(std::lround(options.min_train_fraction * static_cast<double>(n))));
    int stride = options.origin_stride;
    if (stride == 0) stride = n > 150 ? 3 : 1;

    std::vector<double> errors;
    for (std::size_t idx = 0; idx < specs.size(); ++idx) {
        const std::uint64_t component_seed = detail::fold_seed(seed, 1000 + idx);
        HybridComponent component;
        try {
            component = fit_component(transformed, specs[idx], component_seed, options);
        } catch (const std::runtime_error& err) {
            throw EstimationError("fit_hybrid: " + to_string(specs[idx].kind) +
                                  " component failed: " + err.what());
        }
        component.cv_rmse =
            cv_rmse(transformed, min_train, options.cv_horizon,
                    detail::component_cv_forecaster(component, component_seed, options), stride);
        errors.push_back(component.cv_rmse);
        ensemble.components.push_back(std::move(component));
    }

    const auto weights = compute_weights(errors);
    for (std::size_t i = 0; i < weights.size(); ++i) ensemble.components[i].weight = weights[i];
    return ensemble;
}

namespace detail {

inline Forecast component_forecast(const HybridComponent& component, int h,
                                   const std::vector<double>& levels, std::uint64_t seed,
                                   int interval_paths) {
    if (std::holds_alternative<ArimaModel>(component.model)) {
        return forecast_arima(std::get<ArimaModel>(component.model), h, levels);
    }
    if (std::holds_alternative<EtsModel>(component.model)) {
        return forecast_ets(std::get<EtsModel>(component.model), h, levels);
    }
    return nnar_intervals(std::get<NnarModel>(component.model), h, interval_paths, levels, seed);
}

inline std::vector<double> component_fitted(const HybridComponent& component) {
    if (std::holds_alternative<ArimaModel>(component.model)) {
        return fitted_values(std::get<ArimaModel>(component.model));
    }
    if (std::holds_alternative<EtsModel>(component.model)) {
        return fitted_values(std::get<EtsModel>(component.model));
    }
    return std::get<NnarModel>(component.model).fitted;
}

} // namespace detail

/**
 * Combined forecast: weighted component points on the transformed
 * scale, envelope (widest) interval bands, everything mapped back
 * through the inverse Box-Cox transform.
 */
inline Forecast forecast_hybrid(const HybridEnsemble& ensemble, int h,
                                const std::vector<double>& levels,
                                const HybridOptions& options = {}) {
    if (ensemble.components.empty()) throw SizeError("forecast_hybrid: empty ensemble");
    if (h < 1) throw DomainError("forecast_hybrid: horizon must be positive");

    std::vector<Forecast> parts;
    parts.reserve(ensemble.components.size());
    for (std::size_t i = 0; i < ensemble.components.size(); ++i) {
        parts.push_back(detail::component_forecast(ensemble.components[i], h, levels,
                                                   detail::fold_seed(ensemble.seed, 5000 + i),
                                                   options.interval_paths));
    }

    Forecast combined;
    combined.origin = ensemble.train_size == 0 ? 0 : ensemble.train_size - 1;
    combined.horizon = h;
    combined.points.assign(h, 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const double w = ensemble.components[i].weight;
        for (int s = 0; s < h; ++s) combined.points[s] += w * parts[i].points[s];
    }

    for (double lv : levels) {
        IntervalBand band;
        band.lower.assign(h, std::numeric_limits<double>::infinity());
        band.upper.assign(h, -std::numeric_limits<double>::infinity());
        for (const auto& part : parts) {
            const auto& pb = part.intervals.at(lv);
            for (int s = 0; s < h; ++s) {
                band.lower[s] = std::min(band.lower[s], pb.lower[s]);
                band.upper[s] = std::max(band.upper[s], pb.upper[s]);
            }
        }
        combined.intervals[lv] = std::move(band);
    }

    // back to the data scale
    for (double& v : combined.points) v = detail::inv_box_cox_clamped(v, ensemble.lambda);
    for (auto& [lv, band] : combined.intervals) {
        for (double& v : band.lower) v = detail::inv_box_cox_clamped(v, ensemble.lambda);
        for (double& v : band.upper) v = detail::inv_box_cox_clamped(v, ensemble.lambda);
    }
    return combined;
}

/// Combined one-step in-sample predictions on the data scale; entries
/// where any component is undefined are NaN.
inline std::vector<double> hybrid_fitted(const HybridEnsemble& ensemble) {
    if (ensemble.components.empty()) throw SizeError("hybrid_fitted: empty ensemble");
    std::vector<std::vector<double>> parts;
    for (const auto& component : ensemble.components) {
        parts.push_back(detail::component_fitted(component));
    }
    const std::size_t n = parts.front().size();
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = 0; t < n; ++t) {
        double sum = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (t >= parts[i].size() || !std::isfinite(parts[i][t])) {
                ok = false;
                break;
            }
            sum += ensemble.components[i].weight * parts[i][t];
        }
        if (ok) out[t] = detail::inv_box_cox_clamped(sum, ensemble.lambda);
    }
    return out;
}

} // namespace seriescast
