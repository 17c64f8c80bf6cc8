#pragma once

#include "seriescast/criteria.hpp"
#include "seriescast/detail/optim.hpp"
#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace seriescast {

enum class EtsTrend { none, additive };

/// Additive-error exponential smoothing specification. Damping implies
/// an additive trend.
struct EtsSpec {
    EtsTrend trend = EtsTrend::none;
    bool damped = false;

    bool operator==(const EtsSpec&) const = default;

    std::string to_string() const {
        if (trend == EtsTrend::none) return "(A,N,N)";
        return damped ? "(A,Ad,N)" : "(A,A,N)";
    }
};

/**
 * Fitted innovations state-space exponential smoothing model. The
 * recursion is
 *   prediction  y^_t = l_{t-1} + damping * b_{t-1}
 *   level       l_t  = l_{t-1} + damping * b_{t-1} + alpha * e_t
 *   trend       b_t  = damping * b_{t-1} + beta * e_t
 * with e_t = y_t - y^_t, and trend terms dropped for (A,N,N).
 */
struct EtsModel {
    EtsSpec spec;
    double alpha = 0.5;
    double beta = 0.0;
    double damping = 1.0; ///< 1 when the trend is undamped or absent
    double initial_level = 0.0;
    double initial_trend = 0.0;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aicc = 0.0;
    std::vector<double> level_path;
    std::vector<double> trend_path;
    std::vector<double> residuals;
    bool converged = true;

    double final_level() const { return level_path.empty() ? initial_level : level_path.back(); }
    double final_trend() const { return trend_path.empty() ? initial_trend : trend_path.back(); }
    int n_params() const {
        const bool trended = spec.trend == EtsTrend::additive;
        int k = 1 + 1 + 1; // alpha + initial level + variance
        if (trended) k += 2; // beta + initial trend
        if (spec.damped) k += 1;
        return k;
    }
};

namespace detail {

struct EtsRun {
    double sse = 0.0;
    bool ok = false;
};

inline EtsRun ets_filter(const std::vector<double>& y, const EtsSpec& spec, double alpha,
                         double beta, double damping, double l0, double b0,
                         std::vector<double>* residuals, std::vector<double>* levels,
                         std::vector<double>* trends) {
    const bool trended = spec.trend == EtsTrend::additive;
    EtsRun run;
    double level = l0;
    double trend = trended ? b0 : 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double pred = level + (trended ? damping * trend : 0.0);
        const double e = y[t] - pred;
        const double new_level = pred + alpha * e;
        const double new_trend = trended ? damping * trend + beta * e : 0.0;
        run.sse += e * e;
        if (!std::isfinite(run.sse)) return run;
        level = new_level;
        trend = new_trend;
        if (residuals) (*residuals)[t] = e;
        if (levels) (*levels)[t] = level;
        if (trends) (*trends)[t] = trend;
    }
    run.ok = true;
    return run;
}

} // namespace detail

struct EtsOptions {
    int max_iterations = 500;
    double tolerance = 1e-8;
    double alpha_min = 1e-4;
    double alpha_max = 0.9999;
    double damping_min = 0.80;
    double damping_max = 0.98;
};

/**
 * Maximum-likelihood fit of one ETS specification. Smoothing
 * parameters and initial states are estimated jointly by Nelder-Mead
 * from five deterministic starting points; the best likelihood wins.
 */
inline EtsModel fit_ets(const TimeSeries& series, EtsSpec spec, const EtsOptions& options = {}) {
    const auto& y = series.values();
    const std::size_t n = y.size();
    if (n < 10) throw SizeError("fit_ets: need at least 10 observations");
    if (spec.damped && spec.trend != EtsTrend::additive) {
        throw DomainError("fit_ets: damping requires an additive trend");
    }

    const bool trended = spec.trend == EtsTrend::additive;
    const double l0_guess = y[0];
    const double b0_guess = n >= 4 ? (y[3] - y[0]) / 3.0 : y[1] - y[0];

    // parameter layout: alpha [, beta][, damping], l0 [, b0]
    const auto pack_size = [&] {
        std::size_t k = 2; // alpha + l0
        if (trended) k += 2;
        if (spec.damped) k += 1;
        return k;
    }();

    const auto unpack = [&](const std::vector<double>& x, double& alpha, double& beta,
                            double& damping, double& l0, double& b0) {
        std::size_t i = 0;
        alpha = x[i++];
        beta = trended ? x[i++] : 0.0;
        damping = spec.damped ? x[i++] : 1.0;
        l0 = x[i++];
        b0 = trended ? x[i++] : 0.0;
    };

    const auto objective = [&](const std::vector<double>& x) {
        double alpha, beta, damping, l0, b0;
        unpack(x, alpha, beta, damping, l0, b0);
        if (alpha < options.alpha_min || alpha > options.alpha_max) {
            return std::numeric_limits<double>::infinity();
        }
        if (trended && (beta < 1e-4 || beta > alpha)) {
            return std::numeric_limits<double>::infinity();
        }
        if (spec.damped && (damping < options.damping_min || damping > options.damping_max)) {
            return std::numeric_limits<double>::infinity();
        }
        const auto run = detail::ets_filter(y, spec, alpha, beta, damping, l0, b0, nullptr,
                                            nullptr, nullptr);
        if (!run.ok || run.sse <= 0.0) return std::numeric_limits<double>::infinity();
        return static_cast<double>(n) * std::log(run.sse / static_cast<double>(n));
    };

    struct Start {
        double alpha, beta_frac, damping;
    };
    static constexpr Start starts[5] = {{0.5, 0.2, 0.90},
                                        {0.9, 0.4, 0.95},
                                        {0.1, 0.1, 0.85},
                                        {0.98, 0.6, 0.975},
                                        {0.3, 0.05, 0.92}};

    detail::NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        std::vector<double> x0;
        x0.push_back(start.alpha);
        if (trended) x0.push_back(start.beta_frac * start.alpha);
        if (spec.damped) x0.push_back(start.damping);
        x0.push_back(l0_guess);
        if (trended) x0.push_back(b0_guess);

        detail::NelderMeadOptions nm;
        nm.max_iterations = options.max_iterations;
        nm.tolerance = options.tolerance;
        nm.initial_step.assign(pack_size, 0.05);
        nm.initial_step[pack_size - (trended ? 2 : 1)] = std::max(1.0, 0.1 * std::fabs(l0_guess));
        if (trended) nm.initial_step.back() = std::max(0.5, 0.2 * std::fabs(b0_guess));

        const auto result = detail::nelder_mead(objective, x0, nm);
        if (result.value < best.value) best = result;
    }
    if (!std::isfinite(best.value)) {
        throw EstimationError("fit_ets: no admissible parameters found for " + spec.to_string());
    }

    EtsModel model;
    model.spec = spec;
    double alpha, beta, damping, l0, b0;
    unpack(best.x, alpha, beta, damping, l0, b0);
    model.alpha = alpha;
    model.beta = beta;
    model.damping = damping;
    model.initial_level = l0;
    model.initial_trend = b0;
    model.converged = best.converged;

    model.residuals.resize(n);
    model.level_path.resize(n);
    model.trend_path.resize(n);
    detail::ets_filter(y, spec, alpha, beta, damping, l0, b0, &model.residuals,
                       &model.level_path, &model.trend_path);
    double sse = 0.0;
    for (double e : model.residuals) sse += e * e;
    model.sigma2 = sse / static_cast<double>(n);
    model.loglik =
        -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * model.sigma2) + 1.0);
    model.aicc = aicc(model.loglik, model.n_params(), static_cast<int>(n));
    return model;
}

/// Fits (A,N,N), (A,A,N) and (A,Ad,N) and keeps the AICc minimum.
inline EtsModel auto_ets(const TimeSeries& series, const EtsOptions& options = {}) {
    const EtsSpec candidates[3] = {{EtsTrend::none, false},
                                   {EtsTrend::additive, false},
                                   {EtsTrend::additive, true}};
    EtsModel best;
    bool have = false;
    for (const auto& spec : candidates) {
        try {
            EtsModel model = fit_ets(series, spec, options);
            if (!have || model.aicc < best.aicc) {
                best = std::move(model);
                have = true;
            }
        } catch (const std::runtime_error&) {
            continue;
        }
    }
    if (!have) throw EstimationError("auto_ets: every candidate specification failed");
    return best;
}

/// One-step in-sample predictions, aligned with the training series.
inline std::vector<double> fitted_values(const EtsModel& model) {
    std::vector<double> fitted(model.residuals.size());
    double level = model.initial_level;
    double trend = model.initial_trend;
    const bool trended = model.spec.trend == EtsTrend::additive;
    for (std::size_t t = 0; t < fitted.size(); ++t) {
        fitted[t] = level + (trended ? model.damping * trend : 0.0);
        level = model.level_path[t];
        trend = model.trend_path[t];
    }
    return fitted;
}

/**
 * Forecast with the analytic linear-model variance: the h-step mean
 * comes from iterating the transition matrix, the variance from the
 * cumulative squared innovation weights of the state recursion.
 */
inline Forecast forecast_ets(const EtsModel& model, int h, const std::vector<double>& levels) {
    if (h < 1) throw DomainError("forecast_ets: horizon must be positive");
    for (double lv : levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw DomainError("forecast_ets: level outside (0,1)");
    }
    const bool trended = model.spec.trend == EtsTrend::additive;
    const double rho = model.damping;

    Forecast forecast;
    forecast.origin = model.residuals.empty() ? 0 : model.residuals.size() - 1;
    forecast.horizon = h;
    forecast.points.resize(h);
    std::vector<double> sd(h);

    // state (l, b), transition F = [[1, rho], [0, rho]], weights w = (1, rho)
    double sl = model.final_level();
    double sb = trended ? model.final_trend() : 0.0;
    // innovation loading g = (alpha, beta)
    double gl = model.alpha;
    double gb = trended ? model.beta : 0.0;

    double cum_var = 0.0;
    for (int step = 0; step < h; ++step) {
        forecast.points[step] = sl + (trended ? rho * sb : 0.0);
        sd[step] = std::sqrt(std::max(0.0, model.sigma2) * (1.0 + cum_var));
        // advance the mean state and the innovation weight c_j = w' F^{j-1} g
        const double new_sl = sl + (trended ? rho * sb : 0.0);
        const double new_sb = trended ? rho * sb : 0.0;
        sl = new_sl;
        sb = new_sb;
        const double c = gl + (trended ? rho * gb : 0.0);
        cum_var += c * c;
        const double new_gl = gl + (trended ? rho * gb : 0.0);
        const double new_gb = trended ? rho * gb : 0.0;
        gl = new_gl;
        gb = new_gb;
    }

    for (double lv : levels) {
        const double z = detail::normal_quantile(0.5 + lv / 2.0);
        IntervalBand band;
        band.lower.resize(h);
        band.upper.resize(h);
        for (int s = 0; s < h; ++s) {
            band.lower[s] = forecast.points[s] - z * sd[s];
            band.upper[s] = forecast.points[s] + z * sd[s];
        }
        forecast.intervals[lv] = std::move(band);
    }
    return forecast;
}

} // namespace seriescast
