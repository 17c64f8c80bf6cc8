#pragma once

#include "seriescast/criteria.hpp"
#include "seriescast/detail/linalg.hpp"
#include "seriescast/detail/rng.hpp"
#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace seriescast {

enum class Activation { logistic, linear };

/// One trained single-hidden-layer network of the NNAR ensemble.
struct NnarNetwork {
    std::vector<double> hidden_weights; ///< k rows of p input weights, row-major
    std::vector<double> hidden_bias;    ///< k
    std::vector<double> output_weights; ///< k
    double output_bias = 0.0;
    std::vector<double> epoch_loss; ///< full-batch loss after each training epoch
};

/**
 * Neural network autoregression NNAR(p,k): an ensemble of identically
 * shaped single-hidden-layer networks mapping the last p observations
 * to the next one. The model prediction is the ensemble mean. Lag
 * index 0 is the most recent observation.
 */
struct NnarModel {
    int p = 1;
    int k = 1;
    Activation activation = Activation::logistic;
    std::vector<NnarNetwork> networks;
    std::vector<double> lag_center; ///< per-lag centering used at training
    std::vector<double> lag_scale;
    double target_center = 0.0;
    double target_scale = 1.0;
    double residual_sigma2 = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> residuals; ///< ensemble-mean in-sample errors (length n - p)
    std::vector<double> fitted;    ///< length n; first p entries NaN
    std::vector<double> last_window; ///< last p observations, most recent first
};

/// Neuron-count rule for non-seasonal inputs: round-half-to-even of
/// (p + 1) / 2, never below 1.
inline int hidden_neurons(int p) {
    if (p < 1) throw DomainError("hidden_neurons: p must be positive");
    const int doubled = p + 1; // the value 2 * ((p + P + 1) / 2) with P = 0
    if (doubled % 2 == 0) return std::max(1, doubled / 2);
    const int m = doubled / 2; // exact value is m + 0.5
    return std::max(1, m % 2 == 0 ? m : m + 1);
}

/**
 * Lag order by AICc of linear AR(p) regressions (OLS with intercept)
 * over 1 <= p <= max_p, all evaluated on the common sample that drops
 * the first max_p observations.
 */
inline int select_lags(const TimeSeries& series, int max_p = 10) {
    const auto& y = series.values();
    const int n = static_cast<int>(y.size());
    if (max_p < 1) throw DomainError("select_lags: max_p must be positive");
    if (n < max_p + 10) throw SizeError("select_lags: series too short for max_p");

    const int rows = n - max_p;
    double best = std::numeric_limits<double>::infinity();
    int best_p = 1;
    for (int p = 1; p <= max_p; ++p) {
        detail::Mat x(rows, p + 1);
        std::vector<double> rhs(rows);
        for (int i = 0; i < rows; ++i) {
            const int t = max_p + i;
            x(i, 0) = 1.0;
            for (int j = 0; j < p; ++j) x(i, 1 + j) = y[t - 1 - j];
            rhs[i] = y[t];
        }
        detail::LeastSquaresFit fit;
        try {
            fit = detail::least_squares(x, rhs);
        } catch (const std::runtime_error&) {
            continue;
        }
        const double sigma2 = fit.rss / rows;
        if (!(sigma2 > 0.0)) continue;
        const double loglik = -0.5 * rows * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
        const int k = p + 2; // coefficients + intercept + variance
        if (rows <= k + 1) continue;
        const double value = aicc(loglik, k, rows);
        if (value < best) {
            best = value;
            best_p = p;
        }
    }
    if (!std::isfinite(best)) {
        throw EstimationError("select_lags: all autoregressions were degenerate");
    }
    return best_p;
}

namespace detail {

inline double nnar_activate(Activation act, double a) {
    return act == Activation::logistic ? 1.0 / (1.0 + std::exp(-a)) : a;
}

/// Forward pass of one network on a standardized input row.
inline double nnar_forward(const NnarNetwork& net, Activation act, const double* x, int p, int k,
                           double* hidden_out = nullptr) {
    double o = net.output_bias;
    for (int j = 0; j < k; ++j) {
        double a = net.hidden_bias[j];
        const double* row = net.hidden_weights.data() + static_cast<std::size_t>(j) * p;
        for (int i = 0; i < p; ++i) a += row[i] * x[i];
        const double h = nnar_activate(act, a);
        if (hidden_out) hidden_out[j] = h;
        o += net.output_weights[j] * h;
    }
    return o;
}

} // namespace detail

/// Prediction of a single ensemble member on a raw-scale lag window
/// (most recent observation first). Exposed for diagnostics.
inline double network_prediction(const NnarModel& model, const NnarNetwork& net,
                                 const std::vector<double>& window) {
    std::vector<double> x(model.p);
    for (int i = 0; i < model.p; ++i) {
        x[i] = (window[i] - model.lag_center[i]) / model.lag_scale[i];
    }
    const double o = detail::nnar_forward(net, model.activation, x.data(), model.p, model.k);
    return o * model.target_scale + model.target_center;
}

/// Ensemble-mean prediction on a raw-scale lag window.
inline double ensemble_prediction(const NnarModel& model, const std::vector<double>& window) {
    double sum = 0.0;
    for (const auto& net : model.networks) sum += network_prediction(model, net, window);
    return sum / static_cast<double>(model.networks.size());
}

struct NnarOptions {
    int epochs = 2000;
    double learning_rate = 2.0; ///< base step; each epoch halves it until loss drops
    double lr_decay = 0.9995;   ///< geometric decay per epoch
    double init_half_range = 0.5; ///< weights start uniform on [-r, r]
};

/**
 * Trains the NNAR(p,k) ensemble: k from the neuron rule, inputs
 * standardized per lag, each replicate fitted by full-batch gradient
 * descent on squared error from its own seeded initialization. A step
 * that would increase the loss is retried at half the step size, so
 * recorded epoch losses are non-increasing.
 */
inline NnarModel fit_nnar(const TimeSeries& series, int p, int repeats = 20,
                          std::uint64_t seed = 1, const NnarOptions& options = {}) {
    const auto& y = series.values();
    const int n = static_cast<int>(y.size());
    if (p < 1) throw DomainError("fit_nnar: p must be positive");
    if (n < p + 10) throw SizeError("fit_nnar: series too short for p lags");
    if (repeats < 1) throw DomainError("fit_nnar: need at least one replicate");

    NnarModel model;
    model.p = p;
    model.k = hidden_neurons(p);
    model.seed = seed;

    const int rows = n - p;
    // lag matrix, most recent lag first
    std::vector<double> inputs(static_cast<std::size_t>(rows) * p);
    std::vector<double> targets(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = p + r;
        for (int i = 0; i < p; ++i) inputs[static_cast<std::size_t>(r) * p + i] = y[t - 1 - i];
        targets[r] = y[t];
    }

    model.lag_center.resize(p);
    model.lag_scale.resize(p);
    for (int i = 0; i < p; ++i) {
        double m = 0.0;
        for (int r = 0; r < rows; ++r) m += inputs[static_cast<std::size_t>(r) * p + i];
        m /= rows;
        double v = 0.0;
        for (int r = 0; r < rows; ++r) {
            const double d = inputs[static_cast<std::size_t>(r) * p + i] - m;
            v += d * d;
        }
        model.lag_center[i] = m;
        model.lag_scale[i] = v > 0.0 ? std::sqrt(v / rows) : 1.0;
    }
    model.target_center = detail::mean(targets);
    {
        const double v = detail::variance(targets);
        model.target_scale = v > 0.0 ? std::sqrt(v) : 1.0;
    }
    for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < p; ++i) {
            auto& cell = inputs[static_cast<std::size_t>(r) * p + i];
            cell = (cell - model.lag_center[i]) / model.lag_scale[i];
        }
        targets[r] = (targets[r] - model.target_center) / model.target_scale;
    }

    const int k = model.k;
    const int n_weights = k * p + k + k + 1;
    detail::Rng root(seed);

    for (int rep = 0; rep < repeats; ++rep) {
        detail::Rng rng = root.stream(static_cast<std::uint64_t>(rep));
        NnarNetwork net;
        net.hidden_weights.resize(static_cast<std::size_t>(k) * p);
        net.hidden_bias.resize(k);
        net.output_weights.resize(k);
        const double r0 = options.init_half_range;
        for (auto& w : net.hidden_weights) w = rng.uniform(-r0, r0);
        for (auto& w : net.hidden_bias) w = rng.uniform(-r0, r0);
        for (auto& w : net.output_weights) w = rng.uniform(-r0, r0);
        net.output_bias = rng.uniform(-r0, r0);

        // flattened parameter view for the update step
        const auto loss_of = [&](const NnarNetwork& candidate) {
            double sse = 0.0;
            for (int r = 0; r < rows; ++r) {
                const double o = detail::nnar_forward(candidate, Activation::logistic,
                                                      inputs.data() + static_cast<std::size_t>(r) * p,
                                                      p, k);
                const double e = o - targets[r];
                sse += e * e;
            }
            return 0.5 * sse / rows;
        };

        std::vector<double> grad(n_weights);
        std::vector<double> hidden(k);
        double loss = loss_of(net);
        if (!std::isfinite(loss)) {
            throw EstimationError("fit_nnar: non-finite loss in replicate " + std::to_string(rep));
        }
        double lr = options.learning_rate;
        net.epoch_loss.reserve(options.epochs);

        for (int epoch = 0; epoch < options.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            for (int r = 0; r < rows; ++r) {
                const double* x = inputs.data() + static_cast<std::size_t>(r) * p;
                const double o = detail::nnar_forward(net, Activation::logistic, x, p, k,
                                                      hidden.data());
                const double err = (o - targets[r]) / rows;
                grad[k * p + k + k] += err; // output bias
                for (int j = 0; j < k; ++j) {
                    grad[k * p + k + j] += err * hidden[j]; // output weights
                    const double da = err * net.output_weights[j] * hidden[j] * (1.0 - hidden[j]);
                    grad[k * p + j] += da; // hidden bias
                    for (int i = 0; i < p; ++i) grad[j * p + i] += da * x[i];
                }
            }

            double step = lr;
            NnarNetwork trial = net;
            double trial_loss = loss;
            for (int halving = 0; halving < 40; ++halving) {
                for (int j = 0; j < k; ++j) {
                    for (int i = 0; i < p; ++i) {
                        trial.hidden_weights[static_cast<std::size_t>(j) * p + i] =
                            net.hidden_weights[static_cast<std::size_t>(j) * p + i] -
                            step * grad[j * p + i];
                    }
                    trial.hidden_bias[j] = net.hidden_bias[j] - step * grad[k * p + j];
                    trial.output_weights[j] = net.output_weights[j] - step * grad[k * p + k + j];
                }
                trial.output_bias = net.output_bias - step * grad[k * p + k + k];
                trial_loss = loss_of(trial);
                if (std::isfinite(trial_loss) && trial_loss <= loss) break;
                step *= 0.5;
                trial_loss = loss;
            }
            if (trial_loss <= loss) {
                std::swap(net.hidden_weights, trial.hidden_weights);
                std::swap(net.hidden_bias, trial.hidden_bias);
                std::swap(net.output_weights, trial.output_weights);
                net.output_bias = trial.output_bias;
                loss = trial_loss;
            }
            net.epoch_loss.push_back(loss);
            lr *= options.lr_decay;
        }
        if (!std::isfinite(loss)) {
            throw EstimationError("fit_nnar: training diverged in replicate " + std::to_string(rep));
        }
        model.networks.push_back(std::move(net));
    }

    // ensemble-mean in-sample errors on the raw scale
    model.residuals.resize(rows);
    model.fitted.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> window(p);
    for (int r = 0; r < rows; ++r) {
        const int t = p + r;
        for (int i = 0; i < p; ++i) window[i] = y[t - 1 - i];
        const double pred = ensemble_prediction(model, window);
        model.fitted[t] = pred;
        model.residuals[r] = y[t] - pred;
    }
    model.residual_sigma2 = detail::variance(model.residuals);
    model.last_window.resize(p);
    for (int i = 0; i < p; ++i) model.last_window[i] = y[n - 1 - i];
    return model;
}

/// Iterated point forecast: each step feeds the ensemble-mean
/// prediction back in as the newest lag.
inline std::vector<double> forecast_nnar(const NnarModel& model, int h) {
    if (h < 1) throw DomainError("forecast_nnar: horizon must be positive");
    std::vector<double> window = model.last_window;
    std::vector<double> out(h);
    for (int s = 0; s < h; ++s) {
        const double pred = ensemble_prediction(model, window);
        out[s] = pred;
        window.insert(window.begin(), pred);
        window.pop_back();
    }
    return out;
}

/**
 * Simulation-based prediction intervals: paths iterate the ensemble
 * with iid Gaussian(0, residual_sigma2) innovations added at each
 * step; bands are empirical quantiles. The point path is the
 * noise-free forecast, and bands are widened if needed to contain it.
 */
inline Forecast nnar_intervals(const NnarModel& model, int h, int npaths,
                               const std::vector<double>& levels, std::uint64_t seed) {
    if (h < 1) throw DomainError("nnar_intervals: horizon must be positive");
    if (npaths < 100) throw DomainError("nnar_intervals: need at least 100 paths");
    for (double lv : levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw DomainError("nnar_intervals: level outside (0,1)");
    }

    Forecast forecast;
    forecast.horizon = h;
    forecast.points = forecast_nnar(model, h);
    forecast.origin = 0; // caller-aligned; the model has no date context

    const double noise_sd = std::sqrt(std::max(0.0, model.residual_sigma2));
    std::vector<std::vector<double>> samples(h, std::vector<double>(npaths));
    detail::Rng root(seed);
    std::vector<double> window(model.p);
    for (int path = 0; path < npaths; ++path) {
        detail::Rng rng = root.stream(static_cast<std::uint64_t>(path));
        window = model.last_window;
        for (int s = 0; s < h; ++s) {
            const double value = ensemble_prediction(model, window) + noise_sd * rng.normal();
            samples[s][path] = value;
            window.insert(window.begin(), value);
            window.pop_back();
        }
    }

    for (double lv : levels) {
        IntervalBand band;
        band.lower.resize(h);
        band.upper.resize(h);
        for (int s = 0; s < h; ++s) {
            band.lower[s] =
                std::min(detail::sample_quantile(samples[s], 0.5 - lv / 2.0), forecast.points[s]);
            band.upper[s] =
                std::max(detail::sample_quantile(samples[s], 0.5 + lv / 2.0), forecast.points[s]);
        }
        forecast.intervals[lv] = std::move(band);
    }
    return forecast;
}

} // namespace seriescast
