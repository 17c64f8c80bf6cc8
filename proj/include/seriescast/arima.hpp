#pragma once

#include "seriescast/criteria.hpp"
#include "seriescast/detail/linalg.hpp"
#include "seriescast/detail/optim.hpp"
#include "seriescast/detail/poly.hpp"
#include "seriescast/detail/stats.hpp"
#include "seriescast/error.hpp"
#include "seriescast/stattests.hpp"
#include "seriescast/time_series.hpp"
#include "seriescast/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace seriescast {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    bool operator==(const ArimaOrder&) const = default;

    std::string to_string() const {
        std::ostringstream out;
        out << "(" << p << "," << d << "," << q << ")";
        return out.str();
    }
};

/**
 * Fitted ARIMA(p,d,q): maximum-likelihood ARMA coefficients on the
 * d-differenced series, with stationarity and invertibility enforced.
 * Hand-constructed instances only need order/phi/theta plus the data
 * tails that forecasting reads (diffed, tail_values).
 */
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;   ///< AR coefficients
    std::vector<double> theta; ///< MA coefficients, sign convention w_t = ... + theta_j e_{t-j}
    bool include_mean = false;
    double mean = 0.0;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aicc = 0.0;
    std::vector<double> residuals;   ///< one-step innovations on the differenced scale
    std::vector<double> diffed;      ///< the d-differenced training series
    std::vector<double> head_values; ///< first d original observations
    std::vector<double> tail_values; ///< last d original observations, oldest first
    bool near_boundary = false;
    bool converged = true;

    int n_diffed() const { return static_cast<int>(diffed.size()); }
    int n_params() const {
        return order.p + order.q + 1 + (include_mean ? 1 : 0); // + variance
    }
};

namespace detail {

/// Gaussian likelihood pieces of an ARMA(p,q) with unit innovation
/// variance, from the exact Kalman filter in Harvey's state space form.
struct ArmaFilterOutput {
    double ssq = 0.0;    ///< sum of v^2 / F
    double sumlog = 0.0; ///< sum of log F
    std::vector<double> innovations;
    std::vector<double> final_state;
    bool ok = false;
};

inline ArmaFilterOutput arma_kalman_filter(const std::vector<double>& w,
                                           const std::vector<double>& phi,
                                           const std::vector<double>& theta,
                                           bool keep_innovations) {
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());
    const int r = std::max(p, q + 1);
    const std::size_t m = w.size();

    Mat t_mat(r, r);
    for (int i = 0; i < r; ++i) {
        if (i < p) t_mat(i, 0) = phi[i];
        if (i + 1 < r) t_mat(i, i + 1) = 1.0;
    }
    std::vector<double> v_vec(r, 0.0);
    v_vec[0] = 1.0;
    for (int j = 0; j < q; ++j) v_vec[j + 1] = theta[j];

    // stationary state covariance: vec(P) solves (I - T (x) T) vec(P) = vec(VV')
    Mat system(static_cast<std::size_t>(r) * r, static_cast<std::size_t>(r) * r);
    std::vector<double> rhs(static_cast<std::size_t>(r) * r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            const std::size_t row = static_cast<std::size_t>(i) * r + j;
            rhs[row] = v_vec[i] * v_vec[j];
            for (int k = 0; k < r; ++k) {
                for (int l = 0; l < r; ++l) {
                    const std::size_t col = static_cast<std::size_t>(k) * r + l;
                    const double value = t_mat(i, k) * t_mat(j, l);
                    system(row, col) = (row == col ? 1.0 : 0.0) - value;
                }
            }
        }
    }

    ArmaFilterOutput out;
    std::vector<double> p0;
    try {
        p0 = solve_dense(system, rhs);
    } catch (const DomainError&) {
        return out; // explosive parameters: no stationary covariance
    }

    Mat p_cov(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) p_cov(i, j) = p0[static_cast<std::size_t>(i) * r + j];
    std::vector<double> a(r, 0.0);

    std::vector<double> a_pred(r);
    Mat p_pred(r, r);
    if (keep_innovations) out.innovations.resize(m);

    for (std::size_t obs = 0; obs < m; ++obs) {
        // predict
        for (int i = 0; i < r; ++i) {
            double s = (i < p ? phi[i] * a[0] : 0.0);
            if (i + 1 < r) s += a[i + 1];
            a_pred[i] = s;
        }
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                // (T P T')_{ij}
                double left = 0.0;
                for (int k = 0; k < r; ++k) {
                    double tik = 0.0;
                    if (k == 0 && i < p) tik += phi[i];
                    if (k == i + 1) tik += 1.0;
                    if (tik != 0.0) left += tik * p_cov(k, j);
                }
                p_pred(i, j) = left;
            }
        }
        Mat tmp(r, r);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                double s = 0.0;
                for (int k = 0; k < r; ++k) {
                    double tjk = 0.0;
                    if (k == 0 && j < p) tjk += phi[j];
                    if (k == j + 1) tjk += 1.0;
                    if (tjk != 0.0) s += p_pred(i, k) * tjk;
                }
                tmp(i, j) = s + v_vec[i] * v_vec[j];
            }
        }
        p_pred = tmp;

        const double f = p_pred(0, 0);
        if (!(f > 1e-300) || !std::isfinite(f)) return out;
        const double v = w[obs] - a_pred[0];
        out.ssq += v * v / f;
        out.sumlog += std::log(f);
        if (keep_innovations) out.innovations[obs] = v;

        for (int i = 0; i < r; ++i) a[i] = a_pred[i] + p_pred(i, 0) / f * v;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                p_cov(i, j) = p_pred(i, j) - p_pred(i, 0) * p_pred(0, j) / f;
            }
        }
    }
    out.final_state = a;
    out.ok = std::isfinite(out.ssq) && std::isfinite(out.sumlog);
    return out;
}

/// Wrong-side-of-the-boundary guard used by objective functions.
inline bool arma_params_admissible(const std::vector<double>& phi,
                                   const std::vector<double>& theta) {
    if (!phi.empty() && max_inverse_root(phi) >= 1.0) return false;
    if (!theta.empty()) {
        std::vector<double> neg(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) neg[i] = -theta[i];
        if (max_inverse_root(neg) >= 1.0) return false;
    }
    return true;
}

} // namespace detail

/**
 * Exact Gaussian log-likelihood of a zero-mean ARMA(p,q) series at the
 * given parameters. Exposed for diagnostics and for cross-checking
 * against direct multivariate-normal evaluation.
 */
inline double arma_loglik(const std::vector<double>& w, const std::vector<double>& phi,
                          const std::vector<double>& theta, double sigma2) {
    if (w.empty()) throw SizeError("arma_loglik: empty series");
    if (sigma2 <= 0.0) throw DomainError("arma_loglik: sigma2 must be positive");
    const auto filtered = detail::arma_kalman_filter(w, phi, theta, false);
    if (!filtered.ok) throw EstimationError("arma_loglik: non-stationary parameters");
    const double m = static_cast<double>(w.size());
    return -0.5 * (m * std::log(2.0 * std::numbers::pi * sigma2) + filtered.sumlog +
                   filtered.ssq / sigma2);
}

struct ArimaOptions {
    bool include_mean = true; ///< honored only when d == 0
    int max_iterations = 500; ///< Nelder-Mead cap per optimization phase
    double tolerance = 1e-8;
    int restarts = 2; ///< extra warm-started phases if not yet converged
};

namespace detail {

struct ArmaParamPack {
    int p = 0;
    int q = 0;
    bool with_mean = false;

    int size() const { return p + q + (with_mean ? 1 : 0); }

    std::tuple<std::vector<double>, std::vector<double>, double>
    unpack(const std::vector<double>& x) const {
        std::vector<double> phi_raw(x.begin(), x.begin() + p);
        std::vector<double> theta_raw(x.begin() + p, x.begin() + p + q);
        std::vector<double> phi = pacf_to_ar(phi_raw);
        std::vector<double> theta = pacf_to_ar(theta_raw);
        for (double& v : theta) v = -v; // map onto the invertible MA region
        const double mu = with_mean ? x[p + q] : 0.0;
        return {phi, theta, mu};
    }
};

inline double css_objective(const std::vector<double>& w, const std::vector<double>& phi,
                            const std::vector<double>& theta, double mu) {
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());
    const int m = static_cast<int>(w.size());
    std::vector<double> e(m, 0.0);
    double ssq = 0.0;
    int used = 0;
    for (int t = p; t < m; ++t) {
        double pred = 0.0;
        for (int i = 0; i < p; ++i) pred += phi[i] * (w[t - 1 - i] - mu);
        for (int j = 0; j < q && t - 1 - j >= p; ++j) pred += theta[j] * e[t - 1 - j];
        e[t] = (w[t] - mu) - pred;
        ssq += e[t] * e[t];
        ++used;
    }
    if (used == 0 || !(ssq > 0.0) || !std::isfinite(ssq)) {
        return std::numeric_limits<double>::infinity();
    }
    return 0.5 * std::log(ssq / used);
}

} // namespace detail

/**
 * Maximum-likelihood ARIMA fit: conditional-sum-of-squares warm start,
 * then exact ML through the state-space filter. Stationarity and
 * invertibility are built into the optimizer's parameterization.
 */
inline ArimaModel fit_arima(const TimeSeries& series, ArimaOrder order,
                            const ArimaOptions& options = {}) {
    if (order.p < 0 || order.d < 0 || order.q < 0) {
        throw DomainError("fit_arima: negative order component");
    }
    const auto w = difference(series.values(), order.d);
    const int m = static_cast<int>(w.size());
    if (m <= order.p + order.q + 1) {
        throw SizeError("fit_arima: differenced series too short for " + order.to_string());
    }

    ArimaModel model;
    model.order = order;
    model.include_mean = options.include_mean && order.d == 0;
    model.diffed = w;
    const auto& y = series.values();
    model.head_values.assign(y.begin(), y.begin() + order.d);
    model.tail_values.assign(y.end() - order.d, y.end());

    const double two_pi = 2.0 * std::numbers::pi;

    if (order.p == 0 && order.q == 0) {
        // iid Gaussian: closed form
        model.mean = model.include_mean ? detail::mean(w) : 0.0;
        model.residuals.resize(m);
        double ssq = 0.0;
        for (int t = 0; t < m; ++t) {
            model.residuals[t] = w[t] - model.mean;
            ssq += model.residuals[t] * model.residuals[t];
        }
        model.sigma2 = ssq / m;
        if (model.sigma2 <= 0.0) throw EstimationError("fit_arima: degenerate series");
        model.loglik = -0.5 * m * (std::log(two_pi * model.sigma2) + 1.0);
        model.aicc = aicc(model.loglik, model.n_params(), m);
        return model;
    }

    detail::ArmaParamPack pack{order.p, order.q, model.include_mean};
    std::vector<double> x0(pack.size(), 0.0);
    if (pack.with_mean) x0.back() = detail::mean(w);

    const auto css = [&](const std::vector<double>& x) {
        const auto [phi, theta, mu] = pack.unpack(x);
        return detail::css_objective(w, phi, theta, mu);
    };
    const auto exact = [&](const std::vector<double>& x) {
        const auto [phi, theta, mu] = pack.unpack(x);
        std::vector<double> adj(w.size());
        for (std::size_t t = 0; t < w.size(); ++t) adj[t] = w[t] - mu;
        const auto filtered = detail::arma_kalman_filter(adj, phi, theta, false);
        if (!filtered.ok) return std::numeric_limits<double>::infinity();
        return 0.5 * (m * std::log(filtered.ssq / m) + filtered.sumlog);
    };

    detail::NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.tolerance = options.tolerance;
    nm.initial_step.assign(pack.size(), 0.1);
    if (pack.with_mean) nm.initial_step.back() = std::max(0.1, 0.1 * std::fabs(x0.back()));

    auto warm = detail::nelder_mead(css, x0, nm);
    auto best = detail::nelder_mead(exact, warm.x, nm);
    for (int round = 0; round < options.restarts && !best.converged; ++round) {
        best = detail::nelder_mead(exact, best.x, nm);
    }

    auto [phi, theta, mu] = pack.unpack(best.x);
    if (!std::isfinite(best.value)) {
        throw EstimationError("fit_arima: likelihood not finite for " + order.to_string());
    }
    if (!best.converged) {
        std::ostringstream diag;
        diag << "fit_arima: optimizer did not converge for " << order.to_string()
             << " after bounded iterations (best objective " << best.value << ")";
        throw EstimationError(diag.str());
    }

    // keep fitted polynomials strictly inside the unit circle
    const double margin = 1.0 - 1e-6;
    if (!phi.empty()) {
        const double worst = detail::max_inverse_root(phi);
        if (worst > margin) {
            const double shrink = (1.0 - 2e-6) / worst;
            double s = shrink;
            for (double& c : phi) {
                c *= s;
                s *= shrink;
            }
            model.near_boundary = true;
        }
    }
    if (!theta.empty()) {
        std::vector<double> neg(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) neg[i] = -theta[i];
        const double worst = detail::max_inverse_root(neg);
        if (worst > margin) {
            const double shrink = (1.0 - 2e-6) / worst;
            double s = shrink;
            for (double& c : theta) {
                c *= s;
                s *= shrink;
            }
            model.near_boundary = true;
        }
    }

    std::vector<double> adj(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) adj[t] = w[t] - mu;
    const auto filtered = detail::arma_kalman_filter(adj, phi, theta, true);
    if (!filtered.ok) throw EstimationError("fit_arima: filtering failed at the optimum");

    model.phi = phi;
    model.theta = theta;
    model.mean = mu;
    model.residuals = filtered.innovations;
    model.sigma2 = filtered.ssq / m;
    model.loglik = -0.5 * (m * std::log(two_pi * model.sigma2) + filtered.sumlog + m);
    model.aicc = aicc(model.loglik, model.n_params(), m);
    model.converged = true;
    return model;
}

struct AutoArimaOptions {
    int max_p = 7;
    int max_q = 7;
    int max_d = 2;
    std::optional<int> fixed_d; ///< bypass the unit-root selector
    ArimaOptions fit;
};

/**
 * Stepwise automatic ARIMA: d from repeated KPSS testing, then a
 * neighborhood search over (p,q) (and the mean term when d = 0)
 * minimizing AICc. Ties break toward smaller p+q, then smaller q.
 */
inline ArimaModel auto_arima(const TimeSeries& series, const AutoArimaOptions& options = {});

/// One-step in-sample predictions on the original scale, aligned with
/// the training series; the first d entries are NaN.
inline std::vector<double> fitted_values(const ArimaModel& model) {
    const int d = model.order.d;
    const auto y = integrate(model.diffed, model.head_values, d);
    std::vector<double> fitted(y.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t t = d; t < y.size(); ++t) {
        fitted[t] = y[t] - model.residuals[t - d];
    }
    return fitted;
}

/**
 * Analytic ARIMA forecast: the ARMA recursion with future shocks at
 * zero, integrated back to the data scale, with Gaussian bands from
 * cumulative squared psi-weights.
 */
inline Forecast forecast_arima(const ArimaModel& model, int h, const std::vector<double>& levels) {
    if (h < 1) throw DomainError("forecast_arima: horizon must be positive");
    for (double lv : levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw DomainError("forecast_arima: level outside (0,1)");
    }
    const int p = static_cast<int>(model.phi.size());
    const int q = static_cast<int>(model.theta.size());
    const int d = model.order.d;
    const int m = static_cast<int>(model.diffed.size());
    if (static_cast<int>(model.tail_values.size()) != d) {
        throw SizeError("forecast_arima: model is missing the last d observations");
    }
    if (m < p) throw SizeError("forecast_arima: differenced history shorter than AR order");

    // forecast the differenced, mean-adjusted series
    std::vector<double> w_ext(model.diffed.size() + h);
    for (int t = 0; t < m; ++t) w_ext[t] = model.diffed[t] - model.mean;
    std::vector<double> e_ext(model.diffed.size() + h, 0.0);
    const int n_resid = static_cast<int>(model.residuals.size());
    for (int t = 0; t < std::min(m, n_resid); ++t) {
        e_ext[m - 1 - t] = model.residuals[n_resid - 1 - t];
    }
    for (int s = 0; s < h; ++s) {
        const int t = m + s;
        double value = 0.0;
        for (int i = 0; i < p; ++i) value += model.phi[i] * w_ext[t - 1 - i];
        for (int j = 0; j < q; ++j) {
            if (t - 1 - j < m) value += model.theta[j] * e_ext[t - 1 - j];
        }
        w_ext[t] = value;
    }

    std::vector<double> w_fc(h);
    for (int s = 0; s < h; ++s) w_fc[s] = w_ext[m + s] + model.mean;

    // integrate back to levels using the last d observations
    std::vector<double> points = w_fc;
    if (d > 0) {
        std::vector<double> tail_diffs; // j-th entry: last value of the j-times-differenced tail
        std::vector<double> scratch = model.tail_values;
        for (int j = 0; j < d; ++j) {
            tail_diffs.push_back(scratch.back());
            for (std::size_t i = scratch.size() - 1; i > 0; --i) scratch[i] -= scratch[i - 1];
            scratch.erase(scratch.begin());
        }
        for (int j = d; j-- > 0;) {
            double prev = tail_diffs[j];
            for (int s = 0; s < h; ++s) {
                points[s] += prev;
                prev = points[s];
            }
        }
    }

    // psi-weights of theta(B) / (phi(B) (1-B)^d)
    std::vector<double> ar_full{1.0};
    for (int i = 0; i < p; ++i) ar_full.push_back(-model.phi[i]);
    for (int round = 0; round < d; ++round) {
        std::vector<double> conv(ar_full.size() + 1, 0.0);
        for (std::size_t i = 0; i < ar_full.size(); ++i) {
            conv[i] += ar_full[i];
            conv[i + 1] -= ar_full[i];
        }
        ar_full = conv;
    }
    std::vector<double> psi(h, 0.0);
    psi[0] = 1.0;
    for (int j = 1; j < h; ++j) {
        double value = j <= q ? model.theta[j - 1] : 0.0;
        for (std::size_t i = 1; i < ar_full.size() && static_cast<int>(i) <= j; ++i) {
            value += -ar_full[i] * psi[j - i];
        }
        psi[j] = value;
    }

    Forecast forecast;
    forecast.origin = model.diffed.size() + d - 1;
    forecast.horizon = h;
    forecast.points = points;

    std::vector<double> sd(h);
    double cum = 0.0;
    for (int s = 0; s < h; ++s) {
        cum += psi[s] * psi[s];
        sd[s] = std::sqrt(std::max(0.0, model.sigma2) * cum);
    }
    for (double lv : levels) {
        const double z = detail::normal_quantile(0.5 + lv / 2.0);
        IntervalBand band;
        band.lower.resize(h);
        band.upper.resize(h);
        for (int s = 0; s < h; ++s) {
            band.lower[s] = points[s] - z * sd[s];
            band.upper[s] = points[s] + z * sd[s];
        }
        forecast.intervals[lv] = std::move(band);
    }
    return forecast;
}

inline ArimaModel auto_arima(const TimeSeries& series, const AutoArimaOptions& options) {
    if (series.size() < 30) throw SizeError("auto_arima: need at least 30 observations");

    const int d = options.fixed_d ? *options.fixed_d : ndiffs(series, options.max_d);

    struct Candidate {
        int p;
        int q;
        bool with_mean;
        auto operator<=>(const Candidate&) const = default;
    };

    std::map<Candidate, double> visited; // aicc, +inf for failures
    std::optional<ArimaModel> best_model;

    const auto evaluate = [&](const Candidate& c) -> double {
        if (const auto it = visited.find(c); it != visited.end()) return it->second;
        double value = std::numeric_limits<double>::infinity();
        const int m = static_cast<int>(series.size()) - d;
        if (c.p >= 0 && c.q >= 0 && c.p <= options.max_p && c.q <= options.max_q &&
            m > c.p + c.q + 2) {
            try {
                ArimaOptions fit_options = options.fit;
                fit_options.include_mean = c.with_mean;
                ArimaModel model = fit_arima(series, ArimaOrder{c.p, d, c.q}, fit_options);
                value = model.aicc;
                const bool improves =
                    !best_model ||
                    value < best_model->aicc - 1e-10 ||
                    (std::fabs(value - best_model->aicc) <= 1e-10 &&
                     (c.p + c.q < best_model->order.p + best_model->order.q ||
                      (c.p + c.q == best_model->order.p + best_model->order.q &&
                       c.q < best_model->order.q)));
                if (improves) best_model = std::move(model);
            } catch (const std::runtime_error&) {
                value = std::numeric_limits<double>::infinity();
            }
        }
        visited.emplace(c, value);
        return value;
    };

    const bool mean_default = d == 0;
    std::vector<Candidate> starts = {{0, 0, mean_default},
                                     {1, 0, mean_default},
                                     {0, 1, mean_default},
                                     {2, 2, mean_default}};
    Candidate current = starts[0];
    double current_value = std::numeric_limits<double>::infinity();
    for (const auto& c : starts) {
        const double value = evaluate(c);
        if (value < current_value) {
            current_value = value;
            current = c;
        }
    }

    bool moved = true;
    while (moved) {
        moved = false;
        std::vector<Candidate> neighbors;
        for (int dp = -1; dp <= 1; ++dp) {
            for (int dq = -1; dq <= 1; ++dq) {
                if (dp == 0 && dq == 0) continue;
                neighbors.push_back({current.p + dp, current.q + dq, current.with_mean});
            }
        }
        if (d == 0) neighbors.push_back({current.p, current.q, !current.with_mean});

        bool have = false;
        Candidate chosen = current;
        double chosen_value = std::numeric_limits<double>::infinity();
        for (const auto& c : neighbors) {
            const double value = evaluate(c);
            if (!std::isfinite(value)) continue;
            const bool better = !have || value < chosen_value - 1e-10 ||
                                (std::fabs(value - chosen_value) <= 1e-10 &&
                                 (c.p + c.q < chosen.p + chosen.q ||
                                  (c.p + c.q == chosen.p + chosen.q && c.q < chosen.q)));
            if (better) {
                chosen = c;
                chosen_value = value;
                have = true;
            }
        }
        if (have && chosen_value < current_value - 1e-10) {
            current = chosen;
            current_value = chosen_value;
            moved = true;
        }
    }

    if (!best_model) {
        throw EstimationError("auto_arima: no candidate model could be fitted");
    }
    return *best_model;
}

} // namespace seriescast
