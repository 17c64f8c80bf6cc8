#include "seriescast/arima.hpp"
#include "seriescast/detail/poly.hpp"
#include "seriescast/detail/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace seriescast;

namespace {

std::vector<double> simulate_arma(const std::vector<double>& phi, const std::vector<double>& theta,
                                  int n, std::uint64_t seed, double mean = 0.0) {
    detail::Rng rng(seed);
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());
    std::vector<double> y(n, 0.0), e(n, 0.0);
    for (int t = 0; t < n; ++t) {
        e[t] = rng.normal();
        double v = e[t];
        for (int i = 0; i < p && t - 1 - i >= 0; ++i) v += phi[i] * (y[t - 1 - i] - mean);
        for (int j = 0; j < q && t - 1 - j >= 0; ++j) v += theta[j] * e[t - 1 - j];
        y[t] = mean + v;
    }
    return y;
}

// Independent likelihood oracle: theoretical ARMA autocovariances from a
// long psi-weight expansion, then a dense Gaussian density via Cholesky.
double mvn_arma_loglik(const std::vector<double>& w, const std::vector<double>& phi,
                       const std::vector<double>& theta, double sigma2) {
    const int n = static_cast<int>(w.size());
    const int span = 20000;
    std::vector<double> psi(span, 0.0);
    psi[0] = 1.0;
    for (int j = 1; j < span; ++j) {
        double v = j <= static_cast<int>(theta.size()) ? theta[j - 1] : 0.0;
        for (int i = 1; i <= static_cast<int>(phi.size()) && i <= j; ++i) {
            v += phi[i - 1] * psi[j - i];
        }
        psi[j] = v;
    }
    detail::Mat cov(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k = std::abs(i - j);
            double gamma = 0.0;
            for (int a = 0; a + k < span; ++a) gamma += psi[a] * psi[a + k];
            cov(i, j) = sigma2 * gamma;
        }
    }
    const auto chol = detail::cholesky(cov);
    const auto solved = detail::cholesky_solve(chol, w);
    double quad = 0.0;
    for (int i = 0; i < n; ++i) quad += w[i] * solved[i];
    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(chol(i, i));
    return -0.5 * (n * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

} // namespace

TEST_CASE("aicc formula and limits", "[arima]") {
    // AIC = -2(-22) + 2*3 = 50; correction = 2*3*4/96 = 0.25
    CHECK(aicc(-22.0, 3, 100) == Catch::Approx(50.25).margin(1e-12));
    CHECK(aicc(-22.0, 3, 10000000) == Catch::Approx(50.0).margin(1e-4));
    for (int n = 6; n < 60; n += 7) {
        const double aic = -2.0 * (-10.0) + 2.0 * 4;
        CHECK(aicc(-10.0, 4, n) > aic);
    }
    CHECK_THROWS_AS(aicc(-5.0, 4, 5), DomainError);
}

TEST_CASE("ar1 estimate agrees with a css grid-search oracle", "[arima]") {
    const auto y = simulate_arma({0.8}, {}, 500, 42);
    ArimaOptions options;
    options.include_mean = false;
    const ArimaModel model = fit_arima(TimeSeries(y), {1, 0, 0}, options);

    double oracle_phi = 0.0;
    double oracle_css = std::numeric_limits<double>::infinity();
    for (int i = -999; i <= 999; ++i) {
        const double candidate = i * 0.001;
        double css = 0.0;
        for (std::size_t t = 1; t < y.size(); ++t) {
            const double e = y[t] - candidate * y[t - 1];
            css += e * e;
        }
        if (css < oracle_css) {
            oracle_css = css;
            oracle_phi = candidate;
        }
    }
    CHECK(std::fabs(model.phi[0] - 0.8) < 0.06);
    CHECK(std::fabs(model.phi[0] - oracle_phi) < 0.01);
}

TEST_CASE("white-noise fit recovers the sample mean exactly", "[arima]") {
    const auto y = simulate_arma({}, {}, 300, 7, 5.0);
    const ArimaModel model = fit_arima(TimeSeries(y), {0, 0, 0});
    CHECK(model.include_mean);
    CHECK(model.mean == Catch::Approx(detail::mean(y)).margin(1e-8));
}

TEST_CASE("exact likelihood matches the dense gaussian oracle", "[arima]") {
    const std::vector<double> w = {1.2, -0.4, 0.3, 2.0, -1.1, 0.6, 0.1, -0.9, 1.4, 0.2};
    struct Case {
        std::vector<double> phi;
        std::vector<double> theta;
        double sigma2;
    };
    const Case cases[] = {
        {{0.5}, {}, 1.0},
        {{0.5, -0.2}, {0.4}, 1.3},
        {{}, {0.7, 0.2}, 0.8},
        {{-0.6}, {0.3}, 2.5},
        {{0.3, 0.25, -0.2}, {}, 0.5},
    };
    for (const auto& c : cases) {
        const double filter = arma_loglik(w, c.phi, c.theta, c.sigma2);
        const double oracle = mvn_arma_loglik(w, c.phi, c.theta, c.sigma2);
        CHECK(filter == Catch::Approx(oracle).margin(1e-6));
    }
}

TEST_CASE("random-walk and double-integration forecasts", "[arima]") {
    ArimaModel walk;
    walk.order = {0, 1, 0};
    walk.sigma2 = 4.0;
    walk.tail_values = {100.0};
    const Forecast flat = forecast_arima(walk, 6, {0.95});
    for (double point : flat.points) CHECK(point == Catch::Approx(100.0).margin(1e-12));
    const auto& band = flat.intervals.at(0.95);
    const double w1 = band.upper[0] - band.lower[0];
    for (int h = 1; h <= 6; ++h) {
        const double wh = band.upper[h - 1] - band.lower[h - 1];
        CHECK(wh == Catch::Approx(w1 * std::sqrt(static_cast<double>(h))).margin(1e-9));
    }

    ArimaModel curve;
    curve.order = {0, 2, 0};
    curve.sigma2 = 1.0;
    curve.tail_values = {90.0, 100.0};
    const Forecast line = forecast_arima(curve, 3, {0.80});
    CHECK(line.points[0] == Catch::Approx(110.0).margin(1e-12));
    CHECK(line.points[1] == Catch::Approx(120.0).margin(1e-12));
    CHECK(line.points[2] == Catch::Approx(130.0).margin(1e-12));
}

TEST_CASE("ar1 forecast decays geometrically", "[arima]") {
    ArimaModel model;
    model.order = {1, 0, 0};
    model.phi = {0.5};
    model.sigma2 = 1.0;
    model.diffed = {10.0};
    const Forecast forecast = forecast_arima(model, 3, {0.80});
    CHECK(forecast.points[0] == Catch::Approx(5.0).margin(1e-12));
    CHECK(forecast.points[1] == Catch::Approx(2.5).margin(1e-12));
    CHECK(forecast.points[2] == Catch::Approx(1.25).margin(1e-12));
}

TEST_CASE("forecast standard deviation never decreases", "[arima]") {
    const auto y = simulate_arma({0.6, -0.3}, {0.4}, 240, 99);
    const ArimaModel model = fit_arima(TimeSeries(y), {2, 0, 1});
    const Forecast forecast = forecast_arima(model, 30, {0.95});
    const auto& band = forecast.intervals.at(0.95);
    double previous = 0.0;
    for (int s = 0; s < 30; ++s) {
        const double width = band.upper[s] - band.lower[s];
        CHECK(width >= previous - 1e-9);
        previous = width;
    }
}

TEST_CASE("fitted polynomials stay inside the stationarity margin", "[arima]") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        const auto y = simulate_arma({0.7}, {0.5}, 300, seed);
        const ArimaModel model = fit_arima(TimeSeries(y), {1, 0, 1});
        CHECK(detail::max_inverse_root(model.phi) < 1.0 - 1e-6);
        std::vector<double> neg(model.theta.size());
        for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -model.theta[i];
        CHECK(detail::max_inverse_root(neg) < 1.0 - 1e-6);
    }
}

TEST_CASE("one-step residuals reproduce the training series", "[arima]") {
    const auto y = simulate_arma({0.5}, {}, 150, 21, 3.0);
    std::vector<double> levels = y;
    // integrate once so d = 1 has something to undo
    double acc = 0.0;
    for (auto& v : levels) {
        acc += v;
        v = acc;
    }
    const ArimaModel model = fit_arima(TimeSeries(levels), {1, 1, 0});
    const auto fitted = fitted_values(model);
    REQUIRE(fitted.size() == levels.size());
    CHECK(std::isnan(fitted[0]));
    for (std::size_t t = 1; t < levels.size(); ++t) {
        CHECK(fitted[t] + model.residuals[t - 1] == Catch::Approx(levels[t]).margin(1e-9));
    }
}

TEST_CASE("stepwise selection finds a low-order model for ar2 data", "[arima]") {
    const auto y = simulate_arma({1.2, -0.5}, {}, 1000, 4242);
    const TimeSeries series(y);
    const ArimaModel chosen = auto_arima(series);
    CHECK(chosen.order.d == 0);
    CHECK(chosen.order.p >= 1);
    CHECK(chosen.order.p <= 3);

    // exhaustive AICc oracle over small orders; stepwise should come close
    double oracle_best = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= 4; ++p) {
        for (int q = 0; q <= 4; ++q) {
            try {
                const ArimaModel model = fit_arima(series, {p, 0, q});
                oracle_best = std::min(oracle_best, model.aicc);
            } catch (const std::runtime_error&) {
            }
        }
    }
    CHECK(chosen.aicc <= oracle_best + 2.0);
}

TEST_CASE("fit preconditions", "[arima]") {
    CHECK_THROWS_AS(fit_arima(TimeSeries(std::vector<double>{1, 2, 3, 4}), {2, 0, 2}), SizeError);
    CHECK_THROWS_AS(fit_arima(TimeSeries(std::vector<double>(50, 1.0)), {0, 0, 0}),
                    EstimationError);
}
