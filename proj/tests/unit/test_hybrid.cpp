#include "seriescast/hybrid.hpp"
#include "seriescast/detail/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

using namespace seriescast;

namespace {

TimeSeries trending_series(int n, std::uint64_t seed) {
    detail::Rng rng(seed);
    std::vector<double> y(n);
    for (int t = 0; t < n; ++t) {
        y[t] = 50.0 + 1.5 * t + 0.02 * t * t + 2.0 * rng.normal();
    }
    return TimeSeries(y);
}

} // namespace

TEST_CASE("rolling-origin error of reference forecasters", "[hybrid]") {
    // a forecaster that happens to know the future is a perfect component
    std::vector<double> truth(120);
    std::iota(truth.begin(), truth.end(), 1.0);
    const TimeSeries series(truth);
    const auto clairvoyant = [&truth](const TimeSeries& train, int horizon) {
        std::vector<double> points(horizon);
        for (int s = 0; s < horizon; ++s) points[s] = truth[train.size() + s];
        return points;
    };
    CHECK(cv_rmse(series, 50, 1, clairvoyant) == Catch::Approx(0.0).margin(1e-12));

    const auto naive = [](const TimeSeries& train, int horizon) {
        return std::vector<double>(static_cast<std::size_t>(horizon), train.back());
    };
    const TimeSeries constant(std::vector<double>(80, 7.0));
    CHECK(cv_rmse(constant, 40, 1, naive) == Catch::Approx(0.0).margin(1e-12));

    // one-step naive error on 1..100 is exactly 1 at every origin
    std::vector<double> ramp(100);
    std::iota(ramp.begin(), ramp.end(), 1.0);
    CHECK(cv_rmse(TimeSeries(ramp), 50, 1, naive) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("cv failure accounting", "[hybrid]") {
    std::vector<double> y(60);
    std::iota(y.begin(), y.end(), 1.0);
    const TimeSeries series(y);
    int call = 0;
    const auto flaky = [&call](const TimeSeries&, int) -> std::vector<double> {
        ++call;
        throw EstimationError("fold failure");
    };
    CHECK_THROWS_AS(cv_rmse(series, 30, 1, flaky), EstimationError);
    CHECK(call > 0);
}

TEST_CASE("inverse-error weights", "[hybrid]") {
    const auto equal = compute_weights({2.0, 2.0});
    CHECK(equal[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(equal[1] == Catch::Approx(0.5).margin(1e-15));

    const auto skewed = compute_weights({1.0, 3.0});
    CHECK(skewed[0] == Catch::Approx(0.75).margin(1e-15));
    CHECK(skewed[1] == Catch::Approx(0.25).margin(1e-15));

    const auto degenerate = compute_weights({0.0, 1.0, 0.0});
    CHECK(degenerate[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(degenerate[1] == 0.0);
    CHECK(degenerate[2] == Catch::Approx(0.5).margin(1e-15));

    CHECK_THROWS_AS(compute_weights({-1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(compute_weights({}), SizeError);
}

TEST_CASE("weights sum to one and respect error order", "[hybrid]") {
    detail::Rng rng(64);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> errors(2 + rep % 3);
        for (auto& e : errors) e = 0.1 + 10.0 * rng.uniform();
        const auto weights = compute_weights(errors);
        double total = 0.0;
        for (double w : weights) {
            CHECK(w >= 0.0);
            total += w;
        }
        CHECK(total == Catch::Approx(1.0).margin(1e-12));
        for (std::size_t i = 0; i < errors.size(); ++i) {
            for (std::size_t j = 0; j < errors.size(); ++j) {
                if (errors[i] < errors[j]) CHECK(weights[i] > weights[j]);
            }
        }
    }
}

TEST_CASE("component-level cv error is finite, positive and repeatable", "[hybrid]") {
    const TimeSeries series = trending_series(70, 9);
    const double a = cv_rmse(ComponentSpec{ComponentKind::ets}, series, 49, 1, 5);
    const double b = cv_rmse(ComponentSpec{ComponentKind::ets}, series, 49, 1, 5);
    CHECK(a > 0.0);
    CHECK(std::isfinite(a));
    CHECK(a == b);
}

TEST_CASE("hybrid fitting validates its specs", "[hybrid]") {
    const TimeSeries series = trending_series(80, 5);
    CHECK_THROWS_AS(fit_hybrid(series, {{ComponentKind::arima}}, 1), DomainError);
    CHECK_THROWS_AS(
        fit_hybrid(series, {{ComponentKind::arima}, {ComponentKind::arima}}, 1), DomainError);
}

TEST_CASE("fitted ensembles carry normalized weights and reproduce exactly", "[hybrid]") {
    const TimeSeries series = trending_series(90, 6);
    const std::vector<ComponentSpec> specs = {{ComponentKind::arima}, {ComponentKind::ets}};
    const HybridEnsemble a = fit_hybrid(series, specs, 2024);
    const HybridEnsemble b = fit_hybrid(series, specs, 2024);

    double total = 0.0;
    for (const auto& component : a.components) {
        CHECK(component.weight >= 0.0);
        total += component.weight;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(a.components.size() == b.components.size());
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        CHECK(a.components[i].weight == b.components[i].weight);
        CHECK(a.components[i].cv_rmse == b.components[i].cv_rmse);
    }
}

TEST_CASE("combination arithmetic on hand-built ensembles", "[hybrid]") {
    const double lambda = 1.0;

    const auto make_walk = [](double last, double sigma2) {
        ArimaModel model;
        model.order = {0, 1, 0};
        model.sigma2 = sigma2;
        model.tail_values = {last};
        return model;
    };

    // single component with weight one: combination is the identity
    {
        HybridEnsemble solo;
        solo.lambda = lambda;
        solo.train_size = 10;
        solo.components.push_back({ComponentKind::arima, make_walk(10.0, 1.0), 1.0, 1.0});
        const Forecast combined = forecast_hybrid(solo, 4, {0.8});
        const Forecast part = forecast_arima(make_walk(10.0, 1.0), 4, {0.8});
        for (int s = 0; s < 4; ++s) {
            CHECK(combined.points[s] ==
                  Catch::Approx(detail::inv_box_cox_clamped(part.points[s], lambda)).margin(1e-10));
            CHECK(combined.intervals.at(0.8).lower[s] ==
                  Catch::Approx(detail::inv_box_cox_clamped(part.intervals.at(0.8).lower[s], lambda))
                      .margin(1e-10));
        }
    }

    // equal weights average the points; envelope takes the widest band
    {
        HybridEnsemble pair;
        pair.lambda = lambda;
        pair.train_size = 10;
        pair.components.push_back({ComponentKind::arima, make_walk(10.0, 0.5), 1.0, 0.5});
        pair.components.push_back({ComponentKind::ets, EtsModel{}, 1.0, 0.5});
        auto& ets = std::get<EtsModel>(pair.components[1].model);
        ets.spec = {EtsTrend::none, false};
        ets.alpha = 0.5;
        ets.initial_level = 20.0;
        ets.sigma2 = 2.0;

        const Forecast combined = forecast_hybrid(pair, 1, {0.95});
        CHECK(combined.points[0] ==
              Catch::Approx(detail::inv_box_cox_clamped(15.0, lambda)).margin(1e-10));

        const Forecast left = forecast_arima(make_walk(10.0, 0.5), 1, {0.95});
        const Forecast right = forecast_ets(ets, 1, {0.95});
        const double lo = std::min(left.intervals.at(0.95).lower[0],
                                   right.intervals.at(0.95).lower[0]);
        const double hi = std::max(left.intervals.at(0.95).upper[0],
                                   right.intervals.at(0.95).upper[0]);
        CHECK(combined.intervals.at(0.95).lower[0] ==
              Catch::Approx(detail::inv_box_cox_clamped(lo, lambda)).margin(1e-10));
        CHECK(combined.intervals.at(0.95).upper[0] ==
              Catch::Approx(detail::inv_box_cox_clamped(hi, lambda)).margin(1e-10));
    }
}

TEST_CASE("fitted hybrid stays inside its component hull", "[hybrid]") {
    const TimeSeries series = trending_series(90, 17);
    const HybridEnsemble ensemble =
        fit_hybrid(series, {{ComponentKind::arima}, {ComponentKind::ets}}, 7);

    const int h = 12;
    const std::vector<double> levels = {0.80, 0.95};
    const Forecast combined = forecast_hybrid(ensemble, h, levels);

    std::vector<Forecast> parts;
    for (std::size_t i = 0; i < ensemble.components.size(); ++i) {
        parts.push_back(detail::component_forecast(ensemble.components[i], h, levels,
                                                   detail::fold_seed(ensemble.seed, 5000 + i),
                                                   1000));
    }
    for (int s = 0; s < h; ++s) {
        double lo_point = parts[0].points[s], hi_point = parts[0].points[s];
        for (const auto& part : parts) {
            lo_point = std::min(lo_point, part.points[s]);
            hi_point = std::max(hi_point, part.points[s]);
        }
        const double combined_z = box_cox(std::vector<double>{combined.points[s]},
                                          ensemble.lambda)[0];
        CHECK(combined_z >= lo_point - 1e-9);
        CHECK(combined_z <= hi_point + 1e-9);

        for (double lv : levels) {
            for (const auto& part : parts) {
                const double part_lo = detail::inv_box_cox_clamped(part.intervals.at(lv).lower[s],
                                                                   ensemble.lambda);
                const double part_hi = detail::inv_box_cox_clamped(part.intervals.at(lv).upper[s],
                                                                   ensemble.lambda);
                CHECK(combined.intervals.at(lv).lower[s] <= part_lo + 1e-9);
                CHECK(combined.intervals.at(lv).upper[s] >= part_hi - 1e-9);
            }
        }
    }
}
