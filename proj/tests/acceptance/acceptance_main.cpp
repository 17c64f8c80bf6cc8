// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Criteria mix fixed quantitative reference targets for
// the bundled series with structural invariants that must hold on
// every run.

#include "seriescast/seriescast.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace seriescast;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// shared fixtures
// ---------------------------------------------------------------------------

struct Shared {
    std::string data_file;
    fs::path work_dir;
    std::optional<StudyConfig> config;
    std::optional<StudyReport> report;
    double study_seconds = -1.0;

    const StudyConfig& study_config() {
        if (!config) {
            StudyConfig c;
            c.input_path = data_file;
            c.output_dir = (work_dir / "run_a").string();
            c.horizon = 45;
            c.seed = 42;
            c.plots = true;
            config = c;
        }
        return *config;
    }

    const StudyReport& study() {
        if (!report) {
            StudyConfig c = study_config();
            const auto start = std::chrono::steady_clock::now();
            StudyReport r = run_study(c);
            emit_outputs(r, c);
            study_seconds = seconds_since(start);
            for (const auto& series : r.series) {
                for (const auto& model : series.models) {
                    require(!model.failed,
                            series.column + " / " + model.name + " failed: " + model.error);
                }
            }
            report = std::move(r);
        }
        return *report;
    }
};

Shared shared;

std::map<std::string, TimeSeries> load_bundle() {
    return load_csv(shared.data_file, "date", {"ricoverati_con_sintomi", "terapia_intensiva"});
}

// dense-gaussian ARMA likelihood oracle (psi-weight autocovariances)
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

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

void criterion_1_differencing() {
    const auto bundle = load_bundle();
    const auto start = std::chrono::steady_clock::now();
    const int d_mild = ndiffs(bundle.at("ricoverati_con_sintomi"));
    const int d_icu = ndiffs(bundle.at("terapia_intensiva"));
    const double elapsed = seconds_since(start);
    require(d_mild == 2, "mild-symptom series: ndiffs = " + std::to_string(d_mild) + ", want 2");
    require(d_icu == 2, "icu series: ndiffs = " + std::to_string(d_icu) + ", want 2");
    require(elapsed < 1.0, "ndiffs took " + fmt(elapsed) + " s, budget 1 s");
}

void criterion_2_accuracy_magnitudes() {
    const auto bundle = load_bundle();
    struct Target {
        const char* column;
        double arima_mae, arima_rmse, ets_mae, ets_rmse;
    };
    const Target targets[2] = {
        {"ricoverati_con_sintomi", 112.2358, 201.0097, 121.3297, 219.2290},
        {"terapia_intensiva", 12.2536, 20.4164, 13.6090, 23.2846},
    };
    const auto within = [](double value, double center) {
        return value >= 0.75 * center && value <= 1.25 * center;
    };
    for (const auto& target : targets) {
        const TimeSeries& series = bundle.at(target.column);
        const auto start = std::chrono::steady_clock::now();

        const ArimaModel arima = auto_arima(series);
        const auto arima_report = detail::fitted_accuracy(series, fitted_values(arima));
        const EtsModel ets = auto_ets(series);
        const auto ets_report = detail::fitted_accuracy(series, fitted_values(ets));
        const double elapsed = seconds_since(start);

        require(within(arima_report.mae, target.arima_mae),
                std::string(target.column) + ": ARIMA MAE " + fmt(arima_report.mae) +
                    " outside 25% of " + fmt(target.arima_mae));
        require(within(arima_report.rmse, target.arima_rmse),
                std::string(target.column) + ": ARIMA RMSE " + fmt(arima_report.rmse) +
                    " outside 25% of " + fmt(target.arima_rmse));
        require(within(ets_report.mae, target.ets_mae),
                std::string(target.column) + ": ETS MAE " + fmt(ets_report.mae) +
                    " outside 25% of " + fmt(target.ets_mae));
        require(within(ets_report.rmse, target.ets_rmse),
                std::string(target.column) + ": ETS RMSE " + fmt(ets_report.rmse) +
                    " outside 25% of " + fmt(target.ets_rmse));
        require(elapsed < 30.0,
                std::string(target.column) + ": fits took " + fmt(elapsed) + " s, budget 30 s");
    }
}

void criterion_3_paper_claims() {
    const StudyReport& report = shared.study();
    for (const auto& series : report.series) {
        require(series.models.size() == 7, series.column + ": expected 7 configurations");
        for (const auto& model : series.models) {
            const std::string tag = series.column + " / " + model.name;
            require(model.accuracy.mase < 1.0, tag + ": MASE " + fmt(model.accuracy.mase) +
                                                   " not below 1");
            require(model.accuracy.mape < 10.0, tag + ": MAPE " + fmt(model.accuracy.mape) +
                                                    " not below 10");
            if (model.hybrid) {
                require(model.accuracy.theils_u < 1.0,
                        tag + ": Theil's U " + fmt(model.accuracy.theils_u) + " not below 1");
            }
        }
    }
}

void criterion_4_synthetic_recovery() {
    // AR(1) recovery against a CSS grid oracle
    {
        detail::Rng rng(42);
        std::vector<double> y(500);
        double prev = 0.0;
        for (auto& v : y) {
            prev = 0.8 * prev + rng.normal();
            v = prev;
        }
        ArimaOptions options;
        options.include_mean = false;
        const ArimaModel model = fit_arima(TimeSeries(y), {1, 0, 0}, options);

        double oracle_phi = 0.0, oracle_css = std::numeric_limits<double>::infinity();
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
        require(std::fabs(model.phi[0] - 0.8) <= 0.06,
                "AR(1) estimate " + fmt(model.phi[0]) + " not within 0.06 of 0.8");
        require(std::fabs(model.phi[0] - oracle_phi) <= 0.01,
                "AR(1) estimate " + fmt(model.phi[0]) + " not within 0.01 of grid oracle " +
                    fmt(oracle_phi));
    }

    // ETS(A,N,N) one-step predictions equal the SES recursion
    {
        detail::Rng rng(7);
        std::vector<double> y(120);
        for (auto& v : y) v = 40.0 + 3.0 * rng.normal();
        const EtsModel model = fit_ets(TimeSeries(y), {EtsTrend::none, false});
        const auto fitted = fitted_values(model);
        double level = model.initial_level;
        for (std::size_t t = 0; t < y.size(); ++t) {
            require(std::fabs(fitted[t] - level) <= 1e-10,
                    "SES identity violated at t = " + std::to_string(t));
            level = model.alpha * y[t] + (1.0 - model.alpha) * level;
        }
    }

    // exact ARMA likelihood equals the dense-gaussian oracle on short series
    {
        const std::vector<double> w = {1.2, -0.4, 0.3, 2.0, -1.1, 0.6, 0.1, -0.9, 1.4, 0.2};
        const struct {
            std::vector<double> phi, theta;
            double sigma2;
        } cases[] = {
            {{0.5}, {}, 1.0},
            {{0.5, -0.2}, {0.4}, 1.3},
            {{}, {0.7, 0.2}, 0.8},
        };
        for (const auto& c : cases) {
            const double filter = arma_loglik(w, c.phi, c.theta, c.sigma2);
            const double oracle = mvn_arma_loglik(w, c.phi, c.theta, c.sigma2);
            require(std::fabs(filter - oracle) <= 1e-6,
                    "likelihood mismatch " + fmt(filter) + " vs oracle " + fmt(oracle));
        }
    }
}

void criterion_5_neuron_rule() {
    require(hidden_neurons(4) == 2, "k(p=4) = " + std::to_string(hidden_neurons(4)) + ", want 2");
    require(hidden_neurons(7) == 4, "k(p=7) = " + std::to_string(hidden_neurons(7)) + ", want 4");
}

void criterion_6_hybrid_invariants() {
    const StudyReport& report = shared.study();
    for (const auto& series : report.series) {
        for (const auto& model : series.models) {
            if (!model.hybrid) continue;
            const std::string tag = series.column + " / " + model.name;
            const HybridEnsemble& ensemble = *model.hybrid;

            double total = 0.0;
            for (const auto& component : ensemble.components) {
                require(component.weight >= 0.0, tag + ": negative weight");
                total += component.weight;
            }
            require(std::fabs(total - 1.0) <= 1e-12,
                    tag + ": weights sum to " + fmt(total) + " rather than 1");

            for (const auto& a : ensemble.components) {
                for (const auto& b : ensemble.components) {
                    if (a.cv_rmse < b.cv_rmse) {
                        require(a.weight > b.weight, tag + ": lower CV error did not earn a "
                                                           "higher weight");
                    }
                }
            }

            // component forecasts on the transformed scale, same seeds as the combiner
            const int h = model.forecast.horizon;
            const std::vector<double> levels = {0.80, 0.95};
            std::vector<Forecast> parts;
            for (std::size_t i = 0; i < ensemble.components.size(); ++i) {
                parts.push_back(detail::component_forecast(
                    ensemble.components[i], h, levels, detail::fold_seed(ensemble.seed, 5000 + i),
                    1000));
            }
            for (int s = 0; s < h; ++s) {
                double lo = parts[0].points[s], hi = parts[0].points[s];
                for (const auto& part : parts) {
                    lo = std::min(lo, part.points[s]);
                    hi = std::max(hi, part.points[s]);
                }
                const double combined_z =
                    box_cox(std::vector<double>{model.forecast.points[s]}, ensemble.lambda)[0];
                require(combined_z >= lo - 1e-8 && combined_z <= hi + 1e-8,
                        tag + ": combined point left the component hull at h = " +
                            std::to_string(s + 1));
                for (double lv : levels) {
                    for (const auto& part : parts) {
                        const double part_lo = detail::inv_box_cox_clamped(
                            part.intervals.at(lv).lower[s], ensemble.lambda);
                        const double part_hi = detail::inv_box_cox_clamped(
                            part.intervals.at(lv).upper[s], ensemble.lambda);
                        require(model.forecast.intervals.at(lv).lower[s] <= part_lo + 1e-8,
                                tag + ": envelope lower bound misses a component band");
                        require(model.forecast.intervals.at(lv).upper[s] >= part_hi - 1e-8,
                                tag + ": envelope upper bound misses a component band");
                    }
                }
            }
        }
    }
}

void criterion_7_efficiency_formula() {
    const double gain = efficiency_gain(106.4554, 112.2358);
    require(std::fabs(gain - (-5.15)) < 0.005,
            "efficiency gain " + fmt(gain) + " differs from -5.15 at two decimals");
    require(std::fabs(efficiency_gain(90.0, 100.0) + 10.0) < 1e-12, "fixed-ratio check failed");
}

void criterion_8_directional_forecasts() {
    const StudyReport& report = shared.study();
    std::string violations;
    for (const auto& series : report.series) {
        const double last = series.train.back();
        for (const auto& model : series.models) {
            if (model.forecast.points.size() < 10) {
                violations += series.column + "/" + model.name + " has no 10-day forecast; ";
                continue;
            }
            const double ten_day = model.forecast.points[9];
            if (!(ten_day > last)) {
                violations += series.column + "/" + model.name + " 10-day forecast " +
                              fmt(ten_day) + " <= last observation " + fmt(last) + "; ";
            }
        }
    }
    require(violations.empty(), "non-rising forecasts: " + violations);
}

void criterion_9_determinism_and_runtime() {
    const StudyReport& first = shared.study(); // timed inside
    (void)first;
    require(shared.study_seconds >= 0.0, "study timing missing");
    require(shared.study_seconds < 300.0,
            "full study took " + fmt(shared.study_seconds) + " s, budget 300 s");

    StudyConfig again = shared.study_config();
    again.output_dir = (shared.work_dir / "run_b").string();
    emit_outputs(run_study(again), again);

    const fs::path dir_a = shared.study_config().output_dir;
    const fs::path dir_b = again.output_dir;
    for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        const fs::path rel = fs::relative(entry.path(), dir_a);
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(dir_b / rel, std::ios::binary);
        require(static_cast<bool>(b), "second run is missing " + rel.string());
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        require(sa.str() == sb.str(), rel.string() + " differs between equally seeded runs");
    }
}

void criterion_10_interval_geometry() {
    const StudyReport& report = shared.study();
    for (const auto& series : report.series) {
        for (const auto& model : series.models) {
            const std::string tag = series.column + " / " + model.name;
            const auto& narrow = model.forecast.intervals.at(0.80);
            const auto& wide = model.forecast.intervals.at(0.95);
            for (int s = 0; s < model.forecast.horizon; ++s) {
                require(wide.lower[s] <= narrow.lower[s] + 1e-9 &&
                            narrow.upper[s] <= wide.upper[s] + 1e-9,
                        tag + ": 80% band escapes the 95% band at h = " + std::to_string(s + 1));
                require(narrow.lower[s] <= model.forecast.points[s] + 1e-9 &&
                            model.forecast.points[s] <= narrow.upper[s] + 1e-9,
                        tag + ": point outside its own band at h = " + std::to_string(s + 1));
            }
            // analytic bands: width growth tracks the forecast standard deviation
            if (model.arima || model.ets) {
                double previous = 0.0;
                for (int s = 0; s < model.forecast.horizon; ++s) {
                    const double width = wide.upper[s] - wide.lower[s];
                    require(width >= previous - 1e-9,
                            tag + ": forecast deviation shrank at h = " + std::to_string(s + 1));
                    previous = width;
                }
            }
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    shared.data_file = argc > 1 ? argv[1] : SERIESCAST_DATA_FILE;
    shared.work_dir = fs::temp_directory_path() / "seriescast_acceptance";
    std::error_code ec;
    fs::remove_all(shared.work_dir, ec);
    fs::create_directories(shared.work_dir);

    const std::pair<const char*, std::function<void()>> criteria[] = {
        {"1. differencing order: ndiffs = 2 on both bundled series (< 1 s)",
         criterion_1_differencing},
        {"2. standalone ARIMA/ETS error magnitudes within 25% of the reference values",
         criterion_2_accuracy_magnitudes},
        {"3. MASE < 1 and MAPE < 10 for all 7 configurations; hybrid Theil's U < 1",
         criterion_3_paper_claims},
        {"4. synthetic recovery: AR(1) grid oracle, SES identity, exact-ML vs dense gaussian",
         criterion_4_synthetic_recovery},
        {"5. neuron rule: k(4) = 2 and k(7) = 4", criterion_5_neuron_rule},
        {"6. hybrid invariants: weights, convex hull, envelope bands, weight order",
         criterion_6_hybrid_invariants},
        {"7. efficiency-gain arithmetic reproduces -5.15%", criterion_7_efficiency_formula},
        {"8. every model's 10-day forecast rises above the last observation",
         criterion_8_directional_forecasts},
        {"9. byte-identical outputs under one seed; full study under 5 minutes",
         criterion_9_determinism_and_runtime},
        {"10. 80% inside 95% everywhere; analytic deviations non-decreasing",
         criterion_10_interval_geometry},
    };

    int failures = 0;
    for (const auto& [name, body] : criteria) {
        try {
            body();
            std::printf("PASS  %s\n", name);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL  %s\n      %s\n", name, e.what());
        }
        std::fflush(stdout);
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
