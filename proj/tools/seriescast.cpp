// seriescast - time-series forecasting study CLI
//
// `seriescast run` reproduces the full model comparison on a CSV of
// daily series: ARIMA / ETS / NNAR plus their CV-weighted hybrids,
// accuracy tables, winner and efficiency tables, forecast tables and
// SVG plots. `seriescast fit` fits one model on one column and prints
// a summary.
//
// Exit codes: 0 success, 1 any model failure, 2 config or IO error.

#include "seriescast/seriescast.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> levels;
    std::string cell;
    std::istringstream stream(text);
    while (std::getline(stream, cell, ',')) {
        if (cell.empty()) continue;
        double value = std::stod(cell);
        if (value > 1.0) value /= 100.0; // accept "80,95" as well as "0.8,0.95"
        levels.push_back(value);
    }
    if (levels.empty()) throw seriescast::DomainError("no confidence levels given");
    return levels;
}

std::vector<std::string> parse_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream stream(text);
    while (std::getline(stream, cell, ',')) {
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

void print_accuracy(const seriescast::AccuracyReport& a) {
    std::printf("  MAE   %12.4f\n", a.mae);
    std::printf("  MAPE  %12.4f %%\n", a.mape);
    std::printf("  MASE  %12.4f\n", a.mase);
    std::printf("  RMSE  %12.4f\n", a.rmse);
    std::printf("  ACF1  %12.4f\n", a.acf1);
    std::printf("  Theil's U %8.4f\n", a.theils_u);
    std::printf("  accuracy (100-MAPE) %.2f %%\n", seriescast::forecast_accuracy_pct(a));
}

void print_forecast(const seriescast::TimeSeries& train, const seriescast::Forecast& forecast,
                    const std::vector<double>& levels) {
    std::string header = "date,point";
    for (double lv : levels) {
        const int tag = static_cast<int>(std::lround(lv * 100));
        header += ",lo" + std::to_string(tag) + ",hi" + std::to_string(tag);
    }
    std::printf("%s\n", header.c_str());
    for (int s = 0; s < forecast.horizon; ++s) {
        const auto date = train.end_date().plus_days(s + 1);
        std::printf("%s,%.4f", date.to_string().c_str(), forecast.points[s]);
        for (double lv : levels) {
            const auto& band = forecast.intervals.at(lv);
            std::printf(",%.4f,%.4f", band.lower[s], band.upper[s]);
        }
        std::printf("\n");
    }
}

int run_fit(const std::string& model_name, const std::string& input, const std::string& column,
            const std::string& date_column, int horizon, std::uint64_t seed,
            const std::vector<double>& levels) {
    using namespace seriescast;
    const auto loaded = load_csv(input, date_column, {column});
    const TimeSeries& series = loaded.at(column);
    std::printf("series %s: %zu observations, %s .. %s\n", column.c_str(), series.size(),
                series.start_date().to_string().c_str(), series.end_date().to_string().c_str());

    const auto report_fit = [&](const AccuracyReport& a) { print_accuracy(a); };

    if (model_name == "arima") {
        const ArimaModel model = auto_arima(series);
        std::printf("ARIMA %s  aicc=%.2f  sigma2=%.4f  loglik=%.2f\n",
                    model.order.to_string().c_str(), model.aicc, model.sigma2, model.loglik);
        for (std::size_t i = 0; i < model.phi.size(); ++i) {
            std::printf("  ar%zu % .4f\n", i + 1, model.phi[i]);
        }
        for (std::size_t i = 0; i < model.theta.size(); ++i) {
            std::printf("  ma%zu % .4f\n", i + 1, model.theta[i]);
        }
        if (model.include_mean) std::printf("  mean % .4f\n", model.mean);
        report_fit(detail::fitted_accuracy(series, fitted_values(model)));
        if (horizon > 0) print_forecast(series, forecast_arima(model, horizon, levels), levels);
    } else if (model_name == "ets") {
        const EtsModel model = auto_ets(series);
        std::printf("ETS %s  aicc=%.2f  sigma2=%.4f  alpha=%.4f  beta=%.4f  damping=%.4f\n",
                    model.spec.to_string().c_str(), model.aicc, model.sigma2, model.alpha,
                    model.beta, model.damping);
        report_fit(detail::fitted_accuracy(series, fitted_values(model)));
        if (horizon > 0) print_forecast(series, forecast_ets(model, horizon, levels), levels);
    } else if (model_name == "nnar") {
        const int p = select_lags(series);
        const NnarModel model = fit_nnar(series, p, 20, seed);
        std::printf("NNAR (%d,%d)  sigma2=%.4f  repeats=%zu\n", model.p, model.k,
                    model.residual_sigma2, model.networks.size());
        report_fit(detail::fitted_accuracy(series, model.fitted));
        if (horizon > 0) {
            print_forecast(series, nnar_intervals(model, horizon, 1000, levels, seed + 1), levels);
        }
    } else if (model_name.rfind("hybrid:", 0) == 0) {
        std::vector<ComponentSpec> specs;
        for (const auto& part : parse_list(model_name.substr(7))) {
            std::string name;
            std::istringstream stream(part);
            while (std::getline(stream, name, '+')) {
                if (name == "arima") specs.push_back({ComponentKind::arima});
                else if (name == "ets") specs.push_back({ComponentKind::ets});
                else if (name == "nnar") specs.push_back({ComponentKind::nnar});
                else throw DomainError("unknown hybrid component '" + name + "'");
            }
        }
        const HybridEnsemble ensemble = fit_hybrid(series, specs, seed);
        std::printf("hybrid lambda=%.4f\n", ensemble.lambda);
        for (const auto& component : ensemble.components) {
            std::printf("  %-6s weight=%.4f  cv_rmse=%.4f\n", to_string(component.kind).c_str(),
                        component.weight, component.cv_rmse);
        }
        report_fit(detail::fitted_accuracy(series, hybrid_fitted(ensemble)));
        if (horizon > 0) {
            print_forecast(series, forecast_hybrid(ensemble, horizon, levels), levels);
        }
    } else {
        throw DomainError("unknown model '" + model_name +
                          "' (expected arima|ets|nnar|hybrid:<a+b[+c]>)");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"seriescast: ARIMA / ETS / NNAR forecasting with hybrid ensembles"};
    app.set_config("--config", "", "plain-text key=value config file; CLI flags take precedence");
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the full model-comparison study");
    run->configurable();
    std::string run_input, run_output;
    std::string run_date_column = "date";
    std::string run_columns = "ricoverati_con_sintomi,terapia_intensiva";
    std::string run_levels = "80,95";
    std::string run_train_end;
    int run_horizon = 45;
    int run_holdout = 0;
    std::uint64_t run_seed = 42;
    double run_cv_min_train = 0.7;
    bool run_no_plots = false;
    run->add_option("--input", run_input, "input CSV path")->required();
    run->add_option("--output", run_output, "output directory")->required();
    run->add_option("--horizon", run_horizon, "forecast days");
    run->add_option("--seed", run_seed, "RNG seed");
    run->add_option("--levels", run_levels, "comma-separated confidence levels (e.g. 80,95)");
    run->add_option("--holdout", run_holdout, "days held out for out-of-sample accuracy");
    run->add_option("--date-column", run_date_column, "date column name");
    run->add_option("--columns", run_columns, "comma-separated value column names");
    run->add_option("--train-end-date", run_train_end, "last training date (ISO), default all");
    run->add_option("--cv-min-train", run_cv_min_train,
                    "fraction of the series used as the smallest CV training window");
    run->add_flag("--no-plots", run_no_plots, "skip SVG plot emission");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a single model on one column");
    fit->configurable();
    std::string fit_model, fit_input, fit_column;
    std::string fit_date_column = "date";
    std::string fit_levels = "80,95";
    int fit_horizon = 0;
    std::uint64_t fit_seed = 42;
    fit->add_option("--model", fit_model, "arima|ets|nnar|hybrid:<a+b[+c]>")->required();
    fit->add_option("--input", fit_input, "input CSV path")->required();
    fit->add_option("--column", fit_column, "value column name")->required();
    fit->add_option("--date-column", fit_date_column, "date column name");
    fit->add_option("--horizon", fit_horizon, "also print a forecast table");
    fit->add_option("--seed", fit_seed, "RNG seed");
    fit->add_option("--levels", fit_levels, "comma-separated confidence levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            seriescast::StudyConfig config;
            config.input_path = run_input;
            config.output_dir = run_output;
            config.date_column = run_date_column;
            config.series_columns = parse_list(run_columns);
            config.train_end_date = run_train_end;
            config.horizon = run_horizon;
            config.levels = parse_levels(run_levels);
            config.seed = run_seed;
            config.cv_min_train_fraction = run_cv_min_train;
            config.plots = !run_no_plots;
            config.holdout = run_holdout;

            const auto report = seriescast::run_study(config);
            seriescast::emit_outputs(report, config);
            for (const auto& series : report.series) {
                std::printf("%s:\n", series.column.c_str());
                for (const auto& model : series.models) {
                    if (model.failed) {
                        std::printf("  %-16s FAILED: %s\n", model.name.c_str(),
                                    model.error.c_str());
                    } else {
                        std::printf("  %-16s MAE %10.4f  MAPE %7.4f  MASE %6.4f  RMSE %10.4f\n",
                                    model.name.c_str(), model.accuracy.mae, model.accuracy.mape,
                                    model.accuracy.mase, model.accuracy.rmse);
                    }
                }
            }
            return report.any_failed() ? 1 : 0;
        }
        return run_fit(fit_model, fit_input, fit_column, fit_date_column, fit_horizon, fit_seed,
                       parse_levels(fit_levels));
    } catch (const seriescast::EstimationError& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
