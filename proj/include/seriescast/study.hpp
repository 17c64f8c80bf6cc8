#pragma once

#include "seriescast/arima.hpp"
#include "seriescast/csv.hpp"
#include "seriescast/ets.hpp"
#include "seriescast/hybrid.hpp"
#include "seriescast/metrics.hpp"
#include "seriescast/nnar.hpp"
#include "seriescast/svg.hpp"
#include "seriescast/time_series.hpp"
#include "seriescast/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seriescast {

/// Everything one full comparison run needs to know.
struct StudyConfig {
    std::string input_path;
    std::string date_column = "date";
    std::vector<std::string> series_columns = {"ricoverati_con_sintomi", "terapia_intensiva"};
    std::string train_end_date; ///< ISO date; empty = use the whole series
    int horizon = 45;
    std::vector<double> levels = {0.80, 0.95};
    std::uint64_t seed = 42;
    std::string output_dir;
    double cv_min_train_fraction = 0.7;
    bool plots = true;
    int holdout = 0; ///< days held out for out-of-sample accuracy; 0 = off
};

/// One line of the model-structure table (one per fitted component).
struct StructureRow {
    std::string model;
    std::string component;
    std::string structure;
    std::optional<double> aicc;   ///< absent for NNAR components
    double sigma2 = 0.0;
    std::optional<double> weight; ///< hybrid components only
    std::optional<double> lambda; ///< hybrid components only
};

/// Outcome of one of the seven model configurations on one series.
struct ModelResult {
    std::string name;
    bool failed = false;
    std::string error;
    AccuracyReport accuracy; ///< in-sample, one-step fitted residuals
    std::optional<AccuracyReport> holdout_accuracy;
    Forecast forecast; ///< data scale, config horizon
    std::vector<StructureRow> structure;
    std::optional<ArimaModel> arima;
    std::optional<EtsModel> ets;
    std::optional<NnarModel> nnar;
    std::optional<HybridEnsemble> hybrid;
};

struct SeriesReport {
    std::string column;
    TimeSeries train;
    std::vector<double> holdout_actuals;
    std::vector<ModelResult> models;

    const ModelResult* find(const std::string& name) const {
        for (const auto& m : models) {
            if (m.name == name) return &m;
        }
        return nullptr;
    }
};

struct StudyReport {
    std::vector<SeriesReport> series;

    bool any_failed() const {
        for (const auto& s : series) {
            for (const auto& m : s.models) {
                if (m.failed) return true;
            }
        }
        return false;
    }
};

/// Signed percentage change of the hybrid metric against the single
/// model's; negative values are efficiency gains.
inline double efficiency_gain(double hybrid_metric, double single_metric) {
    if (single_metric <= 0.0) {
        throw DomainError("efficiency_gain: single-model metric must be positive");
    }
    return 100.0 * (hybrid_metric - single_metric) / single_metric;
}

namespace detail {

inline AccuracyReport fitted_accuracy(const TimeSeries& train, const std::vector<double>& fitted) {
    std::vector<double> actual, predicted;
    for (std::size_t t = 0; t < fitted.size() && t < train.size(); ++t) {
        if (std::isfinite(fitted[t])) {
            actual.push_back(train[t]);
            predicted.push_back(fitted[t]);
        }
    }
    return accuracy(actual, predicted, train.values());
}

inline std::string nnar_structure(const NnarModel& model) {
    return "(" + std::to_string(model.p) + "," + std::to_string(model.k) + ")";
}

struct HybridParts {
    double lambda = 0.0;
    std::vector<HybridComponent> components; ///< ARIMA, ETS, NNAR order
    std::vector<double> cv_errors;
};

/// The three component families fitted once per series on the Box-Cox
/// scale, with shared-origin CV errors; hybrids reuse these.
inline HybridParts shared_hybrid_parts(const TimeSeries& train, std::uint64_t seed,
                                       const HybridOptions& options) {
    HybridParts parts;
    parts.lambda = guerrero_lambda(train);
    const TimeSeries transformed = box_cox(train, parts.lambda);

    const int n = static_cast<int>(train.size());
    const int min_train = std::max(
        10, static_cast<int>(std::lround(options.min_train_fraction * static_cast<double>(n))));
    int stride = options.origin_stride;
    if (stride == 0) stride = n > 150 ? 3 : 1;

    const ComponentKind kinds[3] = {ComponentKind::arima, ComponentKind::ets,
                                    ComponentKind::nnar};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::uint64_t component_seed = fold_seed(seed, 1000 + i);
        HybridComponent component = fit_component(transformed, {kinds[i]}, component_seed, options);
        component.cv_rmse =
            cv_rmse(transformed, min_train, options.cv_horizon,
                    component_cv_forecaster(component, component_seed, options), stride);
        parts.cv_errors.push_back(component.cv_rmse);
        parts.components.push_back(std::move(component));
    }
    return parts;
}

inline HybridEnsemble assemble_hybrid(const HybridParts& parts,
                                      const std::vector<std::size_t>& picks, std::size_t n,
                                      std::uint64_t seed) {
    HybridEnsemble ensemble;
    ensemble.lambda = parts.lambda;
    ensemble.seed = seed;
    ensemble.train_size = n;
    std::vector<double> errors;
    for (std::size_t idx : picks) {
        ensemble.components.push_back(parts.components[idx]);
        errors.push_back(parts.cv_errors[idx]);
    }
    const auto weights = compute_weights(errors);
    for (std::size_t i = 0; i < weights.size(); ++i) ensemble.components[i].weight = weights[i];
    return ensemble;
}

inline void add_component_rows(ModelResult& result, const HybridEnsemble& ensemble) {
    for (const auto& component : ensemble.components) {
        StructureRow row;
        row.model = result.name;
        row.component = to_string(component.kind);
        row.weight = component.weight;
        row.lambda = ensemble.lambda;
        if (std::holds_alternative<ArimaModel>(component.model)) {
            const auto& m = std::get<ArimaModel>(component.model);
            row.structure = m.order.to_string();
            row.aicc = m.aicc;
            row.sigma2 = m.sigma2;
        } else if (std::holds_alternative<EtsModel>(component.model)) {
            const auto& m = std::get<EtsModel>(component.model);
            row.structure = m.spec.to_string();
            row.aicc = m.aicc;
            row.sigma2 = m.sigma2;
        } else {
            const auto& m = std::get<NnarModel>(component.model);
            row.structure = nnar_structure(m);
            row.sigma2 = m.residual_sigma2;
        }
        result.structure.push_back(std::move(row));
    }
}

} // namespace detail

/**
 * Runs the full comparison on every configured series: the three
 * standalone models, the four cross-validation-weighted hybrids,
 * in-sample (and optional holdout) accuracy, and forecasts over the
 * configured horizon. A model failure is recorded in its slot and the
 * remaining models still run.
 */
inline StudyReport run_study(const StudyConfig& config) {
    if (config.horizon < 1) throw DomainError("run_study: horizon must be positive");
    for (double lv : config.levels) {
        if (!(lv > 0.0 && lv < 1.0)) throw DomainError("run_study: levels must lie in (0,1)");
    }
    if (config.holdout < 0) throw DomainError("run_study: holdout must be non-negative");

    const auto loaded = load_csv(config.input_path, config.date_column, config.series_columns);

    StudyReport report;
    for (std::size_t series_index = 0; series_index < config.series_columns.size();
         ++series_index) {
        const std::string& column = config.series_columns[series_index];
        TimeSeries full = loaded.at(column);

        if (!config.train_end_date.empty()) {
            const Date cut = Date::parse(config.train_end_date);
            const long span = cut - full.start_date();
            if (span < 0 || span >= static_cast<long>(full.size())) {
                throw DomainError("run_study: train_end_date outside the data range");
            }
            full = full.head(static_cast<std::size_t>(span) + 1);
        }

        SeriesReport series_report;
        series_report.column = column;
        if (config.holdout > 0) {
            if (full.size() <= static_cast<std::size_t>(config.holdout) + 60) {
                throw SizeError("run_study: series too short for the requested holdout");
            }
            series_report.train = full.head(full.size() - config.holdout);
            series_report.holdout_actuals.assign(full.values().end() - config.holdout,
                                                 full.values().end());
        } else {
            series_report.train = full;
        }
        const TimeSeries& train = series_report.train;
        if (train.size() < 60) throw SizeError("run_study: need at least 60 training points");

        const std::uint64_t series_seed = detail::fold_seed(config.seed, 7000 + series_index);
        HybridOptions hybrid_options;
        hybrid_options.min_train_fraction = config.cv_min_train_fraction;

        const auto holdout_points = [&](const ModelResult& result) -> std::vector<double> {
            const int h = config.holdout;
            if (result.arima) return forecast_arima(*result.arima, h, {}).points;
            if (result.ets) return forecast_ets(*result.ets, h, {}).points;
            if (result.nnar) return forecast_nnar(*result.nnar, h);
            return forecast_hybrid(*result.hybrid, h, {}, hybrid_options).points;
        };
        const auto finish = [&](ModelResult& result, const std::vector<double>& fitted) {
            result.accuracy = detail::fitted_accuracy(train, fitted);
            if (config.holdout > 0) {
                result.holdout_accuracy =
                    accuracy(series_report.holdout_actuals, holdout_points(result), train.values());
            }
        };

        // ARIMA
        {
            ModelResult result;
            result.name = "ARIMA";
            try {
                result.arima = auto_arima(train);
                result.forecast = forecast_arima(*result.arima, config.horizon, config.levels);
                finish(result, fitted_values(*result.arima));
                result.structure.push_back({result.name, "ARIMA",
                                            result.arima->order.to_string(), result.arima->aicc,
                                            result.arima->sigma2, std::nullopt, std::nullopt});
            } catch (const std::runtime_error& err) {
                result = ModelResult{};
                result.name = "ARIMA";
                result.failed = true;
                result.error = err.what();
            }
            series_report.models.push_back(std::move(result));
        }

        // ETS
        {
            ModelResult result;
            result.name = "ETS";
            try {
                result.ets = auto_ets(train);
                result.forecast = forecast_ets(*result.ets, config.horizon, config.levels);
                finish(result, fitted_values(*result.ets));
                result.structure.push_back({result.name, "ETS", result.ets->spec.to_string(),
                                            result.ets->aicc, result.ets->sigma2, std::nullopt,
                                            std::nullopt});
            } catch (const std::runtime_error& err) {
                result = ModelResult{};
                result.name = "ETS";
                result.failed = true;
                result.error = err.what();
            }
            series_report.models.push_back(std::move(result));
        }

        // NNAR
        {
            ModelResult result;
            result.name = "NNAR";
            try {
                const int p = select_lags(train, hybrid_options.nnar_max_p);
                result.nnar = fit_nnar(train, p, hybrid_options.nnar_repeats,
                                       detail::fold_seed(series_seed, 300));
                result.forecast =
                    nnar_intervals(*result.nnar, config.horizon, hybrid_options.interval_paths,
                                   config.levels, detail::fold_seed(series_seed, 301));
                result.forecast.origin = train.size() - 1;
                finish(result, result.nnar->fitted);
                result.structure.push_back({result.name, "NNAR",
                                            detail::nnar_structure(*result.nnar), std::nullopt,
                                            result.nnar->residual_sigma2, std::nullopt,
                                            std::nullopt});
            } catch (const std::runtime_error& err) {
                result = ModelResult{};
                result.name = "NNAR";
                result.failed = true;
                result.error = err.what();
            }
            series_report.models.push_back(std::move(result));
        }

        // shared hybrid components, then the four combinations
        std::optional<detail::HybridParts> parts;
        std::string parts_error;
        try {
            parts = detail::shared_hybrid_parts(train, series_seed, hybrid_options);
        } catch (const std::runtime_error& err) {
            parts_error = err.what();
        }

        const std::pair<std::string, std::vector<std::size_t>> hybrids[4] = {
            {"ARIMA-ETS", {0, 1}},
            {"ARIMA-NNAR", {0, 2}},
            {"ETS-NNAR", {1, 2}},
            {"ARIMA-ETS-NNAR", {0, 1, 2}},
        };
        for (std::size_t hybrid_index = 0; hybrid_index < 4; ++hybrid_index) {
            const auto& [name, picks] = hybrids[hybrid_index];
            ModelResult result;
            result.name = name;
            if (!parts) {
                result.failed = true;
                result.error = parts_error;
                series_report.models.push_back(std::move(result));
                continue;
            }
            try {
                result.hybrid = detail::assemble_hybrid(
                    *parts, picks, train.size(),
                    detail::fold_seed(series_seed, 9000 + hybrid_index));
                result.forecast =
                    forecast_hybrid(*result.hybrid, config.horizon, config.levels, hybrid_options);
                finish(result, hybrid_fitted(*result.hybrid));
                detail::add_component_rows(result, *result.hybrid);
            } catch (const std::runtime_error& err) {
                result = ModelResult{};
                result.name = name;
                result.failed = true;
                result.error = err.what();
            }
            series_report.models.push_back(std::move(result));
        }

        report.series.push_back(std::move(series_report));
    }
    return report;
}

// ---------------------------------------------------------------------------
// report tables and file emission
// ---------------------------------------------------------------------------

struct ComparisonRow {
    std::string hybrid;
    std::string single;
    std::string mae;
    std::string mape;
    std::string rmse;
};

struct EfficiencyRow {
    std::string hybrid;
    std::string single;
    double mae_pct = 0.0;
    double rmse_pct = 0.0;
};

namespace detail {

inline const std::vector<std::pair<std::string, std::vector<std::string>>>& hybrid_pairings() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
        {"ARIMA-ETS", {"ARIMA", "ETS"}},
        {"ARIMA-NNAR", {"ARIMA", "NNAR"}},
        {"ETS-NNAR", {"ETS", "NNAR"}},
        {"ARIMA-ETS-NNAR", {"ARIMA", "ETS", "NNAR"}},
    };
    return table;
}

} // namespace detail

/// Hybrid-vs-single winners by strict metric minimization.
inline std::vector<ComparisonRow> comparison_rows(const SeriesReport& series) {
    std::vector<ComparisonRow> rows;
    for (const auto& [hybrid_name, singles] : detail::hybrid_pairings()) {
        const ModelResult* hybrid = series.find(hybrid_name);
        if (!hybrid || hybrid->failed) continue;
        for (const auto& single_name : singles) {
            const ModelResult* single = series.find(single_name);
            if (!single || single->failed) continue;
            const auto cell = [](double h, double s) { return h < s ? "Hybrid" : "Single"; };
            rows.push_back({hybrid_name, single_name,
                            cell(hybrid->accuracy.mae, single->accuracy.mae),
                            cell(hybrid->accuracy.mape, single->accuracy.mape),
                            cell(hybrid->accuracy.rmse, single->accuracy.rmse)});
        }
    }
    return rows;
}

/// Percentage efficiency change of each hybrid against its singles.
inline std::vector<EfficiencyRow> efficiency_rows(const SeriesReport& series) {
    std::vector<EfficiencyRow> rows;
    for (const auto& [hybrid_name, singles] : detail::hybrid_pairings()) {
        const ModelResult* hybrid = series.find(hybrid_name);
        if (!hybrid || hybrid->failed) continue;
        for (const auto& single_name : singles) {
            const ModelResult* single = series.find(single_name);
            if (!single || single->failed) continue;
            rows.push_back({hybrid_name, single_name,
                            efficiency_gain(hybrid->accuracy.mae, single->accuracy.mae),
                            efficiency_gain(hybrid->accuracy.rmse, single->accuracy.rmse)});
        }
    }
    return rows;
}

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline std::string level_tag(double level) {
    return std::to_string(static_cast<int>(std::lround(level * 100.0)));
}

} // namespace detail

/**
 * Writes the per-series CSV tables (accuracy, structures, comparison,
 * efficiency, forecasts), failure notes and SVG plots under
 * output_dir/<column>/. Output is byte-deterministic for a fixed
 * config and seed.
 */
inline void emit_outputs(const StudyReport& report, const StudyConfig& config) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + config.output_dir + "'");

    std::vector<double> levels = config.levels;
    std::sort(levels.begin(), levels.end());

    for (const auto& series : report.series) {
        const fs::path dir = fs::path(config.output_dir) / series.column;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");

        // accuracy.csv
        {
            std::string csv = "model,mae,mape,mase,rmse,acf1,theils_u,accuracy_pct\n";
            for (const auto& model : series.models) {
                if (model.failed) continue;
                const auto& a = model.accuracy;
                csv += model.name + "," + detail::fmt(a.mae, 4) + "," + detail::fmt(a.mape, 4) +
                       "," + detail::fmt(a.mase, 4) + "," + detail::fmt(a.rmse, 4) + "," +
                       detail::fmt(a.acf1, 4) + "," + detail::fmt(a.theils_u, 4) + "," +
                       detail::fmt(forecast_accuracy_pct(a), 4) + "\n";
            }
            detail::write_file(dir / "accuracy.csv", csv);
        }

        if (config.holdout > 0) {
            std::string csv = "model,mae,mape,mase,rmse,acf1,theils_u,accuracy_pct\n";
            for (const auto& model : series.models) {
                if (model.failed || !model.holdout_accuracy) continue;
                const auto& a = *model.holdout_accuracy;
                csv += model.name + "," + detail::fmt(a.mae, 4) + "," + detail::fmt(a.mape, 4) +
                       "," + detail::fmt(a.mase, 4) + "," + detail::fmt(a.rmse, 4) + "," +
                       detail::fmt(a.acf1, 4) + "," + detail::fmt(a.theils_u, 4) + "," +
                       detail::fmt(forecast_accuracy_pct(a), 4) + "\n";
            }
            detail::write_file(dir / "accuracy_holdout.csv", csv);
        }

        // structures.csv
        {
            std::string csv = "model,component,structure,aicc,sigma2,weight,lambda\n";
            for (const auto& model : series.models) {
                for (const auto& row : model.structure) {
                    csv += row.model + "," + row.component + "," + row.structure + ",";
                    csv += row.aicc ? detail::fmt(*row.aicc, 2) : std::string();
                    csv += "," + detail::fmt(row.sigma2, 4) + ",";
                    csv += row.weight ? detail::fmt(*row.weight, 4) : std::string();
                    csv += ",";
                    csv += row.lambda ? detail::fmt(*row.lambda, 4) : std::string();
                    csv += "\n";
                }
            }
            detail::write_file(dir / "structures.csv", csv);
        }

        // comparison.csv and efficiency.csv
        {
            std::string csv = "hybrid,single,mae,mape,rmse\n";
            for (const auto& row : comparison_rows(series)) {
                csv += row.hybrid + "," + row.single + "," + row.mae + "," + row.mape + "," +
                       row.rmse + "\n";
            }
            detail::write_file(dir / "comparison.csv", csv);
        }
        {
            std::string csv = "hybrid,single,mae_pct,rmse_pct\n";
            for (const auto& row : efficiency_rows(series)) {
                csv += row.hybrid + "," + row.single + "," + detail::fmt(row.mae_pct, 2) + "," +
                       detail::fmt(row.rmse_pct, 2) + "\n";
            }
            detail::write_file(dir / "efficiency.csv", csv);
        }

        // forecasts.csv: rounded point for display, full precision kept alongside
        {
            std::string header = "date,model";
            header += ",point";
            for (double lv : levels) {
                header += ",lo" + detail::level_tag(lv) + ",hi" + detail::level_tag(lv);
            }
            header += ",point_full\n";
            std::string csv = header;
            for (const auto& model : series.models) {
                if (model.failed) continue;
                for (int s = 0; s < model.forecast.horizon; ++s) {
                    const Date date = series.train.end_date().plus_days(s + 1);
                    csv += date.to_string() + "," + model.name;
                    csv += "," + std::to_string(std::llround(model.forecast.points[s]));
                    for (double lv : levels) {
                        const auto& band = model.forecast.intervals.at(lv);
                        csv += "," + detail::fmt(band.lower[s], 4) + "," +
                               detail::fmt(band.upper[s], 4);
                    }
                    csv += "," + detail::fmt(model.forecast.points[s], 6) + "\n";
                }
            }
            detail::write_file(dir / "forecasts.csv", csv);
        }

        // failures, if any
        {
            std::string text;
            for (const auto& model : series.models) {
                if (model.failed) text += model.name + ": " + model.error + "\n";
            }
            if (!text.empty()) detail::write_file(dir / "failures.txt", text);
        }

        if (config.plots) {
            const fs::path plot_dir = dir / "plots";
            fs::create_directories(plot_dir, ec);
            if (ec) throw IoError("cannot create '" + plot_dir.string() + "'");
            for (const auto& model : series.models) {
                if (model.failed) continue;
                std::string file_name = model.name;
                std::transform(file_name.begin(), file_name.end(), file_name.begin(),
                               [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
                const std::string svg = svg_forecast_plot(
                    series.train, model.forecast, series.column + " - " + model.name);
                detail::write_file(plot_dir / (file_name + ".svg"), svg);
            }
        }
    }
}

} // namespace seriescast
