#pragma once

#include "seriescast/date.hpp"
#include "seriescast/error.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace seriescast {

/**
 * Daily univariate time series: a strictly ordered observation vector
 * anchored at a start date. Dates are implied consecutive, one
 * observation per day, with no missing entries.
 */
class TimeSeries {
public:
    TimeSeries() = default;

    TimeSeries(Date start, std::vector<double> values)
        : start_(start), values_(std::move(values)) {
        if (values_.empty()) {
            throw SizeError("TimeSeries requires at least one observation");
        }
    }

    explicit TimeSeries(std::vector<double> values)
        : TimeSeries(Date{2000, 1, 1}, std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    Date start_date() const { return start_; }
    Date date_at(std::size_t i) const { return start_.plus_days(static_cast<long>(i)); }
    Date end_date() const { return date_at(values_.size() - 1); }
    double back() const { return values_.back(); }

    /// First n observations, keeping the start date.
    TimeSeries head(std::size_t n) const {
        if (n == 0 || n > values_.size()) {
            throw SizeError("head: invalid prefix length");
        }
        return TimeSeries(start_, std::vector<double>(values_.begin(), values_.begin() + n));
    }

    /// Same dates, new values of identical length.
    TimeSeries with_values(std::vector<double> values) const {
        if (values.size() != values_.size()) {
            throw SizeError("with_values: length mismatch");
        }
        return TimeSeries(start_, std::move(values));
    }

private:
    Date start_;
    std::vector<double> values_;
};

/// One confidence level's lower/upper band over the forecast horizon.
struct IntervalBand {
    std::vector<double> lower;
    std::vector<double> upper;
};

/**
 * Point forecast path plus prediction-interval bands per confidence
 * level. Invariants: lower <= point <= upper elementwise at every
 * level, and narrower bands nest inside wider ones.
 */
struct Forecast {
    std::size_t origin = 0; ///< index of the last training observation
    int horizon = 0;
    std::vector<double> points;
    std::map<double, IntervalBand> intervals; ///< keyed by confidence level, e.g. 0.80
};

} // namespace seriescast
