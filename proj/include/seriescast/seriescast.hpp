#pragma once

// Umbrella header: the whole forecasting toolkit.

#include "seriescast/arima.hpp"
#include "seriescast/criteria.hpp"
#include "seriescast/csv.hpp"
#include "seriescast/date.hpp"
#include "seriescast/error.hpp"
#include "seriescast/ets.hpp"
#include "seriescast/hybrid.hpp"
#include "seriescast/metrics.hpp"
#include "seriescast/nnar.hpp"
#include "seriescast/stattests.hpp"
#include "seriescast/study.hpp"
#include "seriescast/svg.hpp"
#include "seriescast/time_series.hpp"
#include "seriescast/transform.hpp"
