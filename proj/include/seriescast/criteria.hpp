#pragma once

#include "seriescast/error.hpp"

namespace seriescast {

/// Bias-corrected AIC: -2 loglik + 2k + 2k(k+1)/(n-k-1). k counts all
/// estimated quantities including the innovation variance.
inline double aicc(double loglik, int k, int n) {
    if (n <= k + 1) throw DomainError("aicc: need n > k + 1");
    const double aic = -2.0 * loglik + 2.0 * k;
    return aic + 2.0 * k * (k + 1.0) / (static_cast<double>(n) - k - 1.0);
}

} // namespace seriescast
