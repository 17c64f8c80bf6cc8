#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace seriescast::detail {

/**
 * Roots of 1 - c[0] z - c[1] z^2 - ... - c[p-1] z^p by Durand-Kerner
 * iteration. Degree stays small (<= ~10) for every model here, where
 * the method is robust. Trailing zero coefficients are trimmed.
 */
inline std::vector<std::complex<double>> lag_polynomial_roots(const std::vector<double>& coef) {
    std::size_t degree = coef.size();
    while (degree > 0 && coef[degree - 1] == 0.0) --degree;
    if (degree == 0) return {};

    // monic form: z^p - (c[p-2]/ -c[p-1]) ... work with a(z) = sum a_k z^k
    std::vector<std::complex<double>> a(degree + 1);
    a[0] = 1.0;
    for (std::size_t k = 1; k <= degree; ++k) a[k] = -coef[k - 1];

    const auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = a[degree];
        for (std::size_t k = degree; k-- > 0;) acc = acc * z + a[k];
        return acc;
    };

    std::vector<std::complex<double>> roots(degree);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> power(1.0, 0.0);
    for (auto& r : roots) {
        power *= seed;
        r = power;
    }

    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            std::complex<double> denom = a[degree];
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) < 1e-300) continue;
            const std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-13) break;
    }
    return roots;
}

/// Largest reciprocal root modulus of 1 - sum c_k z^k; 0 for an empty
/// polynomial. Values >= 1 mean a non-stationary / non-invertible fit.
inline double max_inverse_root(const std::vector<double>& coef) {
    double worst = 0.0;
    for (const auto& r : lag_polynomial_roots(coef)) {
        const double m = std::abs(r);
        if (m > 1e-300) worst = std::max(worst, 1.0 / m);
    }
    return worst;
}

/**
 * Maps unconstrained values to a stationary lag-polynomial coefficient
 * vector through partial autocorrelations (tanh then the Monahan
 * recursion). Bijective onto the stationary region.
 */
inline std::vector<double> pacf_to_ar(const std::vector<double>& raw) {
    const std::size_t p = raw.size();
    std::vector<double> coef(p);
    for (std::size_t i = 0; i < p; ++i) coef[i] = std::tanh(raw[i]);
    std::vector<double> work = coef;
    for (std::size_t j = 1; j < p; ++j) {
        for (std::size_t k = 0; k < j; ++k) work[k] = coef[k] - coef[j] * coef[j - k - 1];
        for (std::size_t k = 0; k < j; ++k) coef[k] = work[k];
    }
    return coef;
}

/// Inverse of pacf_to_ar (Monahan recursion run backwards, then atanh).
inline std::vector<double> ar_to_pacf(const std::vector<double>& coef) {
    const std::size_t p = coef.size();
    std::vector<double> work = coef;
    std::vector<double> pacf(p);
    for (std::size_t j = p; j-- > 1;) {
        const double r = work[j];
        pacf[j] = r;
        const double scale = 1.0 - r * r;
        std::vector<double> prev(j);
        for (std::size_t k = 0; k < j; ++k) prev[k] = (work[k] + r * work[j - k - 1]) / scale;
        for (std::size_t k = 0; k < j; ++k) work[k] = prev[k];
    }
    if (p > 0) pacf[0] = work[0];
    for (double& v : pacf) {
        const double clamped = std::max(-0.999999999, std::min(0.999999999, v));
        v = std::atanh(clamped);
    }
    return pacf;
}

} // namespace seriescast::detail
