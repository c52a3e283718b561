// oracles.hpp: independent reference computations for the test suites
//
// Nothing here calls into the library's passive-state or coherent-state code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

// Poisson weights e^{-m} m^n / n! through lgamma, n < count.
inline std::vector<double> poisson(double mean, std::size_t count) {
    std::vector<double> p(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (mean == 0.0) {
            p[n] = n == 0 ? 1.0 : 0.0;
            continue;
        }
        const double k = static_cast<double>(n);
        p[n] = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    }
    return p;
}

// Passive energy in units of hbar omega of a Fock-diagonal state: repeatedly
// move the largest remaining weight onto the lowest free level.
inline double passive_quanta(std::vector<double> weights) {
    double energy = 0.0;
    for (std::size_t level = 0; level < weights.size(); ++level) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < weights.size(); ++i)
            if (weights[i] > weights[best]) best = i;
        energy += static_cast<double>(level) * weights[best];
        weights[best] = -1.0;
    }
    return energy;
}

inline double mean_quanta(const std::vector<double>& weights) {
    double n = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) n += static_cast<double>(i) * weights[i];
    return n;
}

// Enough Poisson levels to hold essentially all the weight.
inline std::size_t poisson_cutoff(double mean) {
    return static_cast<std::size_t>(mean + 12.0 * std::sqrt(mean) + 40.0);
}

// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Least-squares line through (x, y); returns {slope, intercept, max |residual|}.
struct LineFit {
    double slope, intercept, max_residual;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(y[i] - (slope * x[i] + intercept)));
    return {slope, intercept, r};
}

} // namespace oracle
