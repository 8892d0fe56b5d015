#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotorlab/error.hpp"

namespace rotorlab {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept.
inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionMismatch("fit: x and y differ in length");
    if (x.size() < 2) throw InvalidParameters("fit needs at least two points");
    const double k = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw InvalidParameters("fit needs distinct x values");
    LinearFit f;
    f.points = x.size();
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

/// Slope of log(y) against log(x).
inline LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidParameters("log-log fit needs positive values");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (x.size() != y.size()) throw DimensionMismatch("fit: x and y differ in length");
    return least_squares(lx, ly);
}

struct RatioBand {
    std::vector<double> ratios;  ///< y_i / (x_i log^p x_i)
    double min = 0.0;
    double max = 0.0;
    double spread() const { return min > 0 ? max / min : INFINITY; }
};

/// Ratios y / (x ln^p x) for boundedness checks of n log^p n growth.
inline RatioBand ratio_band(const std::vector<double>& x, const std::vector<double>& y, double p) {
    if (x.size() != y.size()) throw DimensionMismatch("ratio_band: x and y differ in length");
    if (x.empty()) throw InvalidParameters("ratio_band needs at least one point");
    RatioBand b;
    for (std::size_t i = 0; i < x.size(); ++i) b.ratios.push_back(y[i] / (x[i] * std::pow(std::log(x[i]), p)));
    b.min = *std::min_element(b.ratios.begin(), b.ratios.end());
    b.max = *std::max_element(b.ratios.begin(), b.ratios.end());
    return b;
}

}  // namespace rotorlab
