#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "base/timeseries.hpp"

namespace test_helpers {

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

inline double col_mean(const Eigen::MatrixXd& m, Eigen::Index j) { return m.col(j).mean(); }

inline double col_var(const Eigen::MatrixXd& m, Eigen::Index j) {
    const double mu = m.col(j).mean();
    return (m.col(j).array() - mu).square().sum() / static_cast<double>(m.rows());
}

// Order-statistic quantile matching the library's band convention.
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    auto k = static_cast<std::ptrdiff_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(v.size()) - 1);
    return v[static_cast<std::size_t>(k)];
}

inline base::TimeSeries make_series(std::vector<double> values, double dt = 1.0) {
    base::TimeSeries ts;
    ts.values = std::move(values);
    ts.dt = dt;
    ts.label = "test";
    return ts;
}

}  // namespace test_helpers
