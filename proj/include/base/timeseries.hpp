#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "base/ar_params.hpp"

namespace base {

/// Uniformly sampled real-valued signal.
struct TimeSeries {
    std::vector<double> values;
    double dt = 1.0;  // time units per sample, > 0
    std::string label;

    std::size_t size() const { return values.size(); }

    /// Throws std::invalid_argument if empty, any value non-finite, or dt <= 0.
    void validate() const;
};

/// Exponential (Laplace) covariance K(tau) = marginal_variance * exp(-|tau| / lengthscale),
/// plus optional i.i.d. observation noise on top of the process draw.
struct LaplaceKernelParams {
    double marginal_variance = 1.0;
    double lengthscale = 1.0;
    double obs_noise_variance = 0.0;

    void validate() const;
};

/// Simulate n samples of an AR(p) process from zero initial conditions,
/// discarding burn_in samples. Rejects unstable coefficient sets.
/// Deterministic given seed.
TimeSeries simulate_ar(const ARParams& params, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed, double dt = 1.0);

/// Recommended burn-in for simulate_ar: max(100, 10 * p).
std::size_t default_burn_in(std::size_t p);

/// One draw from a zero-mean Gaussian process with Laplace covariance on the
/// grid t_i = i * dt, via lower-triangular factorization of the covariance with
/// escalating diagonal jitter (1e-10 .. 1e-4 times marginal_variance), plus
/// i.i.d. observation noise. Guarded to n <= 10000. Deterministic given seed.
TimeSeries simulate_gp_laplace(const LaplaceKernelParams& kernel, std::size_t n, double dt,
                               std::uint64_t seed);

/// Read one column of a CSV file as a time series. `value_column` is either a
/// 0-based column index ("2") or a header name ("SUNACTIVITY"); a header row is
/// detected automatically when the first row does not parse. Missing or
/// unparseable cells raise errors naming the row and column.
TimeSeries load_csv(const std::filesystem::path& path, const std::string& value_column,
                    double dt);

/// First floor(fraction * size) samples, fraction in (0, 1]; dt unchanged.
TimeSeries subsample_prefix(const TimeSeries& ts, double fraction);

/// Autocorrelation for lags 0..max_lag. Sample mean is removed; the biased
/// (divide by n) autocovariance estimator is used so that the sequence is
/// positive semidefinite. acf[0] == 1.
std::vector<double> acf(const TimeSeries& ts, std::size_t max_lag);

/// Partial autocorrelation for lags 0..max_lag via the Durbin-Levinson
/// recursion on acf(ts, max_lag). pacf[0] == 1 by convention.
std::vector<double> pacf(const TimeSeries& ts, std::size_t max_lag);

}  // namespace base
