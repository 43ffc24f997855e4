#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "base/ar_params.hpp"
#include "base/timeseries.hpp"

namespace base {

/// Lagged regression view of a series: row i of X is [x_{tau-1}, ..., x_{tau-p}]
/// for tau = p+1+i (1-based), y_i = x_tau. The first p samples only condition.
struct DesignData {
    Eigen::MatrixXd X;  // (T - p) x p
    Eigen::VectorXd y;  // T - p
};

/// Build the lag design over a raw segment. Allows zero rows (segment.size() == p);
/// throws if the segment is shorter than p.
DesignData design_rows(std::span<const double> segment, std::size_t p);

/// Build the lag design for a series; requires at least two regression rows
/// (size >= p + 2).
DesignData design_matrix(const TimeSeries& ts, std::size_t p);

/// Gaussian log-likelihood of x_{p+1:T} conditional on the first p samples:
///   sum_tau [ -0.5 log(2 pi s2) - (x_tau - a . x_{tau-1:tau-p})^2 / (2 s2) ].
double conditional_log_likelihood(const ARParams& theta, const TimeSeries& ts);

/// Same conditional log-likelihood over a raw segment (conditions on the
/// segment's own first p samples).
double conditional_log_likelihood(const ARParams& theta, std::span<const double> segment);

/// Deterministic least-squares AR fit (the conditional maximum-likelihood
/// point): a = argmin ||y - X a||^2 via column-pivoted QR, noise_variance =
/// RSS / (T - p). Throws on rank deficiency with a hint to lower the order.
ARParams fit_ase(const TimeSeries& ts, std::size_t p);

struct StabilityResult {
    bool stable = true;
    std::vector<double> pole_moduli;  // descending order
};

/// Moduli of the roots of z^p - a_1 z^{p-1} - ... - a_p, computed as companion
/// matrix eigenvalues. Stable iff all moduli < 1; p = 0 is stable.
StabilityResult stability_check(const ARParams& theta);

}  // namespace base
