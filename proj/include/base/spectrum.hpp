#pragma once

#include <cstddef>
#include <vector>

#include "base/ar_params.hpp"
#include "base/timeseries.hpp"

namespace base {

/// PSD values below this are floored so log plots stay finite.
inline constexpr double kPsdFloor = 1e-30;

/// Frequencies in cycles per sample, strictly increasing within [0, 0.5].
/// Physical frequency (cycles per time unit) is freqs[i] / dt.
struct FrequencyGrid {
    std::vector<double> freqs;
    double dt = 1.0;

    /// n_points equally spaced frequencies on [0, 0.5].
    static FrequencyGrid regular(std::size_t n_points = 512, double dt = 1.0);

    std::size_t size() const { return freqs.size(); }
    double physical(std::size_t i) const { return freqs[i] / dt; }
    void validate() const;
};

/// A PSD curve on a grid, optionally with a pointwise credible band.
/// n_samples == 0 marks a deterministic point estimate.
struct SpectrumEstimate {
    FrequencyGrid grid;
    std::vector<double> psd;
    std::vector<double> lower;  // empty when absent
    std::vector<double> upper;
    std::size_t n_samples = 0;

    bool has_band() const { return !lower.empty(); }
};

struct Peak {
    double frequency = 0.0;  // cycles per time unit
    double height = 0.0;     // PSD value actually attained on the grid
};

/// Local maxima of a PSD curve. main_peak_index points into `peaks` at the
/// globally highest one; meaningless when `peaks` is empty.
struct PeakSet {
    std::vector<Peak> peaks;
    std::size_t main_peak_index = 0;

    bool empty() const { return peaks.empty(); }
    const Peak& main() const { return peaks.at(main_peak_index); }
};

/// Closed-form AR(p) power spectral density
///   S(xi) = sigma^2 / |1 - sum_k a_k exp(-i 2 pi xi k)|^2
/// evaluated on the grid. Throws if a grid frequency sits on a pole
/// (|denominator|^2 < 1e-30), naming the frequency.
SpectrumEstimate ar_psd(const ARParams& theta, const FrequencyGrid& grid);

/// One-sided periodogram on the Fourier grid xi_j = j / T, j = 0..floor(T/2):
///   P(xi_j) = |sum_t x_t exp(-i 2 pi xi_j t)|^2 / T.
/// No doubling is applied to interior bins, so the mean of the implied
/// two-sided periodogram equals the signal mean square (Parseval). Values are
/// floored at kPsdFloor. Optionally removes the sample mean first.
SpectrumEstimate periodogram(const TimeSeries& ts, bool demean);

/// Spectral density of the Laplace kernel (a Lorentzian):
///   S(xi) = 2 v l / (1 + (2 pi (xi/dt) l)^2),
/// with v the marginal variance, l the lengthscale and xi in cycles/sample.
SpectrumEstimate laplace_true_psd(const LaplaceKernelParams& kernel, const FrequencyGrid& grid);

/// Strict local maxima of est.psd with height >= min_prominence_ratio times
/// the global maximum. Boundary bins are eligible (a boundary bin is a peak
/// when it exceeds its single neighbour). Frequencies are reported in physical
/// units. An empty PeakSet is a valid result.
PeakSet find_peaks(const SpectrumEstimate& est, double min_prominence_ratio = 0.05);

namespace detail {
/// Squared magnitude of the AR transfer-function denominator at xi.
double ar_denominator_sq(const ARParams& theta, double xi);
}  // namespace detail

}  // namespace base
