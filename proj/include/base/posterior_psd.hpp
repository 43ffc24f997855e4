#pragma once

#include <cstddef>
#include <vector>

#include "base/mcmc.hpp"
#include "base/spectrum.hpp"

namespace base {

/// Posterior distribution over PSD curves, summarized pointwise per frequency.
struct PosteriorSpectrum {
    SpectrumEstimate estimate;   // psd = pointwise mean, lower/upper = credible band
    std::vector<double> median;  // pointwise median, robust to heavy-tailed draws
    double unstable_fraction = 0.0;
    std::size_t n_samples = 0;
    double level = 0.95;
    std::size_t pole_exclusions = 0;  // draw/frequency pairs dropped for pole hits
};

/// Map every parameter draw through the closed-form AR PSD and summarize per
/// frequency: arithmetic mean, median, and equal-tailed quantile band at
/// `level`. Quantiles are order statistics (no interpolation), so they commute
/// exactly with monotone transforms. Draws failing the stability check are
/// retained and only counted in unstable_fraction; a draw sitting exactly on a
/// pole at some grid frequency is excluded at that frequency only.
PosteriorSpectrum psd_posterior(const PosteriorSamples& samples, const FrequencyGrid& grid,
                                double level = 0.95);

/// Peaks of the posterior median PSD, in physical frequency units. The median
/// is used because the pointwise mean need not converge when the posterior
/// puts mass near the unit circle (its expectation can be infinite there).
PeakSet posterior_peaks(const PosteriorSpectrum& ps, double min_prominence_ratio = 0.05);

}  // namespace base
