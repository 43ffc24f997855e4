#include "base/posterior_psd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "base/ar_model.hpp"

namespace base {

namespace {

// Order-statistic quantile (no interpolation): the ceil(q * m)-th smallest.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double m = static_cast<double>(sorted.size());
    auto k = static_cast<std::ptrdiff_t>(std::ceil(q * m)) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(sorted.size()) - 1);
    return sorted[static_cast<std::size_t>(k)];
}

}  // namespace

PosteriorSpectrum psd_posterior(const PosteriorSamples& samples, const FrequencyGrid& grid,
                                double level) {
    samples.validate();
    grid.validate();
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("psd_posterior: level must lie in (0, 1)");
    }

    const std::size_t n_draws = samples.n_draws();
    const std::size_t n_freq = grid.size();
    const std::size_t p = samples.order;

    PosteriorSpectrum ps;
    ps.level = level;
    ps.n_samples = n_draws;

    // PSD of every draw at every frequency; pole hits become NaN and are
    // excluded per frequency.
    std::vector<std::vector<double>> per_freq(n_freq);
    for (auto& col : per_freq) col.reserve(n_draws);

    std::size_t unstable = 0;
    ARParams theta;
    for (std::size_t i = 0; i < n_draws; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        theta.coefficients.resize(p);
        for (std::size_t k = 0; k < p; ++k) {
            theta.coefficients[k] = samples.draws(row, static_cast<Eigen::Index>(k));
        }
        theta.noise_variance = samples.draws(row, static_cast<Eigen::Index>(p));
        if (!stability_check(theta).stable) ++unstable;
        for (std::size_t f = 0; f < n_freq; ++f) {
            const double den = detail::ar_denominator_sq(theta, grid.freqs[f]);
            if (den < 1e-30) {
                ++ps.pole_exclusions;
                continue;
            }
            per_freq[f].push_back(std::max(theta.noise_variance / den, kPsdFloor));
        }
    }
    ps.unstable_fraction = static_cast<double>(unstable) / static_cast<double>(n_draws);

    ps.estimate.grid = grid;
    ps.estimate.n_samples = n_draws;
    ps.estimate.psd.resize(n_freq);
    ps.estimate.lower.resize(n_freq);
    ps.estimate.upper.resize(n_freq);
    ps.median.resize(n_freq);

    const double q_lo = (1.0 - level) / 2.0;
    const double q_hi = (1.0 + level) / 2.0;
    for (std::size_t f = 0; f < n_freq; ++f) {
        auto& vals = per_freq[f];
        if (vals.empty()) {
            throw std::runtime_error("psd_posterior: every draw hit a pole at frequency " +
                                     std::to_string(grid.freqs[f]) + " cycles/sample");
        }
        double acc = 0.0;  // deterministic reduction in draw order
        for (double v : vals) acc += v;
        ps.estimate.psd[f] = acc / static_cast<double>(vals.size());
        std::sort(vals.begin(), vals.end());
        ps.estimate.lower[f] = quantile_sorted(vals, q_lo);
        ps.estimate.upper[f] = quantile_sorted(vals, q_hi);
        ps.median[f] = quantile_sorted(vals, 0.5);
    }
    return ps;
}

PeakSet posterior_peaks(const PosteriorSpectrum& ps, double min_prominence_ratio) {
    if (ps.median.size() != ps.estimate.grid.size() || ps.median.empty()) {
        throw std::invalid_argument("posterior_peaks: malformed posterior spectrum");
    }
    SpectrumEstimate median_curve;
    median_curve.grid = ps.estimate.grid;
    median_curve.psd = ps.median;
    return find_peaks(median_curve, min_prominence_ratio);
}

}  // namespace base
