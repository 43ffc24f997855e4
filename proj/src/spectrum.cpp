#include "base/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace base {

FrequencyGrid FrequencyGrid::regular(std::size_t n_points, double dt) {
    if (n_points < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
    FrequencyGrid g;
    g.dt = dt;
    g.freqs.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        g.freqs[i] = 0.5 * static_cast<double>(i) / static_cast<double>(n_points - 1);
    }
    g.validate();
    return g;
}

void FrequencyGrid::validate() const {
    if (freqs.empty()) throw std::invalid_argument("FrequencyGrid: empty");
    if (!(dt > 0.0)) throw std::invalid_argument("FrequencyGrid: dt must be positive");
    if (freqs.front() < 0.0 || freqs.back() > 0.5 + 1e-15) {
        throw std::invalid_argument("FrequencyGrid: frequencies must lie in [0, 0.5]");
    }
    for (std::size_t i = 1; i < freqs.size(); ++i) {
        if (!(freqs[i] > freqs[i - 1])) {
            throw std::invalid_argument("FrequencyGrid: frequencies must be strictly increasing");
        }
    }
}

namespace detail {

// |1 - sum_k a_k e^{-i 2 pi xi k}|^2 via Horner evaluation in e^{-i 2 pi xi}.
double ar_denominator_sq(const ARParams& theta, double xi) {
    const std::complex<double> z = std::polar(1.0, -2.0 * std::numbers::pi * xi);
    std::complex<double> poly(0.0, 0.0);
    for (std::size_t k = theta.order(); k >= 1; --k) {
        poly = (poly + theta.coefficients[k - 1]) * z;
    }
    const std::complex<double> den = 1.0 - poly;
    return std::norm(den);
}

}  // namespace detail

SpectrumEstimate ar_psd(const ARParams& theta, const FrequencyGrid& grid) {
    theta.validate();
    grid.validate();
    SpectrumEstimate est;
    est.grid = grid;
    est.psd.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double den = detail::ar_denominator_sq(theta, grid.freqs[i]);
        if (den < 1e-30) {
            throw std::runtime_error("ar_psd: pole on the grid at frequency " +
                                     std::to_string(grid.freqs[i]) + " cycles/sample");
        }
        est.psd[i] = theta.noise_variance / den;
    }
    return est;
}

SpectrumEstimate periodogram(const TimeSeries& ts, bool demean) {
    ts.validate();
    const std::size_t n = ts.size();
    if (n < 2) throw std::invalid_argument("periodogram: need at least 2 samples");

    double mean = 0.0;
    if (demean) {
        for (double v : ts.values) mean += v;
        mean /= static_cast<double>(n);
    }

    SpectrumEstimate est;
    est.grid.dt = ts.dt;
    const std::size_t n_bins = n / 2 + 1;
    est.grid.freqs.resize(n_bins);
    est.psd.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j) {
        est.grid.freqs[j] = static_cast<double>(j) / static_cast<double>(n);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            // Reduce j*t mod n first so the phase stays well-conditioned.
            const std::size_t phase_idx = (j * t) % n;
            const double angle =
                -2.0 * std::numbers::pi * static_cast<double>(phase_idx) / static_cast<double>(n);
            acc += (ts.values[t] - mean) * std::polar(1.0, angle);
        }
        est.psd[j] = std::max(std::norm(acc) / static_cast<double>(n), kPsdFloor);
    }
    return est;
}

SpectrumEstimate laplace_true_psd(const LaplaceKernelParams& kernel, const FrequencyGrid& grid) {
    kernel.validate();
    grid.validate();
    SpectrumEstimate est;
    est.grid = grid;
    est.psd.resize(grid.size());
    const double l = kernel.lengthscale;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = 2.0 * std::numbers::pi * grid.physical(i) * l;
        est.psd[i] = std::max(2.0 * kernel.marginal_variance * l / (1.0 + w * w), kPsdFloor);
    }
    return est;
}

PeakSet find_peaks(const SpectrumEstimate& est, double min_prominence_ratio) {
    const std::vector<double>& s = est.psd;
    if (s.size() < 3) throw std::invalid_argument("find_peaks: need a grid of length >= 3");
    if (min_prominence_ratio < 0.0) {
        throw std::invalid_argument("find_peaks: min_prominence_ratio must be >= 0");
    }

    const double global_max = *std::max_element(s.begin(), s.end());
    const double threshold = min_prominence_ratio * global_max;

    PeakSet ps;
    auto consider = [&](std::size_t i) {
        if (s[i] >= threshold) {
            ps.peaks.push_back({est.grid.physical(i), s[i]});
        }
    };
    if (s[0] > s[1]) consider(0);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] > s[i - 1] && s[i] > s[i + 1]) consider(i);
    }
    if (s[s.size() - 1] > s[s.size() - 2]) consider(s.size() - 1);

    for (std::size_t i = 0; i < ps.peaks.size(); ++i) {
        if (ps.peaks[i].height > ps.peaks[ps.main_peak_index].height) ps.main_peak_index = i;
    }
    return ps;
}

}  // namespace base
