#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "base/model_two.hpp"
#include "base/posterior_psd.hpp"
#include "base/spectrum.hpp"
#include "test_helpers.hpp"

using base::FrequencyGrid;
using base::PosteriorSamples;
using base::PosteriorSpectrum;
using test_helpers::make_series;

namespace {

PosteriorSamples repeat_draw(const std::vector<double>& coeffs, double s2, std::size_t n) {
    PosteriorSamples s;
    s.order = coeffs.size();
    s.n_chains = 1;
    s.draws.resize(Eigen::Index(n), Eigen::Index(coeffs.size() + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            s.draws(Eigen::Index(i), Eigen::Index(k)) = coeffs[k];
        }
        s.draws(Eigen::Index(i), Eigen::Index(coeffs.size())) = s2;
    }
    return s;
}

PosteriorSamples nig_draws_for(const std::vector<double>& coeffs, std::size_t n_data,
                               std::size_t n_draws, std::uint64_t seed) {
    base::ARParams gen;
    gen.coefficients = coeffs;
    const base::TimeSeries ts = base::simulate_ar(gen, n_data, 100, seed);
    const base::NIGPosterior post =
        base::nig_posterior(ts, coeffs.size(), base::ModelTwoHyper::defaults(coeffs.size()));
    return base::sample_nig(post, n_draws, seed + 1);
}

}  // namespace

TEST_CASE("psd_posterior: a degenerate posterior collapses all summaries") {
    const PosteriorSamples s = repeat_draw({0.5}, 1.0, 50);
    const FrequencyGrid grid = FrequencyGrid::regular(64);
    const PosteriorSpectrum ps = base::psd_posterior(s, grid, 0.95);

    base::ARParams theta;
    theta.coefficients = {0.5};
    theta.noise_variance = 1.0;
    const base::SpectrumEstimate point = base::ar_psd(theta, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(ps.estimate.psd[i] == doctest::Approx(point.psd[i]).epsilon(1e-14));
        CHECK(ps.estimate.lower[i] == point.psd[i]);
        CHECK(ps.estimate.upper[i] == point.psd[i]);
        CHECK(ps.median[i] == point.psd[i]);
    }
    CHECK(ps.unstable_fraction == 0.0);
    CHECK(ps.n_samples == 50);
}

TEST_CASE("psd_posterior: quantile sandwich and positivity") {
    const PosteriorSamples s = nig_draws_for({0.6, -0.3}, 300, 3000, 4);
    const PosteriorSpectrum ps = base::psd_posterior(s, FrequencyGrid::regular(128), 0.9);
    for (std::size_t i = 0; i < ps.median.size(); ++i) {
        CHECK(ps.estimate.lower[i] <= ps.median[i]);
        CHECK(ps.median[i] <= ps.estimate.upper[i]);
        CHECK(ps.estimate.lower[i] > 0.0);
        CHECK(ps.estimate.psd[i] > 0.0);
    }
    CHECK(ps.level == 0.9);
}

TEST_CASE("psd_posterior: order-statistic bands commute with the log transform") {
    const PosteriorSamples s = nig_draws_for({0.5}, 120, 401, 9);
    const FrequencyGrid grid = FrequencyGrid::regular(32);
    const PosteriorSpectrum ps = base::psd_posterior(s, grid, 0.95);

    // Recompute the band from scratch on log-PSD values and exponentiate.
    for (std::size_t f = 0; f < grid.size(); ++f) {
        std::vector<double> logs;
        for (std::size_t i = 0; i < s.n_draws(); ++i) {
            base::ARParams theta;
            theta.coefficients = {s.draws(Eigen::Index(i), 0)};
            theta.noise_variance = s.draws(Eigen::Index(i), 1);
            const double den = base::detail::ar_denominator_sq(theta, grid.freqs[f]);
            logs.push_back(std::log(std::max(theta.noise_variance / den, base::kPsdFloor)));
        }
        const double lo = std::exp(test_helpers::quantile(logs, 0.025));
        const double hi = std::exp(test_helpers::quantile(logs, 0.975));
        const double med = std::exp(test_helpers::quantile(logs, 0.5));
        CHECK(ps.estimate.lower[f] == doctest::Approx(lo).epsilon(1e-12));
        CHECK(ps.estimate.upper[f] == doctest::Approx(hi).epsilon(1e-12));
        CHECK(ps.median[f] == doctest::Approx(med).epsilon(1e-12));
    }
}

TEST_CASE("psd_posterior: pointwise mean is Monte Carlo self-consistent") {
    const PosteriorSamples big = nig_draws_for({0.7}, 500, 100000, 12);
    const PosteriorSamples small = nig_draws_for({0.7}, 500, 1000, 12);
    const FrequencyGrid grid = FrequencyGrid::regular(64);
    const PosteriorSpectrum ps_big = base::psd_posterior(big, grid, 0.95);
    const PosteriorSpectrum ps_small = base::psd_posterior(small, grid, 0.95);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(ps_big.estimate.psd[i] - ps_small.estimate.psd[i]) /
                                    ps_big.estimate.psd[i]);
    }
    CHECK(worst < 0.05);
}

TEST_CASE("psd_posterior: band coverage reproduces the level on fresh draws") {
    base::ARParams gen;
    gen.coefficients = {0.6};
    const base::TimeSeries ts = base::simulate_ar(gen, 500, 100, 23);
    const base::NIGPosterior post = base::nig_posterior(ts, 1, base::ModelTwoHyper::defaults(1));
    const FrequencyGrid grid = FrequencyGrid::regular(64);

    const PosteriorSamples a = base::sample_nig(post, 4000, 1);
    const PosteriorSamples b = base::sample_nig(post, 4000, 2);
    const PosteriorSpectrum band = base::psd_posterior(a, grid, 0.95);

    double covered = 0.0;
    for (std::size_t f = 0; f < grid.size(); ++f) {
        std::size_t inside = 0;
        for (std::size_t i = 0; i < b.n_draws(); ++i) {
            base::ARParams theta;
            theta.coefficients = {b.draws(Eigen::Index(i), 0)};
            theta.noise_variance = b.draws(Eigen::Index(i), 1);
            const double v =
                theta.noise_variance / base::detail::ar_denominator_sq(theta, grid.freqs[f]);
            if (v >= band.estimate.lower[f] && v <= band.estimate.upper[f]) ++inside;
        }
        covered += double(inside) / double(b.n_draws());
    }
    covered /= double(grid.size());
    CHECK(covered == doctest::Approx(0.95).epsilon(0.032));
}

TEST_CASE("psd_posterior: unstable draws are retained, counted, never dropped") {
    PosteriorSamples s = repeat_draw({0.5}, 1.0, 10);
    // Make 3 of the 10 draws explosive.
    for (int i = 0; i < 3; ++i) s.draws(i, 0) = 1.5;
    FrequencyGrid grid;
    grid.freqs = {0.1, 0.2, 0.3};
    const PosteriorSpectrum ps = base::psd_posterior(s, grid, 0.8);
    CHECK(ps.unstable_fraction == doctest::Approx(0.3));
    CHECK(ps.n_samples == 10);
    CHECK(ps.pole_exclusions == 0);
}

TEST_CASE("psd_posterior: pole hits are excluded pointwise, fully dead grid errors") {
    PosteriorSamples s = repeat_draw({0.5}, 1.0, 4);
    s.draws(0, 0) = 1.0;  // unit root: pole at frequency 0
    FrequencyGrid grid;
    grid.freqs = {0.0, 0.25};
    const PosteriorSpectrum ps = base::psd_posterior(s, grid, 0.5);
    CHECK(ps.pole_exclusions == 1);
    CHECK(ps.estimate.psd[0] > 0.0);

    const PosteriorSamples all_poles = repeat_draw({1.0}, 1.0, 4);
    CHECK_THROWS_AS(base::psd_posterior(all_poles, grid, 0.5), std::runtime_error);
}

TEST_CASE("posterior_peaks: flat posterior has no peaks") {
    const PosteriorSamples s = repeat_draw({}, 1.0, 20);
    const PosteriorSpectrum ps = base::psd_posterior(s, FrequencyGrid::regular(64), 0.95);
    CHECK(base::posterior_peaks(ps).empty());
}

TEST_CASE("posterior_peaks: complex-pole posterior peaks near the pole angle") {
    const double r = 0.95, f0 = 0.1;
    const std::vector<double> truth = {2.0 * r * std::cos(2.0 * std::numbers::pi * f0), -r * r};
    const PosteriorSamples s = nig_draws_for(truth, 800, 4000, 3);
    const PosteriorSpectrum ps = base::psd_posterior(s, FrequencyGrid::regular(512), 0.95);
    const base::PeakSet peaks = base::posterior_peaks(ps);
    REQUIRE_FALSE(peaks.empty());
    CHECK(std::abs(peaks.main().frequency - f0) < 0.01);
}
