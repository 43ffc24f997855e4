#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "base/ar_params.hpp"

namespace base {

/// Knobs shared by the experiment presets. Draw counts apply per chain for the
/// MCMC model; the conjugate model draws n_draws * n_chains exact samples so
/// both posteriors are summarized from the same number of draws.
struct ExperimentConfig {
    std::size_t n_draws = 2000;
    std::size_t n_chains = 4;
    std::size_t grid_points = 512;
    double level = 0.95;
    std::filesystem::path input;  // sunspots: CSV path; empty = $BASE_DATA_DIR
    std::string value_column = "SUNACTIVITY";
    double dt = 1.0;
};

/// Key numbers of a finished experiment; `summary` holds the full
/// machine-readable record that is also written to summary.json.
struct ExperimentResult {
    nlohmann::json summary;

    // Fraction of grid frequencies where the true PSD lies inside the band
    // (synthetic presets only).
    std::optional<double> containment_model1;
    std::optional<double> containment_model2;
    // Same fractions restricted to the low-frequency region [0, 0.05]
    // (GP preset).
    std::optional<double> containment_low_model1;
    std::optional<double> containment_low_model2;
    // Mean of log(upper) - log(lower) across the grid.
    std::optional<double> band_width_model1;
    std::optional<double> band_width_model2;
    // Main-peak frequencies in physical units (sunspots preset).
    std::optional<double> main_peak_model1;
    std::optional<double> main_peak_model2;
    std::optional<double> periodogram_peak;
    std::optional<double> fourier_bin_width;
};

/// The synthetic AR(4) preset: simulate T = 1000 samples of a fixed stable
/// AR(4), then estimate with the periodogram, least squares and both Bayesian
/// models at order 10. Outputs land in outdir/{data,spectra,samples} plus
/// summary.json and timings.json.
ExperimentResult run_experiment_ar4(std::uint64_t seed, const std::filesystem::path& outdir,
                                    const ExperimentConfig& cfg);

/// The Gaussian-process preset: one length-1000 draw from the Laplace-kernel
/// process (variance 1, lengthscale 10, observation noise 0.01), order-4 fits,
/// Lorentzian ground truth.
ExperimentResult run_experiment_gp(std::uint64_t seed, const std::filesystem::path& outdir,
                                   const ExperimentConfig& cfg);

/// The sunspots preset: load the yearly series, run the periodogram and the
/// order-9 least-squares fit on all of it, and both Bayesian models on the
/// first 1/6 (standardized before fitting). Reports main-peak frequencies in
/// cycles per year.
ExperimentResult run_experiment_sunspots(std::uint64_t seed, const std::filesystem::path& outdir,
                                         const ExperimentConfig& cfg);

/// Dispatch by preset name: "ar4", "gp-laplace" or "sunspots".
ExperimentResult run_experiment(const std::string& name, std::uint64_t seed,
                                const std::filesystem::path& outdir, const ExperimentConfig& cfg);

/// Coefficients of the stable AR(4) used by the ar4 preset (poles at moduli
/// 0.9 and 0.8, angles 2*pi*0.12 and 2*pi*0.30).
ARParams ar4_truth();

}  // namespace base
