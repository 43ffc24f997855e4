#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "base/ar_params.hpp"
#include "base/mcmc.hpp"
#include "base/model_two.hpp"
#include "base/posterior_psd.hpp"
#include "base/spectrum.hpp"
#include "base/timeseries.hpp"

namespace base::io {

// All writers emit deterministic bytes for identical inputs: fixed 17
// significant-digit formatting, no timestamps.

std::string format_double(double v);

void write_series_csv(const TimeSeries& ts, const std::filesystem::path& path);

/// Columns: frequency_per_sample, frequency_physical, psd[, lower, upper]
/// preceded by '#' comment lines recording the grid size and normalization.
void write_spectrum_csv(const SpectrumEstimate& est, const std::filesystem::path& path,
                        const std::string& normalization_note);

/// Spectrum columns plus a median column; sidecar JSON goes next to it.
void write_posterior_spectrum_csv(const PosteriorSpectrum& ps, const std::filesystem::path& path,
                                  const std::string& normalization_note);
void write_posterior_spectrum_meta(const PosteriorSpectrum& ps, const std::filesystem::path& path);

/// Reads back a spectrum CSV written by the writers above. Uses the median
/// column when present, otherwise the psd column.
SpectrumEstimate read_spectrum_csv(const std::filesystem::path& path);

/// One row per draw, columns a_1..a_p, sigma2.
void write_samples_csv(const PosteriorSamples& samples, const std::filesystem::path& path);
/// Sidecar: seed, chains, acceptance, warnings, optional rhat/ess.
void write_samples_meta(const PosteriorSamples& samples, const std::filesystem::path& path);

nlohmann::json ar_params_to_json(const ARParams& p);
ARParams ar_params_from_json(const nlohmann::json& j);
void write_ar_params(const ARParams& p, const std::filesystem::path& path);
ARParams read_ar_params(const std::filesystem::path& path);

nlohmann::json peaks_to_json(const PeakSet& peaks);
void write_peaks(const PeakSet& peaks, const std::filesystem::path& path);

void write_cv_table_csv(const CVResult& cv, const std::filesystem::path& path);
nlohmann::json hyper_to_json(const ModelTwoHyper& h);

void write_acf_csv(const std::vector<double>& acf_vals, const std::vector<double>& pacf_vals,
                   const std::filesystem::path& path);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace base::io
