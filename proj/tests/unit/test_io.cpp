#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "base/io.hpp"
#include "base/model_two.hpp"
#include "base/posterior_psd.hpp"
#include "base/spectrum.hpp"
#include "test_helpers.hpp"

using test_helpers::make_series;

namespace {

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("series CSV round trip preserves doubles exactly") {
    const base::TimeSeries ts = make_series({1.0, -0.333333333333333315, 2.5e-17, 41.125}, 0.5);
    const auto path = tmp("base_io_series.csv");
    base::io::write_series_csv(ts, path);
    const base::TimeSeries back = base::load_csv(path, "value", 0.5);
    REQUIRE(back.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(back.values[i] == ts.values[i]);
}

TEST_CASE("writers are byte-deterministic") {
    const base::TimeSeries ts = make_series({3.14159, 2.71828, 1.41421});
    const auto p1 = tmp("base_io_det1.csv");
    const auto p2 = tmp("base_io_det2.csv");
    base::io::write_series_csv(ts, p1);
    base::io::write_series_csv(ts, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("spectrum CSV carries header comments and survives reading") {
    base::ARParams theta;
    theta.coefficients = {0.5};
    theta.noise_variance = 2.0;
    const base::SpectrumEstimate est = base::ar_psd(theta, base::FrequencyGrid::regular(32, 2.0));
    const auto path = tmp("base_io_spec.csv");
    base::io::write_spectrum_csv(est, path, "closed-form AR PSD");

    const std::string text = slurp(path);
    CHECK(text.find("# grid_points=32") != std::string::npos);
    CHECK(text.find("# normalization=closed-form AR PSD") != std::string::npos);
    CHECK(text.find("frequency_per_sample,frequency_physical,psd") != std::string::npos);

    const base::SpectrumEstimate back = base::io::read_spectrum_csv(path);
    REQUIRE(back.psd.size() == est.psd.size());
    CHECK(back.grid.dt == est.grid.dt);
    for (std::size_t i = 0; i < est.psd.size(); ++i) {
        CHECK(back.psd[i] == est.psd[i]);
        CHECK(back.grid.freqs[i] == est.grid.freqs[i]);
    }
}

TEST_CASE("posterior spectrum CSV exposes the median column to readers") {
    base::PosteriorSamples s;
    s.order = 1;
    s.n_chains = 1;
    s.draws.resize(200, 2);
    for (int i = 0; i < 200; ++i) {
        s.draws(i, 0) = 0.3 + 0.001 * i;
        s.draws(i, 1) = 1.0 + 0.002 * i;
    }
    const base::PosteriorSpectrum ps =
        base::psd_posterior(s, base::FrequencyGrid::regular(16), 0.95);
    const auto path = tmp("base_io_postspec.csv");
    base::io::write_posterior_spectrum_csv(ps, path, "closed-form AR PSD");
    base::io::write_posterior_spectrum_meta(ps, tmp("base_io_postspec.meta.json"));

    const base::SpectrumEstimate back = base::io::read_spectrum_csv(path);
    for (std::size_t i = 0; i < back.psd.size(); ++i) CHECK(back.psd[i] == ps.median[i]);
}

TEST_CASE("AR params JSON round trip") {
    base::ARParams p;
    p.coefficients = {0.25, -0.125};
    p.noise_variance = 0.75;
    const auto path = tmp("base_io_params.json");
    base::io::write_ar_params(p, path);
    const base::ARParams back = base::io::read_ar_params(path);
    CHECK(back.coefficients == p.coefficients);
    CHECK(back.noise_variance == p.noise_variance);

    const std::string text = slurp(path);
    CHECK(text.find("\"order\": 2") != std::string::npos);
}

TEST_CASE("samples CSV header names coefficients then sigma2") {
    base::PosteriorSamples s;
    s.order = 2;
    s.n_chains = 1;
    s.draws.resize(3, 3);
    s.draws << 0.1, 0.2, 1.0, 0.3, 0.4, 2.0, 0.5, 0.6, 3.0;
    const auto path = tmp("base_io_samples.csv");
    base::io::write_samples_csv(s, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("a_1,a_2,sigma2\n", 0) == 0);
    base::io::write_samples_meta(s, tmp("base_io_samples.meta.json"));
    const std::string meta = slurp(tmp("base_io_samples.meta.json"));
    CHECK(meta.find("\"acceptance_rate\"") != std::string::npos);
}

TEST_CASE("peaks JSON flags the main peak") {
    base::PeakSet ps;
    ps.peaks = {{0.1, 5.0}, {0.3, 9.0}};
    ps.main_peak_index = 1;
    const auto path = tmp("base_io_peaks.json");
    base::io::write_peaks(ps, path);
    const std::string text = slurp(path);
    CHECK(text.find("\"main_peak_index\": 1") != std::string::npos);
    CHECK(text.find("\"main_peak_frequency\": 0.3") != std::string::npos);
}
