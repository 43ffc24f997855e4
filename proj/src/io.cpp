#include "base/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace base::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void write_series_csv(const TimeSeries& ts, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "index,time,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << i << "," << format_double(static_cast<double>(i) * ts.dt) << ","
            << format_double(ts.values[i]) << "\n";
    }
}

namespace {

void write_spectrum_header(std::ofstream& out, const FrequencyGrid& grid,
                           const std::string& note, std::size_t n_samples) {
    out << "# grid_points=" << grid.size() << "\n";
    out << "# dt=" << format_double(grid.dt) << "\n";
    out << "# normalization=" << note << "\n";
    if (n_samples > 0) out << "# n_samples=" << n_samples << "\n";
}

}  // namespace

void write_spectrum_csv(const SpectrumEstimate& est, const std::filesystem::path& path,
                        const std::string& normalization_note) {
    auto out = open_out(path);
    write_spectrum_header(out, est.grid, normalization_note, est.n_samples);
    out << "frequency_per_sample,frequency_physical,psd";
    if (est.has_band()) out << ",lower,upper";
    out << "\n";
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
        out << format_double(est.grid.freqs[i]) << "," << format_double(est.grid.physical(i))
            << "," << format_double(est.psd[i]);
        if (est.has_band()) {
            out << "," << format_double(est.lower[i]) << "," << format_double(est.upper[i]);
        }
        out << "\n";
    }
}

void write_posterior_spectrum_csv(const PosteriorSpectrum& ps, const std::filesystem::path& path,
                                  const std::string& normalization_note) {
    auto out = open_out(path);
    write_spectrum_header(out, ps.estimate.grid, normalization_note, ps.n_samples);
    out << "frequency_per_sample,frequency_physical,psd,lower,upper,median\n";
    for (std::size_t i = 0; i < ps.estimate.grid.size(); ++i) {
        out << format_double(ps.estimate.grid.freqs[i]) << ","
            << format_double(ps.estimate.grid.physical(i)) << ","
            << format_double(ps.estimate.psd[i]) << "," << format_double(ps.estimate.lower[i])
            << "," << format_double(ps.estimate.upper[i]) << "," << format_double(ps.median[i])
            << "\n";
    }
}

void write_posterior_spectrum_meta(const PosteriorSpectrum& ps,
                                   const std::filesystem::path& path) {
    nlohmann::json j;
    j["n_samples"] = ps.n_samples;
    j["unstable_fraction"] = ps.unstable_fraction;
    j["level"] = ps.level;
    j["pole_exclusions"] = ps.pole_exclusions;
    write_json(j, path);
}

SpectrumEstimate read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spectrum file: " + path.string());
    SpectrumEstimate est;
    est.grid.dt = 1.0;
    std::string line;
    std::vector<std::string> header;
    bool have_header = false;
    std::size_t psd_col = 2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find("dt=");
            if (eq != std::string::npos) est.grid.dt = std::stod(line.substr(eq + 3));
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            have_header = true;
            // Prefer the median column (robust center) when present.
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (cells[c] == "median") psd_col = c;
            }
            continue;
        }
        if (cells.size() <= psd_col) {
            throw std::invalid_argument("malformed spectrum row in " + path.string());
        }
        est.grid.freqs.push_back(std::stod(cells[0]));
        est.psd.push_back(std::stod(cells[psd_col]));
    }
    if (est.psd.empty()) throw std::invalid_argument("no spectrum rows in " + path.string());
    est.grid.validate();
    return est;
}

void write_samples_csv(const PosteriorSamples& samples, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (std::size_t k = 1; k <= samples.order; ++k) out << "a_" << k << ",";
    out << "sigma2\n";
    for (Eigen::Index i = 0; i < samples.draws.rows(); ++i) {
        for (Eigen::Index j = 0; j < samples.draws.cols(); ++j) {
            if (j > 0) out << ",";
            out << format_double(samples.draws(i, j));
        }
        out << "\n";
    }
}

void write_samples_meta(const PosteriorSamples& samples, const std::filesystem::path& path) {
    nlohmann::json j;
    j["seed"] = samples.seed;
    j["n_chains"] = samples.n_chains;
    j["n_draws"] = samples.n_draws();
    j["order"] = samples.order;
    j["acceptance_rate"] = samples.acceptance_rate;
    j["warnings"] = samples.warnings;
    if (samples.n_chains >= 2) {
        const ChainDiagnostics diag = chain_diagnostics(samples);
        std::vector<double> rhat(diag.rhat.data(), diag.rhat.data() + diag.rhat.size());
        std::vector<double> ess(diag.ess.data(), diag.ess.data() + diag.ess.size());
        j["rhat"] = rhat;
        j["ess"] = ess;
        j["diagnostics_note"] =
            "rhat: split-chain potential scale reduction sqrt(var_plus / W); ess: multi-chain "
            "autocorrelation estimate truncated at the first nonpositive paired sum, capped at "
            "the total draw count; columns a_1..a_p, sigma2";
    }
    write_json(j, path);
}

nlohmann::json ar_params_to_json(const ARParams& p) {
    nlohmann::json j;
    j["order"] = p.order();
    j["coefficients"] = p.coefficients;
    j["noise_variance"] = p.noise_variance;
    return j;
}

ARParams ar_params_from_json(const nlohmann::json& j) {
    ARParams p;
    p.coefficients = j.at("coefficients").get<std::vector<double>>();
    p.noise_variance = j.at("noise_variance").get<double>();
    if (j.contains("order") && j.at("order").get<std::size_t>() != p.order()) {
        throw std::invalid_argument("ARParams JSON: order does not match coefficient count");
    }
    p.validate();
    return p;
}

void write_ar_params(const ARParams& p, const std::filesystem::path& path) {
    write_json(ar_params_to_json(p), path);
}

ARParams read_ar_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open params file: " + path.string());
    nlohmann::json j;
    in >> j;
    return ar_params_from_json(j);
}

nlohmann::json peaks_to_json(const PeakSet& peaks) {
    nlohmann::json j;
    j["peaks"] = nlohmann::json::array();
    for (const Peak& p : peaks.peaks) {
        j["peaks"].push_back({{"frequency", p.frequency}, {"height", p.height}});
    }
    if (!peaks.empty()) {
        j["main_peak_index"] = peaks.main_peak_index;
        j["main_peak_frequency"] = peaks.main().frequency;
    }
    return j;
}

void write_peaks(const PeakSet& peaks, const std::filesystem::path& path) {
    write_json(peaks_to_json(peaks), path);
}

void write_cv_table_csv(const CVResult& cv, const std::filesystem::path& path) {
    auto out = open_out(path);
    const std::size_t n_folds = cv.table.empty() ? 0 : cv.table.front().fold_scores.size();
    out << "lambda,alpha,beta,mu0_scalar";
    for (std::size_t f = 1; f <= n_folds; ++f) out << ",fold_" << f;
    out << ",mean_score\n";
    for (const CVScore& s : cv.table) {
        out << format_double(s.lambda) << "," << format_double(s.alpha) << ","
            << format_double(s.beta) << "," << format_double(s.mu0_scalar);
        for (double fs : s.fold_scores) out << "," << format_double(fs);
        out << "," << format_double(s.mean_score) << "\n";
    }
}

nlohmann::json hyper_to_json(const ModelTwoHyper& h) {
    nlohmann::json j;
    j["lambda"] = h.lambda;
    j["alpha"] = h.alpha;
    j["beta"] = h.beta;
    std::vector<double> mu0(h.mu0.data(), h.mu0.data() + h.mu0.size());
    j["mu0"] = mu0;
    return j;
}

void write_acf_csv(const std::vector<double>& acf_vals, const std::vector<double>& pacf_vals,
                   const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "lag,acf,pacf\n";
    for (std::size_t k = 0; k < acf_vals.size(); ++k) {
        out << k << "," << format_double(acf_vals[k]) << ","
            << format_double(k < pacf_vals.size() ? pacf_vals[k] : 0.0) << "\n";
    }
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace base::io
