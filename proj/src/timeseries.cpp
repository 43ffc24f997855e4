#include "base/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "base/ar_model.hpp"

namespace base {

void ARParams::validate() const {
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw std::invalid_argument("ARParams: non-finite coefficient");
    }
    if (!std::isfinite(noise_variance) || noise_variance <= 0.0) {
        throw std::invalid_argument("ARParams: noise_variance must be positive and finite");
    }
}

void TimeSeries::validate() const {
    if (values.empty()) throw std::invalid_argument("TimeSeries: values must be nonempty");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: non-finite value");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("TimeSeries: dt must be positive");
    }
}

void LaplaceKernelParams::validate() const {
    if (!(marginal_variance > 0.0) || !std::isfinite(marginal_variance)) {
        throw std::invalid_argument("LaplaceKernelParams: marginal_variance must be positive");
    }
    if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw std::invalid_argument("LaplaceKernelParams: lengthscale must be positive");
    }
    if (obs_noise_variance < 0.0 || !std::isfinite(obs_noise_variance)) {
        throw std::invalid_argument("LaplaceKernelParams: obs_noise_variance must be >= 0");
    }
}

std::size_t default_burn_in(std::size_t p) { return std::max<std::size_t>(100, 10 * p); }

TimeSeries simulate_ar(const ARParams& params, std::size_t n, std::size_t burn_in,
                       std::uint64_t seed, double dt) {
    params.validate();
    if (n < 1) throw std::invalid_argument("simulate_ar: n must be >= 1");
    const StabilityResult stab = stability_check(params);
    if (!stab.stable) {
        throw std::invalid_argument("simulate_ar: unstable coefficients (largest pole modulus " +
                                    std::to_string(stab.pole_moduli.front()) + ")");
    }

    const std::size_t p = params.order();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(params.noise_variance));

    std::vector<double> x(burn_in + n, 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double acc = noise(rng);
        for (std::size_t k = 1; k <= p && k <= t; ++k) {
            acc += params.coefficients[k - 1] * x[t - k];
        }
        x[t] = acc;
    }

    TimeSeries ts;
    ts.values.assign(x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end());
    ts.dt = dt;
    ts.label = "ar" + std::to_string(p);
    return ts;
}

TimeSeries simulate_gp_laplace(const LaplaceKernelParams& kernel, std::size_t n, double dt,
                               std::uint64_t seed) {
    kernel.validate();
    if (n < 1) throw std::invalid_argument("simulate_gp_laplace: n must be >= 1");
    if (n > 10000) {
        throw std::invalid_argument(
            "simulate_gp_laplace: n > 10000 would require factoring an oversized covariance");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_gp_laplace: dt must be positive");

    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double tau = static_cast<double>(i - j) * dt;
            const double k = kernel.marginal_variance * std::exp(-tau / kernel.lengthscale);
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
            cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
        }
    }

    // Draw both noise vectors up front so the output does not depend on how
    // many jitter levels the factorization needs.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    Eigen::VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = std_normal(rng);
    Eigen::VectorXd obs_noise = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (kernel.obs_noise_variance > 0.0) {
        const double sd = std::sqrt(kernel.obs_noise_variance);
        for (std::size_t i = 0; i < n; ++i) obs_noise(static_cast<Eigen::Index>(i)) = sd * std_normal(rng);
    }

    std::vector<double> tried;
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool ok = false;
    for (double jitter = 1e-10 * kernel.marginal_variance;
         jitter <= 1e-4 * kernel.marginal_variance * (1.0 + 1e-12); jitter *= 10.0) {
        tried.push_back(jitter);
        Eigen::MatrixXd jittered = cov;
        jittered.diagonal().array() += jitter;
        llt.compute(jittered);
        if (llt.info() == Eigen::Success) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        std::ostringstream msg;
        msg << "simulate_gp_laplace: covariance factorization failed; attempted jitter levels:";
        for (double j : tried) msg << " " << j;
        throw std::runtime_error(msg.str());
    }

    Eigen::VectorXd sample = llt.matrixL() * z + obs_noise;

    TimeSeries ts;
    ts.values.assign(sample.data(), sample.data() + sample.size());
    ts.dt = dt;
    ts.label = "gp_laplace";
    return ts;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t start = 0;
        while (start < cell.size() && cell[start] == ' ') ++start;
        std::string trimmed = cell.substr(start);
        if (trimmed.size() >= 2 && trimmed.front() == '"' && trimmed.back() == '"') {
            trimmed = trimmed.substr(1, trimmed.size() - 2);
        }
        cells.push_back(trimmed);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, const std::string& value_column,
                    double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("load_csv: dt must be positive");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open file " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            lines.push_back(line);
        }
    }
    if (lines.empty()) throw std::invalid_argument("load_csv: " + path.string() + " is empty");

    // Resolve the column: a nonnegative integer means an index, anything else
    // is looked up in the header row.
    std::size_t col = 0;
    bool by_index = !value_column.empty() &&
                    value_column.find_first_not_of("0123456789") == std::string::npos;
    std::size_t first_data_row = 0;
    const std::vector<std::string> head = split_csv_row(lines[0]);
    if (by_index) {
        col = std::stoul(value_column);
        double probe = 0.0;
        if (col < head.size() && !parse_double(head[col], probe)) first_data_row = 1;
    } else {
        auto it = std::find(head.begin(), head.end(), value_column);
        if (it == head.end()) {
            throw std::invalid_argument("load_csv: column '" + value_column +
                                        "' not found in header of " + path.string());
        }
        col = static_cast<std::size_t>(it - head.begin());
        first_data_row = 1;
    }

    TimeSeries ts;
    ts.dt = dt;
    ts.label = path.stem().string();
    for (std::size_t r = first_data_row; r < lines.size(); ++r) {
        const std::vector<std::string> cells = split_csv_row(lines[r]);
        if (col >= cells.size() || cells[col].empty()) {
            throw std::invalid_argument("load_csv: missing value at row " + std::to_string(r + 1) +
                                        ", column " + std::to_string(col) + " of " + path.string());
        }
        double v = 0.0;
        if (!parse_double(cells[col], v)) {
            throw std::invalid_argument("load_csv: unparseable cell '" + cells[col] + "' at row " +
                                        std::to_string(r + 1) + ", column " + std::to_string(col) +
                                        " of " + path.string());
        }
        ts.values.push_back(v);
    }
    if (ts.values.empty()) {
        throw std::invalid_argument("load_csv: column " + std::to_string(col) + " of " +
                                    path.string() + " has no data rows");
    }
    return ts;
}

TimeSeries subsample_prefix(const TimeSeries& ts, double fraction) {
    ts.validate();
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw std::invalid_argument("subsample_prefix: fraction must lie in (0, 1]");
    }
    const auto keep =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(ts.size())));
    if (keep < 1) {
        throw std::invalid_argument("subsample_prefix: fraction keeps no samples");
    }
    TimeSeries out;
    out.values.assign(ts.values.begin(), ts.values.begin() + static_cast<std::ptrdiff_t>(keep));
    out.dt = ts.dt;
    out.label = ts.label;
    return out;
}

std::vector<double> acf(const TimeSeries& ts, std::size_t max_lag) {
    ts.validate();
    const std::size_t n = ts.size();
    if (max_lag >= n) throw std::invalid_argument("acf: max_lag must be < series length");

    double mean = 0.0;
    for (double v : ts.values) mean += v;
    mean /= static_cast<double>(n);

    // Biased estimator (divide by n): keeps the autocovariance sequence PSD.
    std::vector<double> c(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            s += (ts.values[t] - mean) * (ts.values[t + k] - mean);
        }
        c[k] = s / static_cast<double>(n);
    }
    if (c[0] <= 0.0) throw std::runtime_error("acf: series has zero variance");

    std::vector<double> rho(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) rho[k] = c[k] / c[0];
    rho[0] = 1.0;
    return rho;
}

std::vector<double> pacf(const TimeSeries& ts, std::size_t max_lag) {
    const std::vector<double> rho = acf(ts, max_lag);
    std::vector<double> out(max_lag + 1, 0.0);
    out[0] = 1.0;
    if (max_lag == 0) return out;

    // Durbin-Levinson on the autocorrelations.
    std::vector<double> phi(max_lag + 1, 0.0), prev(max_lag + 1, 0.0);
    double v = 1.0;
    phi[1] = rho[1];
    out[1] = rho[1];
    v *= 1.0 - rho[1] * rho[1];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        if (v < 1e-300) throw std::runtime_error("pacf: Durbin-Levinson recursion degenerated");
        prev = phi;
        double num = rho[k];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j] * rho[k - j];
        phi[k] = num / v;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phi[k] * prev[k - j];
        v *= 1.0 - phi[k] * phi[k];
        out[k] = phi[k];
    }
    return out;
}

}  // namespace base
