// Command-line surface over the estimation library: synthetic data generation,
// spectral fits, periodogram/peaks/acf utilities and the experiment presets.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure, 3 diagnostics
// warning under --strict.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "base/ar_model.hpp"
#include "base/experiments.hpp"
#include "base/io.hpp"
#include "base/model_one.hpp"
#include "base/model_two.hpp"
#include "base/posterior_psd.hpp"
#include "base/spectrum.hpp"
#include "base/timeseries.hpp"

namespace fs = std::filesystem;
using base::TimeSeries;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitStrictWarning = 3;

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    return std::random_device{}();
}

struct FitArgs {
    std::string model = "ase";
    std::string input;
    std::string column = "value";
    std::size_t order = 4;
    std::size_t draws = 2000;
    std::size_t chains = 4;
    std::size_t grid_size = 512;
    double level = 0.95;
    double dt = 1.0;
    bool cv = false;
    bool strict = false;
    bool to_stdout = false;
    std::string outdir = "out";
    std::optional<std::uint64_t> seed;
    // Model hyperparameters.
    double coeff_variance = 1.0;
    double noise_prior_scale = 1.0;
    bool exponential_noise_prior = false;
    double lambda = 1.0, alpha = 1.0, beta = 1.0, mu0 = 0.0;
    bool standardize = false;
};

int run_fit(const FitArgs& a) {
    const TimeSeries raw = base::load_csv(a.input, a.column, a.dt);
    TimeSeries ts = raw;
    double mean = 0.0, sd = 1.0;
    if (a.standardize) {
        for (double v : raw.values) mean += v;
        mean /= static_cast<double>(raw.size());
        double var = 0.0;
        for (double v : raw.values) var += (v - mean) * (v - mean);
        sd = std::sqrt(std::max(var / static_cast<double>(raw.size()), 1e-300));
        for (double& v : ts.values) v = (v - mean) / sd;
    }

    const fs::path outdir(a.outdir);
    fs::create_directories(outdir);
    const base::FrequencyGrid grid = base::FrequencyGrid::regular(a.grid_size, ts.dt);
    nlohmann::json diag;
    diag["model"] = a.model;
    diag["order"] = a.order;
    diag["input"] = a.input;
    diag["standardized"] = a.standardize;
    bool warned = false;

    if (a.model == "ase") {
        const base::ARParams fit = base::fit_ase(ts, a.order);
        base::io::write_ar_params(fit, outdir / "ase_params.json");
        base::io::write_spectrum_csv(base::ar_psd(fit, grid), outdir / "ase.csv",
                                     "closed-form AR PSD");
        diag["params"] = base::io::ar_params_to_json(fit);
    } else if (a.model == "base-mcmc") {
        const std::uint64_t seed = resolve_seed(a.seed);
        base::McmcOptions opts;
        opts.n_draws = a.draws;
        opts.n_chains = a.chains;
        opts.seed = seed;
        base::ModelOneHyper hyper;
        hyper.coeff_variance = a.coeff_variance;
        hyper.noise_prior_scale = a.noise_prior_scale;
        hyper.noise_prior_form = a.exponential_noise_prior
                                     ? base::NoisePriorForm::ExponentialOnVariance
                                     : base::NoisePriorForm::HalfNormalOnVariance;
        const base::PosteriorSamples samples = base::sample_posterior_mcmc(ts, a.order, hyper, opts);
        const base::PosteriorSpectrum ps = base::psd_posterior(samples, grid, a.level);
        base::io::write_samples_csv(samples, outdir / "base_mcmc_samples.csv");
        base::io::write_samples_meta(samples, outdir / "base_mcmc_samples.meta.json");
        base::io::write_posterior_spectrum_csv(ps, outdir / "base_mcmc.csv",
                                               "closed-form AR PSD");
        base::io::write_posterior_spectrum_meta(ps, outdir / "base_mcmc.meta.json");
        base::io::write_peaks(base::posterior_peaks(ps), outdir / "base_mcmc_peaks.json");
        diag["seed"] = seed;
        diag["acceptance_rate"] = samples.acceptance_rate;
        diag["warnings"] = samples.warnings;
        diag["unstable_fraction"] = ps.unstable_fraction;
        warned = !samples.warnings.empty();
    } else if (a.model == "base-cf") {
        const std::uint64_t seed = resolve_seed(a.seed);
        base::ModelTwoHyper hyper = base::ModelTwoHyper::defaults(a.order);
        hyper.lambda = a.lambda;
        hyper.alpha = a.alpha;
        hyper.beta = a.beta;
        hyper.mu0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(a.order), a.mu0);
        if (a.cv) {
            const base::CVResult cv = base::grid_search_cv(ts, a.order, base::HyperGrid{});
            hyper = cv.best;
            base::io::write_cv_table_csv(cv, outdir / "base_cf_cv_scores.csv");
            base::io::write_json(base::io::hyper_to_json(cv.best),
                                 outdir / "base_cf_hyper.json");
        }
        const base::NIGPosterior post = base::nig_posterior(ts, a.order, hyper);
        const base::PosteriorSamples samples =
            base::sample_nig(post, a.draws * a.chains, seed);
        const base::PosteriorSpectrum ps = base::psd_posterior(samples, grid, a.level);
        base::io::write_samples_csv(samples, outdir / "base_cf_samples.csv");
        base::io::write_samples_meta(samples, outdir / "base_cf_samples.meta.json");
        base::io::write_posterior_spectrum_csv(ps, outdir / "base_cf.csv", "closed-form AR PSD");
        base::io::write_posterior_spectrum_meta(ps, outdir / "base_cf.meta.json");
        base::io::write_peaks(base::posterior_peaks(ps), outdir / "base_cf_peaks.json");
        base::io::write_ar_params(base::map_estimate(ts, a.order, hyper),
                                  outdir / "base_cf_map_params.json");
        diag["seed"] = seed;
        diag["hyper"] = base::io::hyper_to_json(hyper);
        diag["unstable_fraction"] = ps.unstable_fraction;
        diag["warnings"] = post.warnings;
        warned = !post.warnings.empty();
    } else {
        throw std::invalid_argument("--model must be ase, base-mcmc or base-cf");
    }

    if (a.standardize) {
        diag["offset"] = mean;
        diag["scale"] = sd;
    }
    base::io::write_json(diag, outdir / "diagnostics.json");
    if (a.to_stdout) std::cout << diag.dump(2) << "\n";
    if (a.strict && warned) {
        std::cerr << "diagnostics produced warnings (strict mode)\n";
        return kExitStrictWarning;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian autoregressive spectral estimation"};
    app.require_subcommand(1);

    // ---- generate ----------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "simulate a synthetic series");
    std::string gen_kind = "ar";
    std::string gen_out = "out";
    std::optional<std::uint64_t> gen_seed;
    std::size_t gen_n = 1000;
    double gen_dt = 1.0;
    std::vector<double> gen_coeffs;
    double gen_noise = 1.0;
    std::size_t gen_burn = 0;
    double gen_mv = 1.0, gen_ls = 10.0, gen_obs = 0.0;
    gen->add_option("kind", gen_kind, "ar or gp")->check(CLI::IsMember({"ar", "gp"}));
    gen->add_option("--n", gen_n, "number of samples");
    gen->add_option("--dt", gen_dt, "sample interval");
    gen->add_option("--seed", gen_seed, "RNG seed (drawn from entropy when omitted)");
    gen->add_option("--coeffs", gen_coeffs, "AR coefficients a_1..a_p")->delimiter(',');
    gen->add_option("--noise-variance", gen_noise, "AR innovation variance");
    gen->add_option("--burn-in", gen_burn, "AR burn-in (default max(100, 10p))");
    gen->add_option("--marginal-variance", gen_mv, "GP marginal variance");
    gen->add_option("--lengthscale", gen_ls, "GP lengthscale");
    gen->add_option("--obs-noise-variance", gen_obs, "GP observation noise variance");
    gen->add_option("--outdir", gen_out, "output directory");

    // ---- fit ----------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "fit a spectral estimator to a CSV series");
    FitArgs fa;
    fit->add_option("--model", fa.model, "ase, base-mcmc or base-cf")
        ->check(CLI::IsMember({"ase", "base-mcmc", "base-cf"}));
    fit->add_option("--input", fa.input, "input CSV")->required();
    fit->add_option("--column", fa.column, "value column (name or 0-based index)");
    fit->add_option("--order,-p", fa.order, "AR order");
    fit->add_option("--draws", fa.draws, "posterior draws per chain");
    fit->add_option("--chains", fa.chains, "MCMC chains");
    fit->add_option("--grid-size", fa.grid_size, "frequency grid points");
    fit->add_option("--level", fa.level, "credible level");
    fit->add_option("--dt", fa.dt, "sample interval");
    fit->add_option("--seed", fa.seed, "RNG seed (drawn from entropy when omitted)");
    fit->add_flag("--cv", fa.cv, "grid-search cross-validation for base-cf");
    fit->add_flag("--strict", fa.strict, "treat diagnostics warnings as errors");
    fit->add_flag("--stdout", fa.to_stdout, "print diagnostics JSON to stdout");
    fit->add_flag("--standardize", fa.standardize, "center and scale before fitting");
    fit->add_option("--coeff-variance", fa.coeff_variance, "MCMC coefficient prior variance");
    fit->add_option("--noise-prior-scale", fa.noise_prior_scale, "MCMC noise prior scale");
    fit->add_flag("--exponential-noise-prior", fa.exponential_noise_prior,
                  "use the exponential-in-variance noise prior form");
    fit->add_option("--lambda", fa.lambda, "conjugate prior precision scale");
    fit->add_option("--alpha", fa.alpha, "inverse-gamma shape");
    fit->add_option("--beta", fa.beta, "inverse-gamma scale");
    fit->add_option("--mu0", fa.mu0, "conjugate prior mean (constant vector)");
    fit->add_option("--outdir", fa.outdir, "output directory");

    // ---- periodogram --------------------------------------------------------
    auto* pg = app.add_subcommand("periodogram", "one-sided periodogram of a CSV series");
    std::string pg_in, pg_col = "value", pg_out = "out";
    double pg_dt = 1.0;
    bool pg_demean = false, pg_stdout = false;
    pg->add_option("--input", pg_in)->required();
    pg->add_option("--column", pg_col);
    pg->add_option("--dt", pg_dt);
    pg->add_flag("--demean", pg_demean, "remove the sample mean first");
    pg->add_flag("--stdout", pg_stdout);
    pg->add_option("--outdir", pg_out);

    // ---- peaks ---------------------------------------------------------------
    auto* pk = app.add_subcommand("peaks", "peaks of a spectrum CSV");
    std::string pk_in, pk_out = "out";
    double pk_threshold = 0.05;
    bool pk_stdout = false;
    pk->add_option("--input", pk_in, "spectrum CSV produced by this tool")->required();
    pk->add_option("--threshold", pk_threshold, "min height as a fraction of the maximum");
    pk->add_flag("--stdout", pk_stdout);
    pk->add_option("--outdir", pk_out);

    // ---- acf -----------------------------------------------------------------
    auto* ac = app.add_subcommand("acf", "autocorrelation and partial autocorrelation");
    std::string ac_in, ac_col = "value", ac_out = "out";
    double ac_dt = 1.0;
    std::size_t ac_maxlag = 40;
    bool ac_stdout = false;
    ac->add_option("--input", ac_in)->required();
    ac->add_option("--column", ac_col);
    ac->add_option("--dt", ac_dt);
    ac->add_option("--max-lag", ac_maxlag);
    ac->add_flag("--stdout", ac_stdout);
    ac->add_option("--outdir", ac_out);

    // ---- experiment ------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "run a full estimation preset");
    std::string ex_name;
    std::string ex_out = "out";
    std::uint64_t ex_seed = 0;
    base::ExperimentConfig ex_cfg;
    std::string ex_input;
    ex->add_option("name", ex_name, "ar4, gp-laplace or sunspots")
        ->required()
        ->check(CLI::IsMember({"ar4", "gp-laplace", "sunspots"}));
    ex->add_option("--seed", ex_seed, "RNG seed (presets require one explicitly)")->required();
    ex->add_option("--outdir", ex_out)->required();
    ex->add_option("--draws", ex_cfg.n_draws);
    ex->add_option("--chains", ex_cfg.n_chains);
    ex->add_option("--grid-size", ex_cfg.grid_points);
    ex->add_option("--level", ex_cfg.level);
    ex->add_option("--input", ex_input, "sunspots CSV (default $BASE_DATA_DIR)");
    ex->add_option("--column", ex_cfg.value_column);
    ex->add_option("--dt", ex_cfg.dt, "sample interval for loaded data");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const std::uint64_t seed = resolve_seed(gen_seed);
            const fs::path outdir(gen_out);
            fs::create_directories(outdir);
            TimeSeries ts;
            nlohmann::json truth;
            if (gen_kind == "ar") {
                base::ARParams params;
                params.coefficients = gen_coeffs;
                params.noise_variance = gen_noise;
                const std::size_t burn =
                    gen_burn > 0 ? gen_burn : base::default_burn_in(params.order());
                ts = base::simulate_ar(params, gen_n, burn, seed, gen_dt);
                truth = base::io::ar_params_to_json(params);
            } else {
                base::LaplaceKernelParams kernel;
                kernel.marginal_variance = gen_mv;
                kernel.lengthscale = gen_ls;
                kernel.obs_noise_variance = gen_obs;
                ts = base::simulate_gp_laplace(kernel, gen_n, gen_dt, seed);
                truth = {{"marginal_variance", gen_mv},
                         {"lengthscale", gen_ls},
                         {"obs_noise_variance", gen_obs}};
            }
            truth["seed"] = seed;
            base::io::write_series_csv(ts, outdir / "series.csv");
            base::io::write_json(truth, outdir / "truth.json");
            return 0;
        }
        if (fit->parsed()) return run_fit(fa);
        if (pg->parsed()) {
            const TimeSeries ts = base::load_csv(pg_in, pg_col, pg_dt);
            const base::SpectrumEstimate est = base::periodogram(ts, pg_demean);
            fs::create_directories(pg_out);
            base::io::write_spectrum_csv(est, fs::path(pg_out) / "periodogram.csv",
                                         "one-sided |DFT|^2 / T, no interior-bin doubling");
            if (pg_stdout) {
                for (std::size_t i = 0; i < est.psd.size(); ++i) {
                    std::cout << est.grid.freqs[i] << "," << est.psd[i] << "\n";
                }
            }
            return 0;
        }
        if (pk->parsed()) {
            const base::SpectrumEstimate est = base::io::read_spectrum_csv(pk_in);
            const base::PeakSet peaks = base::find_peaks(est, pk_threshold);
            fs::create_directories(pk_out);
            base::io::write_peaks(peaks, fs::path(pk_out) / "peaks.json");
            if (pk_stdout) std::cout << base::io::peaks_to_json(peaks).dump(2) << "\n";
            return 0;
        }
        if (ac->parsed()) {
            const TimeSeries ts = base::load_csv(ac_in, ac_col, ac_dt);
            const std::vector<double> a = base::acf(ts, ac_maxlag);
            const std::vector<double> pa = base::pacf(ts, ac_maxlag);
            fs::create_directories(ac_out);
            base::io::write_acf_csv(a, pa, fs::path(ac_out) / "acf.csv");
            if (ac_stdout) {
                for (std::size_t k = 0; k < a.size(); ++k) {
                    std::cout << k << "," << a[k] << "," << pa[k] << "\n";
                }
            }
            return 0;
        }
        if (ex->parsed()) {
            ex_cfg.input = ex_input;
            base::run_experiment(ex_name, ex_seed, ex_out, ex_cfg);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
