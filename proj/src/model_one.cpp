#include "base/model_one.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace base {

void ModelOneHyper::validate() const {
    if (!(coeff_variance > 0.0) || !std::isfinite(coeff_variance)) {
        throw std::invalid_argument("ModelOneHyper: coeff_variance must be positive");
    }
    if (!(noise_prior_scale > 0.0) || !std::isfinite(noise_prior_scale)) {
        throw std::invalid_argument("ModelOneHyper: noise_prior_scale must be positive");
    }
}

namespace {

double log_prior(const ARParams& theta, const ModelOneHyper& hyper) {
    double a_sq = 0.0;
    for (double c : theta.coefficients) a_sq += c * c;
    const double lp_a = -a_sq / (2.0 * hyper.coeff_variance);
    const double s2 = theta.noise_variance;
    const double lp_s = hyper.noise_prior_form == NoisePriorForm::HalfNormalOnVariance
                            ? -(s2 * s2) / (2.0 * hyper.noise_prior_scale)
                            : -s2 / (2.0 * hyper.noise_prior_scale);
    return lp_a + lp_s;
}

}  // namespace

double log_posterior_model1(const ARParams& theta, const TimeSeries& ts,
                            const ModelOneHyper& hyper) {
    hyper.validate();
    if (!(theta.noise_variance > 0.0)) return -std::numeric_limits<double>::infinity();
    return conditional_log_likelihood(theta, ts) + log_prior(theta, hyper);
}

PosteriorSamples sample_posterior_mcmc(const TimeSeries& ts, std::size_t p,
                                       const ModelOneHyper& hyper, const McmcOptions& opts) {
    ts.validate();
    hyper.validate();
    if (ts.size() < 2 * p + 2) {
        throw std::invalid_argument("sample_posterior_mcmc: series too short for order " +
                                    std::to_string(p));
    }
    if (opts.n_draws < 100) {
        throw std::invalid_argument("sample_posterior_mcmc: n_draws must be >= 100");
    }
    if (opts.n_chains < 1) {
        throw std::invalid_argument("sample_posterior_mcmc: n_chains must be >= 1");
    }

    // Fixed design; the sampled state is z = (a_1..a_p, log sigma2).
    const DesignData d = design_rows(std::span<const double>(ts.values), p);
    const double rows = static_cast<double>(d.y.size());
    const double log_2pi = std::log(2.0 * std::numbers::pi);

    const auto target = [&, X = d.X, y = d.y](const Eigen::VectorXd& z) {
        const double u = z(static_cast<Eigen::Index>(p));
        if (u > 700.0 || u < -700.0) return -std::numeric_limits<double>::infinity();
        const double s2 = std::exp(u);
        const auto a = z.head(static_cast<Eigen::Index>(p));
        const double rss = (y - X * a).squaredNorm();
        const double ll = -0.5 * rows * (log_2pi + u) - rss / (2.0 * s2);
        const double lp_a = -a.squaredNorm() / (2.0 * hyper.coeff_variance);
        const double lp_s = hyper.noise_prior_form == NoisePriorForm::HalfNormalOnVariance
                                ? -(s2 * s2) / (2.0 * hyper.noise_prior_scale)
                                : -s2 / (2.0 * hyper.noise_prior_scale);
        // + u is the log-Jacobian of sigma2 = exp(u).
        return ll + lp_a + lp_s + u;
    };

    // Start at the least-squares fit; fall back to white noise at the sample
    // variance when that is unavailable.
    Eigen::VectorXd init = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1));
    double s2_hat = 1.0;
    bool have_init = false;
    try {
        const ARParams ase = fit_ase(ts, p);
        for (std::size_t k = 0; k < p; ++k) {
            init(static_cast<Eigen::Index>(k)) = ase.coefficients[k];
        }
        s2_hat = ase.noise_variance;
        init(static_cast<Eigen::Index>(p)) = std::log(s2_hat);
        have_init = std::isfinite(target(init));
    } catch (const std::exception&) {
        have_init = false;
    }
    if (!have_init) {
        const double mean = std::accumulate(ts.values.begin(), ts.values.end(), 0.0) /
                            static_cast<double>(ts.size());
        double var = 0.0;
        for (double v : ts.values) var += (v - mean) * (v - mean);
        var = std::max(var / static_cast<double>(ts.size()), 1e-12);
        init.setZero();
        s2_hat = var;
        init(static_cast<Eigen::Index>(p)) = std::log(var);
        if (!std::isfinite(target(init))) {
            throw std::runtime_error(
                "sample_posterior_mcmc: log-posterior is not finite at the fallback "
                "initialization");
        }
    }

    // Lag coefficients of a persistent process are strongly correlated a
    // posteriori, which stalls coordinate-wise proposals. Precondition with a
    // fixed factor of the curvature at the starting point (Gaussian
    // approximation covariance); the transform is a constant bijection chosen
    // from the data, so the sampled target is unchanged and per-coordinate
    // scale adaptation still applies, now in the whitened coordinates.
    Eigen::MatrixXd transform =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p + 1),
                                  static_cast<Eigen::Index>(p + 1));
    if (p > 0) {
        Eigen::MatrixXd curvature = d.X.transpose() * d.X / s2_hat;
        curvature.diagonal().array() += 1.0 / hyper.coeff_variance;
        const Eigen::LLT<Eigen::MatrixXd> llt(curvature);
        if (llt.info() == Eigen::Success) {
            // chol(Sigma) = U^-1 for precision = U'U.
            transform.topLeftCorner(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) =
                Eigen::MatrixXd(llt.matrixU())
                    .triangularView<Eigen::Upper>()
                    .solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                                     static_cast<Eigen::Index>(p)));
        }
    }
    transform(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) =
        std::sqrt(2.0 / rows);  // asymptotic spread of log sigma2

    const auto whitened_target = [&target, &transform, &init](const Eigen::VectorXd& u) {
        return target(init + transform * u);
    };
    McmcOptions chain_opts = opts;
    chain_opts.initial_scale = 1.0;
    const std::vector<ChainResult> chains =
        run_chains(whitened_target, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + 1)),
                   chain_opts);

    PosteriorSamples samples;
    samples.order = p;
    samples.n_chains = opts.n_chains;
    samples.seed = opts.seed;
    samples.draws.resize(static_cast<Eigen::Index>(opts.n_chains * opts.n_draws),
                         static_cast<Eigen::Index>(p + 1));
    double acc = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        // Map whitened draws back to (a, sigma2).
        Eigen::MatrixXd block =
            (transform * chains[c].draws.transpose()).transpose().rowwise() + init.transpose();
        block.col(static_cast<Eigen::Index>(p)) =
            block.col(static_cast<Eigen::Index>(p)).array().exp();
        samples.draws.middleRows(static_cast<Eigen::Index>(c * opts.n_draws),
                                 static_cast<Eigen::Index>(opts.n_draws)) = block;
        acc += chains[c].acceptance_rate;
    }
    samples.acceptance_rate = acc / static_cast<double>(chains.size());
    if (samples.acceptance_rate < 0.1 || samples.acceptance_rate > 0.6) {
        samples.warnings.push_back("acceptance rate " +
                                   std::to_string(samples.acceptance_rate) +
                                   " outside [0.1, 0.6] after tuning");
    }
    return samples;
}

}  // namespace base
