#include "base/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace base {

namespace {

// splitmix64; decorrelates per-chain seeds derived from one user seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

ChainResult run_adaptive_rwm(const LogDensity& target, const Eigen::VectorXd& init,
                             const McmcOptions& opts, std::uint64_t chain_seed) {
    const Eigen::Index d = init.size();
    if (d == 0) throw std::invalid_argument("run_adaptive_rwm: empty state");
    if (opts.n_draws < 100) throw std::invalid_argument("run_adaptive_rwm: n_draws must be >= 100");
    if (!(opts.initial_scale > 0.0)) {
        throw std::invalid_argument("run_adaptive_rwm: initial_scale must be positive");
    }

    double lp = target(init);
    if (!std::isfinite(lp)) {
        throw std::runtime_error("run_adaptive_rwm: target is not finite at the initial point");
    }

    std::mt19937_64 rng(chain_seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const std::size_t burn = opts.burn_in();
    const std::size_t total = burn + opts.n_draws;
    Eigen::VectorXd log_scales = Eigen::VectorXd::Constant(d, std::log(opts.initial_scale));
    Eigen::VectorXd x = init;

    ChainResult res;
    res.draws.resize(static_cast<Eigen::Index>(opts.n_draws), d);
    std::size_t accepted_kept = 0;

    for (std::size_t iter = 0; iter < total; ++iter) {
        const bool adapting = iter < burn;
        // Robbins-Monro step size, per sweep.
        const double gamma = adapting ? std::pow(static_cast<double>(iter + 1), -0.6) : 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double old_xj = x(j);
            x(j) = old_xj + std::exp(log_scales(j)) * std_normal(rng);
            const double lp_prop = target(x);
            double alpha = 0.0;
            if (std::isfinite(lp_prop)) {
                alpha = std::min(1.0, std::exp(lp_prop - lp));
            }
            if (unif(rng) < alpha) {
                lp = lp_prop;
                if (!adapting) ++accepted_kept;
            } else {
                x(j) = old_xj;
            }
            if (adapting) {
                log_scales(j) += gamma * (alpha - opts.target_acceptance);
                log_scales(j) = std::clamp(log_scales(j), std::log(1e-9), std::log(1e4));
            }
        }
        if (!adapting) res.draws.row(static_cast<Eigen::Index>(iter - burn)) = x;
    }

    res.acceptance_rate = static_cast<double>(accepted_kept) /
                          (static_cast<double>(opts.n_draws) * static_cast<double>(d));
    res.proposal_scales = log_scales.array().exp();
    return res;
}

std::vector<ChainResult> run_chains(const LogDensity& target, const Eigen::VectorXd& init,
                                    const McmcOptions& opts) {
    if (opts.n_chains < 1) throw std::invalid_argument("run_chains: n_chains must be >= 1");
    std::vector<ChainResult> chains;
    chains.reserve(opts.n_chains);
    for (std::size_t c = 0; c < opts.n_chains; ++c) {
        chains.push_back(run_adaptive_rwm(target, init, opts, mix_seed(opts.seed, c)));
    }
    return chains;
}

void PosteriorSamples::validate() const {
    if (draws.rows() < 1) throw std::invalid_argument("PosteriorSamples: no draws");
    if (draws.cols() != static_cast<Eigen::Index>(order + 1)) {
        throw std::invalid_argument("PosteriorSamples: draw width does not match order + 1");
    }
    if (!draws.allFinite()) throw std::invalid_argument("PosteriorSamples: non-finite draw");
    if ((draws.col(draws.cols() - 1).array() <= 0.0).any()) {
        throw std::invalid_argument("PosteriorSamples: non-positive sigma2 draw");
    }
}

ChainDiagnostics chain_diagnostics(const std::vector<Eigen::MatrixXd>& chains) {
    if (chains.size() < 2) {
        throw std::invalid_argument("chain_diagnostics: need at least 2 chains");
    }
    const Eigen::Index n_full = chains.front().rows();
    const Eigen::Index d = chains.front().cols();
    for (const auto& c : chains) {
        if (c.rows() != n_full || c.cols() != d) {
            throw std::invalid_argument("chain_diagnostics: chains must have equal shape");
        }
    }
    if (n_full < 100) {
        throw std::invalid_argument("chain_diagnostics: need at least 100 draws per chain");
    }

    // Split every chain in half.
    const Eigen::Index n = n_full / 2;
    std::vector<Eigen::MatrixXd> halves;
    halves.reserve(2 * chains.size());
    for (const auto& c : chains) {
        halves.push_back(c.topRows(n));
        halves.push_back(c.middleRows(n, n));
    }
    const auto m = static_cast<Eigen::Index>(halves.size());

    ChainDiagnostics diag;
    diag.rhat.resize(d);
    diag.ess.resize(d);

    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::VectorXd means(m), vars(m);
        for (Eigen::Index c = 0; c < m; ++c) {
            const auto col = halves[static_cast<std::size_t>(c)].col(j);
            const double mu = col.mean();
            means(c) = mu;
            vars(c) = (col.array() - mu).square().sum() / static_cast<double>(n - 1);
        }
        const double grand = means.mean();
        const double b = static_cast<double>(n) *
                         (means.array() - grand).square().sum() / static_cast<double>(m - 1);
        const double w = vars.mean();
        const double var_plus =
            (static_cast<double>(n - 1) / static_cast<double>(n)) * w + b / static_cast<double>(n);

        if (w <= 0.0 || !std::isfinite(w)) {
            diag.rhat(j) = std::numeric_limits<double>::quiet_NaN();
            diag.ess(j) = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        diag.rhat(j) = std::sqrt(var_plus / w);

        // Multi-chain autocorrelation, truncated at the first nonpositive
        // paired sum (initial positive sequence rule).
        auto rho_at = [&](Eigen::Index t) {
            double acc = 0.0;
            for (Eigen::Index c = 0; c < m; ++c) {
                const auto col = halves[static_cast<std::size_t>(c)].col(j);
                for (Eigen::Index i = t; i < n; ++i) {
                    const double diff = col(i) - col(i - t);
                    acc += diff * diff;
                }
            }
            const double vt = acc / (static_cast<double>(m) * static_cast<double>(n - t));
            return 1.0 - vt / (2.0 * var_plus);
        };

        double sum_rho = 0.0;
        for (Eigen::Index t = 1; t + 1 < n; t += 2) {
            const double pair = rho_at(t) + rho_at(t + 1);
            if (pair <= 0.0) break;
            sum_rho += pair;
        }
        const double tau = 1.0 + 2.0 * sum_rho;
        const double total = static_cast<double>(m) * static_cast<double>(n);
        diag.ess(j) = std::min(total / tau, total);
    }
    return diag;
}

ChainDiagnostics chain_diagnostics(const PosteriorSamples& samples) {
    samples.validate();
    if (samples.n_chains < 2) {
        throw std::invalid_argument("chain_diagnostics: need at least 2 chains");
    }
    const auto n_chains = static_cast<Eigen::Index>(samples.n_chains);
    if (samples.draws.rows() % n_chains != 0) {
        throw std::invalid_argument("chain_diagnostics: draws not divisible into chains");
    }
    const Eigen::Index per = samples.draws.rows() / n_chains;
    std::vector<Eigen::MatrixXd> chains;
    chains.reserve(samples.n_chains);
    for (Eigen::Index c = 0; c < n_chains; ++c) {
        chains.push_back(samples.draws.middleRows(c * per, per));
    }
    return chain_diagnostics(chains);
}

}  // namespace base
