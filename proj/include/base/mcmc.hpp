#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace base {

/// Unnormalized log target density over R^d. May return -inf outside the
/// support; must never return +inf or NaN inside it.
using LogDensity = std::function<double(const Eigen::VectorXd&)>;

struct McmcOptions {
    std::size_t n_draws = 2000;   // kept draws per chain, after burn-in
    std::size_t n_burn_in = 0;    // 0 selects max(1000, n_draws / 2)
    std::size_t n_chains = 4;
    double target_acceptance = 0.3;
    double initial_scale = 0.1;   // initial per-coordinate proposal std dev
    std::uint64_t seed = 0;

    std::size_t burn_in() const {
        return n_burn_in > 0 ? n_burn_in : std::max<std::size_t>(1000, n_draws / 2);
    }
};

/// One chain of draws in target space. acceptance_rate counts accepted
/// coordinate moves after burn-in.
struct ChainResult {
    Eigen::MatrixXd draws;  // n_draws x d
    double acceptance_rate = 0.0;
    Eigen::VectorXd proposal_scales;  // frozen post-burn-in scales
};

/// Adaptive random-walk Metropolis. Proposals update one coordinate at a time
/// (a sweep over all d coordinates produces one draw); during burn-in each
/// coordinate's proposal scale follows a Robbins-Monro recursion towards
/// target_acceptance, and adaptation is frozen afterwards so the kept chain is
/// a valid Markov chain. Deterministic given chain_seed. Throws if the target
/// is not finite at `init`.
ChainResult run_adaptive_rwm(const LogDensity& target, const Eigen::VectorXd& init,
                             const McmcOptions& opts, std::uint64_t chain_seed);

/// n_chains independent chains from sub-seeds derived from opts.seed, all
/// started at `init`. Chains are returned in chain order.
std::vector<ChainResult> run_chains(const LogDensity& target, const Eigen::VectorXd& init,
                                    const McmcOptions& opts);

/// Posterior draws over AR parameters; each row is (a_1..a_p, sigma2),
/// chains stacked in chain order.
struct PosteriorSamples {
    Eigen::MatrixXd draws;  // n_total x (p + 1)
    std::size_t order = 0;
    double acceptance_rate = 1.0;  // exact samplers report 1
    std::size_t n_chains = 1;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::size_t n_draws() const { return static_cast<std::size_t>(draws.rows()); }
    void validate() const;
};

struct ChainDiagnostics {
    Eigen::VectorXd rhat;  // NaN where within-chain variance degenerates
    Eigen::VectorXd ess;
};

/// Split-Rhat and effective sample size per coordinate. Each chain is split in
/// half; Rhat = sqrt(var_plus / W) over the split halves, and ESS uses the
/// multi-chain autocorrelation estimate truncated at the first negative paired
/// sum (capped at the total draw count). Requires >= 2 chains of equal length
/// >= 100.
ChainDiagnostics chain_diagnostics(const std::vector<Eigen::MatrixXd>& chains);

/// Diagnostics for merged AR posterior draws (splits PosteriorSamples back
/// into its n_chains equal blocks).
ChainDiagnostics chain_diagnostics(const PosteriorSamples& samples);

}  // namespace base
