#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "base/ar_model.hpp"
#include "base/mcmc.hpp"
#include "base/timeseries.hpp"

namespace base {

/// Conjugate-model hyperparameters: a | sigma^2 ~ N(mu0, sigma^2 / lambda I),
/// sigma^2 ~ InvGamma(alpha, beta).
struct ModelTwoHyper {
    Eigen::VectorXd mu0;  // length p
    double lambda = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    static ModelTwoHyper defaults(std::size_t p);
    void validate(std::size_t p) const;
};

/// Closed-form Normal-Inverse-Gamma posterior over (a, sigma^2).
struct NIGPosterior {
    Eigen::VectorXd mu;
    Eigen::MatrixXd precision;  // symmetric positive definite
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
    std::size_t n_rows = 0;  // regression rows T - p
    std::vector<std::string> warnings;
};

/// Conjugate update:
///   precision = lambda I + X'X,   mu = precision^-1 (lambda mu0 + X'y),
///   alpha_bar = alpha + (T-p)/2,
///   beta_bar  = beta + (lambda mu0'mu0 + y'y - mu' precision mu) / 2.
/// Accepts series as short as T = p (zero rows: the posterior equals the
/// prior). An ill-conditioned precision (cond > 1e12) is recorded as a
/// warning; a non-positive beta_bar is an error.
NIGPosterior nig_posterior(const TimeSeries& ts, std::size_t p, const ModelTwoHyper& hyper);

/// Exact posterior draws: sigma^2 ~ InvGamma(alpha_bar, beta_bar), then
/// a | sigma^2 ~ N(mu, sigma^2 precision^-1). Deterministic given seed.
PosteriorSamples sample_nig(const NIGPosterior& post, std::size_t n_draws, std::uint64_t seed);

/// Posterior mode:
///   a = precision^-1 (lambda mu0 + X'y),
///   sigma^2 = (2 beta + lambda ||a - mu0||^2 + ||y - X a||^2) / (2(alpha+1) + T).
/// The denominator uses the full series length T (single-realization form).
ARParams map_estimate(const TimeSeries& ts, std::size_t p, const ModelTwoHyper& hyper);

/// Candidate hyperparameter set for grid search; candidates are enumerated
/// lambda-major, then alpha, beta, mu0 (first candidate wins score ties).
/// mu0 scalars expand to constant vectors.
struct HyperGrid {
    std::vector<double> lambdas{0.1, 1.0, 10.0, 100.0};
    std::vector<double> alphas{0.1, 1.0, 10.0, 100.0};
    std::vector<double> betas{0.1, 1.0, 10.0, 100.0};
    std::vector<double> mu0_scalars{-10, -8, -6, -4, -2, 0, 2, 4, 6, 8, 10};

    std::size_t n_candidates() const {
        return lambdas.size() * alphas.size() * betas.size() * mu0_scalars.size();
    }
};

struct CVScore {
    double lambda = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double mu0_scalar = 0.0;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct CVResult {
    ModelTwoHyper best;
    std::vector<CVScore> table;  // in candidate enumeration order
};

/// Grid-search hyperparameter selection by n_folds-fold cross-validation over
/// contiguous time blocks. For each fold the test block is removed; the two
/// remaining segments each contribute their own regression rows to the MAP
/// fit (no rows spanning the cut). Each candidate is scored by the conditional
/// log-likelihood of the test block at the MAP estimate, conditioning on the
/// block's own first p samples, averaged over folds. Deterministic.
CVResult grid_search_cv(const TimeSeries& ts, std::size_t p, const HyperGrid& grid,
                        std::size_t n_folds = 5);

}  // namespace base
