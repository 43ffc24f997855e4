#pragma once

#include <cstddef>

#include "base/ar_model.hpp"
#include "base/mcmc.hpp"
#include "base/timeseries.hpp"

namespace base {

/// Prior density shape placed on the noise variance.
enum class NoisePriorForm {
    /// Half-normal on sigma^2: log-density term -(sigma^2)^2 / (2 scale).
    HalfNormalOnVariance,
    /// Exponential decay in sigma^2: log-density term -sigma^2 / (2 scale).
    ExponentialOnVariance,
};

/// Hyperparameters of the MCMC model: independent N(0, coeff_variance) priors
/// on each coefficient and a positive-half prior of the chosen form on the
/// noise variance.
struct ModelOneHyper {
    double coeff_variance = 1.0;     // sigma_a^2
    double noise_prior_scale = 1.0;  // sigma_eps^2
    NoisePriorForm noise_prior_form = NoisePriorForm::HalfNormalOnVariance;

    void validate() const;
};

/// Unnormalized log posterior: conditional log-likelihood plus the coefficient
/// and noise log-priors (constants dropped). Returns -inf for sigma^2 <= 0.
double log_posterior_model1(const ARParams& theta, const TimeSeries& ts,
                            const ModelOneHyper& hyper);

/// Draw from the posterior with adaptive random-walk Metropolis in
/// (a, log sigma^2); the log-Jacobian of the variance transform is included in
/// the sampled target. Chains start at the least-squares fit (falling back to
/// a = 0, sigma^2 = sample variance). A post-tuning acceptance rate outside
/// [0.1, 0.6] is recorded as a warning, not an error.
PosteriorSamples sample_posterior_mcmc(const TimeSeries& ts, std::size_t p,
                                       const ModelOneHyper& hyper, const McmcOptions& opts);

}  // namespace base
