#pragma once

#include <cstddef>
#include <vector>

namespace base {

/// Parameters of an AR(p) process: x_t = a_1 x_{t-1} + ... + a_p x_{t-p} + e_t,
/// e_t ~ N(0, noise_variance). Order zero (pure noise) is permitted.
struct ARParams {
    std::vector<double> coefficients;  // a_1..a_p, most recent lag first
    double noise_variance = 1.0;       // sigma^2, strictly positive

    std::size_t order() const { return coefficients.size(); }

    /// Throws std::invalid_argument on non-finite entries or noise_variance <= 0.
    void validate() const;
};

}  // namespace base
