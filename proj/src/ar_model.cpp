#include "base/ar_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace base {

DesignData design_rows(std::span<const double> segment, std::size_t p) {
    if (segment.size() < p) {
        throw std::invalid_argument("design_rows: segment shorter than order p");
    }
    const std::size_t rows = segment.size() - p;
    DesignData d;
    d.X.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
    d.y.resize(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t tau = p + i;  // 0-based target index
        d.y(static_cast<Eigen::Index>(i)) = segment[tau];
        for (std::size_t k = 0; k < p; ++k) {
            d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = segment[tau - 1 - k];
        }
    }
    return d;
}

DesignData design_matrix(const TimeSeries& ts, std::size_t p) {
    ts.validate();
    if (ts.size() < p + 2) {
        throw std::invalid_argument("design_matrix: series of length " +
                                    std::to_string(ts.size()) + " too short for order " +
                                    std::to_string(p) + " (need at least p + 2 samples)");
    }
    return design_rows(std::span<const double>(ts.values), p);
}

double conditional_log_likelihood(const ARParams& theta, std::span<const double> segment) {
    theta.validate();
    const std::size_t p = theta.order();
    if (segment.size() < p + 2) {
        throw std::invalid_argument("conditional_log_likelihood: segment too short for order " +
                                    std::to_string(p));
    }
    const double s2 = theta.noise_variance;
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * s2);
    double ll = 0.0;
    for (std::size_t tau = p; tau < segment.size(); ++tau) {
        double r = segment[tau];
        for (std::size_t k = 1; k <= p; ++k) r -= theta.coefficients[k - 1] * segment[tau - k];
        ll += log_norm - r * r / (2.0 * s2);
    }
    return ll;
}

double conditional_log_likelihood(const ARParams& theta, const TimeSeries& ts) {
    ts.validate();
    return conditional_log_likelihood(theta, std::span<const double>(ts.values));
}

ARParams fit_ase(const TimeSeries& ts, std::size_t p) {
    ts.validate();
    if (ts.size() < 2 * p + 2) {
        throw std::invalid_argument("fit_ase: series of length " + std::to_string(ts.size()) +
                                    " too short for order " + std::to_string(p) +
                                    " (need at least 2p + 2 samples)");
    }
    ARParams out;
    out.coefficients.assign(p, 0.0);
    const DesignData d = design_rows(std::span<const double>(ts.values), p);
    if (p > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
        if (qr.rank() < static_cast<Eigen::Index>(p)) {
            throw std::runtime_error(
                "fit_ase: design matrix is rank deficient; try a lower order");
        }
        const Eigen::VectorXd a = qr.solve(d.y);
        for (std::size_t k = 0; k < p; ++k) {
            out.coefficients[k] = a(static_cast<Eigen::Index>(k));
        }
    }
    Eigen::VectorXd resid = d.y;
    if (p > 0) {
        resid -= d.X * Eigen::Map<const Eigen::VectorXd>(out.coefficients.data(),
                                                         static_cast<Eigen::Index>(p));
    }
    const double rss = resid.squaredNorm();
    // Divisor is the number of regression rows. An exactly deterministic
    // series would give rss == 0; keep the variance representable.
    out.noise_variance =
        std::max(rss / static_cast<double>(d.y.size()), std::numeric_limits<double>::min());
    return out;
}

StabilityResult stability_check(const ARParams& theta) {
    theta.validate();
    StabilityResult res;
    const std::size_t p = theta.order();
    if (p == 0) return res;

    // Companion matrix of z^p - a_1 z^{p-1} - ... - a_p.
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                                 static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < p; ++k) {
        comp(0, static_cast<Eigen::Index>(k)) = theta.coefficients[k];
    }
    for (std::size_t k = 1; k < p; ++k) {
        comp(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
    }
    const Eigen::VectorXcd eig = comp.eigenvalues();
    res.pole_moduli.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        res.pole_moduli[k] = std::abs(eig(static_cast<Eigen::Index>(k)));
    }
    std::sort(res.pole_moduli.rbegin(), res.pole_moduli.rend());
    res.stable = res.pole_moduli.front() < 1.0;
    return res;
}

}  // namespace base
