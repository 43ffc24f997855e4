#include "base/model_two.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace base {

ModelTwoHyper ModelTwoHyper::defaults(std::size_t p) {
    ModelTwoHyper h;
    h.mu0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    return h;
}

void ModelTwoHyper::validate(std::size_t p) const {
    if (mu0.size() != static_cast<Eigen::Index>(p)) {
        throw std::invalid_argument("ModelTwoHyper: mu0 length must equal the order");
    }
    if (!(lambda > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("ModelTwoHyper: lambda, alpha, beta must be positive");
    }
}

namespace {

// Sufficient statistics of one or more design segments.
struct DesignStats {
    Eigen::MatrixXd xtx;
    Eigen::VectorXd xty;
    double yty = 0.0;
    std::size_t rows = 0;
    std::size_t total_len = 0;  // raw sample count behind the rows

    explicit DesignStats(std::size_t p)
        : xtx(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))),
          xty(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p))) {}

    void add_segment(std::span<const double> seg, std::size_t p) {
        total_len += seg.size();
        if (seg.size() <= p) return;  // contributes no regression rows
        const DesignData d = design_rows(seg, p);
        xtx.noalias() += d.X.transpose() * d.X;
        xty.noalias() += d.X.transpose() * d.y;
        yty += d.y.squaredNorm();
        rows += static_cast<std::size_t>(d.y.size());
    }
};

struct NIGCore {
    Eigen::VectorXd mu;
    Eigen::MatrixXd precision;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
};

NIGCore nig_update(const DesignStats& st, std::size_t p, const ModelTwoHyper& hyper) {
    NIGCore core;
    core.precision = st.xtx;
    core.precision.diagonal().array() += hyper.lambda;
    core.precision = ((core.precision + core.precision.transpose()) / 2.0).eval();

    const Eigen::VectorXd rhs = hyper.lambda * hyper.mu0 + st.xty;
    if (p > 0) {
        core.mu = core.precision.ldlt().solve(rhs);
    } else {
        core.mu.resize(0);
    }
    core.alpha_bar = hyper.alpha + static_cast<double>(st.rows) / 2.0;
    // mu' precision mu == mu' rhs since precision * mu == rhs.
    core.beta_bar = hyper.beta +
                    (hyper.lambda * hyper.mu0.squaredNorm() + st.yty - core.mu.dot(rhs)) / 2.0;
    return core;
}

Eigen::VectorXd map_coeffs(const NIGCore& core) { return core.mu; }

double map_noise_variance(const DesignStats& st, const NIGCore& core,
                          const ModelTwoHyper& hyper) {
    const Eigen::VectorXd& a = core.mu;
    const double rss = st.yty - 2.0 * a.dot(st.xty) + a.dot(st.xtx * a);
    const double prior_dev = hyper.lambda * (a - hyper.mu0).squaredNorm();
    const double num = 2.0 * hyper.beta + prior_dev + std::max(rss, 0.0);
    const double den = 2.0 * (hyper.alpha + 1.0) + static_cast<double>(st.total_len);
    return num / den;
}

}  // namespace

NIGPosterior nig_posterior(const TimeSeries& ts, std::size_t p, const ModelTwoHyper& hyper) {
    ts.validate();
    hyper.validate(p);
    if (ts.size() < p) {
        throw std::invalid_argument("nig_posterior: series shorter than order p");
    }
    DesignStats st(p);
    st.add_segment(std::span<const double>(ts.values), p);
    const NIGCore core = nig_update(st, p, hyper);

    NIGPosterior post;
    post.mu = core.mu;
    post.precision = core.precision;
    post.alpha_bar = core.alpha_bar;
    post.beta_bar = core.beta_bar;
    post.n_rows = st.rows;
    if (!(post.beta_bar > 0.0)) {
        throw std::runtime_error("nig_posterior: non-positive beta_bar (" +
                                 std::to_string(post.beta_bar) +
                                 "); inputs are numerically broken");
    }
    if (p > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(post.precision);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (lo <= 0.0 || hi / lo > 1e12) {
            post.warnings.push_back("precision matrix ill-conditioned (cond > 1e12)");
        }
    }
    return post;
}

PosteriorSamples sample_nig(const NIGPosterior& post, std::size_t n_draws, std::uint64_t seed) {
    if (n_draws < 1) throw std::invalid_argument("sample_nig: n_draws must be >= 1");
    const auto p = static_cast<std::size_t>(post.mu.size());

    Eigen::LLT<Eigen::MatrixXd> llt;
    if (p > 0) {
        llt.compute(post.precision);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("sample_nig: precision factorization failed");
        }
    }

    std::mt19937_64 rng(seed);
    // InvGamma(a, b): draw G ~ Gamma(shape a, scale 1/b), sigma2 = 1/G.
    std::gamma_distribution<double> gamma(post.alpha_bar, 1.0 / post.beta_bar);
    std::normal_distribution<double> std_normal(0.0, 1.0);

    PosteriorSamples samples;
    samples.order = p;
    samples.n_chains = 1;
    samples.seed = seed;
    samples.acceptance_rate = 1.0;  // exact sampler
    samples.draws.resize(static_cast<Eigen::Index>(n_draws), static_cast<Eigen::Index>(p + 1));

    Eigen::VectorXd z(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < n_draws; ++i) {
        const double g = std::max(gamma(rng), std::numeric_limits<double>::min());
        const double s2 = 1.0 / g;
        for (std::size_t k = 0; k < p; ++k) z(static_cast<Eigen::Index>(k)) = std_normal(rng);
        const auto row = static_cast<Eigen::Index>(i);
        if (p > 0) {
            // a = mu + sigma * U^-1 z with U'U = precision gives cov sigma2 * precision^-1.
            samples.draws.row(row).head(static_cast<Eigen::Index>(p)) =
                (post.mu + std::sqrt(s2) * llt.matrixU().solve(z)).transpose();
        }
        samples.draws(row, static_cast<Eigen::Index>(p)) = s2;
    }
    return samples;
}

ARParams map_estimate(const TimeSeries& ts, std::size_t p, const ModelTwoHyper& hyper) {
    ts.validate();
    hyper.validate(p);
    if (ts.size() < p) {
        throw std::invalid_argument("map_estimate: series shorter than order p");
    }
    DesignStats st(p);
    st.add_segment(std::span<const double>(ts.values), p);
    const NIGCore core = nig_update(st, p, hyper);
    if (!(core.beta_bar > 0.0)) {
        throw std::runtime_error("map_estimate: non-positive beta_bar; inputs are broken");
    }

    ARParams out;
    const Eigen::VectorXd a = map_coeffs(core);
    out.coefficients.assign(a.data(), a.data() + a.size());
    out.noise_variance = map_noise_variance(st, core, hyper);
    return out;
}

CVResult grid_search_cv(const TimeSeries& ts, std::size_t p, const HyperGrid& grid,
                        std::size_t n_folds) {
    ts.validate();
    if (n_folds < 2) throw std::invalid_argument("grid_search_cv: need at least 2 folds");
    if (grid.n_candidates() == 0) throw std::invalid_argument("grid_search_cv: empty grid");
    const std::size_t T = ts.size();
    if (T / n_folds < p + 2) {
        throw std::invalid_argument("grid_search_cv: fold test blocks would have fewer than p + 2 "
                                    "samples; use fewer folds or a lower order");
    }

    // Contiguous near-equal blocks in time order.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
    for (std::size_t f = 0; f < n_folds; ++f) {
        const std::size_t begin = f * T / n_folds;
        const std::size_t end = (f + 1) * T / n_folds;
        blocks.emplace_back(begin, end);
    }

    // Hyperparameter-independent per-fold statistics: the training design
    // (left and right segments contribute their own rows) and the raw test
    // block for scoring.
    const std::span<const double> all(ts.values);
    std::vector<DesignStats> train_stats;
    std::vector<std::span<const double>> test_blocks;
    train_stats.reserve(n_folds);
    for (const auto& [begin, end] : blocks) {
        DesignStats st(p);
        if (begin > 0) st.add_segment(all.subspan(0, begin), p);
        if (end < T) st.add_segment(all.subspan(end), p);
        train_stats.push_back(std::move(st));
        test_blocks.push_back(all.subspan(begin, end - begin));
    }

    CVResult result;
    result.table.reserve(grid.n_candidates());
    double best_score = -std::numeric_limits<double>::infinity();

    for (double lambda : grid.lambdas) {
        for (double alpha : grid.alphas) {
            for (double beta : grid.betas) {
                for (double c : grid.mu0_scalars) {
                    ModelTwoHyper h;
                    h.lambda = lambda;
                    h.alpha = alpha;
                    h.beta = beta;
                    h.mu0 = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p), c);

                    CVScore score;
                    score.lambda = lambda;
                    score.alpha = alpha;
                    score.beta = beta;
                    score.mu0_scalar = c;
                    score.fold_scores.reserve(n_folds);
                    double total = 0.0;
                    for (std::size_t f = 0; f < n_folds; ++f) {
                        const NIGCore core = nig_update(train_stats[f], p, h);
                        ARParams map;
                        const Eigen::VectorXd a = map_coeffs(core);
                        map.coefficients.assign(a.data(), a.data() + a.size());
                        map.noise_variance = map_noise_variance(train_stats[f], core, h);
                        const double s = conditional_log_likelihood(map, test_blocks[f]);
                        score.fold_scores.push_back(s);
                        total += s;
                    }
                    score.mean_score = total / static_cast<double>(n_folds);
                    if (score.mean_score > best_score) {
                        best_score = score.mean_score;
                        result.best = h;
                    }
                    result.table.push_back(std::move(score));
                }
            }
        }
    }
    return result;
}

}  // namespace base
