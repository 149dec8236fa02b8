#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbo/core/rng.hpp"
#include "mbo/core/types.hpp"
#include "mbo/gp/kernel.hpp"
#include "mbo/gp/mean.hpp"
#include "mbo/gp/model.hpp"

namespace mbo {

/// Search box for log-hyperparameters. Wide enough for anything sensible
/// on the unit input box.
struct HpBox {
    double log_lengthscale_min = std::log(1e-3);
    double log_lengthscale_max = std::log(10.0);
    double log_signal_min = std::log(1e-4);
    double log_signal_max = std::log(100.0);
};

struct HpOptOptions {
    int restarts = 2;      // incumbent config plus restarts-1 random starts
    int max_iters = 40;    // Rprop iterations per start
    double init_step = 0.1;
    double step_grow = 1.2;
    double step_shrink = 0.5;
    double min_step = 1e-5;
    double max_step = 1.0;
    double converge_step = 3e-3;  // stop once every step size falls below this
    HpBox box;
};

namespace detail {

struct LmlEval {
    bool ok = false;
    double lml = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd grad;
};

inline KernelConfig config_from_theta(const KernelConfig& base, const Eigen::VectorXd& theta) {
    KernelConfig cfg = base;
    const Eigen::Index L = base.log_lengthscale.size();
    cfg.log_lengthscale = theta.head(L);
    cfg.log_signal_variance = theta[L];
    return cfg;
}

inline Eigen::VectorXd theta_from_config(const KernelConfig& cfg) {
    const Eigen::Index L = cfg.log_lengthscale.size();
    Eigen::VectorXd theta(L + 1);
    theta.head(L) = cfg.log_lengthscale;
    theta[L] = cfg.log_signal_variance;
    return theta;
}

/// LML and its gradient for the hyperparameters packed in `theta`,
/// reusing precomputed per-dimension squared differences.
inline LmlEval eval_lml(const KernelConfig& base, const Eigen::VectorXd& theta,
                        const std::vector<Eigen::MatrixXd>& d2, const Eigen::VectorXd& y,
                        double mean_value) {
    LmlEval out;
    const KernelConfig cfg = config_from_theta(base, theta);
    const Eigen::Index n = y.size();
    const Eigen::MatrixXd r2 = scaled_r2_matrix(cfg, d2);
    const Eigen::MatrixXd Kf = kernel_gram_from_r2(cfg, r2);
    Eigen::MatrixXd K_noisy = Kf;
    K_noisy.diagonal().array() += cfg.noise_variance;
    Factorization fac;
    try {
        fac = factor_with_jitter(K_noisy);
    } catch (const NumericalError&) {
        return out;  // ok stays false; caller skips this point
    }
    const Eigen::VectorXd r = y.array() - mean_value;
    Eigen::VectorXd w = fac.L.triangularView<Eigen::Lower>().solve(r);
    w = fac.L.transpose().triangularView<Eigen::Upper>().solve(w);

    out.lml = -0.5 * r.dot(w) - fac.L.diagonal().array().log().sum() -
              0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
    if (!std::isfinite(out.lml)) {
        out.lml = -std::numeric_limits<double>::infinity();
        return out;
    }

    Eigen::MatrixXd Kinv = Eigen::MatrixXd::Identity(n, n);
    fac.L.triangularView<Eigen::Lower>().solveInPlace(Kinv);
    fac.L.transpose().triangularView<Eigen::Upper>().solveInPlace(Kinv);
    const Eigen::MatrixXd inner = w * w.transpose() - Kinv;

    const auto dK = kernel_gram_gradients(cfg, d2, r2, Kf);
    out.grad.resize(static_cast<Eigen::Index>(dK.size()));
    for (std::size_t j = 0; j < dK.size(); ++j)
        out.grad[static_cast<Eigen::Index>(j)] = 0.5 * (inner.array() * dK[j].array()).sum();
    out.ok = out.grad.allFinite();
    return out;
}

inline Eigen::VectorXd clamp_theta(Eigen::VectorXd theta, Eigen::Index L, const HpBox& box) {
    for (Eigen::Index i = 0; i < L; ++i)
        theta[i] = std::clamp(theta[i], box.log_lengthscale_min, box.log_lengthscale_max);
    theta[L] = std::clamp(theta[L], box.log_signal_min, box.log_signal_max);
    return theta;
}

/// Sign-based adaptive-step ascent (iRprop-); returns the best point seen.
template <typename EvalFn>
std::pair<Eigen::VectorXd, double> rprop_ascend(Eigen::VectorXd theta, Eigen::Index L,
                                                const HpOptOptions& opt, EvalFn&& eval) {
    theta = clamp_theta(std::move(theta), L, opt.box);
    Eigen::VectorXd best_theta = theta;
    double best_lml = -std::numeric_limits<double>::infinity();

    Eigen::VectorXd steps = Eigen::VectorXd::Constant(theta.size(), opt.init_step);
    Eigen::VectorXd prev_grad = Eigen::VectorXd::Zero(theta.size());

    for (int iter = 0; iter < opt.max_iters; ++iter) {
        LmlEval e = eval(theta);
        if (!e.ok) break;
        if (e.lml > best_lml) {
            best_lml = e.lml;
            best_theta = theta;
        }
        Eigen::VectorXd g = e.grad;
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            const double s = g[i] * prev_grad[i];
            if (s > 0.0)
                steps[i] = std::min(steps[i] * opt.step_grow, opt.max_step);
            else if (s < 0.0) {
                steps[i] = std::max(steps[i] * opt.step_shrink, opt.min_step);
                g[i] = 0.0;  // iRprop-: forget the direction after a sign flip
            }
            if (g[i] > 0.0)
                theta[i] += steps[i];
            else if (g[i] < 0.0)
                theta[i] -= steps[i];
        }
        theta = clamp_theta(std::move(theta), L, opt.box);
        prev_grad = g;
        if (steps.maxCoeff() < opt.converge_step) break;
    }
    return {best_theta, best_lml};
}

}  // namespace detail

/// Multi-start maximization of the log marginal likelihood over the
/// log-hyperparameter box. Noise stays fixed. The returned config never has
/// lower LML than `kernel`; on total numerical failure `kernel` is returned
/// unchanged.
inline KernelConfig optimize_hyperparams(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         const KernelConfig& kernel, const MeanConfig& mean,
                                         RngStream& rng, const HpOptOptions& opt = {}) {
    if (X.rows() < 2) throw std::invalid_argument("optimize_hyperparams: need at least 2 samples");
    if (X.rows() != y.size())
        throw std::invalid_argument("optimize_hyperparams: X/y size mismatch");
    detail::check_kernel_dims(kernel, X.cols());
    if (opt.restarts < 1) throw std::invalid_argument("optimize_hyperparams: restarts must be >= 1");

    const double mean_value = resolve_mean(mean, y);
    const auto d2 = pairwise_sq_diffs(X);
    const Eigen::Index L = kernel.log_lengthscale.size();
    auto eval = [&](const Eigen::VectorXd& theta) {
        return detail::eval_lml(kernel, theta, d2, y, mean_value);
    };

    // Monotone contract baseline: the incumbent config exactly as given,
    // even if it sits outside the search box.
    const Eigen::VectorXd theta_in = detail::theta_from_config(kernel);
    const detail::LmlEval base = eval(theta_in);
    Eigen::VectorXd best_theta = theta_in;
    double best_lml = base.ok ? base.lml : -std::numeric_limits<double>::infinity();
    bool any_ok = base.ok;

    for (int r = 0; r < opt.restarts; ++r) {
        Eigen::VectorXd start(L + 1);
        if (r == 0) {
            start = theta_in;
        } else {
            for (Eigen::Index i = 0; i < L; ++i)
                start[i] = rng.uniform(opt.box.log_lengthscale_min, opt.box.log_lengthscale_max);
            start[L] = rng.uniform(opt.box.log_signal_min, opt.box.log_signal_max);
        }
        auto [theta, lml] = detail::rprop_ascend(start, L, opt, eval);
        if (std::isfinite(lml)) any_ok = true;
        if (lml > best_lml) {  // strict: ties keep the earliest start
            best_lml = lml;
            best_theta = theta;
        }
    }

    if (!any_ok) return kernel;  // every start failed numerically
    return detail::config_from_theta(kernel, best_theta);
}

inline KernelConfig optimize_hyperparams(const Dataset& data, const KernelConfig& kernel,
                                         const MeanConfig& mean, RngStream& rng,
                                         const HpOptOptions& opt = {}) {
    if (data.size() < 2)
        throw std::invalid_argument("optimize_hyperparams: need at least 2 samples");
    if (data.dim_out() != 1)
        throw std::invalid_argument("optimize_hyperparams: dim_out must be 1");
    return optimize_hyperparams(data.inputs(), data.scalar_outputs(), kernel, mean, rng, opt);
}

}  // namespace mbo
