#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbo/core/types.hpp"
#include "mbo/gp/kernel.hpp"
#include "mbo/gp/mean.hpp"

namespace mbo {

/// Predictive distribution of the latent function at one point.
/// `sigma2` excludes the observation-noise term.
struct Posterior {
    double mu = 0.0;
    double sigma2 = 0.0;
};

namespace detail {

/// Jitter ladder, applied as multiples of the mean diagonal magnitude.
inline const double kJitterLadder[] = {0.0, 1e-10, 1e-6, 1e-4};

struct Factorization {
    Eigen::MatrixXd L;   // lower-triangular Cholesky factor of K + noise*I + jitter*I
    double jitter = 0.0; // absolute jitter added to the diagonal
};

/// Cholesky-factor K_noisy, escalating jitter until the factorization succeeds.
inline Factorization factor_with_jitter(const Eigen::MatrixXd& K_noisy) {
    const double diag_scale = K_noisy.diagonal().cwiseAbs().mean();
    for (double level : kJitterLadder) {
        const double jitter = level * diag_scale;
        Eigen::MatrixXd K = K_noisy;
        K.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        if (llt.info() == Eigen::Success) {
            Eigen::MatrixXd L = llt.matrixL();
            if (L.diagonal().minCoeff() > 0.0 && L.allFinite())
                return Factorization{std::move(L), jitter};
        }
    }
    std::ostringstream os;
    os << "covariance factorization failed for n=" << K_noisy.rows()
       << " after jitter escalation up to " << kJitterLadder[3] << " * " << diag_scale;
    throw NumericalError(os.str());
}

}  // namespace detail

/// Exact Gaussian-process posterior, immutable once fitted.
class GpModel {
public:
    /// Fit to a scalar-output dataset. Throws std::invalid_argument on an
    /// empty dataset or dim_out != 1, NumericalError if the covariance
    /// cannot be factored even with escalated jitter.
    static GpModel fit(const Dataset& data, const KernelConfig& kernel, const MeanConfig& mean) {
        if (data.empty()) throw std::invalid_argument("GpModel::fit: dataset is empty");
        if (data.dim_out() != 1) throw std::invalid_argument("GpModel::fit: dim_out must be 1");
        return GpModel(data.inputs(), data.scalar_outputs(), kernel, mean);
    }

    /// Fit directly from matrices (rows of X are inputs).
    static GpModel fit(Eigen::MatrixXd X, Eigen::VectorXd y, const KernelConfig& kernel,
                       const MeanConfig& mean) {
        if (X.rows() == 0) throw std::invalid_argument("GpModel::fit: no data");
        if (X.rows() != y.size()) throw std::invalid_argument("GpModel::fit: X/y size mismatch");
        return GpModel(std::move(X), std::move(y), kernel, mean);
    }

    Posterior query(const Eigen::VectorXd& x) const {
        Posterior p;
        const Eigen::VectorXd k = kernel_vector(kernel_, X_, x);
        p.mu = mean_value_ + k.dot(weights_);
        const Eigen::VectorXd v = L_.triangularView<Eigen::Lower>().solve(k);
        p.sigma2 = kernel_eval(kernel_, x, x) - v.squaredNorm();
        if (p.sigma2 < 0.0) p.sigma2 = 0.0;  // floating-point cancellation
        return p;
    }

    /// log p(y | X, theta) under the factored covariance (including jitter).
    double log_marginal_likelihood() const {
        const Eigen::VectorXd r = y_.array() - mean_value_;
        const double n = static_cast<double>(y_.size());
        return -0.5 * r.dot(weights_) - L_.diagonal().array().log().sum() -
               0.5 * n * std::log(2.0 * M_PI);
    }

    /// Partial derivatives of the log marginal likelihood with respect to
    /// every log-hyperparameter, ordered (log_lengthscale..., log_signal_variance).
    /// Noise is fixed and excluded.
    Eigen::VectorXd lml_gradient() const {
        return lml_gradient_cached(pairwise_sq_diffs(X_));
    }

    /// Gradient using precomputed per-dimension squared differences of X_.
    Eigen::VectorXd lml_gradient_cached(const std::vector<Eigen::MatrixXd>& d2) const {
        const Eigen::MatrixXd r2 = scaled_r2_matrix(kernel_, d2);
        const Eigen::MatrixXd Kf = kernel_gram_from_r2(kernel_, r2);
        const auto dK = kernel_gram_gradients(kernel_, d2, r2, Kf);

        // K^-1 via the stored factor; inner = w w^T - K^-1.
        const Eigen::Index n = X_.rows();
        Eigen::MatrixXd Kinv = L_.triangularView<Eigen::Lower>().solve(
            Eigen::MatrixXd::Identity(n, n));
        Kinv = L_.transpose().triangularView<Eigen::Upper>().solve(Kinv);
        const Eigen::MatrixXd inner = weights_ * weights_.transpose() - Kinv;

        Eigen::VectorXd grad(static_cast<Eigen::Index>(dK.size()));
        for (std::size_t j = 0; j < dK.size(); ++j)
            grad[static_cast<Eigen::Index>(j)] = 0.5 * (inner.array() * dK[j].array()).sum();
        return grad;
    }

    const Eigen::MatrixXd& inputs() const { return X_; }
    const Eigen::VectorXd& outputs() const { return y_; }
    const KernelConfig& kernel() const { return kernel_; }
    const MeanConfig& mean() const { return mean_; }
    double mean_value() const { return mean_value_; }
    const Eigen::MatrixXd& chol_factor() const { return L_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    double jitter() const { return jitter_; }
    Eigen::Index num_samples() const { return X_.rows(); }
    Eigen::Index dim() const { return X_.cols(); }

private:
    GpModel(Eigen::MatrixXd X, Eigen::VectorXd y, const KernelConfig& kernel, const MeanConfig& mean)
        : X_(std::move(X)), y_(std::move(y)), kernel_(kernel), mean_(mean) {
        detail::check_kernel_dims(kernel_, X_.cols());
        mean_value_ = resolve_mean(mean_, y_);
        auto fac = detail::factor_with_jitter(kernel_matrix(kernel_, X_));
        L_ = std::move(fac.L);
        jitter_ = fac.jitter;
        const Eigen::VectorXd r = y_.array() - mean_value_;
        weights_ = L_.triangularView<Eigen::Lower>().solve(r);
        weights_ = L_.transpose().triangularView<Eigen::Upper>().solve(weights_);
    }

    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    KernelConfig kernel_;
    MeanConfig mean_;
    double mean_value_ = 0.0;
    Eigen::MatrixXd L_;
    Eigen::VectorXd weights_;
    double jitter_ = 0.0;
};

/// Free-function spellings of the model operations.
inline GpModel gp_fit(const Dataset& data, const KernelConfig& kernel, const MeanConfig& mean) {
    return GpModel::fit(data, kernel, mean);
}

inline Posterior gp_query(const GpModel& model, const Eigen::VectorXd& x) { return model.query(x); }

inline double log_marginal_likelihood(const GpModel& model) { return model.log_marginal_likelihood(); }

inline Eigen::VectorXd lml_gradient(const GpModel& model) { return model.lml_gradient(); }

}  // namespace mbo
