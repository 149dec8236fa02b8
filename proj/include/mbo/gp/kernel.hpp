#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mbo {

enum class KernelKind {
    squared_exponential,
    matern52,
};

/// Stationary-kernel hyperparameters. Lengthscales and the signal variance
/// live in log space, which keeps them strictly positive; `log_lengthscale`
/// has one entry per input dimension (ARD) or a single shared entry
/// (isotropic). Observation noise is a fixed parameter, never learned.
struct KernelConfig {
    KernelKind kind = KernelKind::squared_exponential;
    Eigen::VectorXd log_lengthscale = Eigen::VectorXd::Zero(1);
    double log_signal_variance = 0.0;
    double noise_variance = 0.001;

    bool isotropic() const { return log_lengthscale.size() == 1; }
    double signal_variance() const { return std::exp(log_signal_variance); }
    double lengthscale(int dim_index) const {
        return std::exp(log_lengthscale[isotropic() ? 0 : dim_index]);
    }

    /// Number of learnable hyperparameters (lengthscale entries + signal variance).
    int num_params() const { return static_cast<int>(log_lengthscale.size()) + 1; }

    static KernelConfig squared_exponential_iso(double lengthscale = 1.0, double signal_variance = 1.0,
                                                double noise_variance = 0.001) {
        KernelConfig cfg;
        cfg.kind = KernelKind::squared_exponential;
        cfg.log_lengthscale = Eigen::VectorXd::Constant(1, std::log(lengthscale));
        cfg.log_signal_variance = std::log(signal_variance);
        cfg.noise_variance = noise_variance;
        return cfg;
    }

    static KernelConfig matern52_iso(double lengthscale = 1.0, double signal_variance = 1.0,
                                     double noise_variance = 0.001) {
        KernelConfig cfg = squared_exponential_iso(lengthscale, signal_variance, noise_variance);
        cfg.kind = KernelKind::matern52;
        return cfg;
    }
};

namespace detail {

inline void check_kernel_dims(const KernelConfig& cfg, Eigen::Index dim) {
    if (!cfg.isotropic() && cfg.log_lengthscale.size() != dim)
        throw std::invalid_argument("kernel: ARD lengthscale has " +
                                    std::to_string(cfg.log_lengthscale.size()) +
                                    " entries but input dimension is " + std::to_string(dim));
}

/// Kernel value from the scaled squared distance r2 = sum_i ((a_i-b_i)/l_i)^2.
inline double kernel_from_r2(KernelKind kind, double signal_variance, double r2) {
    switch (kind) {
        case KernelKind::squared_exponential:
            return signal_variance * std::exp(-0.5 * r2);
        case KernelKind::matern52: {
            const double r = std::sqrt(r2);
            const double sr = std::sqrt(5.0) * r;
            return signal_variance * (1.0 + sr + (5.0 / 3.0) * r2) * std::exp(-sr);
        }
    }
    return 0.0;  // unreachable
}

}  // namespace detail

/// Covariance between two points. Observation noise is NOT added here.
inline double kernel_eval(const KernelConfig& cfg, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("kernel_eval: input sizes differ");
    detail::check_kernel_dims(cfg, a.size());
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / cfg.lengthscale(static_cast<int>(i));
        r2 += d * d;
    }
    return detail::kernel_from_r2(cfg.kind, cfg.signal_variance(), r2);
}

/// Covariances between each row of X and the point x, as an n-vector.
inline Eigen::VectorXd kernel_vector(const KernelConfig& cfg, const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& x) {
    detail::check_kernel_dims(cfg, X.cols());
    Eigen::ArrayXd r2 = Eigen::ArrayXd::Zero(X.rows());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double inv_l = 1.0 / cfg.lengthscale(static_cast<int>(j));
        r2 += ((X.col(j).array() - x[j]) * inv_l).square();
    }
    const double sv = cfg.signal_variance();
    switch (cfg.kind) {
        case KernelKind::squared_exponential:
            return (sv * (-0.5 * r2).exp()).matrix();
        case KernelKind::matern52: {
            const Eigen::ArrayXd sr = std::sqrt(5.0) * r2.sqrt();
            return (sv * (1.0 + sr + (5.0 / 3.0) * r2) * (-sr).exp()).matrix();
        }
    }
    return Eigen::VectorXd();  // unreachable
}

/// Per-dimension squared coordinate differences for the rows of X, before
/// lengthscale scaling. Precomputed once per dataset and reused across
/// hyperparameter evaluations.
inline std::vector<Eigen::MatrixXd> pairwise_sq_diffs(const Eigen::MatrixXd& X) {
    std::vector<Eigen::MatrixXd> d2(X.cols());
    const Eigen::Index n = X.rows();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const Eigen::VectorXd c = X.col(j);
        d2[j] = (c.replicate(1, n) - c.transpose().replicate(n, 1)).array().square().matrix();
    }
    return d2;
}

/// Scaled squared distance matrix sum_j d2[j] / l_j^2.
inline Eigen::MatrixXd scaled_r2_matrix(const KernelConfig& cfg, const std::vector<Eigen::MatrixXd>& d2) {
    const Eigen::Index n = d2.empty() ? 0 : d2[0].rows();
    Eigen::MatrixXd r2 = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < d2.size(); ++j) {
        const double l = cfg.lengthscale(static_cast<int>(j));
        r2 += d2[j] / (l * l);
    }
    return r2;
}

/// Noise-free Gram matrix from a precomputed scaled squared distance matrix.
inline Eigen::MatrixXd kernel_gram_from_r2(const KernelConfig& cfg, const Eigen::MatrixXd& r2) {
    const double sv = cfg.signal_variance();
    switch (cfg.kind) {
        case KernelKind::squared_exponential:
            return (sv * (-0.5 * r2.array()).exp()).matrix();
        case KernelKind::matern52: {
            const Eigen::ArrayXXd sr = std::sqrt(5.0) * r2.array().sqrt();
            return (sv * (1.0 + sr + (5.0 / 3.0) * r2.array()) * (-sr).exp()).matrix();
        }
    }
    return Eigen::MatrixXd();  // unreachable
}

/// Gram matrix of the rows of X with noise_variance added on the diagonal.
inline Eigen::MatrixXd kernel_matrix(const KernelConfig& cfg, const Eigen::MatrixXd& X) {
    detail::check_kernel_dims(cfg, X.cols());
    Eigen::MatrixXd K = kernel_gram_from_r2(cfg, scaled_r2_matrix(cfg, pairwise_sq_diffs(X)));
    K.diagonal().array() += cfg.noise_variance;
    // Symmetrize exactly; the expression template above can round asymmetrically.
    K = ((K + K.transpose()) / 2.0).eval();
    return K;
}

/// Derivatives of the noise-free Gram matrix with respect to each
/// log-hyperparameter, ordered as (log_lengthscale entries..., log_signal_variance).
/// `d2` are the unscaled per-dimension squared differences and `K` the
/// noise-free Gram matrix at the current configuration.
inline std::vector<Eigen::MatrixXd> kernel_gram_gradients(const KernelConfig& cfg,
                                                          const std::vector<Eigen::MatrixXd>& d2,
                                                          const Eigen::MatrixXd& r2,
                                                          const Eigen::MatrixXd& K) {
    const int n_len = static_cast<int>(cfg.log_lengthscale.size());
    std::vector<Eigen::MatrixXd> grads;
    grads.reserve(n_len + 1);

    switch (cfg.kind) {
        case KernelKind::squared_exponential: {
            // dK/dlog l_j = K .* (d2_j / l_j^2); isotropic folds all dims into one.
            for (int j = 0; j < n_len; ++j) {
                Eigen::MatrixXd scaled;
                if (cfg.isotropic()) {
                    scaled = r2;
                } else {
                    const double l = cfg.lengthscale(j);
                    scaled = d2[j] / (l * l);
                }
                grads.push_back((K.array() * scaled.array()).matrix());
            }
            break;
        }
        case KernelKind::matern52: {
            // dK/dlog l_j = sv * exp(-sqrt5 r) * (5/3)(1 + sqrt5 r) * (d2_j / l_j^2)
            const Eigen::ArrayXXd r = r2.array().sqrt();
            const Eigen::ArrayXXd sr = std::sqrt(5.0) * r;
            const Eigen::ArrayXXd common =
                cfg.signal_variance() * (-sr).exp() * (5.0 / 3.0) * (1.0 + sr);
            for (int j = 0; j < n_len; ++j) {
                Eigen::MatrixXd scaled;
                if (cfg.isotropic()) {
                    scaled = r2;
                } else {
                    const double l = cfg.lengthscale(j);
                    scaled = d2[j] / (l * l);
                }
                grads.push_back((common * scaled.array()).matrix());
            }
            break;
        }
    }
    // dK/dlog sv = K for both kernels.
    grads.push_back(K);
    return grads;
}

}  // namespace mbo
