#pragma once

#include <Eigen/Dense>

namespace mbo {

enum class MeanKind {
    zero,
    constant,
    data_mean,
};

/// Prior mean function. All kinds are constant in the input; `data_mean`
/// recomputes the constant from the observations at fit time.
struct MeanConfig {
    MeanKind kind = MeanKind::zero;
    double value = 0.0;  // used by the constant kind

    static MeanConfig zero() { return MeanConfig{MeanKind::zero, 0.0}; }
    static MeanConfig constant(double c) { return MeanConfig{MeanKind::constant, c}; }
    static MeanConfig data_mean() { return MeanConfig{MeanKind::data_mean, 0.0}; }
};

/// The constant the mean function evaluates to for the given observations.
inline double resolve_mean(const MeanConfig& cfg, const Eigen::VectorXd& y) {
    switch (cfg.kind) {
        case MeanKind::zero: return 0.0;
        case MeanKind::constant: return cfg.value;
        case MeanKind::data_mean: return y.size() > 0 ? y.mean() : 0.0;
    }
    return 0.0;  // unreachable
}

}  // namespace mbo
