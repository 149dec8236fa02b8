#pragma once

#include <cmath>
#include <stdexcept>

#include "mbo/gp/model.hpp"

namespace mbo {

enum class AcquiKind { ucb, gp_ucb, ei };

/// Which acquisition the loop maximizes, with its parameters.
/// `iteration_t` is the 1-based optimization iteration; only gp_ucb reads it.
struct AcquiConfig {
    AcquiKind kind = AcquiKind::ucb;
    double kappa = 0.5;   // ucb
    double delta = 0.1;   // gp_ucb, in (0,1)
    double xi = 0.0;      // ei
    int iteration_t = 1;

    static AcquiConfig ucb(double kappa) {
        if (kappa < 0.0) throw std::invalid_argument("AcquiConfig: kappa must be >= 0");
        AcquiConfig c;
        c.kind = AcquiKind::ucb;
        c.kappa = kappa;
        return c;
    }
    static AcquiConfig gp_ucb(double delta = 0.1) {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("AcquiConfig: delta must be in (0,1)");
        AcquiConfig c;
        c.kind = AcquiKind::gp_ucb;
        c.delta = delta;
        return c;
    }
    static AcquiConfig ei(double xi = 0.0) {
        if (xi < 0.0) throw std::invalid_argument("AcquiConfig: xi must be >= 0");
        AcquiConfig c;
        c.kind = AcquiKind::ei;
        c.xi = xi;
        return c;
    }
};

/// mu + kappa * sigma.
inline double acqui_ucb(const Posterior& p, double kappa) {
    const double s2 = p.sigma2 > 0.0 ? p.sigma2 : 0.0;
    return p.mu + kappa * std::sqrt(s2);
}

/// Confidence-bound schedule beta_t = 2*log(t^(d/2+2) * pi^2 / (3*delta)).
/// Grows without bound in t, so exploration never stops entirely.
inline double gpucb_beta(int t, int d, double delta) {
    if (t < 1) throw std::invalid_argument("gpucb_beta: t must be >= 1");
    if (d < 1) throw std::invalid_argument("gpucb_beta: d must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("gpucb_beta: delta must be in (0,1)");
    const double pi2 = M_PI * M_PI;
    return 2.0 * ((0.5 * d + 2.0) * std::log(static_cast<double>(t)) + std::log(pi2 / (3.0 * delta)));
}

inline double acqui_gp_ucb(const Posterior& p, int t, int d, double delta) {
    return acqui_ucb(p, std::sqrt(gpucb_beta(t, d, delta)));
}

/// Expected improvement over best_y with optional margin xi; 0 when the
/// posterior is degenerate, never negative.
inline double acqui_ei(const Posterior& p, double best_y, double xi) {
    const double s2 = p.sigma2 > 0.0 ? p.sigma2 : 0.0;
    const double s = std::sqrt(s2);
    if (s == 0.0) return 0.0;
    const double diff = p.mu - best_y - xi;
    const double z = diff / s;
    const double cdf = 0.5 * std::erfc(-z * M_SQRT1_2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double v = diff * cdf + s * pdf;
    return v > 0.0 ? v : 0.0;
}

/// Dispatch on cfg.kind. `d` is the input dimension (gp_ucb), `best_y` the
/// best observed value so far (ei).
inline double acqui_eval(const AcquiConfig& cfg, const Posterior& p, int d, double best_y) {
    switch (cfg.kind) {
        case AcquiKind::ucb:
            return acqui_ucb(p, cfg.kappa);
        case AcquiKind::gp_ucb:
            return acqui_gp_ucb(p, cfg.iteration_t, d, cfg.delta);
        case AcquiKind::ei:
            return acqui_ei(p, best_y, cfg.xi);
    }
    throw std::logic_error("acqui_eval: unhandled kind");
}

}  // namespace mbo
