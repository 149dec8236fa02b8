#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbo/acqui/acquisition.hpp"
#include "mbo/config.hpp"
#include "mbo/core/box.hpp"
#include "mbo/core/rng.hpp"
#include "mbo/core/types.hpp"
#include "mbo/gp/hp_optimize.hpp"
#include "mbo/gp/model.hpp"
#include "mbo/opt/inner.hpp"

namespace mbo {

enum class BoPhase { initializing, optimizing, finished };

/// Ask/tell state machine. ask() proposes the next point to evaluate and
/// never mutates state; tell() feeds the observation back. The same stream
/// of (ask, tell) calls always reproduces the same states.
class BoOptimizer {
public:
    BoOptimizer(int dim_in, BoConfig config, RngStream rng)
        : dim_(dim_in),
          config_(std::move(config)),
          rng_(rng),
          ask_rng_(0, 0),
          dataset_(dim_in, 1),
          inner_(config_.inner ? *config_.inner : default_inner_optimizer(dim_in)) {
        if (dim_ < 1) throw std::invalid_argument("BoOptimizer: dim_in must be >= 1");
        config_.params.validate();
        detail::check_kernel_dims(config_.kernel, dim_);
        kernel_ = config_.kernel;
        kernel_.noise_variance = config_.params.noise;
        init_points_ = initial_design(dim_, config_.params.init_samples, rng_, config_.init_strategy);
        ask_rng_ = rng_.spawn();
    }

    BoPhase phase() const { return phase_; }
    int iteration() const { return iteration_; }
    const Dataset& dataset() const { return dataset_; }
    const std::optional<GpModel>& model() const { return model_; }
    const KernelConfig& kernel() const { return kernel_; }
    int dim() const { return dim_; }

    const Eigen::VectorXd& best_x() const {
        if (dataset_.empty()) throw std::logic_error("BoOptimizer: no observations yet");
        return best_x_;
    }
    double best_observed_y() const {
        if (dataset_.empty()) throw std::logic_error("BoOptimizer: no observations yet");
        return best_y_;
    }

    /// Next point to evaluate. Repeated calls without an intervening tell
    /// return the same point.
    Eigen::VectorXd ask() const {
        if (phase_ == BoPhase::finished) throw std::logic_error("BoOptimizer::ask: already finished");
        if (phase_ == BoPhase::initializing)
            return init_points_[static_cast<std::size_t>(dataset_.size())];

        AcquiConfig acq = config_.acqui;
        acq.iteration_t = iteration_ + 1;  // iteration about to happen, 1-based
        const GpModel& m = *model_;
        const double best = best_y_;
        const int d = dim_;
        auto surface = [&](const Eigen::VectorXd& x) {
            return acqui_eval(acq, m.query(x), d, best);
        };
        RngStream r = ask_rng_;  // copy keeps ask idempotent
        return inner_maximize(inner_, surface, d, r).x_best;
    }

    /// Record an observation. Rejects out-of-box x and non-finite y without
    /// touching state.
    void tell(const Eigen::VectorXd& x, double y) {
        if (phase_ == BoPhase::finished) throw std::logic_error("BoOptimizer::tell: already finished");
        if (!std::isfinite(y)) throw std::invalid_argument("BoOptimizer::tell: y is not finite");
        Eigen::VectorXd yv(1);
        yv[0] = y;
        dataset_.add(x, yv);  // validates dimension and box membership

        if (dataset_.size() == 1 || y > best_y_) {
            best_y_ = y;
            best_x_ = x;
        }

        const int n = static_cast<int>(dataset_.size());
        if (n >= config_.params.init_samples) {
            iteration_ = n - config_.params.init_samples;
            const bool refit_hp = config_.params.hp_opt_enabled && n >= 2 &&
                                  iteration_ % config_.params.hp_opt_period == 0;
            if (refit_hp)
                kernel_ = optimize_hyperparams(dataset_, kernel_, config_.mean, rng_, config_.hp_opt);
            model_ = GpModel::fit(dataset_, kernel_, config_.mean);
            phase_ = n >= config_.params.max_evaluations ? BoPhase::finished : BoPhase::optimizing;
        }
        ask_rng_ = rng_.spawn();  // next ask draws fresh, tell-synchronized randomness
    }

private:
    int dim_;
    BoConfig config_;
    RngStream rng_;
    RngStream ask_rng_;
    Dataset dataset_;
    InnerOptimizerSpec inner_;
    KernelConfig kernel_;  // tracks hyperparameter refits
    std::vector<Eigen::VectorXd> init_points_;
    std::optional<GpModel> model_;
    BoPhase phase_ = BoPhase::initializing;
    int iteration_ = 0;
    Eigen::VectorXd best_x_;
    double best_y_ = -std::numeric_limits<double>::infinity();
};

struct HistoryEntry {
    Eigen::VectorXd x;
    double y = 0.0;
    double wall_time_ms = 0.0;  // full iteration: proposal + evaluation + refit
};

struct BoResult {
    Eigen::VectorXd best_x;
    double best_observed_y = -std::numeric_limits<double>::infinity();
    std::vector<HistoryEntry> history;
    long total_evaluations = 0;
};

/// Run the full loop: exactly config.params.max_evaluations objective
/// evaluations, then report the best observed sample and per-iteration times.
inline BoResult optimize(const ObjectiveSpec& objective, const BoConfig& config, RngStream rng) {
    if (objective.dim_out != 1) throw std::invalid_argument("optimize: dim_out must be 1");
    if (!objective.evaluator) throw std::invalid_argument("optimize: evaluator is empty");

    BoOptimizer state(objective.dim_in, config, rng);
    BoResult result;
    result.history.reserve(static_cast<std::size_t>(config.params.max_evaluations));

    using clock = std::chrono::steady_clock;
    while (state.phase() != BoPhase::finished) {
        const auto t0 = clock::now();
        const Eigen::VectorXd x = state.ask();
        Eigen::VectorXd y;
        try {
            y = objective.evaluator(x);
        } catch (const std::exception& e) {
            throw std::runtime_error("objective evaluation failed at x = " +
                                     detail::vector_to_string(x) + ": " + e.what());
        }
        if (y.size() != 1 || !std::isfinite(y[0]))
            throw std::runtime_error("objective returned an invalid value at x = " +
                                     detail::vector_to_string(x));
        state.tell(x, y[0]);
        const std::chrono::duration<double, std::milli> dt = clock::now() - t0;
        result.history.push_back(HistoryEntry{x, y[0], dt.count()});
    }

    result.best_x = state.best_x();
    result.best_observed_y = state.best_observed_y();
    result.total_evaluations = static_cast<long>(state.dataset().size());
    return result;
}

}  // namespace mbo
