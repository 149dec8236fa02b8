#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbo/core/box.hpp"
#include "mbo/core/rng.hpp"

namespace mbo {

/// Recursive description of how a function over [0,1]^d is maximized.
/// Built from four combinators; new kinds slot in behind the same seam.
struct InnerOptimizerSpec {
    enum class Kind { random_search, local_search, chain, parallel_restarts };

    Kind kind = Kind::random_search;
    int n_candidates = 0;                    // random_search
    int max_steps = 0;                       // local_search
    double init_step = 0.0;                  // local_search
    double shrink = 0.0;                     // local_search
    std::vector<InnerOptimizerSpec> children;  // chain stages / parallel_restarts inner
    int n_restarts = 0;                      // parallel_restarts

    static InnerOptimizerSpec random_search(int n_candidates) {
        if (n_candidates < 1)
            throw std::invalid_argument("random_search: n_candidates must be >= 1");
        InnerOptimizerSpec s;
        s.kind = Kind::random_search;
        s.n_candidates = n_candidates;
        return s;
    }

    static InnerOptimizerSpec local_search(int max_steps, double init_step, double shrink) {
        if (max_steps < 1) throw std::invalid_argument("local_search: max_steps must be >= 1");
        if (!(init_step > 0.0 && init_step <= 1.0))
            throw std::invalid_argument("local_search: init_step must be in (0,1]");
        if (!(shrink > 0.0 && shrink < 1.0))
            throw std::invalid_argument("local_search: shrink must be in (0,1)");
        InnerOptimizerSpec s;
        s.kind = Kind::local_search;
        s.max_steps = max_steps;
        s.init_step = init_step;
        s.shrink = shrink;
        return s;
    }

    static InnerOptimizerSpec chain(std::vector<InnerOptimizerSpec> stages) {
        if (stages.empty()) throw std::invalid_argument("chain: needs at least one stage");
        InnerOptimizerSpec s;
        s.kind = Kind::chain;
        s.children = std::move(stages);
        return s;
    }

    static InnerOptimizerSpec parallel_restarts(InnerOptimizerSpec inner, int n_restarts) {
        if (n_restarts < 1)
            throw std::invalid_argument("parallel_restarts: n_restarts must be >= 1");
        InnerOptimizerSpec s;
        s.kind = Kind::parallel_restarts;
        s.children.push_back(std::move(inner));
        s.n_restarts = n_restarts;
        return s;
    }
};

/// Global-then-local default: big uniform sweep feeding a pattern search,
/// restarted four times on independent sub-streams.
inline InnerOptimizerSpec default_inner_optimizer(int d) {
    if (d < 1) throw std::invalid_argument("default_inner_optimizer: d must be >= 1");
    return InnerOptimizerSpec::parallel_restarts(
        InnerOptimizerSpec::chain({InnerOptimizerSpec::random_search(1000 * d),
                                   InnerOptimizerSpec::local_search(100, 0.1, 0.5)}),
        4);
}

struct OptResult {
    Eigen::VectorXd x_best;
    double value_best = -std::numeric_limits<double>::infinity();
    long evaluations_used = 0;
};

namespace detail {

template <typename F>
OptResult maximize_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream& rng,
                        const std::optional<Eigen::VectorXd>& start);

template <typename F>
OptResult random_search_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream& rng,
                             const std::optional<Eigen::VectorXd>& start) {
    OptResult best;
    if (start) {
        best.x_best = clamp_to_box(*start);
        best.value_best = f(best.x_best);
        ++best.evaluations_used;
    }
    Eigen::VectorXd x(d);
    for (int c = 0; c < spec.n_candidates; ++c) {
        for (int j = 0; j < d; ++j) x[j] = rng.uniform01();
        const double v = f(x);
        ++best.evaluations_used;
        if (v > best.value_best || best.x_best.size() == 0) {
            best.value_best = v;
            best.x_best = x;
        }
    }
    return best;
}

template <typename F>
OptResult local_search_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream&,
                            const std::optional<Eigen::VectorXd>& start) {
    OptResult res;
    Eigen::VectorXd x = start ? clamp_to_box(*start) : Eigen::VectorXd::Constant(d, 0.5).eval();
    double fx = f(x);
    ++res.evaluations_used;

    double step = spec.init_step;
    for (int it = 0; it < spec.max_steps && step >= 1e-6; ++it) {
        double best_v = fx;
        Eigen::VectorXd best_x;
        for (int j = 0; j < d; ++j) {
            for (double sgn : {1.0, -1.0}) {
                Eigen::VectorXd probe = x;
                probe[j] = std::clamp(probe[j] + sgn * step, 0.0, 1.0);
                const double v = f(probe);
                ++res.evaluations_used;
                if (v > best_v) {  // strict: ties keep the current point
                    best_v = v;
                    best_x = std::move(probe);
                }
            }
        }
        if (best_x.size() > 0) {
            x = std::move(best_x);
            fx = best_v;
        } else {
            step *= spec.shrink;
        }
    }
    res.x_best = std::move(x);
    res.value_best = fx;
    return res;
}

template <typename F>
OptResult chain_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream& rng,
                     const std::optional<Eigen::VectorXd>& start) {
    OptResult best;
    std::optional<Eigen::VectorXd> cur = start;
    for (const auto& stage : spec.children) {
        OptResult r = maximize_impl(stage, f, d, rng, cur);
        best.evaluations_used += r.evaluations_used;
        cur = r.x_best;  // next stage starts where this one ended
        if (r.value_best > best.value_best || best.x_best.size() == 0) {
            best.value_best = r.value_best;
            best.x_best = std::move(r.x_best);
        }
    }
    return best;
}

template <typename F>
OptResult parallel_restarts_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream& rng,
                                 const std::optional<Eigen::VectorXd>& start) {
    // Sub-streams are spawned up front in restart order, so the outcome does
    // not depend on how (or whether) the restarts are scheduled in parallel.
    std::vector<RngStream> streams;
    streams.reserve(static_cast<std::size_t>(spec.n_restarts));
    for (int r = 0; r < spec.n_restarts; ++r) streams.push_back(rng.spawn());

    OptResult best;
    for (int r = 0; r < spec.n_restarts; ++r) {
        OptResult run = maximize_impl(spec.children.front(), f, d, streams[static_cast<std::size_t>(r)], start);
        best.evaluations_used += run.evaluations_used;
        if (run.value_best > best.value_best || best.x_best.size() == 0) {  // ties: lowest index
            best.value_best = run.value_best;
            best.x_best = std::move(run.x_best);
        }
    }
    return best;
}

template <typename F>
OptResult maximize_impl(const InnerOptimizerSpec& spec, F& f, int d, RngStream& rng,
                        const std::optional<Eigen::VectorXd>& start) {
    switch (spec.kind) {
        case InnerOptimizerSpec::Kind::random_search:
            return random_search_impl(spec, f, d, rng, start);
        case InnerOptimizerSpec::Kind::local_search:
            return local_search_impl(spec, f, d, rng, start);
        case InnerOptimizerSpec::Kind::chain:
            return chain_impl(spec, f, d, rng, start);
        case InnerOptimizerSpec::Kind::parallel_restarts:
            return parallel_restarts_impl(spec, f, d, rng, start);
    }
    throw std::logic_error("inner_maximize: unhandled kind");
}

}  // namespace detail

/// Maximize f over [0,1]^d according to `spec`. `start` seeds the first
/// evaluation where the combinator accepts one. Deterministic given `rng`.
template <typename F>
OptResult inner_maximize(const InnerOptimizerSpec& spec, F&& f, int d, RngStream& rng,
                         const std::optional<Eigen::VectorXd>& start = std::nullopt) {
    if (d < 1) throw std::invalid_argument("inner_maximize: d must be >= 1");
    if (start && start->size() != d)
        throw std::invalid_argument("inner_maximize: start has wrong dimension");
    return detail::maximize_impl(spec, f, d, rng, start);
}

}  // namespace mbo
