#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "mbo/core/rng.hpp"

namespace mbo {

/// Project every coordinate into [0, 1]; interior coordinates are unchanged.
inline Eigen::VectorXd clamp_to_box(Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) x[i] = 0.0;
        if (x[i] > 1.0) x[i] = 1.0;
    }
    return x;
}

inline bool in_unit_box(const Eigen::VectorXd& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] >= 0.0 && x[i] <= 1.0)) return false;
    return true;
}

enum class InitStrategy {
    uniform_random,
    latin_hypercube,
};

/// Generate n starting points in [0,1]^dim. Deterministic given the stream.
inline std::vector<Eigen::VectorXd> initial_design(int dim, int n, RngStream& rng,
                                                   InitStrategy strategy = InitStrategy::uniform_random) {
    if (dim < 1) throw std::invalid_argument("initial_design: dim must be >= 1");
    if (n < 1) throw std::invalid_argument("initial_design: n must be >= 1");

    std::vector<Eigen::VectorXd> points(n, Eigen::VectorXd(dim));
    switch (strategy) {
        case InitStrategy::uniform_random:
            for (auto& p : points)
                for (int j = 0; j < dim; ++j) p[j] = rng.uniform01();
            break;
        case InitStrategy::latin_hypercube: {
            // One stratum per point and dimension, shuffled independently per dimension.
            std::vector<int> perm(n);
            for (int j = 0; j < dim; ++j) {
                for (int i = 0; i < n; ++i) perm[i] = i;
                for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
                for (int i = 0; i < n; ++i)
                    points[i][j] = (static_cast<double>(perm[i]) + rng.uniform01()) / n;
            }
            break;
        }
    }
    return points;
}

}  // namespace mbo
