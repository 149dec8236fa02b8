// Minimal end-to-end use of the library: maximize a smooth 2-D function
// over the unit box with a small evaluation budget, then print the result.

#include <cstdio>

#include "mbo/mbo.hpp"

int main() {
    mbo::ObjectiveSpec objective;
    objective.dim_in = 2;
    objective.dim_out = 1;
    objective.evaluator = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(1);
        y[0] = -(x.array().square() * (2.0 * x.array()).sin()).sum();
        return y;
    };

    mbo::BoConfig config;
    config.params.init_samples = 5;
    config.params.max_evaluations = 40;
    config.params.hp_opt_enabled = true;

    const mbo::BoResult result = mbo::optimize(objective, config, mbo::RngStream(7, 0));

    std::printf("best y = %.6f at x = (", result.best_observed_y);
    for (int i = 0; i < result.best_x.size(); ++i)
        std::printf("%s%.4f", i ? ", " : "", result.best_x[i]);
    std::printf(") after %ld evaluations\n", result.total_evaluations);
    return 0;
}
