#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mbo/core/rng.hpp"
#include "mbo/gp/hp_optimize.hpp"
#include "mbo/gp/model.hpp"

using Catch::Approx;

namespace {

double lml_of(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const mbo::KernelConfig& cfg,
              const mbo::MeanConfig& mean) {
    return mbo::GpModel::fit(X, y, cfg, mean).log_marginal_likelihood();
}

/// Draws y ~ N(0, K) for a squared-exponential prior with the given
/// hyperparameters, plus iid observation noise.
Eigen::VectorXd sample_from_prior(const Eigen::MatrixXd& X, double lengthscale, double signal_variance,
                                  double noise, mbo::RngStream& rng) {
    auto cfg = mbo::KernelConfig::squared_exponential_iso(lengthscale, signal_variance, 0.0);
    Eigen::MatrixXd K = mbo::kernel_matrix(cfg, X);
    K.diagonal().array() += 1e-8;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    REQUIRE(llt.info() == Eigen::Success);
    Eigen::VectorXd z(X.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    Eigen::VectorXd y = llt.matrixL() * z;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += std::sqrt(noise) * rng.normal();
    return y;
}

}  // namespace

TEST_CASE("hp opt: never returns a configuration with lower lml", "[hp]") {
    mbo::RngStream rng(401, 0);
    for (int k = 0; k < 10; ++k) {
        const int n = rng.uniform_int(4, 12);
        Eigen::MatrixXd X(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 2; ++j) X(i, j) = rng.uniform01();
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.normal() * 3.0;

        mbo::KernelConfig start = mbo::KernelConfig::squared_exponential_iso(
            std::exp(rng.uniform(std::log(0.05), std::log(5.0))),
            std::exp(rng.uniform(std::log(0.1), std::log(10.0))), 0.01);
        if (k % 2 == 1) start.kind = mbo::KernelKind::matern52;

        const auto mean = mbo::MeanConfig::data_mean();
        mbo::RngStream opt_rng = rng.spawn();
        const auto out = mbo::optimize_hyperparams(X, y, start, mean, opt_rng);

        REQUIRE(out.kind == start.kind);
        REQUIRE(out.noise_variance == start.noise_variance);
        REQUIRE(lml_of(X, y, out, mean) >= lml_of(X, y, start, mean) - 1e-12);
    }
}

TEST_CASE("hp opt: identical streams give identical results", "[hp]") {
    mbo::RngStream data_rng(402, 0);
    Eigen::MatrixXd X(8, 2);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 2; ++j) X(i, j) = data_rng.uniform01();
    Eigen::VectorXd y(8);
    for (int i = 0; i < 8; ++i) y[i] = data_rng.normal();

    const auto start = mbo::KernelConfig::matern52_iso(1.0, 1.0, 0.005);
    mbo::RngStream r1(402, 7), r2(402, 7);
    const auto a = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), r1);
    const auto b = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), r2);
    REQUIRE(a.log_lengthscale == b.log_lengthscale);
    REQUIRE(a.log_signal_variance == b.log_signal_variance);
}

TEST_CASE("hp opt: recovers a known lengthscale from prior samples", "[hp][acceptance-support]") {
    // Data drawn from an SE prior with lengthscale 0.2; over 20 seeds the
    // median recovered lengthscale must land in [0.1, 0.4].
    std::vector<double> recovered;
    for (int seed = 0; seed < 20; ++seed) {
        mbo::RngStream rng(500 + seed, 0);
        const int n = 40;
        Eigen::MatrixXd X(n, 1);
        for (int i = 0; i < n; ++i) X(i, 0) = rng.uniform01();
        const Eigen::VectorXd y = sample_from_prior(X, 0.2, 1.0, 1e-4, rng);

        auto start = mbo::KernelConfig::squared_exponential_iso(1.0, 1.0, 1e-4);
        mbo::RngStream opt_rng(9000 + seed, 1);
        const auto out = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), opt_rng);
        recovered.push_back(std::exp(out.log_lengthscale[0]));
    }
    std::sort(recovered.begin(), recovered.end());
    const double median = 0.5 * (recovered[9] + recovered[10]);
    INFO("median recovered lengthscale = " << median);
    REQUIRE(median >= 0.1);
    REQUIRE(median <= 0.4);
}

TEST_CASE("hp opt: ARD lengthscales stay per-dimension", "[hp]") {
    mbo::RngStream rng(403, 0);
    Eigen::MatrixXd X(12, 3);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 3; ++j) X(i, j) = rng.uniform01();
    Eigen::VectorXd y(12);
    for (int i = 0; i < 12; ++i) y[i] = std::sin(5.0 * X(i, 0)) + 0.1 * X(i, 2);

    mbo::KernelConfig start = mbo::KernelConfig::squared_exponential_iso(0.5, 1.0, 0.01);
    start.log_lengthscale = Eigen::VectorXd::Constant(3, std::log(0.5));
    mbo::RngStream opt_rng = rng.spawn();
    const auto out = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), opt_rng);
    REQUIRE(out.log_lengthscale.size() == 3);
    REQUIRE(lml_of(X, y, out, mbo::MeanConfig::zero()) >=
            lml_of(X, y, start, mbo::MeanConfig::zero()) - 1e-12);
}

TEST_CASE("hp opt: returns the input config when every evaluation fails", "[hp]") {
    // Outputs near the overflow edge force every lml to -inf, so no start
    // can produce a usable value and the incumbent must come back untouched.
    Eigen::MatrixXd X(3, 1);
    X << 0.1, 0.5, 0.9;
    Eigen::VectorXd y(3);
    y << 1e300, -1e300, 1e300;

    const auto start = mbo::KernelConfig::squared_exponential_iso(0.7, 1.3, 0.01);
    mbo::RngStream rng(404, 0);
    const auto out = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), rng);
    REQUIRE(out.log_lengthscale == start.log_lengthscale);
    REQUIRE(out.log_signal_variance == start.log_signal_variance);
}

TEST_CASE("hp opt: preconditions", "[hp]") {
    const auto cfg = mbo::KernelConfig::squared_exponential_iso();
    mbo::RngStream rng(405, 0);

    Eigen::MatrixXd X1(1, 1);
    X1 << 0.5;
    Eigen::VectorXd y1(1);
    y1 << 1.0;
    REQUIRE_THROWS_AS(mbo::optimize_hyperparams(X1, y1, cfg, mbo::MeanConfig::zero(), rng),
                      std::invalid_argument);

    Eigen::MatrixXd X2(3, 1);
    X2 << 0.1, 0.2, 0.3;
    Eigen::VectorXd y2(2);
    y2 << 1.0, 2.0;
    REQUIRE_THROWS_AS(mbo::optimize_hyperparams(X2, y2, cfg, mbo::MeanConfig::zero(), rng),
                      std::invalid_argument);

    Eigen::VectorXd y3(3);
    y3 << 1.0, 2.0, 3.0;
    mbo::HpOptOptions bad;
    bad.restarts = 0;
    REQUIRE_THROWS_AS(mbo::optimize_hyperparams(X2, y3, cfg, mbo::MeanConfig::zero(), rng, bad),
                      std::invalid_argument);
}

TEST_CASE("hp opt: random restarts stay inside the search box", "[hp]") {
    mbo::RngStream rng(406, 0);
    Eigen::MatrixXd X(10, 2);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 2; ++j) X(i, j) = rng.uniform01();
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i) y[i] = rng.normal();

    mbo::HpOptOptions opt;
    opt.restarts = 4;
    const auto start = mbo::KernelConfig::squared_exponential_iso(1.0, 1.0, 0.01);
    mbo::RngStream opt_rng = rng.spawn();
    const auto out = mbo::optimize_hyperparams(X, y, start, mbo::MeanConfig::zero(), opt_rng, opt);

    // The incumbent start is exempt from the box, but here it already lies
    // inside, so the result must too (clamped iterates cannot escape).
    REQUIRE(out.log_lengthscale[0] >= opt.box.log_lengthscale_min - 1e-12);
    REQUIRE(out.log_lengthscale[0] <= opt.box.log_lengthscale_max + 1e-12);
    REQUIRE(out.log_signal_variance >= opt.box.log_signal_min - 1e-12);
    REQUIRE(out.log_signal_variance <= opt.box.log_signal_max + 1e-12);
}
