#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbo/core/box.hpp"
#include "mbo/core/types.hpp"

namespace mbo {

/// A registered benchmark objective in minimization convention over its
/// natural domain. The optimizer side sees it negated over the unit box.
struct TestFunction {
    std::string name;
    int dim = 0;
    Eigen::VectorXd lo, hi;  // natural domain bounds, per dimension
    std::function<double(const Eigen::VectorXd&)> evaluator;
    double known_best_value = 0.0;
    std::vector<Eigen::VectorXd> known_best_points;  // natural coordinates
};

namespace bench_detail {

inline Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

inline double squaresin(const Eigen::VectorXd& x) {
    return (x.array().square() * (2.0 * x.array()).sin()).sum();
}

inline double branin(const Eigen::VectorXd& v) {
    const double x = v[0], y = v[1];
    const double b = 5.1 / (4.0 * M_PI * M_PI);
    const double c = 5.0 / M_PI;
    const double t = 1.0 / (8.0 * M_PI);
    const double u = y - b * x * x + c * x - 6.0;
    return u * u + 10.0 * (1.0 - t) * std::cos(x) + 10.0;
}

inline double goldstein_price(const Eigen::VectorXd& v) {
    const double x = v[0], y = v[1];
    const double p = x + y + 1.0;
    const double q = 2.0 * x - 3.0 * y;
    const double f1 =
        1.0 + p * p * (19.0 - 14.0 * x + 3.0 * x * x - 14.0 * y + 6.0 * x * y + 3.0 * y * y);
    const double f2 =
        30.0 + q * q * (18.0 - 32.0 * x + 12.0 * x * x + 48.0 * y - 36.0 * x * y + 27.0 * y * y);
    return f1 * f2;
}

inline double sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }

template <int D>
double hartmann(const Eigen::Matrix<double, 4, D>& A, const Eigen::Matrix<double, 4, D>& P,
                const Eigen::VectorXd& x) {
    static const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        double e = 0.0;
        for (int j = 0; j < D; ++j) {
            const double d = x[j] - P(i, j);
            e += A(i, j) * d * d;
        }
        s += alpha[i] * std::exp(-e);
    }
    return -s;
}

inline double hartmann3(const Eigen::VectorXd& x) {
    static const Eigen::Matrix<double, 4, 3> A = [] {
        Eigen::Matrix<double, 4, 3> m;
        m << 3.0, 10.0, 30.0,
             0.1, 10.0, 35.0,
             3.0, 10.0, 30.0,
             0.1, 10.0, 35.0;
        return m;
    }();
    static const Eigen::Matrix<double, 4, 3> P = [] {
        Eigen::Matrix<double, 4, 3> m;
        m << 0.3689, 0.1170, 0.2673,
             0.4699, 0.4387, 0.7470,
             0.1091, 0.8732, 0.5547,
             0.0381, 0.5743, 0.8828;
        return m;
    }();
    return hartmann<3>(A, P, x);
}

inline double hartmann6(const Eigen::VectorXd& x) {
    static const Eigen::Matrix<double, 4, 6> A = [] {
        Eigen::Matrix<double, 4, 6> m;
        m << 10.0, 3.0, 17.0, 3.5, 1.7, 8.0,
             0.05, 10.0, 17.0, 0.1, 8.0, 14.0,
             3.0, 3.5, 1.7, 10.0, 17.0, 8.0,
             17.0, 8.0, 0.05, 10.0, 0.1, 14.0;
        return m;
    }();
    static const Eigen::Matrix<double, 4, 6> P = [] {
        Eigen::Matrix<double, 4, 6> m;
        m << 0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886,
             0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991,
             0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650,
             0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381;
        return m;
    }();
    return hartmann<6>(A, P, x);
}

}  // namespace bench_detail

/// All registered benchmark functions. Best values and points were located
/// numerically (dense grid sweep plus pattern-search refinement); the test
/// suite re-verifies them with the same machinery.
inline const std::vector<TestFunction>& test_function_registry() {
    static const std::vector<TestFunction> registry = [] {
        using bench_detail::vec2;
        std::vector<TestFunction> r;

        {
            TestFunction f;
            f.name = "squaresin";
            f.dim = 2;
            f.lo = vec2(0.0, 0.0);
            f.hi = vec2(1.0, 1.0);
            f.evaluator = bench_detail::squaresin;
            f.known_best_value = 0.0;
            f.known_best_points = {vec2(0.0, 0.0)};
            r.push_back(std::move(f));
        }
        {
            TestFunction f;
            f.name = "branin";
            f.dim = 2;
            f.lo = vec2(-5.0, 0.0);
            f.hi = vec2(10.0, 15.0);
            f.evaluator = bench_detail::branin;
            f.known_best_value = 5.0 / (4.0 * M_PI);  // 0.39788735772973816
            f.known_best_points = {vec2(-M_PI, 12.275), vec2(M_PI, 2.275), vec2(3.0 * M_PI, 2.475)};
            r.push_back(std::move(f));
        }
        {
            TestFunction f;
            f.name = "goldstein_price";
            f.dim = 2;
            f.lo = vec2(-2.0, -2.0);
            f.hi = vec2(2.0, 2.0);
            f.evaluator = bench_detail::goldstein_price;
            f.known_best_value = 3.0;
            f.known_best_points = {vec2(0.0, -1.0)};
            r.push_back(std::move(f));
        }
        {
            TestFunction f;
            f.name = "hartmann3";
            f.dim = 3;
            f.lo = Eigen::VectorXd::Zero(3);
            f.hi = Eigen::VectorXd::Ones(3);
            f.evaluator = bench_detail::hartmann3;
            f.known_best_value = -3.862779787332663;
            Eigen::VectorXd x(3);
            x << 0.1145888805389405, 0.5556488943951469, 0.8525469839572906;
            f.known_best_points = {x};
            r.push_back(std::move(f));
        }
        {
            TestFunction f;
            f.name = "hartmann6";
            f.dim = 6;
            f.lo = Eigen::VectorXd::Zero(6);
            f.hi = Eigen::VectorXd::Ones(6);
            f.evaluator = bench_detail::hartmann6;
            f.known_best_value = -3.322368011415516;
            Eigen::VectorXd x(6);
            x << 0.2016895102342602, 0.1500106900429647, 0.4768739735210831, 0.2753324290044493,
                0.3116516156496146, 0.6573005334386056;
            f.known_best_points = {x};
            r.push_back(std::move(f));
        }
        {
            TestFunction f;
            f.name = "sphere";
            f.dim = 2;
            f.lo = vec2(-5.12, -5.12);
            f.hi = vec2(5.12, 5.12);
            f.evaluator = bench_detail::sphere;
            f.known_best_value = 0.0;
            f.known_best_points = {vec2(0.0, 0.0)};
            r.push_back(std::move(f));
        }
        return r;
    }();
    return registry;
}

inline const TestFunction& find_test_function(const std::string& name) {
    for (const auto& f : test_function_registry())
        if (f.name == name) return f;
    std::ostringstream os;
    os << "unknown test function '" << name << "'; registered:";
    for (const auto& f : test_function_registry()) os << " " << f.name;
    throw std::invalid_argument(os.str());
}

inline Eigen::VectorXd to_natural(const TestFunction& fn, const Eigen::VectorXd& x_unit) {
    return fn.lo.array() + (fn.hi - fn.lo).array() * x_unit.array();
}

inline Eigen::VectorXd to_unit(const TestFunction& fn, const Eigen::VectorXd& x_natural) {
    return (x_natural - fn.lo).array() / (fn.hi - fn.lo).array();
}

/// Unit-box view used by the optimizer: rescale, evaluate, negate (the loop
/// maximizes; the registry stores minimization-convention functions).
inline double eval_test_function(const TestFunction& fn, const Eigen::VectorXd& x_unit) {
    if (x_unit.size() != fn.dim)
        throw std::invalid_argument("eval_test_function: wrong dimension for '" + fn.name + "'");
    if (!in_unit_box(x_unit))
        throw std::invalid_argument("eval_test_function: point outside [0,1]^d");
    return -fn.evaluator(to_natural(fn, x_unit));
}

inline double eval_test_function(const std::string& name, const Eigen::VectorXd& x_unit) {
    return eval_test_function(find_test_function(name), x_unit);
}

/// ObjectiveSpec adapter for the optimization loop.
inline ObjectiveSpec bench_objective(const TestFunction& fn) {
    ObjectiveSpec spec;
    spec.dim_in = fn.dim;
    spec.dim_out = 1;
    spec.evaluator = [&fn](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(1);
        y[0] = eval_test_function(fn, x);
        return y;
    };
    return spec;
}

}  // namespace mbo
