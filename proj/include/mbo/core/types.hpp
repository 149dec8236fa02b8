#pragma once

#include <Eigen/Dense>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mbo {

/// Thrown when a numerical routine cannot produce a usable result
/// (e.g. a covariance factorization fails after jitter escalation).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A black-box objective over the unit box [0,1]^dim_in.
/// Rescaling from a user-space domain into the unit box is the caller's job.
struct ObjectiveSpec {
    int dim_in = 1;
    int dim_out = 1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluator;
};

/// One evaluated point: input in the unit box plus the observed output.
struct Sample {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
};

namespace detail {

inline std::string vector_to_string(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) os << ", ";
        os << v[i];
    }
    os << "]";
    return os.str();
}

}  // namespace detail

/// Append-only collection of samples sharing one input/output dimension.
class Dataset {
public:
    Dataset(int dim_in, int dim_out)
        : dim_in_(dim_in), dim_out_(dim_out) {
        if (dim_in < 1 || dim_out < 1)
            throw std::invalid_argument("Dataset: dimensions must be >= 1");
    }

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    const std::vector<Sample>& samples() const { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    void add(Eigen::VectorXd x, Eigen::VectorXd y) {
        if (x.size() != dim_in_)
            throw std::invalid_argument("Dataset::add: input has size " +
                                        std::to_string(x.size()) + ", expected " +
                                        std::to_string(dim_in_));
        if (y.size() != dim_out_)
            throw std::invalid_argument("Dataset::add: output has size " +
                                        std::to_string(y.size()) + ", expected " +
                                        std::to_string(dim_out_));
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x[i] >= 0.0 && x[i] <= 1.0))
                throw std::invalid_argument("Dataset::add: input outside the unit box: " +
                                            detail::vector_to_string(x));
        }
        if (!y.allFinite())
            throw std::invalid_argument("Dataset::add: non-finite observation: " +
                                        detail::vector_to_string(y));
        samples_.push_back(Sample{std::move(x), std::move(y)});
    }

    void add(Sample s) { add(std::move(s.x), std::move(s.y)); }

    /// Inputs stacked as an n-by-dim_in matrix (row i = sample i).
    Eigen::MatrixXd inputs() const {
        Eigen::MatrixXd X(samples_.size(), dim_in_);
        for (std::size_t i = 0; i < samples_.size(); ++i) X.row(i) = samples_[i].x;
        return X;
    }

    /// Scalar outputs as an n-vector; requires dim_out == 1.
    Eigen::VectorXd scalar_outputs() const {
        if (dim_out_ != 1)
            throw std::invalid_argument("Dataset::scalar_outputs: dim_out must be 1");
        Eigen::VectorXd y(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) y[i] = samples_[i].y[0];
        return y;
    }

private:
    int dim_in_;
    int dim_out_;
    std::vector<Sample> samples_;
};

}  // namespace mbo
