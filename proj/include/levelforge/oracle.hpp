#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>

namespace levelforge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when vector arguments disagree in length.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void require_same_dim(const Vector& a, const Vector& b, const char* what);

/// Value and one subgradient of a convex function at a point.
struct Evaluation {
    double value = 0.0;
    Vector subgradient;
};

/// Black-box first-order oracle x -> (f(x), f'(x)).
///
/// Immutable once built and safe to share across threads. Call counting is
/// done per run through CountedOracle, never inside the oracle itself.
class FirstOrderOracle {
public:
    using Fn = std::function<Evaluation(const Vector&)>;

    FirstOrderOracle() = default;
    FirstOrderOracle(Eigen::Index dim, Fn fn);

    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] Evaluation operator()(const Vector& x) const;
    [[nodiscard]] explicit operator bool() const { return static_cast<bool>(fn_); }

private:
    Eigen::Index dim_ = 0;
    Fn fn_;
};

/// Oracle calls made during one solver run, split by kind.
struct CallCounts {
    std::int64_t first_order = 0;  // f and f' (or f_eta and its gradient)
    std::int64_t exact_value = 0;  // true-objective evaluations for upper bounds (structured problems)
    std::int64_t monitor = 0;      // evaluations made only for reporting

    [[nodiscard]] std::int64_t total() const { return first_order + exact_value + monitor; }
    CallCounts& operator+=(const CallCounts& o) {
        first_order += o.first_order;
        exact_value += o.exact_value;
        monitor += o.monitor;
        return *this;
    }
};

/// Run-local view of an oracle; every eval bumps the caller-owned counter by
/// exactly one.
class CountedOracle {
public:
    CountedOracle(const FirstOrderOracle& oracle, CallCounts& sink) : oracle_(&oracle), sink_(&sink) {}

    Evaluation eval(const Vector& x) {
        ++sink_->first_order;
        return (*oracle_)(x);
    }
    /// Evaluation made only for reporting; tallied separately.
    Evaluation monitor(const Vector& x) {
        ++sink_->monitor;
        return (*oracle_)(x);
    }
    [[nodiscard]] const CallCounts& calls() const { return *sink_; }
    [[nodiscard]] Eigen::Index dim() const { return oracle_->dim(); }
    [[nodiscard]] const FirstOrderOracle& oracle() const { return *oracle_; }

private:
    const FirstOrderOracle* oracle_;
    CallCounts* sink_;
};

/// Hölder growth class of f': ||f'(x) - f'(y)|| <= M ||x - y||^rho.
/// Only the bound auditors read it.
struct HolderClass {
    double M;
    double rho;

    HolderClass(double m, double r);
};

/// Euclidean ball B(center, radius).
struct Ball {
    Vector center;
    double radius;

    Ball(Vector c, double r);

    [[nodiscard]] bool contains(const Vector& x, double rel_tol = 1e-12) const;
    [[nodiscard]] Vector project(const Vector& x) const;
};

/// h(z, x) = f(z) + <f'(z), x - z>.
[[nodiscard]] double linear_model(double value_at_z, const Vector& subgradient, const Vector& z,
                                  const Vector& x);

struct BallMinimizer {
    Vector minimizer;
    double min_value;
};

/// Minimizes the affine model value_at_z + <g, x - z> over a ball. With g = 0
/// the model is constant and the center is returned.
[[nodiscard]] BallMinimizer min_linear_over_ball(double value_at_z, const Vector& g, const Vector& z,
                                                 const Ball& ball);

}  // namespace levelforge
