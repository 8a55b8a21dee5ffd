#include "levelforge/oracle.hpp"

#include <string>

namespace levelforge {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) {
        throw DimensionMismatch(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

FirstOrderOracle::FirstOrderOracle(Eigen::Index dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {
    if (dim <= 0) throw std::invalid_argument("FirstOrderOracle: dimension must be positive");
    if (!fn_) throw std::invalid_argument("FirstOrderOracle: empty evaluator");
}

Evaluation FirstOrderOracle::operator()(const Vector& x) const {
    if (x.size() != dim_) {
        throw DimensionMismatch("FirstOrderOracle: point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(dim_));
    }
    return fn_(x);
}

HolderClass::HolderClass(double m, double r) : M(m), rho(r) {
    if (!(m > 0.0)) throw std::invalid_argument("HolderClass: M must be positive");
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("HolderClass: rho must lie in [0, 1]");
}

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
    if (!(r > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
}

bool Ball::contains(const Vector& x, double rel_tol) const {
    require_same_dim(x, center, "Ball::contains");
    return (x - center).norm() <= radius * (1.0 + rel_tol);
}

Vector Ball::project(const Vector& x) const {
    require_same_dim(x, center, "Ball::project");
    const Vector d = x - center;
    const double dist = d.norm();
    if (dist <= radius) return x;
    return center + d * (radius / dist);
}

double linear_model(double value_at_z, const Vector& subgradient, const Vector& z, const Vector& x) {
    require_same_dim(subgradient, z, "linear_model");
    require_same_dim(z, x, "linear_model");
    return value_at_z + subgradient.dot(x - z);
}

BallMinimizer min_linear_over_ball(double value_at_z, const Vector& g, const Vector& z, const Ball& ball) {
    require_same_dim(g, z, "min_linear_over_ball");
    require_same_dim(z, ball.center, "min_linear_over_ball");
    const double gnorm = g.norm();
    if (gnorm == 0.0) return {ball.center, value_at_z};
    Vector x = ball.center - (ball.radius / gnorm) * g;
    const double value = value_at_z + g.dot(x - z);
    return {std::move(x), value};
}

}  // namespace levelforge
