#pragma once

#include "levelforge/level.hpp"

#include <functional>
#include <optional>

namespace levelforge {

/// Solution of max_{y in Y} {<w, y> - g(y) - eta V(y)} for w = Ax.
struct DualProxResult {
    Vector y;
    double value = 0.0;    // F_eta(x)
    double bregman = 0.0;  // V(y)
};

/// f(x) = fhat(x) + F(x) with F(x) = max_{y in Y} {<Ax, y> - g(y)}.
///
/// The solvers only touch smooth_part, apply/apply_adjoint, dual_prox and
/// exact_F. The Lipschitz constant, operator norm and dual diameter are kept
/// for the bound auditors.
struct StructuredObjective {
    FirstOrderOracle smooth_part;
    std::function<Vector(const Vector&)> apply;
    std::function<Vector(const Vector&)> apply_adjoint;
    std::function<DualProxResult(const Vector& w, double eta)> dual_prox;
    double sigma_v = 1.0;
    /// F as a function of w = Ax, when a closed form exists.
    std::function<double(const Vector& w)> exact_F;

    std::optional<double> dual_diameter;     // D_{v,Y}
    std::optional<double> smooth_lipschitz;  // L of grad fhat
    std::optional<double> operator_norm;     // ||A||

    [[nodiscard]] Eigen::Index dim() const { return smooth_part.dim(); }
};

struct SmoothedValue {
    double f_eta = 0.0;
    Vector grad;
    Vector y_star;
};

/// f_eta(x) = fhat(x) + F_eta(x) and its gradient grad fhat(x) + A* y*(x).
[[nodiscard]] SmoothedValue smoothed_eval(const StructuredObjective& obj, double eta, const Vector& x);

/// True objective f(x). Without exact_F, F is taken from the dual prox at a
/// tiny eta plus eta times margin_d as a safety margin.
[[nodiscard]] double true_objective(const StructuredObjective& obj, const Vector& x, double margin_d = 0.0);

/// F_eta(x) <= F(x) <= F_eta(x) + eta D within 1e-9 (1 + |F(x)|). Needs exact_F.
[[nodiscard]] bool sandwich_check(const StructuredObjective& obj, double eta, const Vector& x, double d_vy);

/// One FUSL phase. eta = theta (ub - level) / (2 D) is frozen for the phase.
[[nodiscard]] PhaseResult gap_reduction_fusl(const Vector& x_hat, double ub, double d_estimate, double lb,
                                             const Ball& ball, const StructuredObjective& obj,
                                             const LevelOptions& opts, RunContext& ctx);

/// FUSL on min_{x in ball} fhat(x) + F(x) from p0 with initial guess d1 of D_{v,Y}.
[[nodiscard]] SolveResult fusl_solve(const Ball& ball, const Vector& p0, double d1, const StructuredObjective& obj,
                                     const SolveControl& control, const LevelOptions& opts = {},
                                     const SolverObserver* observer = nullptr);

/// R sqrt(c L / (theta beta delta)) + sqrt(2) R ||A|| / (theta beta delta) sqrt(c D / sigma_v) + 1.
[[nodiscard]] double fusl_phase_bound(double delta, double d_estimate, double radius, double smooth_lipschitz,
                                      double operator_norm, double sigma_v, double beta, double theta, double c);

/// max{ceil(log2(D_{v,Y} / D1)), 0}: cap on the number of D doublings.
[[nodiscard]] int fusl_doubling_bound(double d_vy, double d1);

namespace detail {
/// Linearization of f at x valid everywhere: value and subgradient built from
/// a dual point y in Y. Counted as one first-order call by the callers.
Evaluation structured_linearization(const StructuredObjective& obj, const Vector& x);
}  // namespace detail

}  // namespace levelforge
