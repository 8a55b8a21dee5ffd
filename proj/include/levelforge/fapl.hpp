#pragma once

#include "levelforge/level.hpp"

namespace levelforge {

/// One FAPL gap-reduction phase on B(center, R) starting from x_hat with
/// ub = f(x_hat) already known.
///
/// Every iteration evaluates the oracle twice: at the lower iterate (for the
/// cut) and at the trial upper iterate. The phase ends either when the
/// localizer proves the level unreachable inside the ball (lb+ = level) or
/// when the upper bound drops below level + theta (ub - level). Either way
/// ub+ - lb+ <= q (ub - lb).
[[nodiscard]] PhaseResult gap_reduction_fapl(const Vector& x_hat, double ub, double lb, const Ball& ball,
                                             const FirstOrderOracle& oracle, const LevelOptions& opts,
                                             RunContext& ctx);

/// FAPL on min_{x in ball} f(x) from p0. Stops when ub - lb <= eps, when the
/// optional target value is reached, or when the iteration budget runs out.
[[nodiscard]] SolveResult fapl_solve(const Ball& ball, const Vector& p0, const FirstOrderOracle& oracle,
                                     const SolveControl& control, const LevelOptions& opts = {},
                                     const SolverObserver* observer = nullptr);

/// Iteration bound of a single phase with gap delta:
/// (c M R^{1+rho} / ((1+rho) theta beta delta))^{2/(1+3rho)} + 1. Audit only.
[[nodiscard]] double fapl_phase_bound(double delta, const HolderClass& holder, double radius, double beta,
                                      double theta, double c);

/// Bound on the number of phases needed to reach eps:
/// ceil(max{0, log_{1/q}((2R)^{1+rho} M / ((1+rho) eps))}). Audit only.
[[nodiscard]] int fapl_phase_count_bound(double eps, const HolderClass& holder, double radius, double q);

}  // namespace levelforge
