#include "levelforge/fapl.hpp"

#include "level_engine.hpp"

#include <cmath>

namespace levelforge {

PhaseResult gap_reduction_fapl(const Vector& x_hat, double ub, double lb, const Ball& ball,
                               const FirstOrderOracle& oracle, const LevelOptions& opts, RunContext& ctx) {
    opts.validate();
    require_same_dim(x_hat, ball.center, "gap_reduction_fapl");
    CountedOracle counted(oracle, ctx.calls);
    detail::PhaseModel model;
    model.cut = [&](const Vector& x) { return counted.eval(x); };
    model.upper = [&](const Vector& x) {
        const double f = counted.eval(x).value;
        return detail::UpperValue{f, f};
    };
    return detail::run_phase(x_hat, ub, lb, ball, opts, model, ctx, 0.0);
}

SolveResult fapl_solve(const Ball& ball, const Vector& p0, const FirstOrderOracle& oracle,
                       const SolveControl& control, const LevelOptions& opts, const SolverObserver* observer) {
    if (!(control.eps > 0.0)) throw std::invalid_argument("fapl_solve: eps must be positive");
    opts.validate();
    require_same_dim(p0, ball.center, "fapl_solve");
    if (!ball.contains(p0)) throw std::invalid_argument("fapl_solve: p0 must lie in the ball");

    RunContext ctx;
    ctx.observer = observer;
    ctx.max_iterations = control.max_iterations;
    ctx.target_value = control.target_value;
    CountedOracle counted(oracle, ctx.calls);

    const Evaluation e0 = counted.eval(p0);
    const BallMinimizer p1 = min_linear_over_ball(e0.value, e0.subgradient, p0, ball);
    double lb = p1.min_value;
    if (control.lower_bound) lb = std::max(lb, *control.lower_bound);
    const double f1 = counted.eval(p1.minimizer).value;
    Vector x_hat = f1 < e0.value ? p1.minimizer : p0;
    double ub = std::min(e0.value, f1);
    ctx.record(lb, ub);

    SolveResult out;
    while (true) {
        if (ub - lb <= control.eps) {
            out.status = SolveStatus::GapClosed;
            break;
        }
        if (ctx.target_reached(ub)) {
            out.status = SolveStatus::TargetReached;
            break;
        }
        if (ctx.budget_exhausted()) {
            out.status = SolveStatus::IterationBudget;
            break;
        }
        ++ctx.phase;
        const PhaseResult r = gap_reduction_fapl(x_hat, ub, lb, ball, oracle, opts, ctx);
        PhaseRecord rec;
        rec.phase = ctx.phase;
        rec.lb_in = lb;
        rec.ub_in = ub;
        rec.lb_out = r.lb_plus;
        rec.ub_out = r.ub_plus;
        rec.iterations = r.iterations;
        rec.exit = r.termination;
        rec.radius = ball.radius;
        rec.prox_center = ball.center;
        rec.x_out = r.x_plus;
        detail::report_phase(ctx, out.phase_log, rec);
        x_hat = r.x_plus;
        ub = r.ub_plus;
        lb = r.lb_plus;
    }
    out.x = std::move(x_hat);
    out.ub = ub;
    out.lb = lb;
    out.phases = ctx.phase;
    out.iterations = ctx.iterations;
    out.calls = ctx.calls;
    out.trace = std::move(ctx.trace);
    return out;
}

double fapl_phase_bound(double delta, const HolderClass& holder, double radius, double beta, double theta,
                        double c) {
    const double rho = holder.rho;
    const double base = c * holder.M * std::pow(radius, 1.0 + rho) / ((1.0 + rho) * theta * beta * delta);
    return std::pow(base, 2.0 / (1.0 + 3.0 * rho)) + 1.0;
}

int fapl_phase_count_bound(double eps, const HolderClass& holder, double radius, double q) {
    const double rho = holder.rho;
    const double ratio = std::pow(2.0 * radius, 1.0 + rho) * holder.M / ((1.0 + rho) * eps);
    const double phases = std::log(ratio) / std::log(1.0 / q);
    return static_cast<int>(std::ceil(std::max(0.0, phases)));
}

}  // namespace levelforge
