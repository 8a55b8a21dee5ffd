#include "levelforge/strongly_convex.hpp"

#include "level_engine.hpp"
#include "levelforge/fapl.hpp"

#include <cmath>

namespace levelforge {

StrongConvexityInfo::StrongConvexityInfo(double mu_, double lb0_) : mu(mu_), lb0(lb0_) {
    if (!(mu_ > 0.0)) throw std::invalid_argument("StrongConvexityInfo: mu must be positive");
}

double trust_radius(double delta, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("trust_radius: mu must be positive");
    if (delta < 0.0) throw std::invalid_argument("trust_radius: delta must be nonnegative");
    return std::sqrt(2.0 * delta / mu);
}

namespace {

template <class Phase>
SolveResult run_recentered(const Vector& p0, double f0, const StrongConvexityInfo& sc, const SolveControl& control,
                           RunContext& ctx, double d1, Phase&& phase) {
    if (!(control.eps > 0.0)) throw std::invalid_argument("strongly convex solve: eps must be positive");
    Vector x_hat = p0;
    double ub = f0;
    double lb = sc.lb0;
    if (control.lower_bound) lb = std::max(lb, *control.lower_bound);
    double d = d1;
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
        const Ball ball(x_hat, trust_radius(ub - lb, sc.mu));
        const PhaseResult r = phase(x_hat, ub, d, lb, ball);
        PhaseRecord rec;
        rec.phase = ctx.phase;
        rec.lb_in = lb;
        rec.ub_in = ub;
        rec.lb_out = r.lb_plus;
        rec.ub_out = r.ub_plus;
        rec.iterations = r.iterations;
        rec.exit = r.termination;
        rec.d_in = d;
        rec.d_out = r.d_plus;
        rec.eta = r.eta;
        rec.radius = ball.radius;
        rec.prox_center = ball.center;
        rec.x_out = r.x_plus;
        detail::report_phase(ctx, out.phase_log, rec);
        if (r.termination == PhaseExit::SmoothingDoubled) ++out.doublings;
        x_hat = r.x_plus;
        ub = r.ub_plus;
        lb = r.lb_plus;
        d = r.d_plus;
    }
    out.x = std::move(x_hat);
    out.ub = ub;
    out.lb = lb;
    out.phases = ctx.phase;
    out.iterations = ctx.iterations;
    out.calls = ctx.calls;
    out.d_final = d;
    out.trace = std::move(ctx.trace);
    return out;
}

}  // namespace

SolveResult fapl_sc_solve(const Vector& p0, const StrongConvexityInfo& sc, const FirstOrderOracle& oracle,
                          const SolveControl& control, const LevelOptions& opts, const SolverObserver* observer) {
    opts.validate();
    RunContext ctx;
    ctx.observer = observer;
    ctx.max_iterations = control.max_iterations;
    ctx.target_value = control.target_value;
    CountedOracle counted(oracle, ctx.calls);
    const double f0 = counted.eval(p0).value;
    return run_recentered(p0, f0, sc, control, ctx, 0.0,
                          [&](const Vector& x_hat, double ub, double, double lb, const Ball& ball) {
                              return gap_reduction_fapl(x_hat, ub, lb, ball, oracle, opts, ctx);
                          });
}

SolveResult fusl_sc_solve(const Vector& p0, const StrongConvexityInfo& sc, double d1, const StructuredObjective& obj,
                          const SolveControl& control, const LevelOptions& opts, const SolverObserver* observer) {
    if (!(d1 > 0.0)) throw std::invalid_argument("fusl_sc_solve: D1 must be positive");
    opts.validate();
    RunContext ctx;
    ctx.observer = observer;
    ctx.max_iterations = control.max_iterations;
    ctx.target_value = control.target_value;
    ++ctx.calls.exact_value;
    const double f0 = true_objective(obj, p0, d1);
    return run_recentered(p0, f0, sc, control, ctx, d1,
                          [&](const Vector& x_hat, double ub, double d, double lb, const Ball& ball) {
                              return gap_reduction_fusl(x_hat, ub, d, lb, ball, obj, opts, ctx);
                          });
}

int sc_phase_count_bound(double initial_gap, double eps, double q) {
    return static_cast<int>(std::ceil(std::log(initial_gap / eps) / std::log(1.0 / q)));
}

double sc_phase_bound_smooth(double lipschitz, double mu, double beta, double theta, double c) {
    return std::sqrt(2.0 * c * lipschitz / (theta * beta * mu)) + 1.0;
}

}  // namespace levelforge
