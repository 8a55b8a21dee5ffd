#include "levelforge/fusl.hpp"

#include "level_engine.hpp"

#include <algorithm>
#include <cmath>

namespace levelforge {

namespace {

double eval_eta(double scale) { return 1e-12 * std::max(1.0, std::abs(scale)); }

struct FullValue {
    double f;
    double f_eta;
};

FullValue full_value(const StructuredObjective& obj, double eta, const Vector& x, double margin_d) {
    const double fhat = obj.smooth_part(x).value;
    const Vector w = obj.apply(x);
    const double f_eta = fhat + obj.dual_prox(w, eta).value;
    double big_f;
    if (obj.exact_F) {
        big_f = obj.exact_F(w);
    } else {
        const double tiny = eval_eta(w.lpNorm<Eigen::Infinity>());
        big_f = obj.dual_prox(w, tiny).value + tiny * margin_d;
    }
    return {fhat + big_f, f_eta};
}

}  // namespace

SmoothedValue smoothed_eval(const StructuredObjective& obj, double eta, const Vector& x) {
    if (!(eta > 0.0)) throw std::invalid_argument("smoothed_eval: eta must be positive");
    const Evaluation s = obj.smooth_part(x);
    DualProxResult dp = obj.dual_prox(obj.apply(x), eta);
    SmoothedValue out;
    out.f_eta = s.value + dp.value;
    out.grad = s.subgradient + obj.apply_adjoint(dp.y);
    out.y_star = std::move(dp.y);
    return out;
}

double true_objective(const StructuredObjective& obj, const Vector& x, double margin_d) {
    const double fhat = obj.smooth_part(x).value;
    const Vector w = obj.apply(x);
    if (obj.exact_F) return fhat + obj.exact_F(w);
    const double tiny = eval_eta(w.lpNorm<Eigen::Infinity>());
    return fhat + obj.dual_prox(w, tiny).value + tiny * margin_d;
}

bool sandwich_check(const StructuredObjective& obj, double eta, const Vector& x, double d_vy) {
    if (!obj.exact_F) throw std::invalid_argument("sandwich_check: exact_F is required");
    const Vector w = obj.apply(x);
    const double big_f = obj.exact_F(w);
    const double f_eta = obj.dual_prox(w, eta).value;
    const double slack = 1e-9 * (1.0 + std::abs(big_f));
    return f_eta <= big_f + slack && big_f <= f_eta + eta * d_vy + slack;
}

namespace detail {

Evaluation structured_linearization(const StructuredObjective& obj, const Vector& x) {
    const Evaluation s = obj.smooth_part(x);
    const Vector w = obj.apply(x);
    const double tiny = eval_eta(w.lpNorm<Eigen::Infinity>());
    const DualProxResult dp = obj.dual_prox(w, tiny);
    // <Ax, y> - g(y) = F_eta(x) + eta V(y) for the returned y; the resulting
    // affine function underestimates f everywhere since y lies in Y.
    return {s.value + dp.value + tiny * dp.bregman, s.subgradient + obj.apply_adjoint(dp.y)};
}

}  // namespace detail

PhaseResult gap_reduction_fusl(const Vector& x_hat, double ub, double d_estimate, double lb, const Ball& ball,
                               const StructuredObjective& obj, const LevelOptions& opts, RunContext& ctx) {
    opts.validate();
    if (!(d_estimate > 0.0)) throw std::invalid_argument("gap_reduction_fusl: D must be positive");
    require_same_dim(x_hat, ball.center, "gap_reduction_fusl");
    const double level = opts.beta * lb + (1.0 - opts.beta) * ub;
    const double eta = opts.theta * (ub - level) / (2.0 * d_estimate);

    detail::PhaseModel model;
    model.eta = eta;
    model.smoothed_exit = true;
    model.cut = [&](const Vector& x) {
        ++ctx.calls.first_order;
        SmoothedValue sv = smoothed_eval(obj, eta, x);
        return Evaluation{sv.f_eta, std::move(sv.grad)};
    };
    model.upper = [&](const Vector& x) {
        ++ctx.calls.exact_value;
        const FullValue v = full_value(obj, eta, x, d_estimate);
        return detail::UpperValue{v.f, v.f_eta};
    };
    model.smoothed_value = [&](const Vector& x) {
        ++ctx.calls.exact_value;
        return full_value(obj, eta, x, d_estimate).f_eta;
    };
    return detail::run_phase(x_hat, ub, lb, ball, opts, model, ctx, d_estimate);
}

SolveResult fusl_solve(const Ball& ball, const Vector& p0, double d1, const StructuredObjective& obj,
                       const SolveControl& control, const LevelOptions& opts, const SolverObserver* observer) {
    if (!(control.eps > 0.0)) throw std::invalid_argument("fusl_solve: eps must be positive");
    if (!(d1 > 0.0)) throw std::invalid_argument("fusl_solve: D1 must be positive");
    opts.validate();
    require_same_dim(p0, ball.center, "fusl_solve");
    if (!ball.contains(p0)) throw std::invalid_argument("fusl_solve: p0 must lie in the ball");

    RunContext ctx;
    ctx.observer = observer;
    ctx.max_iterations = control.max_iterations;
    ctx.target_value = control.target_value;

    ++ctx.calls.first_order;
    const Evaluation lin = detail::structured_linearization(obj, p0);
    const BallMinimizer p1 = min_linear_over_ball(lin.value, lin.subgradient, p0, ball);
    double lb = p1.min_value;
    if (control.lower_bound) lb = std::max(lb, *control.lower_bound);
    ctx.calls.exact_value += 2;
    const double f0 = true_objective(obj, p0, d1);
    const double f1 = true_objective(obj, p1.minimizer, d1);
    Vector x_hat = f1 < f0 ? p1.minimizer : p0;
    double ub = std::min(f0, f1);
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
        const PhaseResult r = gap_reduction_fusl(x_hat, ub, d, lb, ball, obj, opts, ctx);
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
    out.trace = std::move(ctx.trace);
    out.d_final = d;
    return out;
}

double fusl_phase_bound(double delta, double d_estimate, double radius, double smooth_lipschitz,
                        double operator_norm, double sigma_v, double beta, double theta, double c) {
    const double tb = theta * beta * delta;
    return radius * std::sqrt(c * smooth_lipschitz / tb) +
           std::sqrt(2.0) * radius * operator_norm / tb * std::sqrt(c * d_estimate / sigma_v) + 1.0;
}

int fusl_doubling_bound(double d_vy, double d1) {
    return std::max(static_cast<int>(std::ceil(std::log2(d_vy / d1))), 0);
}

}  // namespace levelforge
