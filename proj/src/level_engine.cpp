#include "level_engine.hpp"

#include <cmath>
#include <string>

namespace levelforge {

double LevelOptions::contraction() const { return std::max(beta, 1.0 - (1.0 - theta) * beta); }

void LevelOptions::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
    if (memory_depth + 2 > projection.max_constraints) {
        throw std::invalid_argument("memory depth " + std::to_string(memory_depth) +
                                    " needs a projection limit of at least " + std::to_string(memory_depth + 2));
    }
    if (max_phase_iterations < 1) throw std::invalid_argument("max_phase_iterations must be positive");
}

const char* to_string(PhaseExit e) {
    switch (e) {
        case PhaseExit::LevelProven: return "level_proven";
        case PhaseExit::GapClosed: return "gap_closed";
        case PhaseExit::SmoothingDoubled: return "smoothing_doubled";
        case PhaseExit::Interrupted: return "interrupted";
    }
    return "unknown";
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::GapClosed: return "gap_closed";
        case SolveStatus::TargetReached: return "target_reached";
        case SolveStatus::IterationBudget: return "iteration_budget";
    }
    return "unknown";
}

void RunContext::record(double lb, double ub) {
    TraceRow row;
    row.phase = phase;
    row.iter = iterations;
    row.lb = lb;
    row.ub = ub;
    row.gap = ub - lb;
    row.fxu = ub;
    row.calls = calls;
    row.ns = clock.elapsed_ns();
    trace.append(row);
}

namespace detail {

PhaseResult run_phase(const Vector& x_hat, double ub, double lb, const Ball& ball, const LevelOptions& opts,
                      const PhaseModel& model, RunContext& ctx, double d_in) {
    LevelPhaseState st;
    st.prox_center = ball.center;
    st.radius = ball.radius;
    st.lb = lb;
    st.ub = ub;
    st.beta = opts.beta;
    st.theta = opts.theta;
    st.level = opts.beta * lb + (1.0 - opts.beta) * ub;
    st.x_prev = x_hat;
    st.xu_prev = x_hat;
    st.memory_depth = opts.memory_depth;

    const double f0 = ub;
    const double upper_target = st.level + opts.theta * (f0 - st.level);
    const double smoothed_target = st.level + 0.5 * opts.theta * (f0 - st.level);
    const double radius_cap = st.radius * (1.0 + opts.radius_rel_tol);

    // x^u follows the smoothed values (equal to f without smoothing); the
    // incumbent x^b keeps the best true value and is what the phase returns.
    Vector x_best = x_hat;
    double f_best = ub;
    double su = model.smoothed_exit ? model.smoothed_value(x_hat) : ub;
    double fu = ub;
    StepsizeSequence steps(opts.rule);

    PhaseResult res;
    res.level = st.level;
    res.eta = model.eta;
    res.d_plus = d_in;

    auto finish = [&](PhaseExit exit, double lb_out) {
        res.x_plus = x_best;
        res.ub_plus = f_best;
        res.lb_plus = lb_out;
        res.termination = exit;
        res.iterations = st.k;
        if (exit == PhaseExit::SmoothingDoubled) res.d_plus = 2.0 * d_in;
        return res;
    };

    while (true) {
        if (st.k >= opts.max_phase_iterations) {
            throw PhaseLimitExceeded("gap reduction exceeded " + std::to_string(opts.max_phase_iterations) +
                                     " iterations (lb=" + std::to_string(st.lb) + ", ub=" + std::to_string(f_best) +
                                     ", level=" + std::to_string(st.level) +
                                     "); check convexity of the oracle or loosen the tolerance");
        }
        const double alpha = steps.next();
        st.k = steps.k();
        const Vector x_lower = (1.0 - alpha) * st.xu_prev + alpha * st.x_prev;
        const Evaluation ev = model.cut(x_lower);
        const Halfspace cut = level_cut(ev, x_lower, st.level);
        const Polyhedron lower = st.bundle.with_cut(cut);
        const ProjectionOutcome proj = project(st.prox_center, lower, opts.projection);

        const auto* feasible = std::get_if<FeasibleProjection>(&proj);
        const bool outside =
            feasible == nullptr || (feasible->x_star - st.prox_center).norm() > radius_cap;
        if (outside) {
            ++ctx.iterations;
            ctx.record(st.lb, f_best);
            if (ctx.observer && ctx.observer->on_iteration) {
                ctx.observer->on_iteration({ctx.phase, st.k, x_lower, feasible ? &feasible->x_star : nullptr,
                                            st.xu_prev, fu, x_best, f_best, st.level, st.prox_center, st.radius,
                                            lower, nullptr, model.eta});
            }
            return finish(PhaseExit::LevelProven, st.level);
        }
        const Vector& x_k = feasible->x_star;

        const Vector x_trial = (1.0 - alpha) * st.xu_prev + alpha * x_k;
        const UpperValue up = model.upper(x_trial);
        if (up.f_smoothed < su) {
            st.xu_prev = x_trial;
            su = up.f_smoothed;
            fu = up.f;
        }
        if (up.f < f_best) {
            x_best = x_trial;
            f_best = up.f;
        }
        ++ctx.iterations;
        ctx.record(st.lb, f_best);

        PhaseExit exit = PhaseExit::Interrupted;
        bool done = false;
        if (f_best <= upper_target) {
            exit = PhaseExit::GapClosed;
            done = true;
        } else if (model.smoothed_exit && su <= smoothed_target) {
            exit = PhaseExit::SmoothingDoubled;
            done = true;
        }

        if (!done) st.bundle = update_localizer(st.bundle, cut, x_k, st.prox_center, st.memory_depth);
        if (ctx.observer && ctx.observer->on_iteration) {
            ctx.observer->on_iteration({ctx.phase, st.k, x_lower, &x_k, st.xu_prev, fu, x_best, f_best, st.level,
                                        st.prox_center, st.radius, lower, done ? nullptr : &st.bundle, model.eta});
        }
        if (done) return finish(exit, st.lb);
        if (ctx.budget_exhausted() || ctx.target_reached(f_best)) return finish(PhaseExit::Interrupted, st.lb);
        st.x_prev = x_k;
    }
}

void report_phase(RunContext& ctx, std::vector<PhaseRecord>& log, const PhaseRecord& rec) {
    log.push_back(rec);
    if (ctx.observer && ctx.observer->on_phase) ctx.observer->on_phase(rec);
}

}  // namespace detail
}  // namespace levelforge
