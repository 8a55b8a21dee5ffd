#include "levelforge/unconstrained.hpp"

#include "levelforge/fapl.hpp"

#include <cmath>
#include <limits>

namespace levelforge {

namespace {

const Vector& start_point(const Vector& center, double radius, const Vector* warm) {
    if (warm != nullptr && (*warm - center).norm() <= radius) return *warm;
    return center;
}

BallSolveOutcome to_outcome(SolveResult&& r) {
    BallSolveOutcome out;
    out.z = std::move(r.x);
    out.value = r.ub;
    out.calls = r.calls;
    out.iterations = r.iterations;
    return out;
}

}  // namespace

BallSolver make_fapl_ball_solver(FirstOrderOracle oracle, LevelOptions opts) {
    return [oracle = std::move(oracle), opts](const Vector& center, double radius, double eps, const Vector* warm) {
        SolveControl control;
        control.eps = eps;
        const Ball ball(center, radius);
        return to_outcome(fapl_solve(ball, start_point(center, radius, warm), oracle, control, opts));
    };
}

BallSolver make_fusl_ball_solver(StructuredObjective obj, double d1, LevelOptions opts) {
    return [obj = std::move(obj), d1, opts](const Vector& center, double radius, double eps, const Vector* warm) {
        SolveControl control;
        control.eps = eps;
        const Ball ball(center, radius);
        return to_outcome(fusl_solve(ball, start_point(center, radius, warm), d1, obj, control, opts));
    };
}

double initial_gap(const FirstOrderOracle& oracle, const Vector& x_bar, double r0) {
    if (!(r0 > 0.0)) throw std::invalid_argument("initial_gap: r0 must be positive");
    const Evaluation e = oracle(x_bar);
    const BallMinimizer m = min_linear_over_ball(e.value, e.subgradient, x_bar, Ball(x_bar, r0));
    return std::max(0.0, e.value - m.min_value);
}

const char* to_string(UnconstrainedStatus s) {
    switch (s) {
        case UnconstrainedStatus::Converged: return "converged";
        case UnconstrainedStatus::KnownOptimumReached: return "known_optimum_reached";
        case UnconstrainedStatus::RoundLimit: return "round_limit";
    }
    return "unknown";
}

UnconstrainedResult solve_unconstrained(const BallSolver& solver, const FirstOrderOracle& oracle,
                                        const Vector& x_bar, double r0, const UnconstrainedOptions& opts) {
    if (!(opts.eps_stop > 0.0)) throw std::invalid_argument("solve_unconstrained: eps_stop must be positive");
    if (opts.max_rounds < 1) throw std::invalid_argument("solve_unconstrained: max_rounds must be positive");
    UnconstrainedResult out;
    Stopwatch clock;

    ExpansionState st;
    st.r = r0;
    st.delta = initial_gap(oracle, x_bar, r0);
    st.x_star = x_bar;
    out.calls.first_order += 1;
    ++out.calls.monitor;
    double f_star = oracle(x_bar).value;

    auto emit = [&](int round) {
        TraceRow row;
        row.phase = round;
        row.iter = out.inner_iterations;
        row.lb = -std::numeric_limits<double>::infinity();
        row.ub = f_star;
        row.gap = st.delta;
        row.fxu = f_star;
        row.calls = out.calls;
        row.ns = clock.elapsed_ns();
        out.trace.append(row);
    };
    emit(0);

    auto finish = [&](UnconstrainedStatus status) {
        out.x = st.x_star;
        out.value = f_star;
        out.status = status;
        out.expansions = st.expansion_count;
        return std::move(out);
    };

    if (st.delta == 0.0) return finish(UnconstrainedStatus::Converged);
    if (opts.known_optimum && f_star - *opts.known_optimum <= opts.eps_stop) {
        return finish(UnconstrainedStatus::KnownOptimumReached);
    }

    for (int round = 1; round <= opts.max_rounds; ++round) {
        BallSolveOutcome inner;
        BallSolveOutcome outer;
        while (true) {
            out.radii.push_back(st.r);
            inner = solver(x_bar, st.r, st.delta, &st.x_star);
            outer = solver(x_bar, 2.0 * st.r, st.delta, &st.x_star);
            out.calls += inner.calls;
            out.calls += outer.calls;
            out.inner_iterations += inner.iterations + outer.iterations;
            if (inner.value - outer.value > st.delta) {
                st.r *= 2.0;
                ++st.expansion_count;
                continue;
            }
            break;
        }
        if (outer.value <= f_star) {
            st.x_star = std::move(outer.z);
            f_star = outer.value;
        }
        CommitRecord rec;
        rec.round = round;
        rec.radius = st.r;
        rec.delta = st.delta;
        rec.value = f_star;
        rec.expansions = st.expansion_count;
        out.commits.push_back(rec);
        st.delta *= 0.5;
        emit(round);

        if (opts.known_optimum && f_star - *opts.known_optimum <= opts.eps_stop) {
            return finish(UnconstrainedStatus::KnownOptimumReached);
        }
        if (st.delta <= opts.eps_stop / opts.stop_factor) return finish(UnconstrainedStatus::Converged);
    }
    return finish(UnconstrainedStatus::RoundLimit);
}

}  // namespace levelforge
