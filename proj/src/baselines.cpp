#include "levelforge/baselines.hpp"

#include <cmath>
#include <limits>

namespace levelforge {

NestResult nest_solve(const FirstOrderOracle& oracle, const Ball& ball, const NestConfig& config,
                      const std::optional<Vector>& x0) {
    if (!(config.lipschitz > 0.0)) throw std::invalid_argument("nest_solve: L must be positive");
    NestResult out;
    CountedOracle counted(oracle, out.calls);
    Stopwatch clock;

    Vector x = ball.project(x0 ? *x0 : ball.center);
    Vector y = x;
    double t = 1.0;
    const double step = 1.0 / config.lipschitz;

    out.x = x;
    out.value = counted.monitor(x).value;
    auto record = [&](std::int64_t k, double fx) {
        TraceRow row;
        row.phase = 0;
        row.iter = k;
        row.lb = -std::numeric_limits<double>::infinity();
        row.ub = out.value;
        row.gap = std::numeric_limits<double>::infinity();
        row.fxu = fx;
        row.calls = out.calls;
        row.ns = clock.elapsed_ns();
        out.trace.append(row);
    };
    record(0, out.value);
    if (config.target && out.value <= *config.target) {
        out.target_reached = true;
        return out;
    }

    for (std::int64_t k = 1; k <= config.max_iter; ++k) {
        const Evaluation ey = counted.eval(y);
        Vector x_next = ball.project(y - step * ey.subgradient);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = x_next + ((t - 1.0) / t_next) * (x_next - x);
        x = std::move(x_next);
        t = t_next;

        const double fx = counted.monitor(x).value;
        if (fx < out.value) {
            out.value = fx;
            out.x = x;
        }
        out.iterations = k;
        record(k, fx);
        if (config.target && out.value <= *config.target) {
            out.target_reached = true;
            break;
        }
    }
    return out;
}

}  // namespace levelforge
