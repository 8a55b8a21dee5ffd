#pragma once

// Gap-reduction loop shared by the FAPL and FUSL procedures. The two differ
// only in how cuts and upper bounds are evaluated and in the extra
// smoothing-doubling exit.

#include "levelforge/level.hpp"

#include <functional>

namespace levelforge::detail {

struct UpperValue {
    double f;           // true objective
    double f_smoothed;  // smoothed objective, equal to f without smoothing
};

struct PhaseModel {
    std::function<Evaluation(const Vector&)> cut;
    std::function<UpperValue(const Vector&)> upper;
    /// f_eta at the phase's starting point.
    std::function<double(const Vector&)> smoothed_value;
    double eta = 0.0;
    bool smoothed_exit = false;
};

PhaseResult run_phase(const Vector& x_hat, double ub, double lb, const Ball& ball, const LevelOptions& opts,
                      const PhaseModel& model, RunContext& ctx, double d_in);

void report_phase(RunContext& ctx, std::vector<PhaseRecord>& log, const PhaseRecord& rec);

}  // namespace levelforge::detail
