#pragma once

#include "levelforge/oracle.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace levelforge {

/// One record per solver iteration (phase 0 / iter 0 is the initialization).
struct TraceRow {
    int phase = 0;
    std::int64_t iter = 0;
    double lb = 0.0;
    double ub = 0.0;
    double gap = 0.0;
    double fxu = 0.0;
    CallCounts calls;
    std::int64_t ns = 0;
};

/// Append-only log, monotone in (phase, iter).
class ConvergenceTrace {
public:
    void append(const TraceRow& row);

    [[nodiscard]] const std::vector<TraceRow>& rows() const { return rows_; }
    [[nodiscard]] bool empty() const { return rows_.empty(); }
    [[nodiscard]] const TraceRow& back() const { return rows_.back(); }

    /// Header: phase,iter,lb,ub,gap,fxu,oracle_calls,ns. With include_timing
    /// off the ns column is written as 0 so that runs compare byte for byte.
    void write_csv(std::ostream& os, bool include_timing = true) const;

private:
    std::vector<TraceRow> rows_;
};

/// Monotonic wall-clock since construction.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] std::int64_t elapsed_ns() const {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace levelforge
