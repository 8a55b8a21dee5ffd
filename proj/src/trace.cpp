#include "levelforge/trace.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace levelforge {

void ConvergenceTrace::append(const TraceRow& row) {
    if (!rows_.empty()) {
        const auto& last = rows_.back();
        if (row.phase < last.phase || (row.phase == last.phase && row.iter < last.iter)) {
            throw std::logic_error("ConvergenceTrace: rows must be monotone in (phase, iter)");
        }
    }
    rows_.push_back(row);
}

void ConvergenceTrace::write_csv(std::ostream& os, bool include_timing) const {
    os << "phase,iter,lb,ub,gap,fxu,oracle_calls,ns\n";
    char buf[256];
    for (const auto& r : rows_) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n", r.phase,
                      static_cast<long long>(r.iter), r.lb, r.ub, r.gap, r.fxu,
                      static_cast<long long>(r.calls.total()),
                      static_cast<long long>(include_timing ? r.ns : 0));
        os << buf;
    }
}

}  // namespace levelforge
