#pragma once

#include "levelforge/level.hpp"
#include "levelforge/projection.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace levelforge {

/// (ub+ - lb+) <= q (ub - lb) + 1e-12 max(1, |ub|, |lb|). Phases that double
/// the smoothing estimate or were interrupted are exempt and return true.
[[nodiscard]] bool phase_contracts(const PhaseRecord& rec, double q);

/// Primal feasibility, dual sign, complementarity and stationarity of a
/// projection result within tol.
[[nodiscard]] bool projection_kkt_holds(const Vector& p, const Polyhedron& Q, const FeasibleProjection& r,
                                        double tol);

struct AuditCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Property suite over small generated instances.
[[nodiscard]] std::vector<AuditCheck> run_invariant_audit(std::uint64_t seed);

}  // namespace levelforge
