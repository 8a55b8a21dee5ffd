#pragma once

#include "levelforge/oracle.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace levelforge {

/// Half-space <normal, x> <= offset.
struct Halfspace {
    Vector normal;
    double offset = 0.0;

    [[nodiscard]] double slack(const Vector& x) const { return offset - normal.dot(x); }
};

/// Intersection of a few half-spaces; the localizer handed to the projection kernel.
struct Polyhedron {
    std::vector<Halfspace> cuts;

    [[nodiscard]] std::size_t count() const { return cuts.size(); }
    [[nodiscard]] bool empty() const { return cuts.empty(); }
    void add(Halfspace h) { cuts.push_back(std::move(h)); }
    /// Largest violation max_i (<A_i,x> - b_i), or -inf for an empty list.
    [[nodiscard]] double max_violation(const Vector& x) const;
};

/// Dual of min 1/2||x - p||^2 over Q: max_{lambda>=0} -1/2 lambda'M lambda + C'lambda
/// with M_ij = <A_i, A_j> and C_i = <A_i, p> - b_i.
struct DualSystem {
    Matrix gram;
    Vector linear;
};

[[nodiscard]] DualSystem assemble_dual(const Polyhedron& q, const Vector& p);

struct KktCase {
    Vector lambda;
    Vector mu;
};

/// Solves M lambda - mu = C with lambda_i = 0 off the mask and mu_i = 0 on it.
/// Returns nullopt when the reduced block M_SS is singular. No sign check.
[[nodiscard]] std::optional<KktCase> solve_kkt_case(const DualSystem& sys, std::uint32_t active_mask);

struct ProjectionOptions {
    /// Hard cap on the number of cuts (2^m cases are enumerated).
    std::size_t max_constraints = 12;
    /// Sign tolerance; defaults to 1e-10 * (1 + ||p||).
    std::optional<double> tol;
};

struct FeasibleProjection {
    Vector x_star;
    Vector lambda;             // multipliers for the cuts as given (not normalized)
    std::uint32_t active_mask = 0;
    bool via_fallback = false;  // accepted from the least-squares pass
};

struct InfeasibleProjection {};

using ProjectionOutcome = std::variant<FeasibleProjection, InfeasibleProjection>;

[[nodiscard]] inline bool is_feasible(const ProjectionOutcome& o) {
    return std::holds_alternative<FeasibleProjection>(o);
}

/// Enumeration order used by project(): by popcount, then lexicographic on
/// the sorted index set.
[[nodiscard]] std::vector<std::uint32_t> kkt_mask_order(std::size_t m);

/// Exact Euclidean projection of p onto Q, or Infeasible when Q is empty.
/// Throws std::length_error when Q has more than max_constraints cuts.
[[nodiscard]] ProjectionOutcome project(const Vector& p, const Polyhedron& q,
                                        const ProjectionOptions& opts = {});

}  // namespace levelforge
