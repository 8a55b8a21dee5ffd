#include "levelforge/projection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace levelforge {

double Polyhedron::max_violation(const Vector& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& h : cuts) worst = std::max(worst, -h.slack(x));
    return worst;
}

DualSystem assemble_dual(const Polyhedron& q, const Vector& p) {
    const auto m = static_cast<Eigen::Index>(q.count());
    DualSystem sys{Matrix::Zero(m, m), Vector::Zero(m)};
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& ai = q.cuts[static_cast<std::size_t>(i)];
        require_same_dim(ai.normal, p, "assemble_dual");
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = ai.normal.dot(q.cuts[static_cast<std::size_t>(j)].normal);
            sys.gram(i, j) = v;
            sys.gram(j, i) = v;
        }
        sys.linear(i) = ai.normal.dot(p) - ai.offset;
    }
    return sys;
}

namespace {

constexpr double kPivotTol = 1e-12;

// Cholesky solve of the masked block G_SS lambda_S = C_S on plain arrays.
// Returns false when a pivot falls below kPivotTol * scale.
class MaskedSolver {
public:
    explicit MaskedSolver(const DualSystem& sys) : m_(static_cast<int>(sys.linear.size())), sys_(&sys) {
        scale_ = 1.0;
        for (int i = 0; i < m_; ++i) scale_ = std::max(scale_, std::abs(sys.gram(i, i)));
    }

    bool solve(std::uint32_t mask, double* lambda) {
        int k = 0;
        for (int i = 0; i < m_; ++i)
            if (mask & (1u << i)) idx_[k++] = i;
        for (int i = 0; i < m_; ++i) lambda[i] = 0.0;
        const Matrix& g = sys_->gram;
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b <= a; ++b) {
                double v = g(idx_[a], idx_[b]);
                for (int c = 0; c < b; ++c) v -= l_[a][c] * l_[b][c];
                if (a == b) {
                    if (!(v > kPivotTol * scale_)) return false;
                    l_[a][a] = std::sqrt(v);
                } else {
                    l_[a][b] = v / l_[b][b];
                }
            }
        }
        double y[kMax];
        for (int a = 0; a < k; ++a) {
            double v = sys_->linear(idx_[a]);
            for (int c = 0; c < a; ++c) v -= l_[a][c] * y[c];
            y[a] = v / l_[a][a];
        }
        for (int a = k - 1; a >= 0; --a) {
            double v = y[a];
            for (int c = a + 1; c < k; ++c) v -= l_[c][a] * y[c];
            y[a] = v / l_[a][a];
        }
        for (int a = 0; a < k; ++a) lambda[idx_[a]] = y[a];
        return true;
    }

    static constexpr int kMax = 32;

private:
    int m_;
    const DualSystem* sys_;
    double scale_;
    int idx_[kMax];
    double l_[kMax][kMax];
};

KktCase complete_case(const DualSystem& sys, std::uint32_t mask, Vector lambda) {
    KktCase out{std::move(lambda), Vector()};
    out.mu = sys.gram * out.lambda - sys.linear;
    for (Eigen::Index i = 0; i < out.mu.size(); ++i)
        if (mask & (1u << i)) out.mu(i) = 0.0;
    return out;
}

std::optional<KktCase> least_squares_case(const DualSystem& sys, std::uint32_t mask) {
    const Eigen::Index m = sys.linear.size();
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < m; ++i)
        if (mask & (1u << i)) idx.push_back(i);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Vector lambda = Vector::Zero(m);
    if (k > 0) {
        Matrix mss(k, k);
        Vector cs(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            cs(a) = sys.linear(idx[a]);
            for (Eigen::Index b = 0; b < k; ++b) mss(a, b) = sys.gram(idx[a], idx[b]);
        }
        const Vector ls = mss.completeOrthogonalDecomposition().solve(cs);
        if (!ls.allFinite()) return std::nullopt;
        for (Eigen::Index a = 0; a < k; ++a) lambda(idx[a]) = ls(a);
    }
    return complete_case(sys, mask, std::move(lambda));
}

}  // namespace

std::optional<KktCase> solve_kkt_case(const DualSystem& sys, std::uint32_t active_mask) {
    if (sys.linear.size() > MaskedSolver::kMax) throw std::length_error("solve_kkt_case: too many cuts");
    MaskedSolver solver(sys);
    Vector lambda(sys.linear.size());
    if (!solver.solve(active_mask, lambda.data())) return std::nullopt;
    if (!lambda.allFinite()) return std::nullopt;
    return complete_case(sys, active_mask, std::move(lambda));
}

std::vector<std::uint32_t> kkt_mask_order(std::size_t m) {
    if (m > 31) throw std::length_error("kkt_mask_order: at most 31 cuts supported");
    std::vector<std::uint32_t> order;
    order.reserve(std::size_t{1} << m);
    // For each popcount, walk index combinations in lexicographic order.
    for (std::size_t k = 0; k <= m; ++k) {
        std::vector<std::size_t> comb(k);
        for (std::size_t i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            std::uint32_t mask = 0;
            for (auto c : comb) mask |= (1u << c);
            order.push_back(mask);
            if (k == 0) break;
            std::size_t pos = k;
            while (pos > 0 && comb[pos - 1] == m - k + pos - 1) --pos;
            if (pos == 0) break;
            ++comb[pos - 1];
            for (std::size_t j = pos; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return order;
}

ProjectionOutcome project(const Vector& p, const Polyhedron& q, const ProjectionOptions& opts) {
    if (q.count() > opts.max_constraints || q.count() > static_cast<std::size_t>(MaskedSolver::kMax)) {
        throw std::length_error("project: " + std::to_string(q.count()) + " cuts exceed the limit of " +
                                std::to_string(opts.max_constraints) +
                                "; truncate the bundle (lower the memory depth)");
    }
    const double tol = opts.tol.value_or(1e-10 * (1.0 + p.norm()));

    // Work on unit normals so that the sign test compares distances. Cuts with
    // a vanishing normal are either vacuous or make Q empty.
    Polyhedron unit;
    std::vector<std::size_t> origin;
    std::vector<double> norms;
    for (std::size_t i = 0; i < q.count(); ++i) {
        const auto& h = q.cuts[i];
        require_same_dim(h.normal, p, "project");
        const double nrm = h.normal.norm();
        if (nrm == 0.0) {
            if (h.offset < -tol) return InfeasibleProjection{};
            continue;
        }
        unit.add({h.normal / nrm, h.offset / nrm});
        origin.push_back(i);
        norms.push_back(nrm);
    }

    const DualSystem sys = assemble_dual(unit, p);
    const auto m = unit.count();
    thread_local std::vector<std::vector<std::uint32_t>> order_cache;
    if (order_cache.size() <= m) order_cache.resize(m + 1);
    if (order_cache[m].empty()) order_cache[m] = kkt_mask_order(m);
    const auto& order = order_cache[m];

    auto accept = [&](const KktCase& kc, std::uint32_t mask, bool fallback) -> std::optional<FeasibleProjection> {
        if (kc.lambda.size() > 0 && (kc.lambda.minCoeff() < -tol || kc.mu.minCoeff() < -tol)) return std::nullopt;
        Vector lam = kc.lambda.cwiseMax(0.0);
        Vector x = p;
        for (std::size_t i = 0; i < m; ++i)
            if (lam(static_cast<Eigen::Index>(i)) != 0.0) x -= lam(static_cast<Eigen::Index>(i)) * unit.cuts[i].normal;
        // Recheck feasibility on the recovered point; near-singular blocks can
        // pass the dual test with an inaccurate x.
        if (unit.count() > 0 && unit.max_violation(x) > tol) return std::nullopt;
        FeasibleProjection out;
        out.x_star = std::move(x);
        out.lambda = Vector::Zero(static_cast<Eigen::Index>(q.count()));
        for (std::size_t i = 0; i < m; ++i)
            out.lambda(static_cast<Eigen::Index>(origin[i])) = lam(static_cast<Eigen::Index>(i)) / norms[i];
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) out.active_mask |= (1u << origin[i]);
        out.via_fallback = fallback;
        return out;
    };

    std::vector<std::uint32_t> skipped;
    MaskedSolver solver(sys);
    const int mi = static_cast<int>(m);
    double lam[MaskedSolver::kMax];
    for (auto mask : order) {
        if (!solver.solve(mask, lam)) {
            skipped.push_back(mask);
            continue;
        }
        bool ok = true;
        for (int i = 0; i < mi && ok; ++i) ok = (mask & (1u << i)) == 0 || lam[i] >= -tol;
        for (int i = 0; i < mi && ok; ++i) {
            if (mask & (1u << i)) continue;
            double mu = -sys.linear(i);
            for (int j = 0; j < mi; ++j) mu += sys.gram(i, j) * lam[j];
            ok = mu >= -tol;
        }
        if (!ok) continue;
        const Vector lv = Eigen::Map<const Vector>(lam, mi);
        if (!lv.allFinite()) continue;
        if (auto hit = accept(complete_case(sys, mask, lv), mask, false)) return std::move(*hit);
    }
    for (auto mask : skipped) {
        auto kc = least_squares_case(sys, mask);
        if (!kc) continue;
        const double resid = (sys.gram * kc->lambda - kc->mu - sys.linear).norm();
        if (resid > tol * (1.0 + sys.linear.norm())) continue;
        if (auto hit = accept(*kc, mask, true)) return std::move(*hit);
    }
    return InfeasibleProjection{};
}

}  // namespace levelforge
