#include "levelforge/audit.hpp"

#include "levelforge/fapl.hpp"
#include "levelforge/fusl.hpp"
#include "levelforge/problems.hpp"
#include "levelforge/rng.hpp"
#include "levelforge/strongly_convex.hpp"
#include "levelforge/unconstrained.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levelforge {

bool phase_contracts(const PhaseRecord& rec, double q) {
    if (rec.exit == PhaseExit::SmoothingDoubled || rec.exit == PhaseExit::Interrupted) return true;
    const double scale = std::max({1.0, std::abs(rec.ub_in), std::abs(rec.lb_in)});
    return rec.ub_out - rec.lb_out <= q * (rec.ub_in - rec.lb_in) + 1e-12 * scale;
}

bool projection_kkt_holds(const Vector& p, const Polyhedron& Q, const FeasibleProjection& r, double tol) {
    if (Q.max_violation(r.x_star) > tol) return false;
    Vector stationarity = r.x_star - p;
    for (std::size_t i = 0; i < Q.count(); ++i) {
        const double li = r.lambda(static_cast<Eigen::Index>(i));
        if (li < -tol) return false;
        if (std::abs(li * Q.cuts[i].slack(r.x_star)) > tol * (1.0 + std::abs(li))) return false;
        stationarity += li * Q.cuts[i].normal;
    }
    return stationarity.norm() <= tol * (1.0 + p.norm());
}

namespace {

class Suite {
public:
    void add(std::string name, bool passed, std::string detail = {}) {
        checks_.push_back({std::move(name), passed, std::move(detail)});
    }
    std::vector<AuditCheck> take() { return std::move(checks_); }

private:
    std::vector<AuditCheck> checks_;
};

Vector random_vector(const CounterRng& rng, std::uint64_t& counter, Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal(counter++);
    return v;
}

void audit_projection(Suite& s, std::uint64_t seed) {
    const CounterRng rng(seed, 101);
    std::uint64_t ctr = 0;
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.bits(ctr++) % 6);
        const std::size_t m = 1 + rng.bits(ctr++) % 5;
        const Vector inside = random_vector(rng, ctr, n);
        Polyhedron Q;
        for (std::size_t i = 0; i < m; ++i) {
            const Vector a = random_vector(rng, ctr, n);
            Q.add({a, a.dot(inside) + rng.uniform(ctr++)});
        }
        const Vector p = 3.0 * random_vector(rng, ctr, n);
        const ProjectionOutcome out = project(p, Q);
        const auto* f = std::get_if<FeasibleProjection>(&out);
        if (f == nullptr || !projection_kkt_holds(p, Q, *f, 1e-8)) ++failures;
    }
    s.add("projection_kkt", failures == 0, std::to_string(failures) + " of 200 failed");

    int missed = 0;
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.bits(ctr++) % 6);
        const Vector a = random_vector(rng, ctr, n);
        Polyhedron Q;
        Q.add({a, -1.0});
        Q.add({-a, -1.0});
        if (is_feasible(project(random_vector(rng, ctr, n), Q))) ++missed;
    }
    s.add("projection_infeasible", missed == 0, std::to_string(missed) + " of 50 misclassified");
}

void audit_fapl(Suite& s, std::uint64_t seed) {
    const LeastSquaresInstance inst = gen_least_squares(30, 60, Distribution::Uniform01, seed);
    const FirstOrderOracle f = ls_oracle(inst);
    const LevelOptions opts;
    SolveControl control;
    control.eps = 1e-8;
    control.lower_bound = 0.0;
    const SolveResult r = fapl_solve(Ball(Vector::Zero(60), 1.0), Vector::Zero(60), f, control, opts);
    const double q = opts.contraction();
    const bool contracts =
        std::all_of(r.phase_log.begin(), r.phase_log.end(), [q](const PhaseRecord& p) { return phase_contracts(p, q); });
    s.add("fapl_contraction", contracts, std::to_string(r.phases) + " phases");
    s.add("fapl_gap_closed", r.status == SolveStatus::GapClosed && r.ub <= 1e-8 + 1e-12,
          "ub=" + std::to_string(r.ub));

    bool monotone = true;
    const auto& rows = r.trace.rows();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ub > rows[i - 1].ub || rows[i].lb < rows[i - 1].lb) monotone = false;
    }
    s.add("fapl_bounds_monotone", monotone);
}

void audit_fusl(Suite& s, std::uint64_t seed) {
    const TVInstance inst = gen_tv({8, 8}, 40, 0.05, 0.01, seed);
    const StructuredObjective obj = tv_structured_objective(inst);
    const double d_vy = *obj.dual_diameter;
    bool sandwich = true;
    SolverObserver obs;
    obs.on_iteration = [&](const IterationView& v) {
        if (!sandwich_check(obj, v.eta, v.x_upper, d_vy) || !sandwich_check(obj, v.eta, v.x_lower, d_vy)) {
            sandwich = false;
        }
    };
    const LevelOptions opts;
    SolveControl control;
    const Eigen::Index n = inst.dims.pixels();
    control.eps = 1e-3 * tv_objective(inst, Vector::Zero(n));
    const SolveResult r = fusl_solve(Ball(Vector::Zero(n), 2.0 * std::sqrt(static_cast<double>(n))),
                                     Vector::Zero(n), d_vy / 100.0, obj, control, opts, &obs);
    const double q = opts.contraction();
    const bool contracts =
        std::all_of(r.phase_log.begin(), r.phase_log.end(), [q](const PhaseRecord& p) { return phase_contracts(p, q); });
    s.add("fusl_contraction", contracts, std::to_string(r.phases) + " phases");
    s.add("fusl_sandwich", sandwich);
    s.add("fusl_doubling_cap", r.doublings <= fusl_doubling_bound(d_vy, d_vy / 100.0),
          std::to_string(r.doublings) + " doublings");
    s.add("fusl_gap_closed", r.status == SolveStatus::GapClosed);
}

void audit_strongly_convex(Suite& s, std::uint64_t seed) {
    const CounterRng rng(seed, 103);
    std::uint64_t ctr = 0;
    const Eigen::Index n = 12;
    Vector diag(n);
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = 1.0 + 9.0 * rng.uniform(ctr++);
    const double mu = diag.minCoeff();
    const Vector x_star = random_vector(rng, ctr, n);
    const FirstOrderOracle f(n, [diag, x_star](const Vector& x) {
        const Vector d = x - x_star;
        return Evaluation{0.5 * d.dot(diag.cwiseProduct(d)), diag.cwiseProduct(d)};
    });
    bool contained = true;
    SolverObserver obs;
    obs.on_phase = [&](const PhaseRecord& rec) {
        if ((rec.prox_center - x_star).norm() > rec.radius * (1.0 + 1e-9)) contained = false;
    };
    const LevelOptions opts;
    SolveControl control;
    control.eps = 1e-9;
    const StrongConvexityInfo sc(mu, 0.0);
    const Vector p0 = Vector::Zero(n);
    const SolveResult r = fapl_sc_solve(p0, sc, f, control, opts, &obs);
    s.add("sc_ball_containment", contained);
    const double gap1 = r.trace.rows().front().gap;
    s.add("sc_phase_count", r.phases <= sc_phase_count_bound(gap1, control.eps, opts.contraction()),
          std::to_string(r.phases) + " phases");
}

void audit_problems(Suite& s, std::uint64_t seed) {
    const ImageDims dims{7, 9};
    const CounterRng rng(seed, 104);
    std::uint64_t ctr = 0;
    const Vector u = random_vector(rng, ctr, dims.pixels());
    const Vector p = random_vector(rng, ctr, 2 * dims.pixels());
    const double lhs = tv_gradient(u, dims).dot(p);
    const double rhs = u.dot(tv_gradient_adjoint(p, dims));
    s.add("tv_adjoint", std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));

    const LeastSquaresInstance a = gen_least_squares(20, 30, Distribution::Gaussian, seed);
    const LeastSquaresInstance b = gen_least_squares(20, 30, Distribution::Gaussian, seed);
    s.add("generator_determinism", a.A == b.A && a.b == b.b && a.x_true == b.x_true);

    const FirstOrderOracle f = ls_oracle(a);
    const Vector x = random_vector(rng, ctr, 30);
    const Evaluation e = f(x);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < 30; ++j) {
        const double h = 1e-5 * std::max(1.0, std::abs(x(j)));
        Vector xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        const double fd = (f(xp).value - f(xm).value) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - e.subgradient(j)) / std::max(1.0, std::abs(e.subgradient(j))));
    }
    s.add("ls_gradient", worst <= 1e-5, "max rel err " + std::to_string(worst));
}

void audit_unconstrained(Suite& s, std::uint64_t seed) {
    const CounterRng rng(seed, 105);
    std::uint64_t ctr = 0;
    const Eigen::Index n = 5;
    Vector x_star = random_vector(rng, ctr, n);
    x_star *= 4.0 / x_star.norm();
    const FirstOrderOracle f(n, [x_star](const Vector& x) {
        const Vector d = x - x_star;
        return Evaluation{d.squaredNorm(), 2.0 * d};
    });
    UnconstrainedOptions uo;
    uo.eps_stop = 1e-6;
    const UnconstrainedResult r = solve_unconstrained(make_fapl_ball_solver(f), f, Vector::Zero(n), 1.0, uo);
    bool monotone = true;
    for (std::size_t i = 1; i < r.commits.size(); ++i) {
        if (r.commits[i].value > r.commits[i - 1].value) monotone = false;
    }
    s.add("unconstrained_monotone", monotone && r.value <= 1e-6, "f=" + std::to_string(r.value));
}

}  // namespace

std::vector<AuditCheck> run_invariant_audit(std::uint64_t seed) {
    Suite s;
    audit_projection(s, seed);
    audit_fapl(s, seed);
    audit_fusl(s, seed);
    audit_strongly_convex(s, seed);
    audit_problems(s, seed);
    audit_unconstrained(s, seed);
    return s.take();
}

}  // namespace levelforge
