#include "levelforge/audit.hpp"
#include "levelforge/fapl.hpp"
#include "levelforge/problems.hpp"
#include "reference.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>

using namespace levelforge;

namespace {

struct Quadratic {
    Matrix q;
    Vector x_star;
    double lipschitz;
    FirstOrderOracle oracle;
};

// f(x) = 1/2 (x - x*)' Q (x - x*), so f* = 0 at x* inside the unit ball.
Quadratic make_quadratic(std::mt19937_64& gen, Eigen::Index n, double spread) {
    Quadratic out;
    Vector d(n);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = 1.0 + spread * ud(gen);
    const Matrix rot = Eigen::HouseholderQR<Matrix>(Matrix::NullaryExpr(n, n, [&] { return ud(gen) - 0.5; }))
                           .householderQ();
    out.q = rot * d.asDiagonal() * rot.transpose();
    out.x_star = reftest::rand_in_ball(gen, n, 0.8);
    out.lipschitz = Eigen::SelfAdjointEigenSolver<Matrix>(out.q).eigenvalues().maxCoeff();
    const Matrix q = out.q;
    const Vector xs = out.x_star;
    out.oracle = FirstOrderOracle(n, [q, xs](const Vector& x) {
        const Vector r = x - xs;
        return Evaluation{0.5 * r.dot(q * r), q * r};
    });
    return out;
}

}  // namespace

TEST_CASE("linear objective closes the gap at initialization") {
    const Vector g = Vector::LinSpaced(3, 1.0, 3.0);
    const FirstOrderOracle f(3, [g](const Vector& x) { return Evaluation{g.dot(x), g}; });
    SolveControl control;
    control.eps = 1e-9;
    const SolveResult r = fapl_solve(Ball(Vector::Zero(3), 1.0), Vector::Zero(3), f, control);
    CHECK(r.phases == 0);
    CHECK(r.gap() <= 1e-12);
    CHECK(r.ub == doctest::Approx(-g.norm()));
}

TEST_CASE("a single phase on a linear objective ends within two iterations") {
    const Vector g = Vector::LinSpaced(3, 1.0, 3.0);
    const FirstOrderOracle f(3, [g](const Vector& x) { return Evaluation{g.dot(x), g}; });
    RunContext ctx;
    const PhaseResult r = gap_reduction_fapl(Vector::Zero(3), 0.0, -g.norm(), Ball(Vector::Zero(3), 1.0), f, {}, ctx);
    CHECK(r.iterations <= 2);
    CHECK(r.ub_plus - r.lb_plus <= 0.75 * g.norm() + 1e-12);
}

TEST_CASE("driver validates its inputs") {
    const FirstOrderOracle f(2, [](const Vector& x) { return Evaluation{x.squaredNorm(), 2.0 * x}; });
    SolveControl control;
    control.eps = 0.0;
    CHECK_THROWS((void)fapl_solve(Ball(Vector::Zero(2), 1.0), Vector::Zero(2), f, control));
    control.eps = 1e-3;
    CHECK_THROWS((void)fapl_solve(Ball(Vector::Zero(2), 1.0), Vector::Constant(2, 5.0), f, control));
    LevelOptions bad;
    bad.beta = 1.0;
    CHECK_THROWS((void)fapl_solve(Ball(Vector::Zero(2), 1.0), Vector::Zero(2), f, control, bad));
}

TEST_CASE("phase iteration cap raises") {
    std::mt19937_64 gen(4);
    const Quadratic quad = make_quadratic(gen, 10, 100.0);
    LevelOptions opts;
    opts.max_phase_iterations = 1;
    SolveControl control;
    control.eps = 1e-12;
    CHECK_THROWS_AS((void)fapl_solve(Ball(Vector::Zero(10), 1.0), Vector::Zero(10), quad.oracle, control, opts),
                    PhaseLimitExceeded);
}

TEST_CASE("golden phases on ||x||^2 over B((1,1), 2) match the straight-line reference") {
    const FirstOrderOracle f(2, [](const Vector& x) { return Evaluation{x.squaredNorm(), 2.0 * x}; });
    const Vector center = Vector::Ones(2);
    SolveControl control;
    control.eps = 1e-8;
    const SolveResult r = fapl_solve(Ball(center, 2.0), center, f, control);
    const auto ref = reftest::reference_fapl([&](const Vector& x) { return f(x); }, center, 2.0, center, 1e-8, 0.5,
                                             0.5, 10);
    REQUIRE(r.phase_log.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CAPTURE(i);
        const auto& a = r.phase_log[i];
        const auto& b = ref[i];
        CHECK(a.iterations == b.iterations);
        CHECK((a.exit == PhaseExit::LevelProven) == b.level_proven);
        CHECK(a.lb_out == doctest::Approx(b.lb_out).epsilon(1e-9));
        CHECK(a.ub_out == doctest::Approx(b.ub_out).epsilon(1e-9));
    }
    CHECK(r.lb <= 0.0);
    CHECK(r.ub <= 1e-8);
}

TEST_CASE("reference agreement on random quadratics") {
    std::mt19937_64 gen(77);
    for (int t = 0; t < 5; ++t) {
        const Quadratic quad = make_quadratic(gen, 4, 20.0);
        const Vector center = Vector::Zero(4);
        SolveControl control;
        control.eps = 1e-6;
        LevelOptions opts;
        opts.memory_depth = 4;
        const SolveResult r = fapl_solve(Ball(center, 1.0), center, quad.oracle, control, opts);
        const auto ref = reftest::reference_fapl([&](const Vector& x) { return quad.oracle(x); }, center, 1.0,
                                                 center, 1e-6, 0.5, 0.5, 4);
        REQUIRE(r.phase_log.size() == ref.size());
        // rounding differences steer the trajectories apart once the gap is tiny
        for (std::size_t i = 0; i < ref.size() && ref[i].ub_in - ref[i].lb_in > 1e-4; ++i) {
            CHECK(r.phase_log[i].iterations == ref[i].iterations);
            CHECK(r.phase_log[i].ub_out == doctest::Approx(ref[i].ub_out).epsilon(1e-7));
        }
    }
}

TEST_CASE("contraction, monotone bounds and phase bounds on quadratics") {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 10; ++t) {
        const Eigen::Index n = 5 + t;
        const Quadratic quad = make_quadratic(gen, n, 50.0);
        const Ball ball(Vector::Zero(n), 1.0);
        const LevelOptions opts;
        SolveControl control;
        control.eps = 1e-9;
        const SolveResult r = fapl_solve(ball, Vector::Zero(n), quad.oracle, control, opts);
        CHECK(r.status == SolveStatus::GapClosed);
        const HolderClass holder(quad.lipschitz, 1.0);
        const double c = opts.rule.c(1.0);
        CHECK(c == doctest::Approx(4.0));
        double prev_lb = -1e300;
        double prev_ub = 1e300;
        for (const auto& p : r.phase_log) {
            CHECK(phase_contracts(p, opts.contraction()));
            CHECK(p.iterations <= fapl_phase_bound(p.ub_in - p.lb_in, holder, 1.0, 0.5, 0.5, c));
            CHECK(p.lb_out >= prev_lb);
            CHECK(p.ub_out <= prev_ub);
            CHECK(p.lb_out <= 1e-12);
            CHECK(p.ub_out >= 0.0);
            prev_lb = p.lb_out;
            prev_ub = p.ub_out;
        }
        CHECK(r.phases <= fapl_phase_count_bound(control.eps, holder, 1.0, opts.contraction()));
    }
}

TEST_CASE("phase bound formula") {
    const HolderClass h(3.0, 1.0);
    const double n = fapl_phase_bound(0.1, h, 2.0, 0.5, 0.5, 4.0);
    CHECK(n == doctest::Approx(std::sqrt(2.0 * 3.0 * 4.0 / (0.25 * 0.1)) + 1.0));
    const double n2 = fapl_phase_bound(0.2, h, 2.0, 0.5, 0.5, 4.0);
    CHECK((n - 1.0) / (n2 - 1.0) == doctest::Approx(std::sqrt(2.0)));
    const HolderClass h0(3.0, 0.0);
    const double m1 = fapl_phase_bound(0.1, h0, 2.0, 0.5, 0.5, 4.0);
    const double m2 = fapl_phase_bound(0.2, h0, 2.0, 0.5, 0.5, 4.0);
    CHECK((m1 - 1.0) / (m2 - 1.0) == doctest::Approx(4.0));
}

TEST_CASE("iterates stay in the ball, the prox distance grows and the localizer covers the level set") {
    std::mt19937_64 gen(13);
    const Quadratic quad = make_quadratic(gen, 2, 10.0);
    const Ball ball(Vector::Zero(2), 1.0);
    int violations = 0;
    int checked = 0;
    int prev_phase = -1;
    Vector prev_x;
    SolverObserver obs;
    obs.on_iteration = [&](const IterationView& v) {
        if (v.phase != prev_phase) {
            prev_phase = v.phase;
            prev_x.resize(0);
        }
        if (!v.x_prox || (*v.x_prox - v.prox_center).norm() > v.radius * (1.0 + 1e-12)) return;
        if (!ball.contains(v.x_lower, 1e-9) || !ball.contains(v.x_upper, 1e-9)) ++violations;
        const Vector& xk = *v.x_prox;
        if (prev_x.size() > 0) {
            const double lhs = 0.5 * (xk - v.prox_center).squaredNorm();
            const double rhs = 0.5 * (prev_x - v.prox_center).squaredNorm() + 0.5 * (xk - prev_x).squaredNorm();
            if (lhs < rhs - 1e-10) ++violations;
        }
        prev_x = xk;
        if (v.next_bundle && checked < 50) {
            ++checked;
            const Polyhedron q = v.next_bundle->polyhedron();
            for (int s = 0; s < 2000; ++s) {
                const Vector x = reftest::rand_in_ball(gen, 2, 1.0);
                if (quad.oracle(x).value > v.level) continue;
                if (v.lower_localizer.max_violation(x) > 1e-10 || q.max_violation(x) > 1e-10) ++violations;
            }
        }
    };
    SolveControl control;
    control.eps = 1e-10;
    (void)fapl_solve(ball, Vector::Zero(2), quad.oracle, control, {}, &obs);
    CHECK(checked > 0);
    CHECK(violations == 0);
}

TEST_CASE("least squares 40 x 50 reaches 1e-8 with a valid lower bound") {
    const LeastSquaresInstance inst = gen_least_squares(40, 50, Distribution::Uniform01, 3);
    const FirstOrderOracle f = ls_oracle(inst);
    SolveControl control;
    control.eps = 1e-8;
    const SolveResult r = fapl_solve(Ball(Vector::Zero(50), 1.0), Vector::Zero(50), f, control);
    CHECK(f(r.x).value <= 1e-8);
    for (const auto& row : r.trace.rows()) CHECK(row.lb <= 0.0);
}

TEST_CASE("iteration budget and target value stop the driver") {
    const LeastSquaresInstance inst = gen_least_squares(20, 30, Distribution::Gaussian, 9);
    const FirstOrderOracle f = ls_oracle(inst);
    SolveControl control;
    control.eps = 1e-12;
    control.max_iterations = 15;
    const SolveResult a = fapl_solve(Ball(Vector::Zero(30), 1.0), Vector::Zero(30), f, control);
    CHECK(a.status == SolveStatus::IterationBudget);
    CHECK(a.iterations == 15);
    control.max_iterations = -1;
    control.target_value = 1e-3;
    const SolveResult b = fapl_solve(Ball(Vector::Zero(30), 1.0), Vector::Zero(30), f, control);
    CHECK(b.status == SolveStatus::TargetReached);
    CHECK(b.ub <= 1e-3);
    // a level-proven iteration skips the upper evaluation
    std::int64_t proven = 0;
    for (const auto& p : b.phase_log) proven += p.exit == PhaseExit::LevelProven ? 1 : 0;
    CHECK(b.calls.first_order == 2 * b.iterations + 2 - proven);
}
