#include "levelforge/baselines.hpp"
#include "levelforge/fapl.hpp"
#include "levelforge/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace levelforge;

TEST_CASE("textbook rate on a one-dimensional quadratic") {
    const double lip = 4.0;
    const double x_star = 0.3;
    const FirstOrderOracle f(1, [&](const Vector& x) {
        const double r = x(0) - x_star;
        return Evaluation{0.5 * lip * r * r, Vector::Constant(1, lip * r)};
    });
    NestConfig cfg;
    cfg.lipschitz = lip;
    cfg.max_iter = 50;
    const Vector x0 = Vector::Constant(1, -0.9);
    const NestResult r = nest_solve(f, Ball(Vector::Zero(1), 1.0), cfg, x0);
    const auto& rows = r.trace.rows();
    REQUIRE(rows.size() == 51);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double bound = 2.0 * lip * std::pow(x0(0) - x_star, 2) / std::pow(static_cast<double>(k) + 1.0, 2);
        CHECK(rows[k].fxu <= bound + 1e-15);
        CHECK(rows[k].ub <= rows[k - 1].ub);
    }
    CHECK(r.calls.first_order == 50);
    CHECK(r.calls.monitor == 51);
}

TEST_CASE("ball projection") {
    const Ball ball(Vector::Ones(2), 1.0);
    const Vector inside = Vector::Constant(2, 1.2);
    CHECK(ball.project(inside) == inside);
    const Vector outside = Vector::Constant(2, 5.0);
    CHECK((ball.project(outside) - ball.center).norm() == doctest::Approx(1.0));
}

TEST_CASE("target stops the iteration and invalid L is rejected") {
    const FirstOrderOracle f(2, [](const Vector& x) { return Evaluation{x.squaredNorm(), 2.0 * x}; });
    NestConfig cfg;
    cfg.lipschitz = 2.0;
    cfg.max_iter = 1000;
    cfg.target = 1e-6;
    const NestResult r = nest_solve(f, Ball(Vector::Zero(2), 1.0), cfg, Vector::Constant(2, 0.5));
    CHECK(r.target_reached);
    CHECK(r.value <= 1e-6);
    CHECK(r.iterations < 1000);
    cfg.lipschitz = 0.0;
    CHECK_THROWS((void)nest_solve(f, Ball(Vector::Zero(2), 1.0), cfg));
}

TEST_CASE("FAPL and NEST both reach the target on a least squares instance") {
    const auto inst = gen_least_squares(100, 200, Distribution::Uniform01, 1);
    const FirstOrderOracle f = ls_oracle(inst);
    const Ball ball(Vector::Zero(200), 1.0);
    SolveControl control;
    control.eps = 1e-6;
    control.lower_bound = 0.0;
    control.target_value = 1e-6;
    const SolveResult fr = fapl_solve(ball, Vector::Zero(200), f, control);
    NestConfig cfg;
    cfg.lipschitz = inst.L;
    cfg.max_iter = 200000;
    cfg.target = 1e-6;
    const NestResult nr = nest_solve(f, ball, cfg);
    MESSAGE("FAPL " << fr.calls.total() << " calls, NEST " << nr.calls.first_order << " gradient calls");
    CHECK(fr.ub <= 1e-6);
    CHECK(nr.target_reached);
    CHECK(nr.value <= 1e-6);
    CHECK(nr.calls.first_order == nr.iterations);
}
