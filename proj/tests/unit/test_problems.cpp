#include "levelforge/fusl.hpp"
#include "levelforge/io.hpp"
#include "levelforge/problems.hpp"
#include "levelforge/rng.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <fstream>

using namespace levelforge;

namespace {

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

}  // namespace

TEST_CASE("counter generator is a pure function of its inputs") {
    const CounterRng a(7, 1);
    const CounterRng b(7, 1);
    const CounterRng c(7, 2);
    CHECK(a.bits(10) == b.bits(10));
    CHECK(a.bits(10) != c.bits(10));
    CHECK(a.bits(10) != a.bits(11));
    double lo = 1.0;
    double hi = 0.0;
    double mean = 0.0;
    double var = 0.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = a.uniform(i);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        const double z = a.normal(i);
        mean += z;
        var += z * z;
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(mean / 20000.0) < 0.03);
    CHECK(std::abs(var / 20000.0 - 1.0) < 0.05);
}

TEST_CASE("portable log and exp") {
    for (double x : {1e-300, 1e-8, 0.3, 1.0, 2.5, 1e10}) CHECK(portable_log(x) == doctest::Approx(std::log(x)).epsilon(1e-14));
    for (double x : {-30.0, -1.0, 0.0, 0.7, 20.0}) CHECK(portable_exp(x) == doctest::Approx(std::exp(x)).epsilon(1e-14));
}

TEST_CASE("least squares generator is bit-reproducible") {
    const auto a = gen_least_squares(5, 7, Distribution::Uniform01, 42);
    const auto b = gen_least_squares(5, 7, Distribution::Uniform01, 42);
    CHECK(a.A == b.A);
    CHECK(a.b == b.b);
    CHECK(bits(a.A(0, 0)) == 0x3fed713e8a3ae157ull);
    CHECK(bits(a.A(4, 6)) == 0x3fd347c65f7089f6ull);
    CHECK(bits(a.b(2)) == 0x3fcf6dde1b804073ull);
    const auto g = gen_least_squares(5, 7, Distribution::Gaussian, 42);
    CHECK(bits(g.A(3, 1)) == 0x3fe5950f830a60efull);
    CHECK(gen_least_squares(5, 7, Distribution::Uniform01, 43).A != a.A);
}

TEST_CASE("least squares instance has a feasible zero-residual point") {
    const auto inst = gen_least_squares(30, 60, Distribution::Gaussian, 1);
    CHECK(inst.x_true.norm() <= 1.0);
    CHECK(inst.A.minCoeff() < 0.0);
    const FirstOrderOracle f = ls_oracle(inst);
    const Evaluation e = f(inst.x_true);
    CHECK(e.value == doctest::Approx(0.0));
    CHECK(e.subgradient.norm() <= 1e-12);
    const auto u = gen_least_squares(30, 60, Distribution::Uniform01, 1);
    CHECK(u.A.minCoeff() >= 0.0);
    CHECK(u.A.maxCoeff() < 1.0);
    CHECK(parse_distribution("gaussian") == Distribution::Gaussian);
    CHECK(std::string(to_string(Distribution::Uniform01)) == "uniform");
    CHECK_THROWS((void)parse_distribution("cauchy"));
}

TEST_CASE("least squares gradient and convexity") {
    const auto inst = gen_least_squares(40, 50, Distribution::Uniform01, 5);
    const FirstOrderOracle f = ls_oracle(inst);
    std::mt19937_64 gen(1);
    for (int t = 0; t < 10; ++t) {
        const Vector x = reftest::rand_in_ball(gen, 50, 1.0);
        const Vector g = f(x).subgradient;
        const Vector fd = reftest::central_difference([&](const Vector& y) { return f(y).value; }, x, 1e-5);
        CHECK((g - fd).norm() <= 1e-6 * (1.0 + g.norm()));
    }
    for (int t = 0; t < 100; ++t) {
        const Vector x = reftest::randn(gen, 50);
        const Vector y = reftest::randn(gen, 50);
        const Evaluation ex = f(x);
        const double fy = f(y).value;
        CHECK(fy >= linear_model(ex.value, ex.subgradient, x, y) - 1e-10 * (1.0 + fy));
    }
}

TEST_CASE("spectral norm estimate against a dense SVD") {
    for (Eigen::Index n : {20, 80, 200}) {
        const auto inst = gen_least_squares(n / 2 + 3, n, Distribution::Gaussian, static_cast<std::uint64_t>(n));
        const double est = spectral_norm_estimate(inst.A);
        const double ref = reftest::dense_sigma_max(inst.A);
        CHECK(std::abs(est - ref) <= 1e-4 * ref);
        CHECK(inst.L == doctest::Approx(2.0 * est * est).epsilon(1e-12));
    }
}

TEST_CASE("TV norm examples") {
    const ImageDims d{3, 4};
    CHECK(tv_norm(Vector::Constant(12, 0.4), d) == 0.0);
    Vector u(4);
    u << 0.0, 1.0, 0.0, 1.0;
    CHECK(tv_norm(u, {2, 2}) == doctest::Approx(reftest::naive_tv_norm(u, 2, 2)));
    CHECK(tv_norm(u, {2, 2}) == doctest::Approx(2.0));
    std::mt19937_64 gen(4);
    for (int t = 0; t < 20; ++t) {
        const Vector v = reftest::randn(gen, 12);
        CHECK(tv_norm(v, d) == doctest::Approx(reftest::naive_tv_norm(v, 3, 4)).epsilon(1e-13));
        CHECK(tv_norm(-2.5 * v, d) == doctest::Approx(2.5 * tv_norm(v, d)).epsilon(1e-13));
    }
}

TEST_CASE("difference operator and its adjoint") {
    const ImageDims d{5, 7};
    std::mt19937_64 gen(6);
    for (int t = 0; t < 20; ++t) {
        const Vector u = reftest::randn(gen, 35);
        const Vector p = reftest::randn(gen, 70);
        const double lhs = tv_gradient(u, d).dot(p);
        const double rhs = u.dot(tv_gradient_adjoint(p, d));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + 1.0));
    }
    const Vector du = tv_gradient(Vector::LinSpaced(35, 0.0, 34.0), d);
    CHECK(du(0) == doctest::Approx(1.0));
    CHECK(du(1) == doctest::Approx(7.0));
    CHECK(du(2 * 6) == 0.0);
    CHECK(du(2 * 34 + 1) == 0.0);
}

TEST_CASE("phantom matches the stored asset") {
    const ImageDims d{16, 16};
    const Vector img = phantom(d);
    CHECK(img.minCoeff() >= 0.0);
    CHECK(img.maxCoeff() <= 1.0);
    std::ifstream in(std::string(LEVELFORGE_TEST_DATA) + "/phantom_16x16.pgm");
    REQUIRE(in);
    ImageDims read{};
    const Vector golden = read_pgm(in, read);
    CHECK(read.height == 16);
    CHECK(read.width == 16);
    CHECK((golden - img).lpNorm<Eigen::Infinity>() <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("TV instance and structured objective") {
    const TVInstance inst = gen_tv({8, 8}, 40, 0.1, 0.01, 2);
    CHECK(inst.A.rows() == 40);
    CHECK(inst.A.cols() == 64);
    CHECK(inst.u_true == phantom({8, 8}));
    const StructuredObjective obj = tv_structured_objective(inst);
    CHECK(obj.dual_diameter.value() == doctest::Approx(32.0));
    CHECK(obj.sigma_v == 1.0);
    CHECK(obj.smooth_lipschitz.value() == doctest::Approx(std::pow(reftest::dense_sigma_max(inst.A), 2)).epsilon(1e-4));
    std::mt19937_64 gen(3);
    const Vector u = reftest::randn(gen, 64);
    CHECK(tv_objective(inst, u) == doctest::Approx(true_objective(obj, u)).epsilon(1e-13));
    CHECK(tv_objective(inst, u) ==
          doctest::Approx(0.5 * (inst.A * u - inst.b).squaredNorm() + 0.1 * reftest::naive_tv_norm(u, 8, 8)));
    const FirstOrderOracle sub = tv_subgradient_oracle(inst, 0.2);
    CHECK(sub(u).value == doctest::Approx(tv_objective(inst, u, 0.2)));
    for (int t = 0; t < 50; ++t) {
        const Vector y = reftest::randn(gen, 64);
        const Evaluation e = sub(u);
        CHECK(sub(y).value >= linear_model(e.value, e.subgradient, u, y) - 1e-10);
    }
    const TVInstance again = gen_tv({8, 8}, 40, 0.1, 0.01, 2);
    CHECK(again.A == inst.A);
    CHECK(again.b == inst.b);
}

TEST_CASE("FUSL improves the reconstruction of the 16x16 phantom") {
    const TVInstance inst = gen_tv({16, 16}, 160, 0.05, 0.01, 1);
    const StructuredObjective obj = tv_structured_objective(inst);
    SolveControl control;
    control.eps = 2e-2 * tv_objective(inst, Vector::Zero(256));
    double best_f = 1e300;
    double best_err = 1e300;
    std::vector<double> err_trace;
    SolverObserver obs;
    obs.on_iteration = [&](const IterationView& v) {
        if (v.f_best < best_f) {
            best_f = v.f_best;
            best_err = (v.x_best - inst.u_true).norm() / inst.u_true.norm();
        }
        err_trace.push_back(best_err);
    };
    const SolveResult r = fusl_solve(Ball(Vector::Zero(256), 16.0), Vector::Zero(256), *obj.dual_diameter, obj,
                                     control, {}, &obs);
    CHECK(r.status == SolveStatus::GapClosed);
    REQUIRE(err_trace.size() > 2);
    CHECK(err_trace.back() < 0.5);
    CHECK(err_trace.back() < err_trace.front());
}
