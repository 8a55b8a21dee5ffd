#include "levelforge/cli.hpp"

#include "levelforge/audit.hpp"
#include "levelforge/baselines.hpp"
#include "levelforge/fapl.hpp"
#include "levelforge/fusl.hpp"
#include "levelforge/io.hpp"
#include "levelforge/problems.hpp"
#include "levelforge/strongly_convex.hpp"
#include "levelforge/unconstrained.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace levelforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Outcome {
    Vector x;
    bool success = false;
    std::string status;
    double ub = 0.0;
    double lb = -INFINITY;
    std::int64_t iterations = 0;
    int phases = 0;
    int doublings = 0;
    CallCounts calls;
    ConvergenceTrace trace;
    json extra = json::object();
};

LevelOptions level_options(const RunConfig& cfg) {
    LevelOptions opts;
    opts.beta = cfg.beta;
    opts.theta = cfg.theta;
    if (cfg.memory_depth < 1) throw ConfigError("--memory-depth must be at least 1");
    opts.memory_depth = static_cast<std::size_t>(cfg.memory_depth);
    opts.projection.max_constraints = std::max<std::size_t>(opts.projection.max_constraints, opts.memory_depth + 2);
    if (cfg.stepsize == "polynomial") {
        opts.rule.scheme = StepsizeScheme::Polynomial;
    } else if (cfg.stepsize == "recursive") {
        opts.rule.scheme = StepsizeScheme::Recursive;
    } else {
        throw ConfigError("unknown stepsize rule '" + cfg.stepsize + "'");
    }
    return opts;
}

SolveControl solve_control(const RunConfig& cfg, std::optional<double> known_optimum) {
    SolveControl c;
    c.eps = cfg.eps;
    c.max_iterations = cfg.max_iter;
    if (known_optimum) c.target_value = *known_optimum + cfg.eps;
    switch (cfg.lb_mode) {
        case LbMode::Zero: c.lower_bound = 0.0; break;
        case LbMode::MinusInfinity: break;
        case LbMode::Value: c.lower_bound = cfg.lb_value; break;
    }
    return c;
}

Outcome from_solve(SolveResult&& r) {
    Outcome o;
    o.success = r.status != SolveStatus::IterationBudget;
    o.status = to_string(r.status);
    o.ub = r.ub;
    o.lb = r.lb;
    o.iterations = r.iterations;
    o.phases = r.phases;
    o.doublings = r.doublings;
    o.calls = r.calls;
    o.x = std::move(r.x);
    o.trace = std::move(r.trace);
    if (r.d_final > 0.0) o.extra["d_final"] = r.d_final;
    return o;
}

double sc_lower_bound(const RunConfig& cfg) {
    if (cfg.lb_mode == LbMode::MinusInfinity) {
        throw ConfigError("strongly convex solvers need a finite lower bound (--lb zero or --lb value)");
    }
    return cfg.lb_mode == LbMode::Value ? cfg.lb_value : 0.0;
}

double require_mu(const RunConfig& cfg) {
    if (!cfg.mu || !(*cfg.mu > 0.0)) throw ConfigError("solver " + cfg.solver + " needs --mu > 0");
    return *cfg.mu;
}

Outcome run_unconstrained(const RunConfig& cfg, BallSolver solver, const FirstOrderOracle& oracle, Eigen::Index n,
                          std::optional<double> known_optimum) {
    UnconstrainedOptions uo;
    uo.eps_stop = cfg.eps;
    uo.known_optimum = known_optimum;
    UnconstrainedResult r = solve_unconstrained(solver, oracle, Vector::Zero(n), cfg.r0, uo);
    Outcome o;
    o.success = r.status != UnconstrainedStatus::RoundLimit;
    o.status = to_string(r.status);
    o.ub = r.value;
    o.iterations = r.inner_iterations;
    o.phases = static_cast<int>(r.commits.size());
    o.calls = r.calls;
    o.x = std::move(r.x);
    o.trace = std::move(r.trace);
    o.extra["expansions"] = r.expansions;
    o.extra["max_radius"] = r.radii.empty() ? cfg.r0 : *std::max_element(r.radii.begin(), r.radii.end());
    return o;
}

Outcome run_least_squares(const RunConfig& cfg) {
    if (cfg.m < 1 || cfg.n < 1) throw ConfigError("--m and --n must be positive");
    const LeastSquaresInstance inst = gen_least_squares(cfg.m, cfg.n, parse_distribution(cfg.dist), cfg.seed);
    const FirstOrderOracle f = ls_oracle(inst);
    const LevelOptions opts = level_options(cfg);
    const Eigen::Index n = inst.A.cols();
    const Ball ball(Vector::Zero(n), cfg.radius.value_or(1.0));
    const SolveControl control = solve_control(cfg, 0.0);

    Outcome o;
    if (cfg.solver == "fapl") {
        o = from_solve(fapl_solve(ball, ball.center, f, control, opts));
    } else if (cfg.solver == "fapl-sc") {
        const StrongConvexityInfo sc(require_mu(cfg), sc_lower_bound(cfg));
        o = from_solve(fapl_sc_solve(Vector::Zero(n), sc, f, control, opts));
    } else if (cfg.solver == "unconstrained") {
        if (cfg.inner != "fapl") throw ConfigError("least squares supports only --inner fapl");
        o = run_unconstrained(cfg, make_fapl_ball_solver(f, opts), f, n, 0.0);
    } else if (cfg.solver == "nest") {
        NestConfig nc;
        nc.lipschitz = inst.L;
        nc.max_iter = cfg.max_iter >= 0 ? cfg.max_iter : 10000;
        nc.target = cfg.eps;
        NestResult r = nest_solve(f, ball, nc);
        o.success = r.target_reached;
        o.status = r.target_reached ? "target_reached" : "iteration_budget";
        o.ub = r.value;
        o.iterations = r.iterations;
        o.calls = r.calls;
        o.x = std::move(r.x);
        o.trace = std::move(r.trace);
    } else if (cfg.solver == "fusl" || cfg.solver == "fusl-sc") {
        throw ConfigError("solver " + cfg.solver + " needs a structured objective (--problem tv)");
    } else {
        throw ConfigError("unknown solver '" + cfg.solver + "'");
    }
    o.extra["accuracy"] = (inst.A * o.x - inst.b).squaredNorm();
    o.extra["L"] = inst.L;
    return o;
}

Outcome run_tv(const RunConfig& cfg, const fs::path& pgm_path) {
    if (cfg.height < 1 || cfg.width < 1 || cfg.m < 1) throw ConfigError("--height, --width and --m must be positive");
    const TVInstance inst =
        gen_tv({cfg.height, cfg.width}, cfg.m, cfg.lambda_tv, cfg.sigma, cfg.seed, parse_distribution(cfg.dist));
    const double mu = (cfg.solver == "fapl-sc" || cfg.solver == "fusl-sc") ? require_mu(cfg) : 0.0;
    const StructuredObjective obj = tv_structured_objective(inst, mu);
    const FirstOrderOracle sub = tv_subgradient_oracle(inst, mu);
    const LevelOptions opts = level_options(cfg);
    const Eigen::Index n = inst.dims.pixels();
    const Ball ball(Vector::Zero(n), cfg.radius.value_or(std::sqrt(static_cast<double>(n))));
    const SolveControl control = solve_control(cfg, std::nullopt);
    const double d1 = cfg.d1.value_or(*obj.dual_diameter);
    if (!(d1 > 0.0)) throw ConfigError("--d1 must be positive");

    Outcome o;
    if (cfg.solver == "fusl") {
        o = from_solve(fusl_solve(ball, ball.center, d1, obj, control, opts));
    } else if (cfg.solver == "fapl") {
        o = from_solve(fapl_solve(ball, ball.center, sub, control, opts));
    } else if (cfg.solver == "fusl-sc") {
        o = from_solve(fusl_sc_solve(Vector::Zero(n), StrongConvexityInfo(mu, sc_lower_bound(cfg)), d1, obj, control,
                                     opts));
    } else if (cfg.solver == "fapl-sc") {
        o = from_solve(fapl_sc_solve(Vector::Zero(n), StrongConvexityInfo(mu, sc_lower_bound(cfg)), sub, control,
                                     opts));
    } else if (cfg.solver == "unconstrained") {
        BallSolver bs;
        if (cfg.inner == "fapl") {
            bs = make_fapl_ball_solver(sub, opts);
        } else if (cfg.inner == "fusl") {
            bs = make_fusl_ball_solver(obj, d1, opts);
        } else {
            throw ConfigError("unknown inner solver '" + cfg.inner + "'");
        }
        o = run_unconstrained(cfg, bs, sub, n, std::nullopt);
    } else if (cfg.solver == "nest") {
        throw ConfigError("nest needs a smooth objective (--problem ls)");
    } else {
        throw ConfigError("unknown solver '" + cfg.solver + "'");
    }
    o.extra["objective"] = tv_objective(inst, o.x, mu);
    o.extra["relative_error"] = (o.x - inst.u_true).norm() / inst.u_true.norm();
    std::ofstream pgm(pgm_path);
    write_pgm(pgm, o.x, inst.dims);
    o.extra["reconstruction"] = pgm_path.filename().string();
    return o;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["problem"] = cfg.problem;
    j["dist"] = cfg.dist;
    j["m"] = cfg.m;
    j["seed"] = cfg.seed;
    if (cfg.problem == "tv") {
        j["height"] = cfg.height;
        j["width"] = cfg.width;
        j["lambda_tv"] = cfg.lambda_tv;
        j["sigma"] = cfg.sigma;
    } else {
        j["n"] = cfg.n;
    }
    j["solver"] = cfg.solver;
    if (cfg.solver == "unconstrained") {
        j["inner"] = cfg.inner;
        j["r0"] = cfg.r0;
    }
    j["stepsize"] = cfg.stepsize;
    j["beta"] = cfg.beta;
    j["theta"] = cfg.theta;
    j["memory_depth"] = cfg.memory_depth;
    j["eps"] = cfg.eps;
    j["lb"] = cfg.lb_mode == LbMode::Zero ? "zero" : cfg.lb_mode == LbMode::MinusInfinity ? "minus-infinity" : "value";
    if (cfg.lb_mode == LbMode::Value) j["lb_value"] = cfg.lb_value;
    if (cfg.d1) j["d1"] = *cfg.d1;
    if (cfg.mu) j["mu"] = *cfg.mu;
    if (cfg.radius) j["radius"] = *cfg.radius;
    j["max_iter"] = cfg.max_iter;
    return j;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ConfigError("--beta must lie in (0, 1)");
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) throw ConfigError("--theta must lie in (0, 1)");
    if (!(cfg.eps > 0.0)) throw ConfigError("--eps must be positive");
    if (!(cfg.r0 > 0.0)) throw ConfigError("--r0 must be positive");
    if (cfg.radius && !(*cfg.radius > 0.0)) throw ConfigError("--radius must be positive");
    if (cfg.problem != "ls" && cfg.problem != "tv") throw ConfigError("unknown problem '" + cfg.problem + "'");
}

void add_problem_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--problem", cfg.problem, "ls or tv")->capture_default_str();
    app.add_option("--dist", cfg.dist, "uniform or gaussian")->capture_default_str();
    app.add_option("--m", cfg.m, "rows of A")->capture_default_str();
    app.add_option("--n", cfg.n, "columns of A (ls)")->capture_default_str();
    app.add_option("--seed", cfg.seed, "instance seed (LEVELFORGE_SEED overrides)")->capture_default_str();
    app.add_option("--height", cfg.height, "image height (tv)")->capture_default_str();
    app.add_option("--width", cfg.width, "image width (tv)")->capture_default_str();
    app.add_option("--lambda-tv", cfg.lambda_tv, "TV weight")->capture_default_str();
    app.add_option("--sigma", cfg.sigma, "measurement noise (tv)")->capture_default_str();
    app.add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
}

void add_solver_options(CLI::App& app, RunConfig& cfg, std::string& lb) {
    app.add_option("--solver", cfg.solver, "fapl, fusl, fapl-sc, fusl-sc, unconstrained or nest")
        ->capture_default_str();
    app.add_option("--inner", cfg.inner, "ball solver for --solver unconstrained: fapl or fusl")
        ->capture_default_str();
    app.add_option("--stepsize", cfg.stepsize, "polynomial or recursive")->capture_default_str();
    app.add_option("--beta", cfg.beta)->capture_default_str();
    app.add_option("--theta", cfg.theta)->capture_default_str();
    app.add_option("--memory-depth", cfg.memory_depth, "level cuts kept in the localizer")->capture_default_str();
    app.add_option("--eps", cfg.eps, "target gap / accuracy")->capture_default_str();
    app.add_option("--lb", lb, "zero, minus-infinity or a number")->capture_default_str();
    app.add_option("--d1", cfg.d1, "initial estimate of the dual diameter (default: exact value)");
    app.add_option("--mu", cfg.mu, "strong convexity modulus");
    app.add_option("--r0", cfg.r0, "initial radius of the unconstrained wrapper")->capture_default_str();
    app.add_option("--radius", cfg.radius, "ball radius (default 1 for ls, sqrt(N) for tv)");
    app.add_option("--max-iter", cfg.max_iter, "iteration budget, -1 for none")->capture_default_str();
    app.add_option("--tag", cfg.tag, "prefix for output file names");
    app.add_flag("!--no-timing", cfg.timing, "write 0 in the ns column of the trace");
}

void apply_lb(RunConfig& cfg, const std::string& lb) {
    if (lb == "zero") {
        cfg.lb_mode = LbMode::Zero;
    } else if (lb == "minus-infinity") {
        cfg.lb_mode = LbMode::MinusInfinity;
    } else {
        cfg.lb_mode = LbMode::Value;
        try {
            std::size_t used = 0;
            cfg.lb_value = std::stod(lb, &used);
            if (used != lb.size()) throw std::invalid_argument(lb);
        } catch (const std::exception&) {
            throw ConfigError("--lb must be zero, minus-infinity or a number, got '" + lb + "'");
        }
    }
}

void apply_env_seed(RunConfig& cfg) {
    if (const char* s = std::getenv("LEVELFORGE_SEED")) {
        try {
            cfg.seed = std::stoull(s);
        } catch (const std::exception&) {
            throw ConfigError(std::string("LEVELFORGE_SEED is not an unsigned integer: ") + s);
        }
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("bad list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

int run_sweep(const RunConfig& base, const std::string& betas, const std::string& thetas, const std::string& depths,
              int jobs, std::ostream& log) {
    std::vector<RunConfig> configs;
    for (double b : parse_list(betas)) {
        for (double t : parse_list(thetas)) {
            for (double d : parse_list(depths)) {
                RunConfig c = base;
                c.beta = b;
                c.theta = t;
                c.memory_depth = static_cast<int>(d);
                c.tag = base.tag + "b" + fmt_num(b) + "_t" + fmt_num(t) + "_m" + std::to_string(c.memory_depth) + "_";
                configs.push_back(c);
            }
        }
    }
    std::vector<int> codes(configs.size(), 0);
    std::vector<std::string> logs(configs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            std::ostringstream os;
            codes[i] = run_benchmark(configs[i], os);
            logs[i] = os.str();
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int worst = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        log << logs[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

int run_generate(const RunConfig& cfg, const std::string& format, std::ostream& log) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const bool mm = format == "mm";
    if (!mm && format != "lvlf") throw ConfigError("--format must be lvlf or mm");
    auto save = [&](const std::string& stem, const Matrix& mat) {
        const fs::path p = dir / (cfg.tag + stem + (mm ? ".mtx" : ".lvlf"));
        std::ofstream os(p, std::ios::binary);
        if (mm) {
            write_matrix_market(os, mat);
        } else {
            write_lvlf(os, mat);
        }
        log << "wrote " << p.string() << '\n';
    };
    if (cfg.problem == "ls") {
        const LeastSquaresInstance inst = gen_least_squares(cfg.m, cfg.n, parse_distribution(cfg.dist), cfg.seed);
        save("A", inst.A);
        save("b", inst.b);
        save("x_true", inst.x_true);
    } else if (cfg.problem == "tv") {
        const TVInstance inst =
            gen_tv({cfg.height, cfg.width}, cfg.m, cfg.lambda_tv, cfg.sigma, cfg.seed, parse_distribution(cfg.dist));
        save("A", inst.A);
        save("b", inst.b);
        save("u_true", inst.u_true);
        const fs::path p = dir / (cfg.tag + "phantom.pgm");
        std::ofstream os(p);
        write_pgm(os, inst.u_true, inst.dims);
        log << "wrote " << p.string() << '\n';
    } else {
        throw ConfigError("unknown problem '" + cfg.problem + "'");
    }
    return 0;
}

}  // namespace

LbMode parse_lb_mode(const std::string& name) {
    if (name == "zero") return LbMode::Zero;
    if (name == "minus-infinity") return LbMode::MinusInfinity;
    if (name == "value") return LbMode::Value;
    throw std::invalid_argument("unknown lb mode '" + name + "'");
}

int run_benchmark(const RunConfig& cfg, std::ostream& log) {
    try {
        validate(cfg);
        const fs::path dir(cfg.out_dir);
        fs::create_directories(dir);
        Stopwatch clock;
        Outcome o = cfg.problem == "ls" ? run_least_squares(cfg) : run_tv(cfg, dir / (cfg.tag + "reconstruction.pgm"));
        const double wall = static_cast<double>(clock.elapsed_ns()) * 1e-9;

        std::ofstream trace(dir / (cfg.tag + "trace.csv"));
        o.trace.write_csv(trace, cfg.timing);

        json s;
        s["config"] = config_json(cfg);
        s["status"] = o.status;
        s["success"] = o.success;
        s["iterations"] = o.iterations;
        s["phases"] = o.phases;
        s["ub"] = o.ub;
        s["lb"] = std::isfinite(o.lb) ? json(o.lb) : json(nullptr);
        s["gap"] = std::isfinite(o.lb) ? json(o.ub - o.lb) : json(nullptr);
        s["oracle_calls"] = {{"first_order", o.calls.first_order},
                             {"exact_value", o.calls.exact_value},
                             {"monitor", o.calls.monitor},
                             {"total", o.calls.total()}};
        if (cfg.solver == "fusl" || cfg.solver == "fusl-sc") s["doublings"] = o.doublings;
        s["wall_time_s"] = wall;
        for (auto& [k, v] : o.extra.items()) s[k] = v;
        std::ofstream summary(dir / (cfg.tag + "summary.json"));
        summary << s.dump(2) << '\n';

        if (!cfg.tag.empty()) log << "[" << cfg.tag << "] ";
        log << cfg.solver << " on " << cfg.problem << ": " << o.status << " after " << o.iterations
            << " iterations, ub=" << o.ub << '\n';
        return o.success ? 0 : 2;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"levelforge: accelerated bundle-level solvers and benchmark harness"};
    app.require_subcommand(1);

    RunConfig solve_cfg;
    std::string solve_lb = "zero";
    CLI::App* solve = app.add_subcommand("solve", "run one solver on one generated instance");
    add_problem_options(*solve, solve_cfg);
    add_solver_options(*solve, solve_cfg, solve_lb);

    RunConfig sweep_cfg;
    std::string sweep_lb = "zero";
    std::string betas = "0.3,0.5,0.7";
    std::string thetas = "0.3,0.5,0.7";
    std::string depths = "10";
    int jobs = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "grid over beta, theta and memory depth");
    add_problem_options(*sweep, sweep_cfg);
    add_solver_options(*sweep, sweep_cfg, sweep_lb);
    sweep->add_option("--betas", betas)->capture_default_str();
    sweep->add_option("--thetas", thetas)->capture_default_str();
    sweep->add_option("--memory-depths", depths)->capture_default_str();
    sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    RunConfig gen_cfg;
    std::string format = "lvlf";
    CLI::App* gen = app.add_subcommand("generate", "write a generated instance to disk");
    add_problem_options(*gen, gen_cfg);
    gen->add_option("--format", format, "lvlf or mm")->capture_default_str();

    std::string suite = "invariants";
    std::uint64_t audit_seed = 1;
    CLI::App* audit = app.add_subcommand("audit", "run the invariant property suite");
    audit->add_option("--suite", suite)->capture_default_str();
    audit->add_option("--seed", audit_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) {
            apply_lb(solve_cfg, solve_lb);
            apply_env_seed(solve_cfg);
            return run_benchmark(solve_cfg, std::cout);
        }
        if (sweep->parsed()) {
            apply_lb(sweep_cfg, sweep_lb);
            apply_env_seed(sweep_cfg);
            return run_sweep(sweep_cfg, betas, thetas, depths, jobs, std::cout);
        }
        if (gen->parsed()) {
            apply_env_seed(gen_cfg);
            return run_generate(gen_cfg, format, std::cout);
        }
        if (audit->parsed()) {
            if (suite != "invariants") throw ConfigError("unknown suite '" + suite + "'");
            if (const char* s = std::getenv("LEVELFORGE_SEED")) audit_seed = std::stoull(s);
            bool all = true;
            for (const AuditCheck& c : run_invariant_audit(audit_seed)) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
                if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
                std::cout << '\n';
                all = all && c.passed;
            }
            return all ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace levelforge
