#include "reference.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin() {
    const char* b = std::getenv("LEVELFORGE_BIN");
    REQUIRE_MESSAGE(b != nullptr, "LEVELFORGE_BIN is not set");
    return b;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("levelforge_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, std::string* out = nullptr) {
    return reftest::run_command(bin() + " " + args + " 2>&1", out);
}

json summary(const fs::path& dir, const std::string& tag = "") {
    return json::parse(reftest::read_file((dir / (tag + "summary.json")).string()));
}

}  // namespace

TEST_CASE("solve writes a trace and a summary") {
    const fs::path dir = scratch("solve");
    std::string out;
    CHECK(run("solve --m 20 --n 40 --eps 1e-6 --out-dir " + dir.string(), &out) == 0);
    CHECK(out.find("fapl on ls") != std::string::npos);
    const std::string trace = reftest::read_file((dir / "trace.csv").string());
    CHECK(trace.rfind("phase,iter,lb,ub,gap,fxu,oracle_calls,ns\n", 0) == 0);
    const json s = summary(dir);
    CHECK((s["status"] == "gap_closed" || s["status"] == "target_reached"));
    CHECK(s["success"] == true);
    CHECK(s["gap"].get<double>() <= 1e-6);
    CHECK(s["oracle_calls"]["total"].get<long>() > 0);
    CHECK(s["config"]["m"] == 20);
}

TEST_CASE("configuration errors exit with 1") {
    const fs::path dir = scratch("err");
    CHECK(run("solve --solver simplex --out-dir " + dir.string()) == 1);
    CHECK(run("solve --beta 1.5 --out-dir " + dir.string()) == 1);
    CHECK(run("solve --lb twelve --out-dir " + dir.string()) == 1);
    CHECK(run("solve --solver nest --problem tv --out-dir " + dir.string()) == 1);
    CHECK(run("frobnicate") == 1);
}

TEST_CASE("an exhausted budget exits with 2") {
    const fs::path dir = scratch("budget");
    CHECK(run("solve --m 20 --n 40 --eps 1e-12 --max-iter 5 --out-dir " + dir.string()) == 2);
    CHECK(summary(dir)["iterations"] == 5);
}

TEST_CASE("traces are byte-identical without timing") {
    const fs::path dir = scratch("repro");
    const std::string common = "solve --m 30 --n 60 --seed 4 --no-timing --out-dir " + dir.string();
    REQUIRE(run(common + " --tag a_") == 0);
    REQUIRE(run(common + " --tag b_") == 0);
    const std::string a = reftest::read_file((dir / "a_trace.csv").string());
    CHECK(!a.empty());
    CHECK(a == reftest::read_file((dir / "b_trace.csv").string()));
}

TEST_CASE("environment seed overrides the flag") {
    const fs::path dir = scratch("seed");
    REQUIRE(reftest::run_command("LEVELFORGE_SEED=9 " + bin() + " solve --m 10 --n 20 --seed 3 --out-dir " +
                                 dir.string() + " > /dev/null 2>&1") == 0);
    CHECK(summary(dir)["config"]["seed"] == 9);
}

TEST_CASE("both lower bound modes reach the target") {
    const fs::path dir = scratch("lb");
    const std::string common = "solve --m 40 --n 80 --eps 1e-6 --out-dir " + dir.string();
    CHECK(run(common + " --lb zero --tag z_") == 0);
    CHECK(run(common + " --lb minus-infinity --tag m_") == 0);
    CHECK(summary(dir, "z_")["ub"].get<double>() <= 1e-6);
    CHECK(summary(dir, "m_")["ub"].get<double>() <= 1e-6);
}

TEST_CASE("other solvers run from the command line") {
    const fs::path dir = scratch("solvers");
    CHECK(run("solve --solver nest --m 20 --n 40 --eps 1e-4 --tag n_ --out-dir " + dir.string()) == 0);
    CHECK(run("solve --solver unconstrained --m 20 --n 40 --eps 1e-4 --tag u_ --out-dir " + dir.string()) == 0);
    CHECK(run("solve --problem tv --solver fusl --height 6 --width 6 --m 20 --eps 1e-1 --tag t_ --out-dir " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "t_reconstruction.pgm"));
    CHECK(summary(dir, "t_").contains("doublings"));
}

TEST_CASE("sweep and generate") {
    const fs::path dir = scratch("sweep");
    CHECK(run("sweep --m 15 --n 30 --eps 1e-4 --betas 0.3,0.7 --thetas 0.5 --jobs 2 --out-dir " + dir.string()) == 0);
    CHECK(fs::exists(dir / "b0.3_t0.5_m10_summary.json"));
    CHECK(fs::exists(dir / "b0.7_t0.5_m10_trace.csv"));
    CHECK(run("generate --m 5 --n 7 --out-dir " + dir.string()) == 0);
    CHECK(fs::file_size(dir / "A.lvlf") == 22 + 35 * 8);
    CHECK(run("generate --m 5 --n 7 --format mm --out-dir " + dir.string()) == 0);
    CHECK(fs::exists(dir / "b.mtx"));
    CHECK(run("generate --format csv --out-dir " + dir.string()) == 1);
}

TEST_CASE("invariant audit passes") {
    std::string out;
    CHECK(run("audit --suite invariants", &out) == 0);
    CHECK(out.find("FAIL") == std::string::npos);
    CHECK(run("audit --suite nothing") == 1);
}
