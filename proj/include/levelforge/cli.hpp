#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace levelforge {

enum class LbMode { Zero, MinusInfinity, Value };

struct RunConfig {
    std::string problem = "ls";
    std::string dist = "uniform";
    long m = 200;
    long n = 400;
    std::uint64_t seed = 1;
    int height = 16;
    int width = 16;
    double lambda_tv = 0.05;
    double sigma = 0.01;

    std::string solver = "fapl";
    std::string inner = "fapl";
    std::string stepsize = "polynomial";
    double beta = 0.5;
    double theta = 0.5;
    int memory_depth = 10;
    double eps = 1e-6;
    LbMode lb_mode = LbMode::Zero;
    double lb_value = 0.0;
    std::optional<double> d1;
    std::optional<double> mu;
    double r0 = 1.0;
    std::optional<double> radius;
    long long max_iter = -1;

    std::string out_dir = ".";
    std::string tag;
    bool timing = true;
};

[[nodiscard]] LbMode parse_lb_mode(const std::string& name);

/// Builds the instance, runs the solver and writes trace.csv, summary.json
/// and (for TV) reconstruction.pgm under out_dir, prefixed by tag.
/// Returns 0 when the target accuracy was reached, 2 when the iteration
/// budget ran out and 1 on configuration errors.
int run_benchmark(const RunConfig& cfg, std::ostream& log);

/// Entry point of the levelforge executable.
int run_cli(int argc, char** argv);

}  // namespace levelforge
