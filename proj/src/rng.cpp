#include "levelforge/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levelforge {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kLn2 = 0.693147180559945309417232121458176568;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(mix(seed) ^ (stream * kGolden + 1))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter, std::uint64_t sub) const {
    return mix(mix(key_ ^ counter) ^ (sub * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

double CounterRng::uniform(std::uint64_t counter, std::uint64_t sub) const {
    return static_cast<double>(bits(counter, sub) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
    for (std::uint64_t attempt = 0;; ++attempt) {
        const double u = 2.0 * uniform(counter, 2 * attempt) - 1.0;
        const double v = 2.0 * uniform(counter, 2 * attempt + 1) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double t = -2.0 * portable_log(s) / s;
            return u * std::sqrt(t);
        }
    }
}

double portable_log(double x) {
    if (!(x > 0.0)) throw std::domain_error("portable_log: argument must be positive");
    if (x == std::numeric_limits<double>::infinity()) return x;
    int e = 0;
    double m = std::frexp(x, &e);  // m in [0.5, 1)
    if (m < 0.70710678118654752440) {
        m *= 2.0;
        --e;
    }
    // log(m) = 2 atanh(z), z = (m - 1) / (m + 1), |z| < 0.172
    const double z = (m - 1.0) / (m + 1.0);
    const double z2 = z * z;
    double term = z;
    double sum = 0.0;
    for (int k = 1; k < 60; k += 2) {
        const double add = term / k;
        sum += add;
        if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
        term *= z2;
    }
    return 2.0 * sum + e * kLn2;
}

double portable_exp(double x) {
    if (x > 709.0) return std::numeric_limits<double>::infinity();
    if (x < -745.0) return 0.0;
    const double kd = std::nearbyint(x / kLn2);
    const double r = x - kd * kLn2;  // |r| <= ln2 / 2
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= r / k;
        sum += term;
        if (std::fabs(term) < 1e-18 * sum) break;
    }
    return std::ldexp(sum, static_cast<int>(kd));
}

}  // namespace levelforge
