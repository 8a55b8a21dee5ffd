#pragma once

#include "levelforge/fusl.hpp"
#include "levelforge/oracle.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace levelforge {

enum class Distribution { Uniform01, Gaussian };

[[nodiscard]] Distribution parse_distribution(const std::string& name);
[[nodiscard]] const char* to_string(Distribution d);

/// ||A x - b||^2 over the unit ball with b = A x_true, so f* = 0.
struct LeastSquaresInstance {
    Matrix A;
    Vector b;
    Vector x_true;
    double L = 0.0;  // 2 sigma_max(A)^2
    std::uint64_t seed = 0;
    Distribution dist = Distribution::Uniform01;
};

[[nodiscard]] LeastSquaresInstance gen_least_squares(Eigen::Index m, Eigen::Index n, Distribution dist,
                                                     std::uint64_t seed);

/// value ||Ax - b||^2, gradient 2 A^T (Ax - b). The instance must outlive the oracle.
[[nodiscard]] FirstOrderOracle ls_oracle(const LeastSquaresInstance& inst);

/// Largest singular value of a linear map by power iteration on A^T A.
[[nodiscard]] double operator_norm_estimate(const std::function<Vector(const Vector&)>& apply,
                                            const std::function<Vector(const Vector&)>& adjoint, Eigen::Index dim,
                                            int max_iter = 100, double tol = 1e-6);
[[nodiscard]] double spectral_norm_estimate(const Matrix& A, int max_iter = 100, double tol = 1e-6);

struct ImageDims {
    int height = 0;
    int width = 0;

    [[nodiscard]] Eigen::Index pixels() const { return static_cast<Eigen::Index>(height) * width; }
};

/// Forward differences, row-major pixels. Entry 2i is the horizontal and
/// 2i+1 the vertical difference at pixel i; both are zero on the last
/// column / row respectively.
[[nodiscard]] Vector tv_gradient(const Vector& u, ImageDims dims);
[[nodiscard]] Vector tv_gradient_adjoint(const Vector& p, ImageDims dims);
/// Sum over pixels of ||D_i u||_2.
[[nodiscard]] double tv_norm(const Vector& u, ImageDims dims);

/// Piecewise-constant test image in [0, 1] built from integer geometry.
[[nodiscard]] Vector phantom(ImageDims dims);

struct TVInstance {
    Matrix A;  // m x N
    Vector b;
    Vector u_true;
    double lambda_tv = 0.0;
    ImageDims dims;
    double sigma_noise = 0.0;
    std::uint64_t seed = 0;
};

/// A with N(0, 1/m) entries (or U[0,1) / sqrt(m)), b = A u_true + sigma noise.
[[nodiscard]] TVInstance gen_tv(ImageDims dims, Eigen::Index m, double lambda_tv, double sigma, std::uint64_t seed,
                                Distribution dist = Distribution::Gaussian);

/// 1/2 ||Au - b||^2 + (mu/2) ||u||^2 + lambda_tv TV(u).
[[nodiscard]] double tv_objective(const TVInstance& inst, const Vector& u, double mu = 0.0);

/// Saddle form with fhat = 1/2 ||Au - b||^2 + (mu/2) ||u||^2, operator
/// lambda_tv D, Y a product of unit disks and v = 1/2 ||y||^2.
/// The instance must outlive the objective.
[[nodiscard]] StructuredObjective tv_structured_objective(const TVInstance& inst, double mu = 0.0);

/// Plain subgradient oracle of tv_objective.
[[nodiscard]] FirstOrderOracle tv_subgradient_oracle(const TVInstance& inst, double mu = 0.0);

}  // namespace levelforge
