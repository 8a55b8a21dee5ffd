#include "levelforge/problems.hpp"

#include "levelforge/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace levelforge {

namespace {

enum Stream : std::uint64_t { kMatrix = 1, kDirection = 2, kRadius = 3, kNoise = 4 };

double sample(const CounterRng& rng, std::uint64_t counter, Distribution dist) {
    return dist == Distribution::Gaussian ? rng.normal(counter) : rng.uniform(counter);
}

Matrix sample_matrix(Eigen::Index m, Eigen::Index n, Distribution dist, std::uint64_t seed, double scale) {
    const CounterRng rng(seed, kMatrix);
    Matrix A(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(i, j) = scale * sample(rng, static_cast<std::uint64_t>(i * n + j), dist);
        }
    }
    return A;
}

Vector matvec(const Matrix& A, const Vector& x) {
    Vector out(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < A.cols(); ++j) s += A(i, j) * x(j);
        out(i) = s;
    }
    return out;
}

double sequential_norm(const Vector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i) * v(i);
    return std::sqrt(s);
}

}  // namespace

Distribution parse_distribution(const std::string& name) {
    if (name == "uniform" || name == "uniform01") return Distribution::Uniform01;
    if (name == "gaussian" || name == "normal") return Distribution::Gaussian;
    throw std::invalid_argument("unknown distribution '" + name + "' (expected uniform or gaussian)");
}

const char* to_string(Distribution d) { return d == Distribution::Gaussian ? "gaussian" : "uniform"; }

LeastSquaresInstance gen_least_squares(Eigen::Index m, Eigen::Index n, Distribution dist, std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("gen_least_squares: m and n must be positive");
    LeastSquaresInstance inst;
    inst.seed = seed;
    inst.dist = dist;
    inst.A = sample_matrix(m, n, dist, seed, 1.0);

    const CounterRng dir(seed, kDirection);
    Vector d(n);
    for (Eigen::Index j = 0; j < n; ++j) d(j) = dir.normal(static_cast<std::uint64_t>(j));
    const double u = CounterRng(seed, kRadius).uniform(0);
    const double radius = u > 0.0 ? portable_exp(portable_log(u) / static_cast<double>(n)) : 0.0;
    inst.x_true = d * (radius / sequential_norm(d));
    inst.b = matvec(inst.A, inst.x_true);
    const double smax = spectral_norm_estimate(inst.A);
    inst.L = 2.0 * smax * smax;
    return inst;
}

FirstOrderOracle ls_oracle(const LeastSquaresInstance& inst) {
    const LeastSquaresInstance* p = &inst;
    return FirstOrderOracle(inst.A.cols(), [p](const Vector& x) {
        const Vector r = p->A * x - p->b;
        return Evaluation{r.squaredNorm(), 2.0 * (p->A.transpose() * r)};
    });
}

double operator_norm_estimate(const std::function<Vector(const Vector&)>& apply,
                              const std::function<Vector(const Vector&)>& adjoint, Eigen::Index dim, int max_iter,
                              double tol) {
    Vector v = Vector::Ones(dim);
    const CounterRng rng(0x5eed, 7);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) += 0.1 * (rng.uniform(static_cast<std::uint64_t>(i)) - 0.5);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = adjoint(apply(v));
        const double next = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        v = w / wn;
        const bool converged = it > 0 && std::abs(next - lambda) <= tol * std::abs(next);
        lambda = next;
        if (converged) break;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

double spectral_norm_estimate(const Matrix& A, int max_iter, double tol) {
    return operator_norm_estimate([&](const Vector& x) -> Vector { return A * x; },
                                  [&](const Vector& y) -> Vector { return A.transpose() * y; }, A.cols(), max_iter,
                                  tol);
}

Vector tv_gradient(const Vector& u, ImageDims dims) {
    if (u.size() != dims.pixels()) throw DimensionMismatch("tv_gradient: image size does not match dims");
    const int h = dims.height;
    const int w = dims.width;
    Vector p = Vector::Zero(2 * dims.pixels());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const Eigen::Index i = static_cast<Eigen::Index>(r) * w + c;
            if (c + 1 < w) p(2 * i) = u(i + 1) - u(i);
            if (r + 1 < h) p(2 * i + 1) = u(i + w) - u(i);
        }
    }
    return p;
}

Vector tv_gradient_adjoint(const Vector& p, ImageDims dims) {
    if (p.size() != 2 * dims.pixels()) throw DimensionMismatch("tv_gradient_adjoint: field size does not match dims");
    const int h = dims.height;
    const int w = dims.width;
    Vector u = Vector::Zero(dims.pixels());
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const Eigen::Index i = static_cast<Eigen::Index>(r) * w + c;
            if (c + 1 < w) {
                u(i + 1) += p(2 * i);
                u(i) -= p(2 * i);
            }
            if (r + 1 < h) {
                u(i + w) += p(2 * i + 1);
                u(i) -= p(2 * i + 1);
            }
        }
    }
    return u;
}

double tv_norm(const Vector& u, ImageDims dims) {
    const Vector p = tv_gradient(u, dims);
    double s = 0.0;
    for (Eigen::Index i = 0; i < dims.pixels(); ++i) s += std::hypot(p(2 * i), p(2 * i + 1));
    return s;
}

Vector phantom(ImageDims dims) {
    const int h = dims.height;
    const int w = dims.width;
    const int side = std::min(h, w);
    Vector u = Vector::Zero(dims.pixels());
    // Doubled pixel-centre coordinates keep every test in integers.
    auto in_disk = [](int r2, int c2, int cr2, int cc2, int rad2) {
        const long dr = r2 - cr2;
        const long dc = c2 - cc2;
        return dr * dr + dc * dc <= static_cast<long>(rad2) * rad2;
    };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int r2 = 2 * r + 1;
            const int c2 = 2 * c + 1;
            double v = 0.0;
            if (in_disk(r2, c2, h, w, (4 * side) / 5)) v = 0.6;
            if (r >= h / 4 && r < h / 2 && c >= w / 4 && c < w / 2) v = 0.2;
            if (in_disk(r2, c2, (6 * h) / 5, (6 * w) / 5, side / 4)) v = 1.0;
            if (r >= (5 * h) / 8 && r < (3 * h) / 4 && c >= w / 4 && c < (3 * w) / 8) v = 0.9;
            u(static_cast<Eigen::Index>(r) * w + c) = v;
        }
    }
    return u;
}

TVInstance gen_tv(ImageDims dims, Eigen::Index m, double lambda_tv, double sigma, std::uint64_t seed,
                  Distribution dist) {
    if (dims.height < 1 || dims.width < 1 || m < 1) throw std::invalid_argument("gen_tv: sizes must be positive");
    if (!(lambda_tv >= 0.0)) throw std::invalid_argument("gen_tv: lambda_tv must be nonnegative");
    if (sigma < 0.0) throw std::invalid_argument("gen_tv: sigma must be nonnegative");
    TVInstance inst;
    inst.dims = dims;
    inst.lambda_tv = lambda_tv;
    inst.sigma_noise = sigma;
    inst.seed = seed;
    inst.u_true = phantom(dims);
    inst.A = sample_matrix(m, dims.pixels(), dist, seed, 1.0 / std::sqrt(static_cast<double>(m)));
    inst.b = matvec(inst.A, inst.u_true);
    const CounterRng noise(seed, kNoise);
    for (Eigen::Index i = 0; i < m; ++i) inst.b(i) += sigma * noise.normal(static_cast<std::uint64_t>(i));
    return inst;
}

double tv_objective(const TVInstance& inst, const Vector& u, double mu) {
    return 0.5 * (inst.A * u - inst.b).squaredNorm() + 0.5 * mu * u.squaredNorm() +
           inst.lambda_tv * tv_norm(u, inst.dims);
}

StructuredObjective tv_structured_objective(const TVInstance& inst, double mu) {
    const TVInstance* p = &inst;
    const Eigen::Index n = inst.dims.pixels();
    StructuredObjective obj;
    obj.smooth_part = FirstOrderOracle(n, [p, mu](const Vector& u) {
        const Vector r = p->A * u - p->b;
        return Evaluation{0.5 * r.squaredNorm() + 0.5 * mu * u.squaredNorm(), p->A.transpose() * r + mu * u};
    });
    obj.apply = [p](const Vector& u) -> Vector { return p->lambda_tv * tv_gradient(u, p->dims); };
    obj.apply_adjoint = [p](const Vector& y) -> Vector { return p->lambda_tv * tv_gradient_adjoint(y, p->dims); };
    obj.dual_prox = [n](const Vector& w, double eta) {
        DualProxResult out;
        out.y = Vector::Zero(w.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = w(2 * i);
            const double b = w(2 * i + 1);
            const double norm = std::hypot(a, b);
            const double scale = 1.0 / std::max(eta, norm);
            const double ya = a * scale;
            const double yb = b * scale;
            out.y(2 * i) = ya;
            out.y(2 * i + 1) = yb;
            const double half_sq = 0.5 * (ya * ya + yb * yb);
            out.value += a * ya + b * yb - eta * half_sq;
            out.bregman += half_sq;
        }
        return out;
    };
    obj.sigma_v = 1.0;
    obj.exact_F = [n](const Vector& w) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::hypot(w(2 * i), w(2 * i + 1));
        return s;
    };
    obj.dual_diameter = 0.5 * static_cast<double>(n);
    const double smax = spectral_norm_estimate(inst.A);
    obj.smooth_lipschitz = smax * smax + mu;
    obj.operator_norm = inst.lambda_tv * operator_norm_estimate(
                                             [p](const Vector& u) -> Vector { return tv_gradient(u, p->dims); },
                                             [p](const Vector& y) -> Vector { return tv_gradient_adjoint(y, p->dims); },
                                             n);
    return obj;
}

FirstOrderOracle tv_subgradient_oracle(const TVInstance& inst, double mu) {
    const TVInstance* p = &inst;
    return FirstOrderOracle(inst.dims.pixels(), [p, mu](const Vector& u) {
        const Vector r = p->A * u - p->b;
        const Vector du = tv_gradient(u, p->dims);
        Vector y = Vector::Zero(du.size());
        double tv = 0.0;
        for (Eigen::Index i = 0; i < p->dims.pixels(); ++i) {
            const double norm = std::hypot(du(2 * i), du(2 * i + 1));
            tv += norm;
            if (norm > 0.0) {
                y(2 * i) = du(2 * i) / norm;
                y(2 * i + 1) = du(2 * i + 1) / norm;
            }
        }
        Evaluation e;
        e.value = 0.5 * r.squaredNorm() + 0.5 * mu * u.squaredNorm() + p->lambda_tv * tv;
        e.subgradient = p->A.transpose() * r + mu * u + p->lambda_tv * tv_gradient_adjoint(y, p->dims);
        return e;
    });
}

}  // namespace levelforge
