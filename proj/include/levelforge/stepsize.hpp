#pragma once

namespace levelforge {

enum class StepsizeScheme {
    Polynomial,  // alpha_k = 2 / (k + 1)
    Recursive,   // alpha_k^2 = (1 - alpha_k) gamma_{k-1}
};

/// Stepsize schedule for the accelerated level iterations.
struct StepsizeRule {
    StepsizeScheme scheme = StepsizeScheme::Polynomial;

    /// Constant c with gamma_k ||tau_k(rho)||_{2/(1-rho)} <= c k^{-(1+3rho)/2}.
    [[nodiscard]] double c(double rho) const;
};

/// Walks alpha_1, alpha_2, ... together with gamma_k.
class StepsizeSequence {
public:
    explicit StepsizeSequence(StepsizeRule rule) : rule_(rule) {}

    /// Advances to the next k and returns alpha_k.
    double next();

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double gamma() const { return gamma_; }

private:
    StepsizeRule rule_;
    int k_ = 0;
    double alpha_ = 0.0;
    double gamma_ = 1.0;
};

/// alpha_k for k >= 1.
[[nodiscard]] double stepsize(const StepsizeRule& rule, int k);

}  // namespace levelforge
