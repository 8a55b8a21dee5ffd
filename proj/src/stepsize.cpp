#include "levelforge/stepsize.hpp"

#include <cmath>
#include <stdexcept>

namespace levelforge {

double StepsizeRule::c(double rho) const {
    if (scheme == StepsizeScheme::Polynomial) return std::pow(2.0, 1.0 + rho) * std::pow(3.0, -(1.0 - rho) / 2.0);
    return 4.0 / std::pow(3.0, (1.0 - rho) / 2.0);
}

double StepsizeSequence::next() {
    ++k_;
    if (k_ == 1) {
        alpha_ = 1.0;
        gamma_ = 1.0;
        return alpha_;
    }
    if (rule_.scheme == StepsizeScheme::Polynomial) {
        alpha_ = 2.0 / (k_ + 1.0);
        gamma_ *= (1.0 - alpha_);
    } else {
        // positive root of a^2 + gamma a - gamma = 0
        const double g = gamma_;
        alpha_ = 2.0 * g / (g + std::sqrt(g * g + 4.0 * g));
        gamma_ = alpha_ * alpha_;
    }
    return alpha_;
}

double stepsize(const StepsizeRule& rule, int k) {
    if (k < 1) throw std::invalid_argument("stepsize: k must be >= 1");
    if (rule.scheme == StepsizeScheme::Polynomial) return 2.0 / (k + 1.0);
    StepsizeSequence seq(rule);
    double a = 0.0;
    for (int i = 0; i < k; ++i) a = seq.next();
    return a;
}

}  // namespace levelforge
