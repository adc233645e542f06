#include "polyshrink/estimators.hpp"

#include <cmath>
#include <string>

namespace polyshrink::estimators {

namespace {

void require_omega(double omega) {
    if (!(omega >= 0.0) || !(omega < 1.0)) {
        throw DomainViolation("omega must be in [0, 1), got " +
                              std::to_string(omega));
    }
}

// Dimension threshold per degree; these are the conditions under which the
// coefficient formulas are derived, so they are enforced at construction.
void require_dimension(int degree, int p) {
    static constexpr int kMinExclusive[] = {0, 2, 6, 10, 14};
    if (degree < 1 || degree > 4) {
        throw DomainViolation("degree must be in 1..4, got " +
                              std::to_string(degree));
    }
    if (p <= kMinExclusive[degree]) {
        if (degree == 1) {
            throw DimensionTooSmall("degree 1 (James-Stein) requires p >= 3, got p = " +
                                    std::to_string(p));
        }
        throw DimensionTooSmall("degree " + std::to_string(degree) +
                                " requires p > " +
                                std::to_string(kMinExclusive[degree]) +
                                ", got p = " + std::to_string(p));
    }
}

}  // namespace

const char* to_string(Convention conv) {
    return conv == Convention::Theorem ? "theorem" : "simulation";
}

ShrinkagePolynomial mle() { return {}; }

ShrinkagePolynomial james_stein(int p, double omega) {
    require_omega(omega);
    require_dimension(1, p);
    ShrinkagePolynomial est;
    est.omega = omega;
    est.dimension = p;
    est.coeffs = {-(1.0 - omega) * (p - 2)};
    return est;
}

ShrinkagePolynomial poly(int degree, int p, double omega, Convention conv) {
    require_omega(omega);
    require_dimension(degree, p);
    const double w = 1.0 - omega;
    const double factor = conv == Convention::Theorem ? 2.0 : 1.0;
    ShrinkagePolynomial est;
    est.omega = omega;
    est.dimension = p;
    est.coeffs.push_back(-w * (p - 2));
    if (degree >= 2) {
        est.coeffs.push_back(factor * w * (p - 6));
    }
    if (degree >= 3) {
        est.coeffs.push_back(factor * w * (p - 10.0) * (p - 10.0));
    }
    if (degree >= 4) {
        est.coeffs.push_back(2.0 * w * (static_cast<double>(p) * p - 28.0 * p + 188.0) *
                             (p - 14));
    }
    return est;
}

double shrinkage_factor(const ShrinkagePolynomial& est, double squared_norm) {
    if (est.coeffs.empty()) {
        return 1.0;
    }
    if (squared_norm == 0.0) {
        throw SingularObservation(
            "shrinkage estimator undefined at ||x||^2 = 0");
    }
    // Horner in 1/u: 1 + (g1 + (g2 + ...)/u)/u
    const double inv = 1.0 / squared_norm;
    double acc = 0.0;
    for (auto it = est.coeffs.rbegin(); it != est.coeffs.rend(); ++it) {
        acc = (acc + *it) * inv;
    }
    return 1.0 + acc;
}

void estimate_into(const ShrinkagePolynomial& est, std::span<const double> x,
                   std::span<double> out) {
    if (out.size() != x.size()) {
        throw LengthMismatch("estimate_into: output length " +
                             std::to_string(out.size()) +
                             " != input length " + std::to_string(x.size()));
    }
    double squared_norm = 0.0;
    for (double xi : x) {
        squared_norm += xi * xi;
    }
    const double factor = shrinkage_factor(est, squared_norm);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = factor * x[i];
    }
}

std::vector<double> estimate(const ShrinkagePolynomial& est,
                             std::span<const double> x) {
    std::vector<double> out(x.size());
    estimate_into(est, x, out);
    return out;
}

}  // namespace polyshrink::estimators
