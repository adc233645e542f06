#include "polyshrink/risk.hpp"

#include <cmath>
#include <string>

namespace polyshrink::risk {

using estimators::Convention;
using estimators::ShrinkagePolynomial;
using ncx2::NoncentralChiSquare;
using ncx2::SeriesControl;

namespace {

void require_omega(double omega) {
    if (!(omega >= 0.0) || !(omega < 1.0)) {
        throw DomainViolation("omega must be in [0, 1), got " +
                              std::to_string(omega));
    }
}

RiskReport make_report(double risk_value, Method method, int p, double lambda,
                       double omega, std::vector<double> coeffs,
                       std::optional<Convention> conv) {
    RiskReport report;
    report.risk = risk_value;
    report.ratio_to_mle = risk_value / ((1.0 - omega) * p);
    report.method = method;
    report.p = p;
    report.lambda = lambda;
    report.omega = omega;
    report.coeffs = std::move(coeffs);
    report.convention = conv;
    return report;
}

}  // namespace

const char* to_string(Method method) {
    switch (method) {
        case Method::ExactGeneral: return "exact_general";
        case Method::ExactChained: return "exact_chained";
        case Method::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

double balanced_loss(const BalancedLoss& loss, std::span<const double> delta,
                     std::span<const double> x, std::span<const double> theta) {
    require_omega(loss.omega);
    if (delta.size() != x.size() || x.size() != theta.size()) {
        throw LengthMismatch("balanced_loss: delta, x, theta lengths differ (" +
                             std::to_string(delta.size()) + ", " +
                             std::to_string(x.size()) + ", " +
                             std::to_string(theta.size()) + ")");
    }
    double to_target = 0.0;
    double to_truth = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        const double dx = delta[i] - x[i];
        const double dt = delta[i] - theta[i];
        to_target += dx * dx;
        to_truth += dt * dt;
    }
    return loss.omega * to_target + (1.0 - loss.omega) * to_truth;
}

double mle_risk(int p, double omega) {
    if (p < 1) {
        throw DomainViolation("mle_risk: p must be >= 1");
    }
    require_omega(omega);
    return (1.0 - omega) * p;
}

RiskReport exact_risk_general(const ShrinkagePolynomial& est, int p,
                              double lambda, const SeriesControl& ctrl) {
    require_omega(est.omega);
    const int degree = est.degree();
    const double omega = est.omega;
    if (degree == 0) {
        return make_report(mle_risk(p, omega), Method::ExactGeneral, p, lambda,
                           omega, {}, std::nullopt);
    }
    // Highest inverse moment is E[U^-(2M-1)], which needs p > 4M - 2.
    if (p <= 4 * degree - 2) {
        throw NonIntegrable("exact_risk_general: E[U^-" +
                            std::to_string(2 * degree - 1) + "] requires p > " +
                            std::to_string(4 * degree - 2) + ", got p = " +
                            std::to_string(p));
    }
    const NoncentralChiSquare dist(p, lambda);
    std::vector<double> inv(2 * degree);  // inv[m] = E[U^-m], m = 1..2M-1
    for (int m = 1; m <= 2 * degree - 1; ++m) {
        inv[m] = ncx2::inverse_moment(dist, m, ctrl);
    }
    double risk_value = (1.0 - omega) * p;
    for (int j = 1; j <= degree; ++j) {
        for (int k = 1; k <= degree; ++k) {
            risk_value += est.coeffs[j - 1] * est.coeffs[k - 1] * inv[j + k - 1];
        }
    }
    for (int m = 1; m <= degree; ++m) {
        risk_value += 2.0 * (1.0 - omega) * est.coeffs[m - 1] * (p - 2 * m) * inv[m];
    }
    return make_report(risk_value, Method::ExactGeneral, p, lambda, omega,
                       est.coeffs, std::nullopt);
}

RiskReport exact_risk_js(int p, double omega, double lambda,
                         const SeriesControl& ctrl) {
    require_omega(omega);
    if (p < 3) {
        throw DimensionTooSmall("exact_risk_js requires p >= 3, got p = " +
                                std::to_string(p));
    }
    const NoncentralChiSquare dist(p, lambda);
    const double e1 = ncx2::inverse_moment(dist, 1, ctrl);
    const double w = 1.0 - omega;
    const double risk_value =
        w * p - static_cast<double>(p - 2) * (p - 2) * w * w * e1;
    return make_report(risk_value, Method::ExactChained, p, lambda, omega,
                       {-w * (p - 2)}, std::nullopt);
}

RiskReport exact_risk_chained(int degree, int p, double omega, double lambda,
                              Convention conv, const SeriesControl& ctrl) {
    require_omega(omega);
    if (degree < 2 || degree > 4) {
        throw DomainViolation("exact_risk_chained: degree must be 2, 3 or 4");
    }
    if (conv == Convention::Simulation && degree >= 3) {
        throw ConventionUnsupported(
            "exact_risk_chained: the degree-" + std::to_string(degree) +
            " chain substitutes the theorem values of the lower-order "
            "coefficients; use exact_risk_general for simulation coefficients");
    }
    // Construction enforces the dimension thresholds p > 6 / 10 / 14.
    const ShrinkagePolynomial est = estimators::poly(degree, p, omega, conv);
    const NoncentralChiSquare dist(p, lambda);
    const double w = 1.0 - omega;

    std::vector<double> inv(2 * degree);
    for (int m = 1; m <= 2 * degree - 1; ++m) {
        inv[m] = ncx2::inverse_moment(dist, m, ctrl);
    }

    // degree 2, any b:   R_JS - 4b(1-w) E[U^-2] + b^2 E[U^-3]
    const double b = est.coeffs[1];
    double risk_value = exact_risk_js(p, omega, lambda, ctrl).risk -
                        4.0 * b * w * inv[2] + b * b * inv[3];
    if (degree >= 3) {
        // theorem c: + c^2 E[U^-5] + 4c(1-w)(p-6) E[U^-4] - 8c(1-w) E[U^-3]
        const double c = est.coeffs[2];
        risk_value += c * c * inv[5] + 4.0 * c * w * (p - 6) * inv[4] -
                      8.0 * c * w * inv[3];
    }
    if (degree >= 4) {
        // theorem d: + d^2 E[U^-7] + 4d(1-w)(p-10)^2 E[U^-6]
        //            + 4d(1-w)(p-6) E[U^-5] - 12d(1-w) E[U^-4]
        const double d = est.coeffs[3];
        risk_value += d * d * inv[7] +
                      4.0 * d * w * (p - 10.0) * (p - 10.0) * inv[6] +
                      4.0 * d * w * (p - 6) * inv[5] - 12.0 * d * w * inv[4];
    }
    RiskReport report = make_report(risk_value, Method::ExactChained, p, lambda,
                                    omega, est.coeffs, conv);
    return report;
}

double risk_ratio(const RiskReport& report) { return report.ratio_to_mle; }

}  // namespace polyshrink::risk
