#include "polyshrink/ncx2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace polyshrink::ncx2 {

namespace {

// Sums sum_{k>=0} Poisson(k; lambda/2) * factor(k) for strictly positive
// factors. Poisson weights are carried in log space so large-lambda runs
// cannot underflow before the mass region is reached. Termination needs two
// things: k past the coverage window max(lambda, 20) + 40 sqrt(max(lambda, 1))
// and a geometric tail bound below rel_tol times the partial sum. The bound
// uses step_bound(k) >= factor(j+1)/factor(j) for all j >= k.
template <typename FactorFn, typename StepBoundFn>
double poisson_mixture_sum(double lambda, const SeriesControl& ctrl,
                           FactorFn factor, StepBoundFn step_bound,
                           const char* what) {
    ctrl.validate();
    if (lambda == 0.0) {
        return factor(0);  // degenerate Poisson: all mass at k = 0
    }
    const double half = 0.5 * lambda;
    const double log_half = std::log(half);
    const double window =
        std::max(lambda, 20.0) + 40.0 * std::sqrt(std::max(lambda, 1.0));
    double log_weight = -half;
    double sum = 0.0;
    for (int k = 0; k < ctrl.max_terms; ++k) {
        if (k > 0) {
            log_weight += log_half - std::log(static_cast<double>(k));
        }
        const double term = std::exp(log_weight) * factor(k);
        sum += term;
        if (k >= window) {
            const double rho =
                (half / (k + 1)) * std::max(1.0, step_bound(k));
            if (rho < 1.0 && term * rho <= ctrl.rel_tol * sum * (1.0 - rho)) {
                return sum;
            }
        }
    }
    throw TruncationFailure(std::string(what) + ": series did not meet rel_tol " +
                            std::to_string(ctrl.rel_tol) + " within " +
                            std::to_string(ctrl.max_terms) + " terms");
}

}  // namespace

NoncentralChiSquare::NoncentralChiSquare(int dof_, double lambda_)
    : dof(dof_), lambda(lambda_) {
    if (dof < 1) {
        throw DomainViolation("NoncentralChiSquare: dof must be >= 1, got " +
                              std::to_string(dof));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainViolation("NoncentralChiSquare: lambda must be finite and >= 0");
    }
}

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
        throw DomainViolation("SeriesControl: rel_tol must be in (0, 1)");
    }
    if (max_terms < 1) {
        throw DomainViolation("SeriesControl: max_terms must be >= 1");
    }
}

double moment(const NoncentralChiSquare& dist, double v,
              const SeriesControl& ctrl) {
    const double half_p = 0.5 * dist.dof;
    if (!(half_p + v > 0.0)) {
        throw NonIntegrable("moment: requires p/2 + v > 0, got p = " +
                            std::to_string(dist.dof) +
                            ", v = " + std::to_string(v));
    }
    const double vlog2 = v * std::numbers::ln2;
    auto factor = [&](int k) {
        return std::exp(vlog2 + std::lgamma(half_p + k + v) -
                        std::lgamma(half_p + k));
    };
    auto step_bound = [&](int k) { return (half_p + k + v) / (half_p + k); };
    return poisson_mixture_sum(dist.lambda, ctrl, factor, step_bound, "moment");
}

double inverse_moment(const NoncentralChiSquare& dist, int m,
                      const SeriesControl& ctrl) {
    if (m < 1) {
        throw DomainViolation("inverse_moment: m must be >= 1");
    }
    if (dist.dof <= 2 * m) {
        throw NonIntegrable("inverse_moment: E[U^-" + std::to_string(m) +
                            "] requires p > " + std::to_string(2 * m) +
                            ", got p = " + std::to_string(dist.dof));
    }
    const int p = dist.dof;
    auto factor = [&](int k) {
        double f = 1.0;
        for (int j = 1; j <= m; ++j) {
            f /= static_cast<double>(p + 2 * k - 2 * j);
        }
        return f;
    };
    auto step_bound = [](int) { return 1.0; };  // factors decrease in k
    return poisson_mixture_sum(dist.lambda, ctrl, factor, step_bound,
                               "inverse_moment");
}

double moment_derivative(const NoncentralChiSquare& dist, double v,
                         const SeriesControl& ctrl) {
    const double half_p = 0.5 * dist.dof;
    if (!(half_p + v > 0.0)) {
        throw NonIntegrable("moment_derivative: requires p/2 + v > 0, got p = " +
                            std::to_string(dist.dof) +
                            ", v = " + std::to_string(v));
    }
    if (v == 0.0) {
        return 0.0;  // E[U^0] is constant in lambda
    }
    const double scale_log = (v - 1.0) * std::numbers::ln2;
    auto factor = [&](int k) {
        return std::exp(scale_log + std::lgamma(half_p + v + k) -
                        std::lgamma(half_p + 1.0 + k));
    };
    auto step_bound = [&](int k) {
        return (half_p + v + k) / (half_p + 1.0 + k);
    };
    return v * poisson_mixture_sum(dist.lambda, ctrl, factor, step_bound,
                                   "moment_derivative");
}

double moment_ratio(int p, double r, double s, double lambda,
                    const SeriesControl& ctrl) {
    if (!(-0.5 * p < s && s <= r && r < 0.0)) {
        throw DomainViolation("moment_ratio: requires -p/2 < s <= r < 0, got p = " +
                              std::to_string(p) + ", r = " + std::to_string(r) +
                              ", s = " + std::to_string(s));
    }
    const NoncentralChiSquare dist(p, lambda);
    return moment(dist, r, ctrl) / moment(dist, s, ctrl);
}

double sup_inverse_ratio(int p, double r) {
    if (p < 1) {
        throw DomainViolation("sup_inverse_ratio: p must be >= 1");
    }
    if (!(p > 2.0 * r - 2.0) || !(p > r)) {
        throw DomainViolation(
            "sup_inverse_ratio: requires p > 2r - 2 and p > r, got p = " +
            std::to_string(p) + ", r = " + std::to_string(r));
    }
    return std::exp(0.5 * (2.0 - r) * std::numbers::ln2 +
                    std::lgamma(0.5 * p - r + 1.0) -
                    std::lgamma(0.5 * (p - r)));
}

}  // namespace polyshrink::ncx2
