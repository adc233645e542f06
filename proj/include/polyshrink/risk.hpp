#pragma once

#include <optional>
#include <span>
#include <vector>

#include "polyshrink/estimators.hpp"
#include "polyshrink/ncx2.hpp"

namespace polyshrink::risk {

// L_w(delta, theta) = w ||delta - x||^2 + (1-w) ||delta - theta||^2,
// with the MLE x as the fixed target estimator.
struct BalancedLoss {
    double omega = 0.0;  // in [0, 1)
};

enum class Method { ExactGeneral, ExactChained, MonteCarlo };

const char* to_string(Method method);

struct RiskReport {
    double risk = 0.0;
    double ratio_to_mle = 0.0;  // risk / ((1-omega) p)
    Method method = Method::ExactGeneral;

    // inputs echo
    int p = 0;
    double lambda = 0.0;
    double omega = 0.0;
    std::vector<double> coeffs;
    std::optional<estimators::Convention> convention;

    std::optional<double> std_error;  // Monte Carlo only
};

double balanced_loss(const BalancedLoss& loss, std::span<const double> delta,
                     std::span<const double> x, std::span<const double> theta);

// Risk of the MLE: (1-omega) p.
double mle_risk(int p, double omega);

// Unified form for any coefficient vector:
//   R = (1-w)p + sum_{j,k} g_j g_k E[U^(1-j-k)]
//             + 2(1-w) sum_m g_m (p-2m) E[U^-m],
// U ~ NoncentralChiSquare(p, lambda). Requires p > 4M - 2 for degree M.
// The loss weight is the estimator's omega.
RiskReport exact_risk_general(const estimators::ShrinkagePolynomial& est, int p,
                              double lambda,
                              const ncx2::SeriesControl& ctrl = {});

// R = (1-w)p - (p-2)^2 (1-w)^2 E[1/(p-2+2K)], K ~ Poisson(lambda/2).
RiskReport exact_risk_js(int p, double omega, double lambda,
                         const ncx2::SeriesControl& ctrl = {});

// The chained per-degree formulas. Degree 2 holds for any gamma_2; the
// degree-3 and degree-4 chains substitute the Theorem values of the
// lower-order coefficients, so they are only valid under Convention::Theorem
// (ConventionUnsupported otherwise).
RiskReport exact_risk_chained(int degree, int p, double omega, double lambda,
                              estimators::Convention conv,
                              const ncx2::SeriesControl& ctrl = {});

// risk / ((1-omega) p).
double risk_ratio(const RiskReport& report);

}  // namespace polyshrink::risk
