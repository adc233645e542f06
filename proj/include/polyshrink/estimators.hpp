#pragma once

#include <span>
#include <vector>

#include "polyshrink/errors.hpp"

namespace polyshrink::estimators {

// Source of the gamma_2, gamma_3 coefficients.
//   Theorem:    b = 2(1-w)(p-6),  c = 2(1-w)(p-10)^2   (domination theorems)
//   Simulation: b =  (1-w)(p-6),  c =  (1-w)(p-10)^2   (tabulated runs)
// gamma_1 and gamma_4 are identical under both.
enum class Convention { Theorem, Simulation };

const char* to_string(Convention conv);

// The estimator delta(x) = (1 + sum_{m=1..M} gamma_m ||x||^(-2m)) x.
// M = 0 is the MLE (identity). Coefficients may over-shrink (factor < 0)
// for small ||x||^2; the formula is evaluated verbatim, no positive part.
struct ShrinkagePolynomial {
    double omega = 0.0;          // loss weight the coefficients were tuned for
    int dimension = 0;           // p the coefficients were tuned for (0 = any)
    std::vector<double> coeffs;  // gamma_1 .. gamma_M

    int degree() const { return static_cast<int>(coeffs.size()); }
};

// The maximum likelihood estimator, delta_0(x) = x.
ShrinkagePolynomial mle();

// gamma_1 = -(1-omega)(p-2); requires p >= 3.
ShrinkagePolynomial james_stein(int p, double omega);

// The polynomial family member of the given degree (1..4) with coefficients
//   gamma_1 = -(1-omega)(p-2)
//   gamma_2 = [2](1-omega)(p-6)          (factor 2 under Theorem only)
//   gamma_3 = [2](1-omega)(p-10)^2       (factor 2 under Theorem only)
//   gamma_4 = 2(1-omega)(p^2-28p+188)(p-14)
// Dimension thresholds are enforced at construction: degree 1 requires
// p >= 3, degree 2 p > 6, degree 3 p > 10, degree 4 p > 14.
ShrinkagePolynomial poly(int degree, int p, double omega, Convention conv);

// The scalar multiplier 1 + sum gamma_m u^-m at u = ||x||^2.
double shrinkage_factor(const ShrinkagePolynomial& est, double squared_norm);

// Applies the estimator to an observation. Throws SingularObservation if
// ||x||^2 == 0 exactly and the estimator has shrinkage terms.
std::vector<double> estimate(const ShrinkagePolynomial& est,
                             std::span<const double> x);

// Allocation-free variant; |out| must equal |x| (x and out may alias).
void estimate_into(const ShrinkagePolynomial& est, std::span<const double> x,
                   std::span<double> out);

}  // namespace polyshrink::estimators
