#pragma once

#include "polyshrink/errors.hpp"

namespace polyshrink::ncx2 {

// Distribution of U = ||X||^2 for X ~ N_p(theta, I_p), with lambda = ||theta||^2.
// Poisson mixture representation: U | K ~ chi^2_{p+2K}, K ~ Poisson(lambda/2),
// so E[U] = p + lambda.
struct NoncentralChiSquare {
    int dof;        // p >= 1
    double lambda;  // >= 0, finite

    NoncentralChiSquare(int dof_, double lambda_);
};

// Truncation policy for the infinite Poisson-mixture sums.
struct SeriesControl {
    double rel_tol = 1e-12;  // tail bound relative to the partial sum
    int max_terms = 10'000;  // hard cap on Poisson terms

    void validate() const;
};

// E[U^v] = 2^v E_K[ Gamma(p/2+K+v) / Gamma(p/2+K) ], requires p/2 + v > 0.
// Terms are evaluated in log space (log-gamma differences) to avoid overflow.
double moment(const NoncentralChiSquare& dist, double v,
              const SeriesControl& ctrl = {});

// E[U^-m] = E_K[ prod_{j=1..m} 1/(p + 2K - 2j) ] for integer m >= 1,
// requires p > 2m. The gamma ratio is an exact finite product per term.
double inverse_moment(const NoncentralChiSquare& dist, int m,
                      const SeriesControl& ctrl = {});

// d/dlambda E[U^v] = v 2^(v-1) E_K[ Gamma(p/2+v+K) / Gamma(p/2+1+K) ],
// requires p/2 + v > 0.
double moment_derivative(const NoncentralChiSquare& dist, double v,
                         const SeriesControl& ctrl = {});

// H_{p,r,s}(lambda) = E[U^r] / E[U^s], defined on -p/2 < s <= r < 0;
// nondecreasing in lambda on that window.
double moment_ratio(int p, double r, double s, double lambda,
                    const SeriesControl& ctrl = {});

// sup over ||theta|| of E[||X||^(-2r+2)] / E[||X||^(-r)]
//   = 2^((-r+2)/2) Gamma(p/2 - r + 1) / Gamma((p - r)/2),
// attained at lambda = 0. Requires p > 2r - 2 and p > r.
double sup_inverse_ratio(int p, double r);

}  // namespace polyshrink::ncx2
