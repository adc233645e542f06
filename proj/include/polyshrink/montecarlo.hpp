#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polyshrink/estimators.hpp"

namespace polyshrink::mc {

// A seeded risk-estimation run. theta is realized internally as
// (sqrt(lambda), 0, ..., 0); exact risk depends on theta only through
// lambda = ||theta||^2, and rotation_invariance_check validates that
// empirically rather than assuming it.
struct SimulationPlan {
    int p = 0;
    double lambda = 0.0;
    double omega = 0.0;  // loss weight applied to every estimator
    std::vector<estimators::ShrinkagePolynomial> estimators;
    std::int64_t replications = 1;
    std::uint64_t seed = 0;
    int chunk_size = 4096;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(replications)
    std::int64_t replications = 0;
};

// Estimates E[L_w(delta_i(X), theta)] for every estimator on common draws
// X ~ N_p(theta, I_p). Chunk c uses a generator seeded with seed XOR c and
// the reduction over chunks is ordered, so results are bit-identical for a
// given plan regardless of how many threads execute the chunks.
std::vector<McEstimate> simulate_risk(const SimulationPlan& plan);

// Core entry point with an explicit mean vector (|theta| must equal plan.p);
// simulate_risk calls this with theta = sqrt(lambda) e_1.
std::vector<McEstimate> simulate_risk_at(const SimulationPlan& plan,
                                         std::span<const double> theta);

// Runs the plan with theta = sqrt(lambda) e_1 and with theta = sqrt(lambda) u
// for a seeded random unit direction u; true iff the two means agree within
// 5 combined standard errors.
bool rotation_invariance_check(int p, double lambda, double omega,
                               const estimators::ShrinkagePolynomial& est,
                               std::uint64_t seed, std::int64_t replications);

}  // namespace polyshrink::mc
