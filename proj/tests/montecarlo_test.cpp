#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "polyshrink/montecarlo.hpp"
#include "polyshrink/risk.hpp"

using namespace polyshrink;
using estimators::Convention;

namespace {

mc::SimulationPlan base_plan(int p, double lambda, double omega,
                             std::int64_t replications, std::uint64_t seed) {
    mc::SimulationPlan plan;
    plan.p = p;
    plan.lambda = lambda;
    plan.omega = omega;
    plan.replications = replications;
    plan.seed = seed;
    return plan;
}

bool bitwise_equal(const std::vector<mc::McEstimate>& a,
                   const std::vector<mc::McEstimate>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i].mean, &b[i].mean, sizeof(double)) != 0 ||
            std::memcmp(&a[i].std_error, &b[i].std_error, sizeof(double)) != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("identical plans give bit-identical results; the seed matters") {
    auto plan = base_plan(14, 5.0, 0.2, 50'000, 99);
    plan.estimators = {estimators::james_stein(14, 0.2),
                       estimators::poly(2, 14, 0.2, Convention::Simulation)};
    const auto first = mc::simulate_risk(plan);
    const auto second = mc::simulate_risk(plan);
    CHECK(bitwise_equal(first, second));

    plan.seed = 100;
    CHECK_FALSE(bitwise_equal(first, mc::simulate_risk(plan)));
}

TEST_CASE("MLE plan reproduces (1-omega) p") {
    auto plan = base_plan(12, 3.0, 0.3, 200'000, 7);
    plan.estimators = {estimators::mle()};
    const auto estimate = mc::simulate_risk(plan)[0];
    const double exact = risk::mle_risk(12, 0.3);
    CHECK(std::abs(estimate.mean - exact) <= 4.0 * estimate.std_error);
}

TEST_CASE("central James-Stein risk at one million replications") {
    auto plan = base_plan(14, 0.0, 0.0, 1'000'000, 2024);
    plan.estimators = {estimators::james_stein(14, 0.0)};
    const auto estimate = mc::simulate_risk(plan)[0];
    CHECK(std::abs(estimate.mean - 2.0) <= 4.0 * estimate.std_error);
}

TEST_CASE("degree-3 simulation-convention risk matches the exact series") {
    const auto est = estimators::poly(3, 18, 0.4, Convention::Simulation);
    auto plan = base_plan(18, 5.0019, 0.4, 1'000'000, 31337);
    plan.estimators = {est};
    const auto estimate = mc::simulate_risk(plan)[0];
    const double exact = risk::exact_risk_general(est, 18, 5.0019).risk;
    CHECK(std::abs(estimate.mean - exact) <= 4.0 * estimate.std_error);
}

TEST_CASE("chunk size does not bias the estimate") {
    const double exact = risk::exact_risk_js(14, 0.1, 2.0).risk;
    std::vector<double> means;
    for (int chunk : {1, 4096}) {
        auto plan = base_plan(14, 2.0, 0.1, 100'000, 5150);
        plan.chunk_size = chunk;
        plan.estimators = {estimators::james_stein(14, 0.1)};
        const auto estimate = mc::simulate_risk(plan)[0];
        CAPTURE(chunk);
        CHECK(std::abs(estimate.mean - exact) <= 4.0 * estimate.std_error);
        means.push_back(estimate.mean);
    }
    // the stream partitioning differs, so the two runs are distinct draws
    CHECK(means[0] != means[1]);
}

TEST_CASE("std error shrinks as one over sqrt replications") {
    std::vector<double> errors;
    for (std::int64_t n : {10'000, 100'000, 1'000'000}) {
        auto plan = base_plan(14, 5.0, 0.0, n, 777);
        plan.estimators = {estimators::james_stein(14, 0.0)};
        errors.push_back(mc::simulate_risk(plan)[0].std_error);
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double shrink = errors[i - 1] / errors[i];
        CHECK(shrink > std::sqrt(10.0) / 1.5);
        CHECK(shrink < std::sqrt(10.0) * 1.5);
    }
}

TEST_CASE("common random numbers couple the estimators") {
    // with shared draws, JS and degree 2 losses are positively correlated,
    // so the domination gap is visible even at modest replication counts
    auto plan = base_plan(14, 1.2418, 0.0, 100'000, 8675309);
    plan.estimators = {estimators::james_stein(14, 0.0),
                       estimators::poly(2, 14, 0.0, Convention::Theorem)};
    const auto estimates = mc::simulate_risk(plan);
    CHECK(estimates[1].mean < estimates[0].mean);
}

TEST_CASE("rotation invariance of the simulated risk") {
    CHECK(mc::rotation_invariance_check(6, 3.0, 0.0, estimators::mle(), 11,
                                        50'000));
    CHECK(mc::rotation_invariance_check(14, 5.0, 0.2,
                                        estimators::james_stein(14, 0.2), 12,
                                        100'000));
    CHECK(mc::rotation_invariance_check(
        8, 20.0, 0.1, estimators::poly(2, 8, 0.1, Convention::Simulation), 13,
        100'000));
}

TEST_CASE("plan validation and edge cases") {
    auto plan = base_plan(14, 1.0, 0.2, 1000, 1);
    plan.estimators = {estimators::mle()};

    auto bad = plan;
    bad.p = 0;
    CHECK_THROWS_AS((void)mc::simulate_risk(bad), DomainViolation);
    bad = plan;
    bad.lambda = -1.0;
    CHECK_THROWS_AS((void)mc::simulate_risk(bad), DomainViolation);
    bad = plan;
    bad.omega = 1.0;
    CHECK_THROWS_AS((void)mc::simulate_risk(bad), DomainViolation);
    bad = plan;
    bad.replications = 0;
    CHECK_THROWS_AS((void)mc::simulate_risk(bad), DomainViolation);
    bad = plan;
    bad.chunk_size = 0;
    CHECK_THROWS_AS((void)mc::simulate_risk(bad), DomainViolation);

    auto empty = plan;
    empty.estimators.clear();
    CHECK(mc::simulate_risk(empty).empty());

    const std::vector<double> wrong_theta(3, 0.0);
    CHECK_THROWS_AS((void)mc::simulate_risk_at(plan, wrong_theta),
                    LengthMismatch);

    // a single replication has no sample variance; std_error is zero
    auto single = plan;
    single.replications = 1;
    const auto estimate = mc::simulate_risk(single)[0];
    CHECK(estimate.std_error == 0.0);
    CHECK(estimate.replications == 1);
}
