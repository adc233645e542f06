#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "polyshrink/risk.hpp"

using namespace polyshrink;
using estimators::Convention;
using estimators::ShrinkagePolynomial;

namespace {

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("balanced_loss") {
    const std::vector<double> a = {1.0, 2.0};
    CHECK(risk::balanced_loss({0.3}, a, a, a) == 0.0);

    const std::vector<double> delta = {0.0, 0.0};
    const std::vector<double> x = {2.0, 0.0};
    const std::vector<double> theta = {0.0, 2.0};
    CHECK(risk::balanced_loss({0.5}, delta, x, theta) == doctest::Approx(4.0));
    // omega = 0 reduces to squared error against theta
    CHECK(risk::balanced_loss({0.0}, delta, x, theta) == doctest::Approx(4.0));
    CHECK(risk::balanced_loss({0.0}, x, x, theta) == doctest::Approx(8.0));

    const std::vector<double> short_vec = {1.0};
    CHECK_THROWS_AS((void)risk::balanced_loss({0.1}, short_vec, x, theta),
                    LengthMismatch);
}

TEST_CASE("mle_risk") {
    CHECK(risk::mle_risk(14, 0.1) == doctest::Approx(12.6).epsilon(1e-15));
    CHECK(risk::mle_risk(3, 0.0) == 3.0);
    CHECK(risk::mle_risk(20, 0.9) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("exact_risk_general: MLE has risk (1-omega) p and ratio 1") {
    const auto report = risk::exact_risk_general(estimators::mle(), 14, 7.0);
    CHECK(report.risk == 14.0);
    CHECK(report.ratio_to_mle == 1.0);
    CHECK(risk::risk_ratio(report) == 1.0);
}

TEST_CASE("central James-Stein risk is 2 with ratio 1/7 at p = 14") {
    const auto chained = risk::exact_risk_js(14, 0.0, 0.0);
    CHECK(rel_err(chained.risk, 2.0) < 1e-12);
    CHECK(rel_err(chained.ratio_to_mle, 1.0 / 7.0) < 1e-12);
    const auto general =
        risk::exact_risk_general(estimators::james_stein(14, 0.0), 14, 0.0);
    CHECK(rel_err(general.risk, 2.0) < 1e-12);
}

TEST_CASE("James-Stein ratios against published values") {
    CHECK(std::abs(risk::exact_risk_general(estimators::james_stein(14, 0.1),
                                            14, 1.2418)
                       .ratio_to_mle -
                   0.2920) < 1.5e-3);
    CHECK(std::abs(risk::exact_risk_js(14, 0.9, 1.2418).ratio_to_mle - 0.9213) <
          1.5e-3);
    CHECK(std::abs(risk::exact_risk_js(18, 0.0, 20.0).ratio_to_mle - 0.5923) <
          1.5e-3);
    CHECK(std::abs(risk::exact_risk_js(14, 0.5, 10.4311).ratio_to_mle - 0.7609) <
          1.5e-3);
}

TEST_CASE("chained degree-2 central value from exact products") {
    // p = 14, omega = 0, lambda = 0, theorem b = 16:
    // R = 2 - 4 * 16 / (12*10) + 16^2 / (12*10*8)
    const double manual =
        2.0 - 4.0 * 16.0 / 120.0 + 256.0 / 960.0;
    const auto report =
        risk::exact_risk_chained(2, 14, 0.0, 0.0, Convention::Theorem);
    CHECK(rel_err(report.risk, manual) < 1e-12);
    CHECK(rel_err(report.ratio_to_mle, manual / 14.0) < 1e-12);
    CHECK(report.ratio_to_mle == doctest::Approx(0.12381).epsilon(1e-4));
}

TEST_CASE("chained degree-2 simulation value against the published table") {
    const auto report =
        risk::exact_risk_chained(2, 14, 0.1, 1.2418, Convention::Simulation);
    CHECK(std::abs(report.ratio_to_mle - 0.2809) < 1.5e-3);
}

TEST_CASE("chained formulas equal the general formula at theorem coefficients") {
    for (int p : {8, 12, 14, 18, 20, 24}) {
        for (double omega : {0.0, 0.1, 0.4, 0.9}) {
            for (double lambda : {0.0, 1.2418, 5.0019, 20.0}) {
                const auto js = risk::exact_risk_js(p, omega, lambda);
                const auto js_general = risk::exact_risk_general(
                    estimators::james_stein(p, omega), p, lambda);
                CAPTURE(p);
                CAPTURE(omega);
                CAPTURE(lambda);
                CHECK(rel_err(js.risk, js_general.risk) < 1e-10);
                for (int degree = 2; degree <= 4; ++degree) {
                    if ((degree == 2 && p <= 6) || (degree == 3 && p <= 10) ||
                        (degree == 4 && p <= 14)) {
                        continue;
                    }
                    const auto chained = risk::exact_risk_chained(
                        degree, p, omega, lambda, Convention::Theorem);
                    const auto general = risk::exact_risk_general(
                        estimators::poly(degree, p, omega, Convention::Theorem),
                        p, lambda);
                    CAPTURE(degree);
                    CHECK(rel_err(chained.risk, general.risk) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("chained evaluation refuses simulation coefficients at degree >= 3") {
    CHECK_THROWS_AS((void)risk::exact_risk_chained(3, 14, 0.0, 1.0,
                                                   Convention::Simulation),
                    ConventionUnsupported);
    CHECK_THROWS_AS((void)risk::exact_risk_chained(4, 20, 0.0, 1.2418,
                                                   Convention::Simulation),
                    ConventionUnsupported);
    // degree 2 accepts any b, so both conventions evaluate
    CHECK_NOTHROW((void)risk::exact_risk_chained(2, 14, 0.0, 1.0,
                                                 Convention::Simulation));
}

TEST_CASE("ratio is an affine function of omega for tuned families") {
    // coefficients scale by (1-omega), so 1 - ratio(omega) = (1-omega)(1 - ratio(0))
    for (auto conv : {Convention::Theorem, Convention::Simulation}) {
        for (int degree : {1, 2, 3}) {
            const double base =
                risk::exact_risk_general(
                    estimators::poly(degree, 14, 0.0, conv), 14, 5.0)
                    .ratio_to_mle;
            for (double omega : {0.2, 0.7, 0.999}) {
                const double ratio =
                    risk::exact_risk_general(
                        estimators::poly(degree, 14, omega, conv), 14, 5.0)
                        .ratio_to_mle;
                CHECK(rel_err(ratio, 1.0 + (1.0 - omega) * (base - 1.0)) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("ratio tends to 1 as omega -> 1") {
    for (int degree : {1, 2, 3, 4}) {
        const auto report = risk::exact_risk_general(
            estimators::poly(degree, 18, 0.999, Convention::Simulation), 18,
            1.2418);
        CHECK(report.ratio_to_mle < 1.0);
        CHECK(std::abs(1.0 - report.ratio_to_mle) < 1e-3);
    }
}

TEST_CASE("report invariants and integrability errors") {
    const auto report = risk::exact_risk_general(
        estimators::poly(3, 18, 0.4, Convention::Simulation), 18, 5.0019);
    CHECK(rel_err(report.ratio_to_mle, report.risk / risk::mle_risk(18, 0.4)) <
          1e-12);
    CHECK(report.p == 18);
    CHECK(report.coeffs.size() == 3);

    // degree 2 at p = 6 needs E[U^-3], i.e. p > 6
    ShrinkagePolynomial custom;
    custom.omega = 0.0;
    custom.coeffs = {-1.0, 2.0};
    CHECK_THROWS_AS((void)risk::exact_risk_general(custom, 6, 1.0),
                    NonIntegrable);
    CHECK_THROWS_AS((void)risk::exact_risk_js(2, 0.0, 1.0), DimensionTooSmall);
    CHECK_THROWS_AS((void)risk::exact_risk_chained(5, 24, 0.0, 1.0,
                                                   Convention::Theorem),
                    DomainViolation);
}
