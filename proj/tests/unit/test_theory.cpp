#include <gtest/gtest.h>

#include <cmath>

#include "elastica/errors.hpp"
#include "elastica/theory.hpp"

using namespace elastica;
using namespace elastica::theory;

// Expected values below were computed independently in Python (float64) and frozen.

TEST(Theory, OuMomentsFromStart) {
    const auto m = ou_moments(1.0, 1.0, 0.0, 1.0);
    EXPECT_EQ(m.mean, 0.0);
    EXPECT_NEAR(m.variance, 0.43233235838169365, 1e-15);
}

TEST(Theory, OuMomentsStationaryStart) {
    for (double theta : {0.5, 1.0, 3.0}) {
        const double stat = 0.49 / (2.0 * theta);
        EXPECT_NEAR(ou_moments(theta, 0.7, stat, 2.5).variance, stat, 1e-15);
    }
    EXPECT_THROW(ou_moments(0.0, 1.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(ou_moments(1.0, 1.0, -1.0, 1.0), ValidationError);
}

TEST(Theory, RateBoundValue) {
    // 24 sqrt(2 / 2000)
    EXPECT_NEAR(rate_bound(1.0, 1.0, 1, 1000, 2.0, std::exp(-1.0)), 0.758946638440411, 1e-12);
    // eps = 0.01 is below e^{-1} at N = 400, so only the unchecked formula evaluates
    EXPECT_THROW(rate_bound(1.0, 2.0, 2, 400, 1.0, 0.01), PreconditionError);
    EXPECT_NEAR(rate_bound_formula(1.0, 2.0, 2, 400, 1.0, 0.01), 24.0 * std::sqrt(2.0) * std::sqrt(4.0 * std::log(200.0) / 400.0), 1e-12);
    EXPECT_NEAR(rate_bound(1.0, 2.0, 2, 400, 1.0, 0.5), 3.9962621335569497, 1e-12);
    EXPECT_NEAR(rate_bound(1.0, 1.0, 1, 1600, 1.0, 0.5), 0.7064460135092848, 1e-12);
}

TEST(Theory, RateBoundScaling) {
    EXPECT_NEAR(rate_bound(1.0, 1.0, 1, 400, 1.0, 0.999), rate_bound_formula(1.0, 1.0, 1, 400, 1.0, 0.999), 0.0);
    EXPECT_LT(rate_bound(1.0, 1.0, 1, 400, 1.0, 1.0 - 1e-6), 0.01);
    const double base = rate_bound(1.0, 1.0, 1, 400, 1.0, 0.5);
    EXPECT_NEAR(rate_bound(1.0, 1.0, 1, 1600, 1.0, 0.5), base / 2.0, 1e-12);
    EXPECT_NEAR(rate_bound(1.0, 1.0, 1, 400, 4.0, 0.5), base / 2.0, 1e-12);
    EXPECT_NEAR(rate_bound(3.0, 1.0, 1, 400, 1.0, 0.5), base * 3.0, 1e-12);
    EXPECT_NEAR(rate_bound(1.0, 4.0, 1, 400, 1.0, 0.5), base * 2.0, 1e-12);
}

TEST(Theory, RateBoundEnforcesHypotheses) {
    EXPECT_THROW(rate_bound(1.0, 1.0, 1, 399, 1.0, 0.1), PreconditionError);
    // e^{-1} is the smallest admissible eps at N = 400
    EXPECT_NO_THROW(rate_bound(1.0, 1.0, 1, 400, 1.0, std::exp(-1.0)));
    EXPECT_THROW(rate_bound(1.0, 1.0, 1, 400, 1.0, 0.3), PreconditionError);
    EXPECT_THROW(rate_bound(1.0, 1.0, 1, 400, 1.0, 1.0), PreconditionError);
    EXPECT_NO_THROW(rate_bound_formula(1.0, 1.0, 1, 10, 1.0, 0.01));
}

TEST(Theory, PreconditionsNameTheViolation) {
    SystemConfig c;
    c.n_particles = 100;
    c.dim = 1;
    c.theta = SymMatrix({{2.0}});
    c.t_final = 0.25;
    const auto v = theorem_preconditions(c, 0.9);
    ASSERT_EQ(v.size(), 2u);
    EXPECT_EQ(v[0].which, Hypothesis::HorizonTooShort);
    EXPECT_EQ(v[1].which, Hypothesis::TooFewParticles);
    EXPECT_NE(v[1].message.find("N >= 400"), std::string::npos);
    c.n_particles = 400;
    c.t_final = 1.0;
    EXPECT_TRUE(theorem_preconditions(c, 0.5).empty());
    const auto e = theorem_preconditions(c, 0.01);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].which, Hypothesis::EpsOutOfRange);
}

TEST(Theory, DecouplingConstantsValues) {
    const auto k = decoupling_constants(std::exp(-1.0), 100);
    EXPECT_NEAR(k.c1, 0.022071067811865477, 1e-15);
    EXPECT_NEAR(k.c2, 0.5807106781186547, 1e-15);
    EXPECT_NEAR(k.c, std::sqrt(k.c1 * (2.0 * k.c1 + 8.0 * k.c2)), 1e-15);
    EXPECT_THROW(decoupling_constants(0.0, 100), DomainError);
    EXPECT_THROW(decoupling_constants(1.0, 100), DomainError);
    EXPECT_THROW(decoupling_constants(0.5, 0), DomainError);
}

TEST(Theory, ConstantsSmallInTheoremRegime) {
    for (std::size_t n : {400u, 1000u, 10000u, 100000u}) {
        const double eps = std::exp(-static_cast<double>(n) / 400.0);
        EXPECT_LE(decoupling_constants(eps, n).c, 0.16) << n;
        EXPECT_LE(fluctuation_factor(n, eps), 0.04) << n;
    }
}

TEST(Theory, Thresholds) {
    EXPECT_NEAR(fluctuation_threshold(1.0, 1.0, 1.0, 100, std::exp(-1.0)), 0.08071067811865475, 1e-15);
    EXPECT_NEAR(martingale_threshold(1.0, 1.0, 1.0, 1000, std::exp(-2.0)), 0.06324555320336758, 1e-15);
    EXPECT_NEAR(fluctuation_threshold(2.0, 4.0, 3.0, 100, std::exp(-1.0)),
                0.08071067811865475 * 2.0 * 9.0 / 4.0, 1e-14);
}

TEST(Theory, Chi2LogMgf) {
    EXPECT_NEAR(chi2_log_mgf(-0.5), 0.15342640972002736, 1e-15);
    EXPECT_NEAR(chi2_log_mgf(0.25), 0.09657359027997264, 1e-15);
    EXPECT_EQ(chi2_log_mgf(0.0), 0.0);
    // tiny u: phi(u) ~ u^2
    EXPECT_NEAR(chi2_log_mgf(1e-6) / 1e-12, 1.0, 1e-5);
    EXPECT_THROW(chi2_log_mgf(0.5), DomainError);
}

TEST(Theory, Chi2BoundHoldsOnGrid) {
    for (int k = 1; k < 100; ++k) {
        const double u = -0.5 + static_cast<double>(k) / 100.0;
        EXPECT_LE(chi2_log_mgf(u), chi2_log_mgf_bound(u) + 1e-15) << u;
    }
    EXPECT_THROW(chi2_log_mgf_bound(0.5), DomainError);
}

TEST(Theory, MgfTailAndDenominatorConstant) {
    EXPECT_DOUBLE_EQ(mgf_tail_threshold(2.0, 0.5, 4.0), 2.0 + 4.0);
    EXPECT_THROW(mgf_tail_threshold(-1.0, 0.0, 1.0), DomainError);
    const double k = denominator_lower_bound_constant();
    EXPECT_NEAR(k, (1.0 + std::exp(-2.0)) / 4.0 - 0.2, 1e-16);
    EXPECT_GE(k, 1.0 / 12.0);
}
