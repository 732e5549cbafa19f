#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/likelihood.hpp"
#include "elastica/simulate.hpp"
#include "support/oracles.hpp"

using namespace elastica;

namespace {

// N = 2, d = 1, h = 1. Worked by hand:
//   D = (-1, 1), (-1, 1), (1, -1); dX = (1, 1), (-2, 2), (3, -1)
//   gram = 6, cross = 8, loglik(a) = -3 a^2 + 8 a.
TrajectoryBundle hand_bundle(double sigma = 1.0) {
    SystemConfig c;
    c.n_particles = 2;
    c.dim = 1;
    c.sigma = sigma;
    c.t_final = 3.0;
    c.n_steps = 3;
    return TrajectoryBundle(c, {1.0, -1.0, 2.0, 0.0, 0.0, 2.0, 3.0, 1.0});
}

SystemConfig random_config(std::uint64_t seed, std::size_t d) {
    SplitMix64 rng(seed);
    SystemConfig c;
    c.n_particles = 3 + static_cast<std::size_t>(rng() % 6);
    c.dim = d;
    const Matrix q = oracle::random_orthogonal(d, rng);
    std::vector<double> spectrum(d);
    for (auto& v : spectrum) v = 0.5 + 2.0 * rng.uniform_open();
    c.theta = SymMatrix::symmetrize(q * Matrix::diagonal(spectrum) * q.transpose());
    c.sigma = 0.3 + rng.uniform_open();
    c.init_variances.assign(d, 0.5);
    c.t_final = 1.0;
    c.n_steps = 250;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(Likelihood, HandInstanceStatistics) {
    const auto s = sufficient_stats(hand_bundle());
    EXPECT_DOUBLE_EQ(s.gram(0, 0), 6.0);
    EXPECT_DOUBLE_EQ(s.cross(0, 0), 8.0);
    EXPECT_DOUBLE_EQ(s.per_coord_num[0], 4.0);
    EXPECT_DOUBLE_EQ(s.per_coord_den[0], 3.0);
    EXPECT_EQ(s.n_particles, 2u);
    EXPECT_EQ(s.t_final, 3.0);
}

TEST(Likelihood, HandInstanceValue) {
    const auto b = hand_bundle();
    EXPECT_DOUBLE_EQ(log_likelihood(b, SymMatrix({{0.5}})), 3.25);
    EXPECT_DOUBLE_EQ(log_likelihood(b, SymMatrix({{0.0}})), 0.0);
    EXPECT_DOUBLE_EQ(log_likelihood(b, SymMatrix({{2.0}})), 4.0);
}

TEST(Likelihood, HandInstanceRescalesBySigmaSquared) {
    const auto b = hand_bundle(2.0);
    EXPECT_DOUBLE_EQ(log_likelihood(b, SymMatrix({{0.5}})), 3.25 / 4.0);
    EXPECT_DOUBLE_EQ(sufficient_stats(b).gram(0, 0), 1.5);
    // sigma = 0 leaves the sums unscaled
    EXPECT_DOUBLE_EQ(log_likelihood(hand_bundle(0.0), SymMatrix({{0.5}})), 3.25);
}

TEST(Likelihood, MeanFieldCovarianceHand) {
    const auto b = hand_bundle();
    EXPECT_DOUBLE_EQ(mean_field_covariance(b, 0)(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(mean_field_covariance(b, 3)(0, 0), 1.0);
    EXPECT_THROW(mean_field_covariance(b, 4), ValidationError);
}

TEST(Likelihood, MatchesBruteForceOracle) {
    SplitMix64 rng(3);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t d = 1 + seed % 3;
        const auto cfg = random_config(seed, d);
        const auto b = simulate_interacting(cfg);
        const auto paths = oracle::unpack(b);
        for (int trial = 0; trial < 5; ++trial) {
            Matrix a(d, d);
            for (auto& v : a.data()) v = 4.0 * rng.uniform_open() - 2.0;
            const double expected = oracle::brute_log_likelihood(paths, cfg.step_size(), cfg.sigma, a);
            EXPECT_NEAR(log_likelihood_general(b, a), expected, 1e-10 * (1.0 + std::abs(expected)));
            const auto as = SymMatrix::symmetrize(a);
            EXPECT_NEAR(log_likelihood(b, as),
                        oracle::brute_log_likelihood(paths, cfg.step_size(), cfg.sigma, as.matrix()),
                        1e-10 * (1.0 + std::abs(expected)));
        }
    }
}

TEST(Likelihood, StatisticsMatchBruteForce) {
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const auto cfg = random_config(seed, 3);
        const auto b = simulate_interacting(cfg);
        const auto brute = oracle::brute_stats(oracle::unpack(b), cfg.step_size(), cfg.sigma);
        const auto s = sufficient_stats(b);
        EXPECT_LE((s.gram.matrix() - brute.gram).max_abs(), 1e-10 * (1.0 + brute.gram.max_abs()));
        EXPECT_LE((s.cross - brute.cross).max_abs(), 1e-10 * (1.0 + brute.cross.max_abs()));
        const double n = static_cast<double>(cfg.n_particles);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(s.per_coord_num[j], brute.cross(j, j) / n, 1e-10 * (1.0 + std::abs(brute.cross(j, j))));
            EXPECT_NEAR(s.per_coord_den[j], brute.gram(j, j) / n, 1e-10 * (1.0 + brute.gram(j, j)));
        }
    }
}

TEST(Likelihood, StatisticsReproduceLikelihood) {
    SplitMix64 rng(17);
    for (std::uint64_t seed = 20; seed < 25; ++seed) {
        const auto cfg = random_config(seed, 2);
        const auto b = simulate_interacting(cfg);
        const auto s = sufficient_stats(b);
        for (int trial = 0; trial < 4; ++trial) {
            Matrix a(2, 2);
            for (auto& v : a.data()) v = 6.0 * rng.uniform_open() - 3.0;
            const double direct = log_likelihood_general(b, a);
            EXPECT_NEAR(log_likelihood_from_stats(s, a), direct, 1e-9 * (1.0 + std::abs(direct)));
        }
    }
}

TEST(Likelihood, TraceFormAgreesWithDirectForm) {
    SplitMix64 rng(99);
    for (std::uint64_t seed = 30; seed < 35; ++seed) {
        const auto cfg = random_config(seed, 2);
        const auto b = simulate_interacting(cfg, true);
        for (int trial = 0; trial < 5; ++trial) {
            const auto a = oracle::random_symmetric(2, rng, 2.0);
            const double direct = log_likelihood(b, a);
            const double trace = log_likelihood_trace_form(b, a, cfg.theta);
            EXPECT_NEAR(trace, direct, 1e-8 * (1.0 + std::abs(direct)));
        }
    }
}

TEST(Likelihood, TraceFormNeedsNoise) {
    const auto cfg = random_config(40, 1);
    const auto b = simulate_interacting(cfg, false);
    EXPECT_THROW(log_likelihood_trace_form(b, SymMatrix({{1.0}}), cfg.theta), MissingNoiseError);
}

TEST(Likelihood, ExactlyQuadraticAlongLines) {
    const auto cfg = random_config(50, 2);
    const auto b = simulate_interacting(cfg);
    SplitMix64 rng(51);
    const auto a0 = oracle::random_symmetric(2, rng);
    const auto dir = oracle::random_symmetric(2, rng);
    auto at = [&](double s) { return log_likelihood(b, a0 + s * dir); };
    // third finite difference of a quadratic vanishes
    const double f0 = at(0.0), f1 = at(1.0), f2 = at(2.0), f3 = at(3.0);
    const double scale = std::abs(f0) + std::abs(f1) + std::abs(f2) + std::abs(f3);
    EXPECT_NEAR(f3 - 3.0 * f2 + 3.0 * f1 - f0, 0.0, 1e-10 * scale);
    // and the second difference is -tr(dir G dir^T)
    const auto s = sufficient_stats(b);
    const Matrix curv = dir.matrix() * s.gram.matrix() * dir.matrix().transpose();
    EXPECT_NEAR(f2 - 2.0 * f1 + f0, -curv.trace(), 1e-9 * scale);
}

TEST(Likelihood, InvariantUnderJointScalingOfPathAndNoise) {
    const auto cfg = random_config(60, 2);
    const auto b = simulate_interacting(cfg);
    for (double c : {0.1, 3.0, 1e3}) {
        auto scaled_cfg = cfg;
        scaled_cfg.sigma = cfg.sigma * c;
        std::vector<double> scaled(b.states().begin(), b.states().end());
        for (auto& v : scaled) v *= c;
        const TrajectoryBundle sb(scaled_cfg, scaled);
        const SymMatrix a({{1.0, 0.3}, {0.3, 2.0}});
        const double base = log_likelihood(b, a);
        EXPECT_NEAR(log_likelihood(sb, a), base, 1e-10 * (1.0 + std::abs(base))) << "c=" << c;
    }
}

TEST(Likelihood, RotationEquivariance) {
    const std::size_t d = 3;
    const auto cfg = random_config(70, d);
    const auto b = simulate_interacting(cfg);
    SplitMix64 rng(71);
    const Matrix q = oracle::random_orthogonal(d, rng);
    std::vector<double> rotated(b.states().size());
    for (std::size_t row = 0; row < rotated.size() / d; ++row)
        for (std::size_t r = 0; r < d; ++r) {
            double v = 0.0;
            for (std::size_t c = 0; c < d; ++c) v += q(r, c) * b.states()[row * d + c];
            rotated[row * d + r] = v;
        }
    auto rcfg = cfg;
    rcfg.theta = SymMatrix::symmetrize(q * cfg.theta.matrix() * q.transpose());
    const TrajectoryBundle rb(rcfg, rotated);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = oracle::random_symmetric(d, rng, 2.0);
        const auto qa = SymMatrix::symmetrize(q * a.matrix() * q.transpose());
        const double base = log_likelihood(b, a);
        EXPECT_NEAR(log_likelihood(rb, qa), base, 1e-8 * (1.0 + std::abs(base)));
    }
}

TEST(Likelihood, RejectsMismatchedMatrix) {
    const auto b = hand_bundle();
    EXPECT_THROW(log_likelihood(b, SymMatrix::identity(2)), ValidationError);
    EXPECT_THROW(log_likelihood_from_stats(sufficient_stats(b), Matrix(2, 2)), ValidationError);
}
