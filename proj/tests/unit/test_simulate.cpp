#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "elastica/errors.hpp"
#include "elastica/simulate.hpp"

using namespace elastica;

namespace {

SystemConfig two_dim_config() {
    SystemConfig c;
    c.n_particles = 10;
    c.dim = 2;
    c.theta = SymMatrix({{2.0, 0.5}, {0.5, 1.0}});
    c.sigma = 0.7;
    c.init_variances = {0.5, 0.25};
    c.t_final = 1.0;
    c.n_steps = 300;
    c.seed = 42;
    return c;
}

}  // namespace

TEST(Simulate, SameSeedSameStates) {
    const auto cfg = two_dim_config();
    const auto a = simulate_interacting(cfg, true);
    const auto b = simulate_interacting(cfg, true);
    EXPECT_TRUE(std::equal(a.states().begin(), a.states().end(), b.states().begin()));
    EXPECT_TRUE(std::equal(a.noise_increments().begin(), a.noise_increments().end(), b.noise_increments().begin()));
    auto other = cfg;
    other.seed = 43;
    const auto c = simulate_interacting(other);
    EXPECT_NE(a.states()[a.states().size() - 1], c.states()[c.states().size() - 1]);
}

TEST(Simulate, ShapesAndTimeGrid) {
    const auto cfg = two_dim_config();
    const auto b = simulate_interacting(cfg);
    EXPECT_EQ(b.n_times(), 301u);
    EXPECT_EQ(b.states().size(), 301u * 10u * 2u);
    EXPECT_FALSE(b.has_noise());
    EXPECT_THROW((void)b.noise_increments(), MissingNoiseError);
    EXPECT_EQ(b.times().front(), 0.0);
    EXPECT_EQ(b.times().back(), 1.0);
}

TEST(Simulate, RejectsUnstableStep) {
    auto cfg = two_dim_config();
    cfg.n_steps = 3;  // h * theta_max ~ 0.7
    EXPECT_THROW(simulate_interacting(cfg), StabilityError);
    EXPECT_THROW(simulate_ou_euler(cfg), StabilityError);
    EXPECT_NO_THROW(simulate_ou_exact(cfg));
}

TEST(Simulate, RejectsSingleParticle) {
    auto cfg = two_dim_config();
    cfg.n_particles = 1;
    EXPECT_THROW(simulate_interacting(cfg), ValidationError);
}

TEST(Simulate, ValidatesConfig) {
    auto cfg = two_dim_config();
    cfg.theta = SymMatrix({{1.0, 2.0}, {2.0, 1.0}});  // indefinite
    EXPECT_THROW(simulate_interacting(cfg), ValidationError);
    cfg = two_dim_config();
    cfg.init_variances = {1.0};
    EXPECT_THROW(simulate_interacting(cfg), ValidationError);
    cfg = two_dim_config();
    cfg.sigma = -1.0;
    EXPECT_THROW(simulate_interacting(cfg), ValidationError);
}

TEST(Simulate, NoiselessTwoParticleGapDecaysGeometrically) {
    SystemConfig cfg;
    cfg.n_particles = 2;
    cfg.dim = 1;
    cfg.theta = SymMatrix::identity(1);
    cfg.sigma = 0.0;
    cfg.init_variances = {0.0};
    cfg.t_final = 1.0;
    cfg.n_steps = 10000;
    const std::vector<double> init = {1.0, -1.0};
    const auto b = simulate_interacting(cfg, false, init);
    const double h = cfg.step_size();
    for (std::size_t k : {0u, 1u, 10u, 5000u, 10000u}) {
        const double gap = b.state(k, 0)[0] - b.state(k, 1)[0];
        const double expected = 2.0 * std::pow(1.0 - h, static_cast<double>(k));
        EXPECT_NEAR(gap, expected, 1e-12 * expected) << "k=" << k;
    }
}

TEST(Simulate, MeanProcessIsDrivenOnlyByAveragedNoise) {
    const auto cfg = two_dim_config();
    const auto b = simulate_interacting(cfg, true);
    const auto mean = mean_process(b);
    const double n = static_cast<double>(cfg.n_particles);
    double scale = 0.0;
    for (double v : b.states()) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < b.n_steps(); ++k) {
        for (std::size_t j = 0; j < cfg.dim; ++j) {
            double avg_noise = 0.0;
            for (std::size_t i = 0; i < cfg.n_particles; ++i) avg_noise += b.noise(k, i)[j];
            const double predicted = mean.at(k)[j] + avg_noise / n;
            EXPECT_NEAR(mean.at(k + 1)[j], predicted, 1e-12 * (1.0 + scale));
        }
    }
}

TEST(Simulate, StoredNoiseHasBrownianVariance) {
    auto cfg = two_dim_config();
    cfg.n_particles = 50;
    cfg.n_steps = 2000;
    cfg.t_final = 2.0;
    const auto b = simulate_interacting(cfg, true);
    double s2 = 0.0;
    for (double v : b.noise_increments()) s2 += v * v;
    const double m = static_cast<double>(b.noise_increments().size());
    const double h = cfg.step_size();
    EXPECT_NEAR(s2 / m / (cfg.sigma * cfg.sigma * h), 1.0, 4.0 * std::sqrt(2.0 / m));
}

TEST(Simulate, CoupledBundleMatchesPlainSimulation) {
    const auto cfg = two_dim_config();
    const auto coupled = simulate_coupled(cfg);
    const auto plain = simulate_interacting(cfg, true);
    EXPECT_TRUE(std::equal(plain.states().begin(), plain.states().end(), coupled.interacting.states().begin()));
    EXPECT_LE(coupling_deviation(coupled), 1e-10);
}

TEST(Simulate, EulerShadowUsesSameNoiseAsInteracting) {
    const auto cfg = two_dim_config();
    const auto x = simulate_interacting(cfg, true);
    const auto y = simulate_ou_euler(cfg, true);
    EXPECT_TRUE(std::equal(x.noise_increments().begin(), x.noise_increments().end(),
                           y.noise_increments().begin()));
    for (std::size_t i = 0; i < cfg.n_particles; ++i)
        for (std::size_t j = 0; j < cfg.dim; ++j) EXPECT_EQ(x.state(0, i)[j], y.state(0, i)[j]);
}

TEST(Simulate, ExactOuNoiselessDecay) {
    SystemConfig cfg;
    cfg.n_particles = 1;
    cfg.dim = 2;
    cfg.theta = SymMatrix({{2.0, 0.5}, {0.5, 1.0}});
    cfg.sigma = 0.0;
    cfg.init_variances = {0.0, 0.0};
    cfg.t_final = 1.0;
    cfg.n_steps = 7;
    const std::vector<double> init = {1.0, -2.0};
    const auto b = simulate_ou_exact(cfg, false, init);
    // y(t) = V exp(-Lambda t) V^T y0
    const auto eig = sym_eigen(cfg.theta);
    for (std::size_t k = 0; k <= cfg.n_steps; ++k) {
        const double t = b.times()[k];
        std::vector<double> expected(2, 0.0);
        for (std::size_t m = 0; m < 2; ++m) {
            const double coef = (eig.vectors(0, m) * init[0] + eig.vectors(1, m) * init[1]) *
                                std::exp(-eig.values[m] * t);
            for (std::size_t j = 0; j < 2; ++j) expected[j] += eig.vectors(j, m) * coef;
        }
        EXPECT_NEAR(b.state(k, 0)[0], expected[0], 1e-12);
        EXPECT_NEAR(b.state(k, 0)[1], expected[1], 1e-12);
    }
}

TEST(Simulate, ExactOuStationaryVariance) {
    SystemConfig cfg;
    cfg.n_particles = 20000;
    cfg.dim = 1;
    cfg.theta = SymMatrix({{3.0}});
    cfg.sigma = 1.0;
    cfg.init_variances = {1.0 / 6.0};
    cfg.t_final = 1.0;
    cfg.n_steps = 4;
    cfg.seed = 8;
    const auto b = simulate_ou_exact(cfg);
    double s2 = 0.0;
    for (std::size_t i = 0; i < cfg.n_particles; ++i) s2 += b.state(4, i)[0] * b.state(4, i)[0];
    const double var = s2 / static_cast<double>(cfg.n_particles);
    EXPECT_NEAR(var, 1.0 / 6.0, 4.0 * (1.0 / 6.0) * std::sqrt(2.0 / 20000.0));
}

TEST(QuadraticVariation, HandPath) {
    Path p{3, 2, {0.0, 1.0, 1.0, -1.0, 3.0, 0.0}};
    const auto qv = empirical_quadratic_variation(p);
    EXPECT_EQ(qv[0], 1.0 + 4.0);
    EXPECT_EQ(qv[1], 4.0 + 1.0);
    Path single{1, 1, {0.0}};
    EXPECT_THROW(empirical_quadratic_variation(single), ValidationError);
}

TEST(InteractionMatrix, IsAnOrthogonalProjection) {
    for (auto [n, d] : {std::pair<std::size_t, std::size_t>{2, 1}, {5, 3}, {7, 2}}) {
        const auto h = interaction_matrix(n, d);
        const Matrix sq = h.matrix() * h.matrix();
        EXPECT_LE((sq - h.matrix()).max_abs(), 1e-12);
        EXPECT_NEAR(h.matrix().trace(), static_cast<double>((n - 1) * d), 1e-12);
    }
    const auto h = interaction_matrix(2, 1);
    EXPECT_DOUBLE_EQ(h(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(h(0, 1), -0.5);
    EXPECT_THROW(interaction_matrix(100, 50), ValidationError);
}

TEST(StepRule, DefaultCountAndWarning) {
    const std::vector<double> diag = {1.0, 2.0};
    EXPECT_EQ(default_step_count(SymMatrix::diagonal(diag), 1.0), 200u);
    EXPECT_EQ(default_step_count(SymMatrix::identity(1), 2.5), 250u);
    SystemConfig cfg;
    cfg.n_steps = 100;
    EXPECT_FALSE(step_rule_warning(cfg).has_value());
    cfg.n_steps = 50;
    EXPECT_TRUE(step_rule_warning(cfg).has_value());
}
