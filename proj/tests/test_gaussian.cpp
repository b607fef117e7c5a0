#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvmem/error.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/quadrature.hpp"
#include "oracles.hpp"

using namespace cvmem;

namespace {

double symplectic_defect(const SymplecticMap& m)
{
    const auto om = symplectic_form(m.mode_count());
    return (m.matrix() * om * m.matrix().transpose() - om).cwiseAbs().maxCoeff();
}

GaussianState vac2() { return GaussianState::vacuum({"L", "A"}); }

} // namespace

TEST(Gaussian, VacuumVariance)
{
    EXPECT_EQ(vacuum_variance(Convention::Unit), 1.0);
    EXPECT_EQ(vacuum_variance(Convention::Quarter), 0.25);
    const auto v = GaussianState::vacuum({"a"}, Convention::Quarter);
    EXPECT_DOUBLE_EQ(v.variance(0, Quadrature::X), 0.25);
}

TEST(Gaussian, RejectsBadStates)
{
    Eigen::Matrix2d c;
    c << 1, 0.5, 0.2, 1;
    EXPECT_THROW(GaussianState({"a"}, Eigen::Vector2d::Zero(), c), DomainError);
    c << 0.5, 0, 0, 0.5;
    EXPECT_THROW(GaussianState({"a"}, Eigen::Vector2d::Zero(), c), DomainError);
    EXPECT_THROW(GaussianState({"a", "b"}, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()), ParameterError);
    c << NAN, 0, 0, 1;
    EXPECT_THROW(GaussianState({"a"}, Eigen::Vector2d::Zero(), c), ParameterError);
    EXPECT_THROW(vac2().index_of("Q"), ParameterError);
}

TEST(Gaussian, Type1ZeroCouplingIsIdentity)
{
    EXPECT_TRUE(qnd_map(QndKind::Type1, 0.0).matrix().isIdentity(0.0));
}

TEST(Gaussian, Type2UnitCouplingOnVacuum)
{
    const auto s = apply_map(vac2(), qnd_map(QndKind::Type2, 1.0));
    EXPECT_NEAR(s.variance(0, Quadrature::X), 2.0, 1e-14);
    EXPECT_NEAR(s.variance(1, Quadrature::P), 2.0, 1e-14);
    EXPECT_NEAR(s.variance(0, Quadrature::P), 1.0, 1e-14);
    EXPECT_NEAR(s.variance(1, Quadrature::X), 1.0, 1e-14);
}

TEST(Gaussian, Type1Composes)
{
    const auto m = qnd_map(QndKind::Type1, 0.3).then(qnd_map(QndKind::Type1, 0.45));
    EXPECT_LT((m.matrix() - qnd_map(QndKind::Type1, 0.75).matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(m.matrix()(0, 1), 0.0);
}

TEST(Gaussian, HeisenbergAction)
{
    const auto t1 = qnd_map(QndKind::Type1, 0.7).matrix();
    EXPECT_EQ(t1(0, 3), 0.7); // X_L += k P_A
    EXPECT_EQ(t1(2, 1), 0.7); // X_A += k P_L
    const auto t2 = qnd_map(QndKind::Type2, 0.7).matrix();
    EXPECT_EQ(t2(0, 2), 0.7);  // X_L += k X_A
    EXPECT_EQ(t2(3, 1), -0.7); // P_A -= k P_L
}

TEST(Gaussian, Squeeze)
{
    EXPECT_TRUE(squeeze_map(0, 1, 1.0).matrix().isIdentity(0.0));
    const auto v = apply_map(GaussianState::vacuum({"a"}), squeeze_map(0, 1, 2.0));
    EXPECT_NEAR(v.variance(0, Quadrature::X), 0.25, 1e-15);
    EXPECT_NEAR(v.variance(0, Quadrature::P), 4.0, 1e-15);
    const auto up = apply_map(GaussianState::vacuum({"a"}), squeeze_map(0, 1, 2.0, SqueezeAxis::XUpPDown));
    EXPECT_NEAR(up.variance(0, Quadrature::X), 4.0, 1e-15);
}

TEST(Gaussian, SqueezeRoundTrip)
{
    const auto s0 = GaussianState::two_mode_squeezed(0.4, {"L", "A"});
    for (double c : {0.3, 1.7, 4.2}) {
        const auto m = squeeze_map(1, 2, c).then(squeeze_map(1, 2, 1.0 / c));
        EXPECT_TRUE(m.matrix().isIdentity(1e-14));
        const auto s = apply_map(s0, m);
        EXPECT_LT((s.cov() - s0.cov()).cwiseAbs().maxCoeff(), 1e-12);
    }
    const auto s = apply_map(s0, SymplecticMap::identity(2));
    EXPECT_EQ(s.cov(), s0.cov());
}

TEST(Gaussian, RandomMapsAreSymplectic)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-6, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double k = u(rng), c = u(rng);
        EXPECT_LT(symplectic_defect(qnd_map(QndKind::Type1, k)), 1e-12);
        EXPECT_LT(symplectic_defect(qnd_map(QndKind::Type2, k)), 1e-12);
        EXPECT_LT(symplectic_defect(squeeze_map(1, 3, c)), 1e-12);
        EXPECT_LT(symplectic_defect(rotation_map(2, 3, k)), 1e-12);
        EXPECT_LT(symplectic_defect(feed_forward_map(0, 1, Quadrature::P, k, 3)), 1e-12);
        EXPECT_LT(symplectic_defect(feed_forward_map(2, 0, Quadrature::X, -c, 3)), 1e-12);
        const auto chain = qnd_map(QndKind::Type1, k).embed({0, 1}, 3).then(squeeze_map(0, 3, c)).then(
            feed_forward_map(0, 1, Quadrature::P, -k, 3));
        EXPECT_LT(symplectic_defect(chain), 1e-12);
    }
}

TEST(Gaussian, NonSymplecticRejected)
{
    Eigen::Matrix2d m;
    m << 2, 0, 0, 2;
    EXPECT_THROW(SymplecticMap(m, "double"), DomainError);
}

TEST(Gaussian, HomodyneProductState)
{
    Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
    c(2, 2) = 3.0;
    c(3, 3) = 1.0 / 3.0;
    Eigen::Vector4d m(0.5, 0, 1, 2);
    const GaussianState s({"L", "A"}, m, c);
    const auto h = homodyne_condition(s, 0, Quadrature::X, 1.2);
    EXPECT_LT((h.state.cov() - c.block<2, 2>(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((h.state.mean() - m.tail<2>()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(h.pdf, std::exp(-0.5 * 0.49) / std::sqrt(2 * oracle::pi), 1e-15);
}

TEST(Gaussian, HomodyneReducesConjugateVariance)
{
    const double k = 0.8;
    const auto s = apply_map(vac2(), qnd_map(QndKind::Type1, k));
    const auto h = homodyne_condition(s, 0, Quadrature::X, 0.0);
    EXPECT_NEAR(h.state.variance(0, Quadrature::P), 1.0 - k * k / (1.0 + k * k), 1e-14);
    EXPECT_LT(h.state.variance(0, Quadrature::P), 1.0);
}

TEST(Gaussian, HomodynePdfNormalized)
{
    const auto s = apply_map(GaussianState::two_mode_squeezed(0.6, {"L", "A"}), qnd_map(QndKind::Type2, 0.9));
    const auto g = homodyne_gain(s, 0, Quadrature::X);
    const double sd = std::sqrt(g.outcome_variance);
    const auto r = integrate_adaptive([&](double u) { return homodyne_condition(s, 0, Quadrature::X, u).pdf; },
                                      -20 * sd, 20 * sd, 1e-12);
    EXPECT_NEAR(r.value, 1.0, 1e-9);
    EXPECT_NEAR(g.window_probability(40 * sd), 1.0, 1e-12);
    const auto w = integrate_adaptive([&](double u) { return g.pdf(u); }, -0.3, 0.3, 1e-13);
    EXPECT_NEAR(g.window_probability(0.3), w.value, 1e-13);
    const auto at = g.at(0.4);
    const auto direct = homodyne_condition(s, 0, Quadrature::X, 0.4);
    EXPECT_LT((at.mean() - direct.state.mean()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((at.cov() - direct.state.cov()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gaussian, LogNegativityVacuum) { EXPECT_NEAR(log_negativity(vac2()), 0.0, 1e-14); }

TEST(Gaussian, LogNegativityTwoModeSqueezed)
{
    for (double r : {0.1, 0.5, 1.3}) {
        const auto s = GaussianState::two_mode_squeezed(r, {"L", "A"});
        const double en = log_negativity(s);
        EXPECT_GT(en, 0.0);
        EXPECT_NEAR(en, oracle::log_negativity_delta(s.cov()), 1e-12);
        EXPECT_NEAR(en, 2.0 * r / std::log(2.0), 1e-12);
        const auto q = convention_convert(s, Convention::Quarter);
        EXPECT_NEAR(log_negativity(q), en, 1e-12);
    }
}

TEST(Gaussian, LogNegativityLocalInvariance)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int i = 0; i < 50; ++i) {
        const auto s = apply_map(GaussianState::two_mode_squeezed(u(rng) / 4, {"L", "A"}),
                                 qnd_map(QndKind::Type1, u(rng)));
        const double en = log_negativity(s);
        EXPECT_NEAR(en, oracle::log_negativity_delta(s.cov()), 1e-9);
        const int mode = i % 2;
        const auto local = squeeze_map(mode, 2, u(rng)).then(rotation_map(mode, 2, u(rng)));
        EXPECT_NEAR(log_negativity(apply_map(s, local)), en, 1e-9);
    }
}

TEST(Gaussian, SymplecticEigenvalues)
{
    const auto nu = symplectic_eigenvalues(GaussianState::two_mode_squeezed(0.7, {"L", "A"}).cov());
    ASSERT_EQ(nu.size(), 2);
    EXPECT_NEAR(nu(0), 1.0, 1e-12);
    EXPECT_NEAR(nu(1), 1.0, 1e-12);
}

TEST(Gaussian, ConventionConvert)
{
    const auto q = convention_convert(GaussianState::vacuum({"a"}), Convention::Quarter);
    EXPECT_TRUE(q.cov().isApprox(Eigen::Matrix2d::Identity() / 4, 1e-15));
    Eigen::Matrix2d c;
    c << 2, 0, 0, 0.5;
    const GaussianState s({"a"}, Eigen::Vector2d(1, -2), c);
    const auto t = convention_convert(s, Convention::Quarter);
    EXPECT_DOUBLE_EQ(t.cov()(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(t.cov()(1, 1), 0.125);
    const auto back = convention_convert(t, Convention::Unit);
    EXPECT_LT((back.cov() - s.cov()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((back.mean() - s.mean()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gaussian, UncertaintyCheck)
{
    EXPECT_TRUE(satisfies_uncertainty(Eigen::Matrix2d::Identity(), Convention::Unit));
    EXPECT_FALSE(satisfies_uncertainty(Eigen::Matrix2d::Identity() * 0.9, Convention::Unit));
    EXPECT_TRUE(satisfies_uncertainty(Eigen::Matrix2d::Identity() * 0.25, Convention::Quarter));
}

TEST(Gaussian, TensorAndReduce)
{
    const auto s = GaussianState::two_mode_squeezed(0.3, {"L", "A"}).tensor(GaussianState::vacuum({"L0"}));
    EXPECT_EQ(s.mode_count(), 3u);
    EXPECT_EQ(s.index_of("L0"), 2u);
    const auto r = s.reduced({1, 0});
    EXPECT_EQ(r.modes()[0], "A");
    EXPECT_NEAR(r.variance(0, Quadrature::X), std::cosh(0.6), 1e-14);
}
