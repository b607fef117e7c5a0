#include <cmath>

#include <gtest/gtest.h>

#include "cvmem/error.hpp"
#include "cvmem/quadrature.hpp"

using namespace cvmem;

TEST(Quadrature, AdaptiveGaussian)
{
    const auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -10, 10, 1e-13);
    EXPECT_NEAR(r.value, std::sqrt(M_PI), 1e-13);
    EXPECT_LE(r.error, 1e-11);
}

TEST(Quadrature, AdaptiveFailureReportsError)
{
    try {
        integrate_adaptive([](double x) { return std::sin(1e4 * x) * std::exp(-x); }, 0.0, 50.0, 1e-14, 0.0, 1);
        FAIL() << "expected NumericError";
    } catch (const NumericError& e) {
        EXPECT_GT(e.achieved_error(), 0.0);
    }
}

TEST(Quadrature, GaussLegendreExactness)
{
    const auto q = gauss_legendre(-1.0, 2.0, 3);
    ASSERT_EQ(q.nodes.size(), 96u);
    double w = 0.0, m = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        w += q.weights[i];
        m += q.weights[i] * std::pow(q.nodes[i], 40);
    }
    EXPECT_NEAR(w, 3.0, 1e-14);
    EXPECT_NEAR(m / ((std::pow(2.0, 41) + 1.0) / 41.0), 1.0, 1e-13);
}

TEST(Quadrature, PanelCount)
{
    EXPECT_EQ(panel_count(0.0, 1.0, 0.3), 4u);
    EXPECT_EQ(panel_count(0.0, 1.0, 1.0), 1u);
    EXPECT_EQ(panel_count(-2.0, 2.0, 10.0), 1u);
}
