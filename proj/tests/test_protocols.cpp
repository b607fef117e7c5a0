#include <cmath>

#include <gtest/gtest.h>

#include "cvmem/error.hpp"
#include "cvmem/protocols.hpp"
#include "oracles.hpp"

using namespace cvmem;

TEST(Protocols, MaximalTransmission)
{
    const auto r = deterministic_photon_upload(1.0, 1.0);
    EXPECT_NEAR(r.T_total, 0.25, 1e-14);
    EXPECT_NEAR(r.rho_diag[0], 0.75, 1e-14);
    EXPECT_NEAR(r.rho_diag[1], 0.25, 1e-14);
    EXPECT_NEAR(r.mandel_q, -0.25, 1e-14);
}

TEST(Protocols, DecoupledLimit)
{
    const auto r = deterministic_photon_upload(1e-6, 1.0);
    EXPECT_NEAR(r.rho_diag[0], 1.0, 1e-11);
    EXPECT_NEAR(r.mandel_q, 0.0, 1e-11);
}

TEST(Protocols, SqueezedLight)
{
    const auto r = deterministic_photon_upload(1.0, 2.0);
    EXPECT_NEAR(r.T_total, 4.0 / 25.0, 1e-14);
    EXPECT_NEAR(r.mandel_q, -0.16, 1e-14);
}

TEST(Protocols, OptimalPreSqueezing)
{
    EXPECT_NEAR(optimal_pre_squeezing(1.0), 1.0, 1e-15);
    EXPECT_NEAR(optimal_pre_squeezing(0.1), 10.0, 1e-12);
    EXPECT_NEAR(optimal_pre_squeezing(10.0), 0.1, 1e-15);
    EXPECT_NEAR(deterministic_photon_upload(0.1, optimal_pre_squeezing(0.1)).T_total, 0.25, 1e-13);
    EXPECT_THROW(optimal_pre_squeezing(0.0), DomainError);
}

TEST(Protocols, WignerNeverNegative)
{
    for (int i = 1; i <= 40; ++i) {
        const double k = 0.05 * i;
        for (double c : {0.5, 1.0, 2.0}) {
            const auto r = deterministic_photon_upload(k, c);
            ASSERT_LE(r.T_total, 0.25 + 1e-14);
            const auto rho = r.density();
            EXPECT_GE(wigner_from_fock(rho, 0.0, 0.0), 0.0);
            const auto m = fock_metrics(rho);
            EXPECT_NEAR(m.Q, -r.T_total, 1e-12);
            EXPECT_NEAR(r.mandel_q, -r.T_total, 1e-14);
            EXPECT_NEAR(m.N, 2.0 / oracle::pi * (1.0 - 2.0 * r.T_total), 1e-14);
        }
    }
}
