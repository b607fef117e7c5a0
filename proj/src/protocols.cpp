#include "cvmem/protocols.hpp"

#include <cmath>

#include "cvmem/error.hpp"
#include "cvmem/record.hpp"

namespace cvmem {

FockDensity DeterministicUploadResult::density() const
{
    return FockDensity::diagonal({rho_diag[0], rho_diag[1]}, "deterministic upload");
}

DeterministicUploadResult deterministic_photon_upload(double kappa, double c)
{
    require_positive(kappa, "kappa");
    require_positive(c, "c");
    const auto gains = solve_record_gains(kappa, c);
    const double kp = std::sqrt(gains.T_R);
    const auto post = postcorrection_params(kp);

    DeterministicUploadResult r{};
    r.T_total = composed_transmission(kappa, c);
    r.rho_diag = {1.0 - r.T_total, r.T_total};
    // <n> = <n^2> = T for populations on |0>, |1> only
    const double mean = r.rho_diag[1];
    const double second = r.rho_diag[1];
    r.mandel_q = (second - mean * mean - mean) / mean;
    r.kappa = kappa;
    r.c = c;
    r.kappa_prime = kp;
    r.g = gains.g;
    r.a = gains.a;
    r.b = post.b;
    return r;
}

double optimal_pre_squeezing(double kappa)
{
    require_finite(kappa, "kappa");
    if (kappa <= 0.0)
        throw DomainError("optimal pre-squeezing needs kappa > 0");
    return 1.0 / kappa;
}

} // namespace cvmem
