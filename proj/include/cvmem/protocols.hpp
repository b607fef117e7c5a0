#ifndef CVMEM_PROTOCOLS_HPP
#define CVMEM_PROTOCOLS_HPP

#include <array>

#include "cvmem/fock.hpp"

namespace cvmem {

/// Single photon written by the deterministic record with matched
/// post-correction: a pure-loss channel of transmission T acting on |1>.
struct DeterministicUploadResult {
    double T_total;
    std::array<double, 2> rho_diag; ///< populations of |0> and |1>
    double mandel_q;
    double kappa, c, kappa_prime, g, a, b;

    FockDensity density() const;
};

DeterministicUploadResult deterministic_photon_upload(double kappa, double c);

/// Pre-squeezing that reaches the maximal transmission 1/4.
double optimal_pre_squeezing(double kappa);

} // namespace cvmem

#endif
