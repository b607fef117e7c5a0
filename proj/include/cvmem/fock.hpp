#ifndef CVMEM_FOCK_HPP
#define CVMEM_FOCK_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvmem/gaussian.hpp"
#include "cvmem/kernels.hpp"

namespace cvmem {

// Truncated number basis |0> .. |N>, quarter convention: X = (a + a^dag)/2,
// P = (a - a^dag)/(2i), so [X, P] = i/2 and the vacuum has Var X = 1/4.

using Ket = Eigen::VectorXcd;

struct FockDensity {
    Eigen::MatrixXcd matrix;
    std::string label;

    std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
    /// Hermitian, positive semidefinite (to round-off) and unit trace.
    void validate(double tol = 1e-10) const;

    static FockDensity pure(const Ket& ket, std::string label = {});
    static FockDensity diagonal(const std::vector<double>& populations, std::string label = {});
};

/// Oscillator eigenfunctions phi_0(x) .. phi_nmax(x) in the quarter convention.
std::vector<double> oscillator_functions(std::size_t nmax, double x);

struct ProjectedKet {
    Ket ket;     ///< renormalized coefficients on |0> .. |N>
    double tail; ///< norm lost to truncation before renormalization
};

/// Number-basis coefficients of a real position wavefunction.
ProjectedKet project_wavefunction(const std::function<double(double)>& psi, std::size_t ntrunc);

Ket fock_ket(std::size_t n, std::size_t ntrunc);
/// Coherent state with <X> = Re(alpha), <P> = Im(alpha).
Ket coherent_ket(std::complex<double> alpha, std::size_t ntrunc);
/// Single photon squeezed by a (wavefunction proportional to x exp(-x^2/a^2)).
ProjectedKet squeezed_photon_ket(double a, std::size_t ntrunc);
/// Even cat with amplitude x0 squeezed by a; its Wigner function is
/// wigner_cat(x0, a) turned by a quarter period.
ProjectedKet cat_ket(double x0, double a, std::size_t ntrunc);

/// Quadrature operators on the truncated space.
Eigen::MatrixXcd annihilation(std::size_t ntrunc);
Eigen::MatrixXcd quadrature_operator(Quadrature q, std::size_t ntrunc);

/// QND interaction on light (x) atom, exp(-2i k G_L (x) G_A), whose
/// Heisenberg action is the Type1/Type2 map. Stored through the spectral
/// decompositions of the two single-mode generators.
class QndUnitary {
public:
    QndUnitary(QndKind kind, double kappa, std::size_t ntrunc);

    std::size_t ntrunc() const { return m_n; }

    /// Apply to a two-mode state held as a matrix psi(m, n) = <m_L, n_A|psi>.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& psi) const;

    /// Dense matrix on the product space, light index major.
    Eigen::MatrixXcd dense() const;

private:
    std::size_t m_n;
    double m_kappa;
    Eigen::MatrixXcd m_vl, m_va;
    Eigen::VectorXd m_dl, m_da;
};

/// E(B) = integral over [-B, B] of |x><x|.
Eigen::MatrixXd window_povm(double B, std::size_t ntrunc);

struct OracleUpload {
    FockDensity rho;
    double S = 0.0;
    double leakage = 0.0; ///< population in the top five levels after the coupling
    std::vector<std::string> warnings;
};

/// Type2 coupling of `light` with the atomic vacuum, window post-selection on
/// X'_L, conditional atomic state.
OracleUpload upload_oracle(const Ket& light, double kappa, double B, std::size_t ntrunc);

struct FockMetrics {
    double F; ///< <1|rho|1>
    double N; ///< W(0,0) from the parity formula
    double Q; ///< Mandel Q
};

FockMetrics fock_metrics(const FockDensity& rho);

double fidelity_with(const FockDensity& rho, const Ket& target);

/// Wigner function at (x, p) by displaced parity.
double wigner_from_fock(const FockDensity& rho, double x, double p);

std::vector<double> wigner_from_fock(const FockDensity& rho, const Grid& grid, Exec exec = Exec::Parallel);

} // namespace cvmem

#endif
