#ifndef CVMEM_WIGNER_HPP
#define CVMEM_WIGNER_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvmem/kernels.hpp"

namespace cvmem {

/// Single-mode Wigner function in the quarter convention (vacuum variance 1/4).
///
/// The support hint is a rectangle outside of which |W| is negligible; it
/// drives every quadrature over the function.
class WignerFunction {
public:
    WignerFunction(Field eval, Rect support, std::string label = {});

    double operator()(double x, double p) const { return m_eval(x, p); }
    const Field& field() const { return m_eval; }
    const Rect& support() const { return m_support; }
    const std::string& label() const { return m_label; }

    /// Integral over the plane; cached when known analytically or after renormalized().
    double normalization(double tol = 1e-11) const;
    bool normalization_cached() const;

    /// The same function divided by its numerically computed integral.
    WignerFunction renormalized(double tol = 1e-12) const;

    WignerFunction with_normalization(double value) const;

    /// W(x / sx, p / sp) / (sx sp): the state stretched by sx along x and sp along p.
    WignerFunction stretched(double sx, double sp) const;

    /// Rotate phase space by +90 degrees: (x, p) -> (-p, x) on the state.
    WignerFunction quarter_turn() const;
    /// Inverse of quarter_turn().
    WignerFunction quarter_turn_back() const;

    std::vector<double> sample(const Grid& grid, Exec exec = Exec::Parallel) const;

private:
    Field m_eval;
    Rect m_support;
    std::string m_label;
    double m_norm;
};

WignerFunction wigner_vacuum();

/// Fock state |1> without squeezing.
WignerFunction wigner_single_photon();

/// Squeezed single photon; a < 1 narrows the x quadrature.
WignerFunction wigner_squeezed_photon(double a);

/// Even cat state |alpha> + |-alpha> with x0 = Re(alpha), squeezed by a, with
/// the interference fringes running along p. Explicitly renormalized.
WignerFunction wigner_cat(double x0, double a);

/// Mixture (1 - t)|0><0| + t|1><1|.
WignerFunction wigner_photon_mixture(double t);

/// Gaussian state with the given mean and covariance (quarter convention).
WignerFunction wigner_gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

/// F = pi * integral of W * W_target over the union of the support hints.
double fidelity(const WignerFunction& w, const WignerFunction& target, double tol = 1e-10,
                Exec exec = Exec::Parallel);

/// Value at the phase-space origin.
double negativity(const WignerFunction& w);

/// P(p) = integral of W(x, p) over x.
std::function<double(double)> marginal_p(const WignerFunction& w, double tol = 1e-11);

/// Pure-loss channel of transmission eta with vacuum noise.
WignerFunction apply_loss(const WignerFunction& w, double eta);

} // namespace cvmem

#endif
