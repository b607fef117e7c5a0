#ifndef CVMEM_GAUSSIAN_HPP
#define CVMEM_GAUSSIAN_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cvmem {

/// Vacuum-variance convention of the quadratures.
///
/// Unit: vacuum variance 1, [X,P] = 2i. Quarter: vacuum variance 1/4,
/// [X,P] = i/2, a = X + iP.
enum class Convention { Unit, Quarter };

double vacuum_variance(Convention c);

enum class Quadrature { X, P };

/// The two QND couplings available in the light-atom interface.
///
/// Type1: X_L += k P_A, X_A += k P_L.
/// Type2: X_L += k X_A, P_A -= k P_L.
enum class QndKind { Type1, Type2 };

enum class SqueezeAxis { XDownPUp, XUpPDown };

/// Quadrature ordering is (X_0, P_0, X_1, P_1, ...).
Eigen::MatrixXd symplectic_form(std::size_t modes);

class GaussianState {
public:
    GaussianState(std::vector<std::string> modes, Eigen::VectorXd mean,
                  Eigen::MatrixXd cov, Convention convention = Convention::Unit);

    static GaussianState vacuum(std::vector<std::string> modes,
                                Convention convention = Convention::Unit);

    /// Two-mode squeezed vacuum with squeezing parameter r.
    static GaussianState two_mode_squeezed(double r, std::vector<std::string> modes,
                                           Convention convention = Convention::Unit);

    const std::vector<std::string>& modes() const { return m_modes; }
    std::size_t mode_count() const { return m_modes.size(); }
    const Eigen::VectorXd& mean() const { return m_mean; }
    const Eigen::MatrixXd& cov() const { return m_cov; }
    Convention convention() const { return m_convention; }

    std::size_t index_of(const std::string& label) const;

    /// Product state this (x) other; labels are concatenated.
    GaussianState tensor(const GaussianState& other) const;

    /// Reduced state on the given mode indices, in the given order.
    GaussianState reduced(const std::vector<std::size_t>& keep) const;

    double variance(std::size_t mode, Quadrature q) const;

private:
    std::vector<std::string> m_modes;
    Eigen::VectorXd m_mean;
    Eigen::MatrixXd m_cov;
    Convention m_convention;
};

/// True when cov + i (vacuum variance) Omega is positive semidefinite.
bool satisfies_uncertainty(const Eigen::MatrixXd& cov, Convention c, double tol = 1e-10);

class SymplecticMap {
public:
    SymplecticMap(Eigen::MatrixXd matrix, Eigen::VectorXd displacement, std::string label);
    explicit SymplecticMap(Eigen::MatrixXd matrix, std::string label = {});

    static SymplecticMap identity(std::size_t modes);

    const Eigen::MatrixXd& matrix() const { return m_matrix; }
    const Eigen::VectorXd& displacement() const { return m_displacement; }
    const std::string& label() const { return m_label; }
    std::size_t mode_count() const { return static_cast<std::size_t>(m_matrix.rows() / 2); }

    /// The map that applies `this` first and `next` afterwards.
    SymplecticMap then(const SymplecticMap& next) const;

    /// Lift onto a larger register; positions[i] is the target slot of local mode i.
    SymplecticMap embed(const std::vector<std::size_t>& positions, std::size_t modes) const;

private:
    Eigen::MatrixXd m_matrix;
    Eigen::VectorXd m_displacement;
    std::string m_label;
};

/// QND coupling on the ordered pair (light, atom).
SymplecticMap qnd_map(QndKind kind, double kappa);

SymplecticMap squeeze_map(std::size_t mode, std::size_t modes, double factor,
                          SqueezeAxis which = SqueezeAxis::XDownPUp);

/// Phase-space rotation of one mode: X -> cos X - sin P, P -> sin X + cos P.
SymplecticMap rotation_map(std::size_t mode, std::size_t modes, double angle);

/// Feed-forward of a measured X quadrature: target quadrature += gain * X_source.
///
/// Homodyne detection followed by classical displacement is equivalent to this
/// controlled displacement followed by discarding the source mode, so the map
/// includes the (irrelevant) back-action on the source's P quadrature that
/// keeps it symplectic.
SymplecticMap feed_forward_map(std::size_t source, std::size_t target, Quadrature target_quadrature,
                               double gain, std::size_t modes);

GaussianState apply_map(const GaussianState& state, const SymplecticMap& map);

struct HomodyneResult {
    GaussianState state; ///< remaining modes, conditioned on the outcome
    double pdf;          ///< density of the outcome
};

HomodyneResult homodyne_condition(const GaussianState& state, std::size_t mode, Quadrature q,
                                  double outcome);

/// Outcome-independent part of homodyne conditioning.
///
/// Conditioned on outcome u the remaining modes have mean
/// `base_mean + gain * (u - outcome_mean)` and covariance `cov`.
struct HomodyneGain {
    std::vector<std::string> modes;
    Convention convention;
    Eigen::VectorXd base_mean;
    Eigen::VectorXd gain;
    Eigen::MatrixXd cov;
    double outcome_mean;
    double outcome_variance;

    GaussianState at(double outcome) const;
    double pdf(double outcome) const;
    /// Probability that the outcome lies in [-half_width, half_width].
    double window_probability(double half_width) const;
};

HomodyneGain homodyne_gain(const GaussianState& state, std::size_t mode, Quadrature q);

/// Logarithmic negativity (base 2) of a two-mode state.
double log_negativity(const GaussianState& state);
double log_negativity(const Eigen::MatrixXd& cov, Convention convention);

/// Symplectic eigenvalues of a covariance matrix, ascending.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

GaussianState convention_convert(const GaussianState& state, Convention target);

} // namespace cvmem

#endif
