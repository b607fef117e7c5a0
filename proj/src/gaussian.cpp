#include "cvmem/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "cvmem/error.hpp"

namespace cvmem {

void require_finite(double value, const char* name)
{
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << name << " must be finite (got " << value << ")";
        throw ParameterError(os.str());
    }
}

void require_positive(double value, const char* name)
{
    require_finite(value, name);
    if (value <= 0.0) {
        std::ostringstream os;
        os << name << " must be positive (got " << value << ")";
        throw ParameterError(os.str());
    }
}

double vacuum_variance(Convention c)
{
    return c == Convention::Unit ? 1.0 : 0.25;
}

Eigen::MatrixXd symplectic_form(std::size_t modes)
{
    const auto n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
        omega(k, k + 1) = 1.0;
        omega(k + 1, k) = -1.0;
    }
    return omega;
}

bool satisfies_uncertainty(const Eigen::MatrixXd& cov, Convention c, double tol)
{
    const auto modes = static_cast<std::size_t>(cov.rows() / 2);
    const std::complex<double> i(0.0, 1.0);
    Eigen::MatrixXcd m = cov.cast<std::complex<double>>()
                         + i * vacuum_variance(c) * symplectic_form(modes).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, cov.norm());
}

namespace {

void check_covariance(const Eigen::MatrixXd& cov, Convention convention)
{
    if (!cov.allFinite())
        throw ParameterError("covariance contains non-finite entries");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()))
        throw DomainError("covariance matrix is not symmetric");
    if (!satisfies_uncertainty(cov, convention))
        throw DomainError("covariance matrix violates the uncertainty relation");
}

} // namespace

GaussianState::GaussianState(std::vector<std::string> modes, Eigen::VectorXd mean, Eigen::MatrixXd cov,
                             Convention convention)
    : m_modes(std::move(modes)), m_mean(std::move(mean)), m_cov(std::move(cov)), m_convention(convention)
{
    const auto n = static_cast<Eigen::Index>(2 * m_modes.size());
    if (m_mean.size() != n || m_cov.rows() != n || m_cov.cols() != n)
        throw ParameterError("Gaussian state dimensions do not match the mode count");
    if (!m_mean.allFinite())
        throw ParameterError("mean vector contains non-finite entries");
    check_covariance(m_cov, m_convention);
    // remove round-off asymmetry
    m_cov = 0.5 * (m_cov + m_cov.transpose()).eval();
}

GaussianState GaussianState::vacuum(std::vector<std::string> modes, Convention convention)
{
    const auto n = static_cast<Eigen::Index>(2 * modes.size());
    return GaussianState(std::move(modes), Eigen::VectorXd::Zero(n),
                         vacuum_variance(convention) * Eigen::MatrixXd::Identity(n, n), convention);
}

GaussianState GaussianState::two_mode_squeezed(double r, std::vector<std::string> modes, Convention convention)
{
    require_finite(r, "r");
    if (modes.size() != 2)
        throw ParameterError("two-mode squeezed state needs exactly two mode labels");
    const double v = vacuum_variance(convention);
    const double ch = std::cosh(2.0 * r) * v;
    const double sh = std::sinh(2.0 * r) * v;
    Eigen::MatrixXd cov(4, 4);
    cov << ch, 0, sh, 0,
           0, ch, 0, -sh,
           sh, 0, ch, 0,
           0, -sh, 0, ch;
    return GaussianState(std::move(modes), Eigen::VectorXd::Zero(4), cov, convention);
}

std::size_t GaussianState::index_of(const std::string& label) const
{
    auto it = std::find(m_modes.begin(), m_modes.end(), label);
    if (it == m_modes.end())
        throw ParameterError("unknown mode label '" + label + "'");
    return static_cast<std::size_t>(it - m_modes.begin());
}

GaussianState GaussianState::tensor(const GaussianState& other) const
{
    if (other.m_convention != m_convention)
        throw ParameterError("cannot combine states in different conventions");
    std::vector<std::string> modes = m_modes;
    modes.insert(modes.end(), other.m_modes.begin(), other.m_modes.end());
    const auto n1 = m_mean.size();
    const auto n2 = other.m_mean.size();
    Eigen::VectorXd mean(n1 + n2);
    mean << m_mean, other.m_mean;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    cov.topLeftCorner(n1, n1) = m_cov;
    cov.bottomRightCorner(n2, n2) = other.m_cov;
    return GaussianState(std::move(modes), std::move(mean), std::move(cov), m_convention);
}

GaussianState GaussianState::reduced(const std::vector<std::size_t>& keep) const
{
    std::vector<Eigen::Index> idx;
    std::vector<std::string> modes;
    for (auto k : keep) {
        if (k >= m_modes.size())
            throw ParameterError("mode index out of range");
        idx.push_back(static_cast<Eigen::Index>(2 * k));
        idx.push_back(static_cast<Eigen::Index>(2 * k + 1));
        modes.push_back(m_modes[k]);
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXd mean(n);
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mean(i) = m_mean(idx[i]);
        for (Eigen::Index j = 0; j < n; ++j)
            cov(i, j) = m_cov(idx[i], idx[j]);
    }
    return GaussianState(std::move(modes), std::move(mean), std::move(cov), m_convention);
}

double GaussianState::variance(std::size_t mode, Quadrature q) const
{
    const auto k = static_cast<Eigen::Index>(2 * mode + (q == Quadrature::P ? 1 : 0));
    return m_cov(k, k);
}

// --- symplectic maps -------------------------------------------------------

SymplecticMap::SymplecticMap(Eigen::MatrixXd matrix, Eigen::VectorXd displacement, std::string label)
    : m_matrix(std::move(matrix)), m_displacement(std::move(displacement)), m_label(std::move(label))
{
    if (m_matrix.rows() != m_matrix.cols() || m_matrix.rows() % 2 != 0)
        throw ParameterError("symplectic matrix must be square with even dimension");
    if (m_displacement.size() != m_matrix.rows())
        throw ParameterError("displacement dimension does not match the matrix");
    if (!m_matrix.allFinite() || !m_displacement.allFinite())
        throw ParameterError("symplectic map contains non-finite entries");
    const auto omega = symplectic_form(mode_count());
    const double scale = std::max(1.0, m_matrix.squaredNorm());
    if ((m_matrix * omega * m_matrix.transpose() - omega).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DomainError("matrix is not symplectic: " + m_label);
}

SymplecticMap::SymplecticMap(Eigen::MatrixXd matrix, std::string label)
    : SymplecticMap(matrix, Eigen::VectorXd::Zero(matrix.rows()), std::move(label))
{
}

SymplecticMap SymplecticMap::identity(std::size_t modes)
{
    const auto n = static_cast<Eigen::Index>(2 * modes);
    return SymplecticMap(Eigen::MatrixXd::Identity(n, n), "identity");
}

SymplecticMap SymplecticMap::then(const SymplecticMap& next) const
{
    if (next.m_matrix.rows() != m_matrix.rows())
        throw ParameterError("cannot compose maps of different dimension");
    return SymplecticMap(next.m_matrix * m_matrix, next.m_matrix * m_displacement + next.m_displacement,
                         m_label + " ; " + next.m_label);
}

SymplecticMap SymplecticMap::embed(const std::vector<std::size_t>& positions, std::size_t modes) const
{
    if (positions.size() != mode_count())
        throw ParameterError("embedding needs one position per local mode");
    const auto n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::Index> idx;
    for (auto p : positions) {
        if (p >= modes)
            throw ParameterError("embedding position out of range");
        idx.push_back(static_cast<Eigen::Index>(2 * p));
        idx.push_back(static_cast<Eigen::Index>(2 * p + 1));
    }
    for (Eigen::Index i = 0; i < m_matrix.rows(); ++i) {
        d(idx[i]) = m_displacement(i);
        for (Eigen::Index j = 0; j < m_matrix.cols(); ++j)
            m(idx[i], idx[j]) = m_matrix(i, j);
    }
    return SymplecticMap(std::move(m), std::move(d), m_label);
}

SymplecticMap qnd_map(QndKind kind, double kappa)
{
    require_finite(kappa, "kappa");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    // order: X_L, P_L, X_A, P_A
    if (kind == QndKind::Type1) {
        m(0, 3) = kappa; // X_L += k P_A
        m(2, 1) = kappa; // X_A += k P_L
        return SymplecticMap(std::move(m), "qnd1");
    }
    m(0, 2) = kappa;  // X_L += k X_A
    m(3, 1) = -kappa; // P_A -= k P_L
    return SymplecticMap(std::move(m), "qnd2");
}

SymplecticMap squeeze_map(std::size_t mode, std::size_t modes, double factor, SqueezeAxis which)
{
    require_positive(factor, "squeeze factor");
    if (mode >= modes)
        throw ParameterError("squeeze mode out of range");
    const auto n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    const double s = which == SqueezeAxis::XDownPUp ? factor : 1.0 / factor;
    m(2 * mode, 2 * mode) = 1.0 / s;
    m(2 * mode + 1, 2 * mode + 1) = s;
    return SymplecticMap(std::move(m), "squeeze");
}

SymplecticMap rotation_map(std::size_t mode, std::size_t modes, double angle)
{
    require_finite(angle, "angle");
    if (mode >= modes)
        throw ParameterError("rotation mode out of range");
    const auto n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    const auto k = static_cast<Eigen::Index>(2 * mode);
    m(k, k) = std::cos(angle);
    m(k, k + 1) = -std::sin(angle);
    m(k + 1, k) = std::sin(angle);
    m(k + 1, k + 1) = std::cos(angle);
    return SymplecticMap(std::move(m), "rotation");
}

SymplecticMap feed_forward_map(std::size_t source, std::size_t target, Quadrature target_quadrature,
                               double gain, std::size_t modes)
{
    require_finite(gain, "gain");
    if (source >= modes || target >= modes || source == target)
        throw ParameterError("feed-forward needs two distinct modes in range");
    const auto n = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    const auto xs = static_cast<Eigen::Index>(2 * source);
    const auto ps = xs + 1;
    const auto xt = static_cast<Eigen::Index>(2 * target);
    const auto pt = xt + 1;
    if (target_quadrature == Quadrature::P) {
        m(pt, xs) = gain;
        m(ps, xt) = gain;
    } else {
        m(xt, xs) = gain;
        m(ps, pt) = -gain;
    }
    return SymplecticMap(std::move(m), "feed-forward");
}

GaussianState apply_map(const GaussianState& state, const SymplecticMap& map)
{
    if (map.mode_count() != state.mode_count())
        throw ParameterError("map dimension does not match the state");
    const auto& m = map.matrix();
    return GaussianState(state.modes(), m * state.mean() + map.displacement(),
                         m * state.cov() * m.transpose(), state.convention());
}

// --- homodyne ---------------------------------------------------------------

GaussianState HomodyneGain::at(double outcome) const
{
    return GaussianState(modes, base_mean + gain * (outcome - outcome_mean), cov, convention);
}

double HomodyneGain::pdf(double outcome) const
{
    const double z = outcome - outcome_mean;
    return std::exp(-0.5 * z * z / outcome_variance) / std::sqrt(2.0 * std::numbers::pi * outcome_variance);
}

double HomodyneGain::window_probability(double half_width) const
{
    const double s = std::sqrt(2.0 * outcome_variance);
    return 0.5 * (std::erf((half_width - outcome_mean) / s) + std::erf((half_width + outcome_mean) / s));
}

HomodyneGain homodyne_gain(const GaussianState& state, std::size_t mode, Quadrature q)
{
    if (mode >= state.mode_count())
        throw ParameterError("measured mode out of range");
    if (state.mode_count() < 2)
        throw ParameterError("homodyne conditioning needs at least one remaining mode");
    const auto k = static_cast<Eigen::Index>(2 * mode + (q == Quadrature::P ? 1 : 0));
    const double var = state.cov()(k, k);
    if (!(var > 1e-300) || !std::isfinite(var))
        throw NumericError("measured quadrature has singular variance", var);

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < state.mode_count(); ++i)
        if (i != mode)
            keep.push_back(i);
    std::vector<Eigen::Index> idx;
    for (auto i : keep) {
        idx.push_back(static_cast<Eigen::Index>(2 * i));
        idx.push_back(static_cast<Eigen::Index>(2 * i + 1));
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXd c(n), mean(n);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        c(i) = state.cov()(idx[i], k);
        mean(i) = state.mean()(idx[i]);
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = state.cov()(idx[i], idx[j]);
    }
    HomodyneGain out;
    for (auto i : keep)
        out.modes.push_back(state.modes()[i]);
    out.convention = state.convention();
    out.base_mean = mean;
    out.gain = c / var;
    out.cov = a - c * c.transpose() / var;
    out.outcome_mean = state.mean()(k);
    out.outcome_variance = var;
    return out;
}

HomodyneResult homodyne_condition(const GaussianState& state, std::size_t mode, Quadrature q, double outcome)
{
    require_finite(outcome, "outcome");
    const auto g = homodyne_gain(state, mode, q);
    return {g.at(outcome), g.pdf(outcome)};
}

// --- entanglement -------------------------------------------------------------

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov)
{
    const auto modes = static_cast<std::size_t>(cov.rows() / 2);
    const std::complex<double> i(0.0, 1.0);
    Eigen::MatrixXcd m = i * (symplectic_form(modes) * cov).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<double> ev;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        ev.push_back(std::abs(es.eigenvalues()(k)));
    std::sort(ev.begin(), ev.end());
    // eigenvalues come in +/- pairs
    Eigen::VectorXd nu(static_cast<Eigen::Index>(modes));
    for (std::size_t k = 0; k < modes; ++k)
        nu(static_cast<Eigen::Index>(k)) = 0.5 * (ev[2 * k] + ev[2 * k + 1]);
    return nu;
}

double log_negativity(const Eigen::MatrixXd& cov, Convention convention)
{
    if (cov.rows() != 4 || cov.cols() != 4)
        throw ParameterError("log-negativity needs a two-mode covariance matrix");
    check_covariance(cov, convention);
    Eigen::MatrixXd pt = cov;
    // partial transpose flips P of the second mode
    pt.row(3) *= -1.0;
    pt.col(3) *= -1.0;
    const double nu = symplectic_eigenvalues(pt).minCoeff() / vacuum_variance(convention);
    return std::max(0.0, -std::log2(nu));
}

double log_negativity(const GaussianState& state)
{
    if (state.mode_count() != 2)
        throw ParameterError("log-negativity needs exactly two modes");
    return log_negativity(state.cov(), state.convention());
}

GaussianState convention_convert(const GaussianState& state, Convention target)
{
    if (state.convention() == target)
        return state;
    const double s = std::sqrt(vacuum_variance(target) / vacuum_variance(state.convention()));
    return GaussianState(state.modes(), s * state.mean(), s * s * state.cov(), target);
}

} // namespace cvmem
