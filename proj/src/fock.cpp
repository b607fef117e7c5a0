#include "cvmem/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cvmem/error.hpp"
#include "cvmem/quadrature.hpp"

namespace cvmem {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

void require_dims(std::size_t ntrunc)
{
    if (ntrunc < 1)
        throw ParameterError("truncation must be at least 1");
    if (ntrunc > 400)
        throw ParameterError("truncation above 400 is not supported");
}

} // namespace

void FockDensity::validate(double tol) const
{
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw DomainError("density matrix must be square and non-empty");
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw DomainError("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw DomainError("density matrix has a negative eigenvalue");
    if (std::abs(matrix.trace().real() - 1.0) > tol)
        throw DomainError("density matrix does not have unit trace");
}

FockDensity FockDensity::pure(const Ket& ket, std::string label)
{
    return {ket * ket.adjoint(), std::move(label)};
}

FockDensity FockDensity::diagonal(const std::vector<double>& populations, std::string label)
{
    const auto n = static_cast<Eigen::Index>(populations.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = populations[static_cast<std::size_t>(i)];
    return {m, std::move(label)};
}

std::vector<double> oscillator_functions(std::size_t nmax, double x)
{
    std::vector<double> phi(nmax + 1);
    const double xi = std::sqrt(2.0) * x;
    phi[0] = std::pow(2.0 / kPi, 0.25) * std::exp(-x * x);
    if (nmax >= 1)
        phi[1] = std::sqrt(2.0) * xi * phi[0];
    for (std::size_t n = 1; n < nmax; ++n) {
        const double nn = static_cast<double>(n);
        phi[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * xi * phi[n] - std::sqrt(nn / (nn + 1.0)) * phi[n - 1];
    }
    return phi;
}

namespace {

// Nodes covering the classically allowed region of |N> plus a Gaussian margin.
QuadRule position_rule(std::size_t ntrunc, double extra)
{
    const double turning = 0.5 * std::sqrt(2.0 * static_cast<double>(ntrunc) + 1.0);
    const double half = std::max(turning + 6.0, extra);
    return gauss_legendre(-half, half, panel_count(-half, half, 0.25));
}

} // namespace

ProjectedKet project_wavefunction(const std::function<double(double)>& psi, std::size_t ntrunc)
{
    require_dims(ntrunc);
    const auto rule = position_rule(ntrunc, 12.0);
    Ket c = Ket::Zero(static_cast<Eigen::Index>(ntrunc + 1));
    double norm2 = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double v = psi(rule.nodes[k]);
        const double w = rule.weights[k];
        norm2 += w * v * v;
        const auto phi = oscillator_functions(ntrunc, rule.nodes[k]);
        for (std::size_t n = 0; n <= ntrunc; ++n)
            c(static_cast<Eigen::Index>(n)) += w * phi[n] * v;
    }
    if (!(norm2 > 0.0))
        throw ParameterError("wavefunction has zero norm");
    const double kept = c.squaredNorm();
    if (!(kept > 0.0))
        throw NumericError("wavefunction has no weight inside the truncated basis");
    return {c / std::sqrt(kept), std::max(0.0, 1.0 - kept / norm2)};
}

Ket fock_ket(std::size_t n, std::size_t ntrunc)
{
    require_dims(ntrunc);
    if (n > ntrunc)
        throw ParameterError("Fock index exceeds the truncation");
    Ket k = Ket::Zero(static_cast<Eigen::Index>(ntrunc + 1));
    k(static_cast<Eigen::Index>(n)) = 1.0;
    return k;
}

Ket coherent_ket(cd alpha, std::size_t ntrunc)
{
    require_dims(ntrunc);
    Ket k(static_cast<Eigen::Index>(ntrunc + 1));
    k(0) = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 1; n <= ntrunc; ++n)
        k(static_cast<Eigen::Index>(n)) = k(static_cast<Eigen::Index>(n - 1)) * alpha / std::sqrt(static_cast<double>(n));
    return k;
}

ProjectedKet squeezed_photon_ket(double a, std::size_t ntrunc)
{
    require_positive(a, "a");
    return project_wavefunction([a](double x) { return x * std::exp(-x * x / (a * a)); }, ntrunc);
}

ProjectedKet cat_ket(double x0, double a, std::size_t ntrunc)
{
    require_positive(a, "a");
    require_finite(x0, "x0");
    return project_wavefunction([x0, a](double x) { return std::exp(-x * x / (a * a)) * std::cos(2.0 * x0 * x / a); },
                                ntrunc);
}

Eigen::MatrixXcd annihilation(std::size_t ntrunc)
{
    require_dims(ntrunc);
    const auto n = static_cast<Eigen::Index>(ntrunc + 1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k)
        m(k - 1, k) = std::sqrt(static_cast<double>(k));
    return m;
}

Eigen::MatrixXcd quadrature_operator(Quadrature q, std::size_t ntrunc)
{
    const Eigen::MatrixXcd a = annihilation(ntrunc);
    if (q == Quadrature::X)
        return 0.5 * (a + a.adjoint());
    return (a - a.adjoint()) / cd(0.0, 2.0);
}

QndUnitary::QndUnitary(QndKind kind, double kappa, std::size_t ntrunc) : m_n(ntrunc), m_kappa(kappa)
{
    require_finite(kappa, "kappa");
    require_dims(ntrunc);
    // Type2: generator P_L X_A gives X_L += k X_A, P_A -= k P_L.
    // Type1: generator P_L P_A gives X_L += k P_A, X_A += k P_L.
    const auto gl = quadrature_operator(Quadrature::P, ntrunc);
    const auto ga = quadrature_operator(kind == QndKind::Type2 ? Quadrature::X : Quadrature::P, ntrunc);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> el(gl);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(ga);
    m_vl = el.eigenvectors();
    m_dl = el.eigenvalues();
    m_va = ea.eigenvectors();
    m_da = ea.eigenvalues();
}

Eigen::MatrixXcd QndUnitary::apply(const Eigen::MatrixXcd& psi) const
{
    const auto n = static_cast<Eigen::Index>(m_n + 1);
    if (psi.rows() != n || psi.cols() != n)
        throw ParameterError("two-mode state does not match the truncation");
    // psi -> V_L [phase .* (V_L^dag psi conj(V_A))] V_A^T
    Eigen::MatrixXcd t = m_vl.adjoint() * psi * m_va.conjugate();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            t(i, j) *= std::polar(1.0, -2.0 * m_kappa * m_dl(i) * m_da(j));
    return m_vl * t * m_va.transpose();
}

Eigen::MatrixXcd QndUnitary::dense() const
{
    const auto n = static_cast<Eigen::Index>(m_n + 1);
    Eigen::MatrixXcd u(n * n, n * n);
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            basis(m, k) = 1.0;
            const Eigen::MatrixXcd out = apply(basis);
            basis(m, k) = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    u(i * n + j, m * n + k) = out(i, j);
        }
    }
    return u;
}

Eigen::MatrixXd window_povm(double B, std::size_t ntrunc)
{
    require_positive(B, "B");
    require_dims(ntrunc);
    // beyond this the oscillator functions of the truncated basis vanish
    const double reach = 0.5 * std::sqrt(2.0 * static_cast<double>(ntrunc) + 1.0) + 8.0;
    const double hi = std::min(B, reach);
    const auto rule = gauss_legendre(-hi, hi, panel_count(-hi, hi, 0.25));
    const auto n = static_cast<Eigen::Index>(ntrunc + 1);
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const auto phi = oscillator_functions(ntrunc, rule.nodes[k]);
        const Eigen::Map<const Eigen::VectorXd> v(phi.data(), n);
        e.noalias() += rule.weights[k] * v * v.transpose();
    }
    return e;
}

OracleUpload upload_oracle(const Ket& light, double kappa, double B, std::size_t ntrunc)
{
    require_positive(kappa, "kappa");
    require_positive(B, "B");
    require_dims(ntrunc);
    const auto n = static_cast<Eigen::Index>(ntrunc + 1);
    if (light.size() != n)
        throw ParameterError("light state does not match the truncation");

    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n, n);
    psi.col(0) = light / light.norm();
    const QndUnitary u(QndKind::Type2, kappa, ntrunc);
    psi = u.apply(psi);

    OracleUpload out;
    const Eigen::Index edge = std::min<Eigen::Index>(5, n);
    out.leakage = psi.bottomRows(edge).squaredNorm() + psi.rightCols(edge).squaredNorm();

    const Eigen::MatrixXd e = window_povm(B, ntrunc);
    // rho_A = Tr_L[(E (x) 1) |psi><psi|] = psi^T E conj(psi)
    Eigen::MatrixXcd rho = psi.transpose() * e.cast<cd>() * psi.conjugate();
    out.S = rho.trace().real();
    if (!(out.S > 1e-14))
        throw NumericError("post-selection probability below 1e-14: conditioning is degenerate", out.S);
    rho /= out.S;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.rho = {rho, "conditioned atom"};
    if (out.leakage > 1e-6) {
        std::ostringstream os;
        os << "truncation leakage " << out.leakage << " exceeds 1e-6";
        out.warnings.push_back(os.str());
    }
    return out;
}

FockMetrics fock_metrics(const FockDensity& rho)
{
    const auto n = rho.matrix.rows();
    double sign = 1.0;
    double parity = 0.0;
    double mean = 0.0;
    double second = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double p = rho.matrix(k, k).real();
        parity += sign * p;
        sign = -sign;
        mean += static_cast<double>(k) * p;
        second += static_cast<double>(k * k) * p;
    }
    FockMetrics m;
    m.F = n > 1 ? rho.matrix(1, 1).real() : 0.0;
    m.N = 2.0 / kPi * parity;
    m.Q = mean > 0.0 ? (second - mean * mean - mean) / mean : 0.0;
    return m;
}

double fidelity_with(const FockDensity& rho, const Ket& target)
{
    if (target.size() != rho.matrix.rows())
        throw ParameterError("target ket does not match the density matrix");
    return (target.adjoint() * rho.matrix * target)(0, 0).real() / target.squaredNorm();
}

double wigner_from_fock(const FockDensity& rho, double x, double p)
{
    const auto n = rho.matrix.rows();
    const cd beta(2.0 * x, 2.0 * p);
    // D(m, k) = <m|D(beta)|k>, built column by column from the first row
    Eigen::MatrixXcd d(n, n);
    d(0, 0) = std::exp(-0.5 * std::norm(beta));
    for (Eigen::Index k = 1; k < n; ++k)
        d(0, k) = d(0, k - 1) * (-std::conj(beta)) / std::sqrt(static_cast<double>(k));
    for (Eigen::Index m = 0; m + 1 < n; ++m) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(m + 1));
        d(m + 1, 0) = beta * d(m, 0) * inv;
        for (Eigen::Index k = 1; k < n; ++k)
            d(m + 1, k) = (std::sqrt(static_cast<double>(k)) * d(m, k - 1) + beta * d(m, k)) * inv;
    }
    cd sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        cd col = 0.0;
        for (Eigen::Index m = 0; m < n; ++m)
            col += rho.matrix(k, m) * d(m, k);
        sum += sign * col;
    }
    return 2.0 / kPi * sum.real();
}

std::vector<double> wigner_from_fock(const FockDensity& rho, const Grid& grid, Exec exec)
{
    return sample_grid([&rho](double x, double p) { return wigner_from_fock(rho, x, p); }, grid, exec);
}

} // namespace cvmem
