#include "cvmem/wigner.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cvmem/error.hpp"
#include "cvmem/quadrature.hpp"

namespace cvmem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Rect square(double half)
{
    return {-half, half, -half, half};
}

} // namespace

WignerFunction::WignerFunction(Field eval, Rect support, std::string label)
    : m_eval(std::move(eval)), m_support(support), m_label(std::move(label)), m_norm(kNaN)
{
    if (!m_eval)
        throw ParameterError("Wigner function needs an evaluator");
    if (m_support.empty())
        throw ParameterError("Wigner function support hint is empty");
}

double WignerFunction::normalization(double tol) const
{
    if (!std::isnan(m_norm))
        return m_norm;
    return integrate_plane(m_eval, m_support, tol).value;
}

bool WignerFunction::normalization_cached() const
{
    return !std::isnan(m_norm);
}

WignerFunction WignerFunction::with_normalization(double value) const
{
    WignerFunction out = *this;
    out.m_norm = value;
    return out;
}

WignerFunction WignerFunction::renormalized(double tol) const
{
    const double n = integrate_plane(m_eval, m_support, tol).value;
    if (!(std::abs(n) > 0.0))
        throw NumericError("cannot renormalize a Wigner function with zero integral");
    auto f = m_eval;
    WignerFunction out([f, n](double x, double p) { return f(x, p) / n; }, m_support, m_label);
    out.m_norm = 1.0;
    return out;
}

WignerFunction WignerFunction::stretched(double sx, double sp) const
{
    require_positive(sx, "stretch factor");
    require_positive(sp, "stretch factor");
    auto f = m_eval;
    const double jac = 1.0 / (sx * sp);
    WignerFunction out([f, sx, sp, jac](double x, double p) { return jac * f(x / sx, p / sp); },
                       {m_support.x_lo * sx, m_support.x_hi * sx, m_support.p_lo * sp, m_support.p_hi * sp},
                       m_label);
    out.m_norm = m_norm;
    return out;
}

WignerFunction WignerFunction::quarter_turn() const
{
    // state rotated by +90 degrees: W'(x, p) = W(p, -x)
    auto f = m_eval;
    const Rect& s = m_support;
    WignerFunction out([f](double x, double p) { return f(p, -x); }, {-s.p_hi, -s.p_lo, s.x_lo, s.x_hi},
                       m_label);
    out.m_norm = m_norm;
    return out;
}

WignerFunction WignerFunction::quarter_turn_back() const
{
    auto f = m_eval;
    const Rect& s = m_support;
    WignerFunction out([f](double x, double p) { return f(-p, x); }, {s.p_lo, s.p_hi, -s.x_hi, -s.x_lo},
                       m_label);
    out.m_norm = m_norm;
    return out;
}

std::vector<double> WignerFunction::sample(const Grid& grid, Exec exec) const
{
    return sample_grid(m_eval, grid, exec);
}

WignerFunction wigner_vacuum()
{
    return WignerFunction([](double x, double p) { return (2.0 / kPi) * std::exp(-2.0 * (x * x + p * p)); },
                          square(6.0), "vacuum")
        .with_normalization(1.0);
}

WignerFunction wigner_single_photon()
{
    return WignerFunction(
               [](double x, double p) {
                   const double r2 = x * x + p * p;
                   return (2.0 / kPi) * std::exp(-2.0 * r2) * (4.0 * r2 - 1.0);
               },
               square(6.5), "single photon")
        .with_normalization(1.0);
}

WignerFunction wigner_squeezed_photon(double a)
{
    require_positive(a, "a");
    return WignerFunction(
               [a](double x, double p) {
                   const double r2 = x * x / (a * a) + a * a * p * p;
                   return (2.0 / kPi) * std::exp(-2.0 * r2) * (4.0 * r2 - 1.0);
               },
               {-6.5 * a, 6.5 * a, -6.5 / a, 6.5 / a}, "squeezed photon")
        .with_normalization(1.0);
}

WignerFunction wigner_cat(double x0, double a)
{
    require_finite(x0, "x0");
    if (x0 < 0.0)
        throw ParameterError("cat amplitude x0 must be non-negative");
    require_positive(a, "a");
    const double norm = kPi * (1.0 + std::exp(-2.0 * x0 * x0));
    WignerFunction w(
        [x0, a, norm](double x, double p) {
            const double xa = x * a;
            const double lobes = std::exp(-2.0 * (xa + x0) * (xa + x0)) + std::exp(-2.0 * (xa - x0) * (xa - x0));
            const double fringes = 2.0 * std::exp(-2.0 * xa * xa) * std::cos(4.0 * x0 * p / a);
            return std::exp(-2.0 * p * p / (a * a)) * (lobes + fringes) / norm;
        },
        {-(x0 + 6.0) / a, (x0 + 6.0) / a, -6.0 * a, 6.0 * a}, "cat");
    return w.renormalized();
}

WignerFunction wigner_photon_mixture(double t)
{
    require_finite(t, "t");
    if (t < 0.0 || t > 1.0)
        throw ParameterError("photon weight must lie in [0, 1]");
    return WignerFunction(
               [t](double x, double p) {
                   const double r2 = x * x + p * p;
                   return (2.0 / kPi) * std::exp(-2.0 * r2) * (1.0 - t + t * (4.0 * r2 - 1.0));
               },
               square(6.5), "photon mixture")
        .with_normalization(1.0);
}

WignerFunction wigner_gaussian(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov)
{
    const double det = cov.determinant();
    if (!(det > 0.0) || !mean.allFinite() || !cov.allFinite())
        throw ParameterError("Gaussian Wigner function needs a positive-definite covariance");
    const Eigen::Matrix2d inv = cov.inverse();
    const double pref = 1.0 / (2.0 * kPi * std::sqrt(det));
    const double sx = 9.0 * std::sqrt(cov(0, 0));
    const double sp = 9.0 * std::sqrt(cov(1, 1));
    return WignerFunction(
               [mean, inv, pref](double x, double p) {
                   const Eigen::Vector2d d(x - mean(0), p - mean(1));
                   return pref * std::exp(-0.5 * d.dot(inv * d));
               },
               {mean(0) - sx, mean(0) + sx, mean(1) - sp, mean(1) + sp}, "gaussian")
        .with_normalization(1.0);
}

double fidelity(const WignerFunction& w, const WignerFunction& target, double tol, Exec exec)
{
    const Rect r = w.support().intersect(target.support());
    if (r.empty())
        return 0.0;
    const auto& f = w.field();
    const auto& g = target.field();
    const auto res = integrate_plane([&](double x, double p) { return f(x, p) * g(x, p); }, r, tol / kPi, exec, 64,
                                     8192);
    return kPi * res.value;
}

double negativity(const WignerFunction& w)
{
    return w(0.0, 0.0);
}

std::function<double(double)> marginal_p(const WignerFunction& w, double tol)
{
    const auto f = w.field();
    const double lo = w.support().x_lo;
    const double hi = w.support().x_hi;
    return [f, lo, hi, tol](double p) {
        return integrate_adaptive([&](double x) { return f(x, p); }, lo, hi, tol, tol).value;
    };
}

WignerFunction apply_loss(const WignerFunction& w, double eta)
{
    require_finite(eta, "eta");
    if (!(eta > 0.0) || eta > 1.0)
        throw ParameterError("efficiency eta must lie in (0, 1]");
    if (eta == 1.0)
        return w;
    const double sigma2 = (1.0 - eta) / 4.0;
    const double sigma = std::sqrt(sigma2);
    const double se = std::sqrt(eta);
    const auto f = w.field();
    const Rect s = w.support();
    const double reach = 9.0 * sigma;
    const Rect out_support{se * s.x_lo - reach, se * s.x_hi + reach, se * s.p_lo - reach, se * s.p_hi + reach};
    const double kernel_norm = 1.0 / (2.0 * kPi * sigma2);
    const double tol = 1e-11;

    Field eval;
    if (eta >= 0.5) {
        // substituted form: W'(x,p) = (1/eta) int int W((x-s)/sqrt(eta), (p-t)/sqrt(eta)) G(s) G(t)
        eval = [=](double x, double p) {
            auto inner = [&](double t) {
                return integrate_adaptive(
                           [&](double sx) {
                               return f((x - sx) / se, (p - t) / se) * std::exp(-(sx * sx + t * t) / (2.0 * sigma2));
                           },
                           -reach, reach, tol, tol)
                    .value;
            };
            return kernel_norm / eta * integrate_adaptive(inner, -reach, reach, tol, tol).value;
        };
    } else {
        // direct form: W'(x,p) = int int W(u,v) G(x - sqrt(eta) u) G(p - sqrt(eta) v)
        eval = [=](double x, double p) {
            auto inner = [&](double v) {
                const double dp = p - se * v;
                return integrate_adaptive(
                           [&](double u) {
                               const double dx = x - se * u;
                               return f(u, v) * std::exp(-(dx * dx + dp * dp) / (2.0 * sigma2));
                           },
                           s.x_lo, s.x_hi, tol, tol)
                    .value;
            };
            return kernel_norm * integrate_adaptive(inner, s.p_lo, s.p_hi, tol, tol).value;
        };
    }
    return WignerFunction(std::move(eval), out_support, w.label() + " after loss").with_normalization(
        w.normalization_cached() ? w.normalization() : std::numeric_limits<double>::quiet_NaN());
}

} // namespace cvmem
