#include "cvmem/upload.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "cvmem/error.hpp"
#include "cvmem/gaussian.hpp"
#include "cvmem/quadrature.hpp"
#include "cvmem/special.hpp"

namespace cvmem {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// erf(z) - 2 z exp(-z^2) / sqrt(pi), free of cancellation for small z
double erf_minus_slope(double z)
{
    return boost::math::gamma_p(1.5, z * z);
}

} // namespace

double PostSelectParams::d() const
{
    return std::sqrt(a * a + kappa * kappa);
}

void PostSelectParams::validate() const
{
    require_positive(kappa, "kappa");
    require_positive(B, "B");
    require_positive(a, "a");
    require_finite(x0, "x0");
    require_finite(eta, "eta");
    if (x0 < 0.0)
        throw ParameterError("cat amplitude x0 must be non-negative");
    if (!(eta > 0.0) || eta > 1.0)
        throw ParameterError("efficiency eta must lie in (0, 1]");
}

// --- single photon -----------------------------------------------------------

double photon_success_rate(double kappa, double a, double B)
{
    require_positive(kappa, "kappa");
    require_positive(a, "a");
    require_positive(B, "B");
    const double d2 = a * a + kappa * kappa;
    const double z = kSqrt2 * B / std::sqrt(d2);
    return erf_minus_slope(z) + 2.0 / std::sqrt(kPi) * z * std::exp(-z * z) * kappa * kappa / d2;
}

namespace {

Field photon_field(double kappa, double a, double B, double S)
{
    const double d2 = a * a + kappa * kappa;
    const double d = std::sqrt(d2);
    const double pref1 = a * a * a / (kPi * S * d2 * d2 * d);
    const double pref2 = 4.0 * kSqrt2 / (std::pow(kPi, 1.5) * S * d);
    const double wb = kSqrt2 * B / a;
    return [=](double x, double p) {
        const double env = std::exp(-2.0 * a * a * p * p / d2 - 2.0 * x * x);
        const double t1 = pref1 * (d2 + 4.0 * kappa * kappa * p * p) * env * erf_window(wb, kSqrt2 * kappa * x / a);
        // B cosh(4 B k x / a^2) - k x sinh(...) folded into the Gaussians it multiplies
        const double lo = B - kappa * x;
        const double hi = B + kappa * x;
        const double edge = 0.5 * (lo * std::exp(-2.0 * lo * lo / (a * a)) + hi * std::exp(-2.0 * hi * hi / (a * a)));
        const double t2 = pref2 * env * edge;
        return t1 - t2;
    };
}

} // namespace

double photon_fidelity_max(double kappa, double a)
{
    require_positive(kappa, "kappa");
    require_positive(a, "a");
    const double d2 = a * a + kappa * kappa;
    const double den = 2.0 * a * a + kappa * kappa;
    return 8.0 * a * a * a * std::pow(d2, 1.5) / (den * den * den);
}

Upload closed_form_photon_upload(const PostSelectParams& params, bool post_correct, Exec exec)
{
    params.validate();
    const double kappa = params.kappa;
    const double a = params.a;
    const double d = params.d();
    const double S = photon_success_rate(kappa, a, params.B);
    if (!(S > 1e-300))
        throw NumericError("success rate underflows", S);

    WignerFunction w(photon_field(kappa, a, params.B, S), {-6.5, 6.5, -6.5 * d / a, 6.5 * d / a},
                     "uploaded photon");
    w = w.with_normalization(1.0);
    if (post_correct)
        w = w.stretched(d / a, a / d);

    UploadReport rep;
    rep.params = params;
    rep.S = S;
    rep.N = negativity(w);
    rep.F = fidelity(w, wigner_single_photon(), 1e-11, exec);
    rep.post_corrected = post_correct;
    if (params.eta != 1.0)
        rep.warnings.push_back("closed form ignores eta; use the numeric engine for lossy detection");
    return {std::move(w), std::move(rep)};
}

// --- cat --------------------------------------------------------------------

CatSuccess cat_success_rate(double x0, double kappa, double a, double B)
{
    require_positive(kappa, "kappa");
    require_positive(a, "a");
    require_positive(B, "B");
    require_finite(x0, "x0");
    const double d = std::sqrt(a * a + kappa * kappa);
    const double r = kSqrt2 * B / d;
    const double y = kSqrt2 * x0 * a / d;
    const double damp = std::exp(-2.0 * kappa * kappa * x0 * x0 / (d * d));
    // Erf[r + iy] - Erf[-r + iy]: a conjugate pair up to sign, real by symmetry
    const std::complex<double> pair = scaled_erf(r, y) - scaled_erf(-r, y);
    const double S = (std::erf(r) + 0.5 * damp * pair.real()) / (1.0 + std::exp(-2.0 * x0 * x0));
    return {S, std::abs(0.5 * damp * pair.imag())};
}

namespace {

struct CatTerms {
    double kappa, a, B, x0, d, S, norm;

    double erf_part(double p) const { return erf_window(kSqrt2 * B / a, kSqrt2 * kappa * p / a); }

    // exp(-2 x0^2) CERF(p)
    double cerf_part(double p) const
    {
        const double y = kSqrt2 * x0;
        return scaled_re_erf(kSqrt2 * (B - kappa * p) / a, y) + scaled_re_erf(kSqrt2 * (B + kappa * p) / a, y);
    }
};

CatTerms cat_terms(const PostSelectParams& prm)
{
    const double d = prm.d();
    const auto s = cat_success_rate(prm.x0, prm.kappa, prm.a, prm.B);
    if (!(s.S > 1e-300))
        throw NumericError("success rate underflows", s.S);
    return {prm.kappa, prm.a, prm.B, prm.x0, d, s.S, 1.0 + std::exp(-2.0 * prm.x0 * prm.x0)};
}

} // namespace

Upload closed_form_cat_upload(const PostSelectParams& params, bool post_correct, Exec exec)
{
    params.validate();
    const auto ct = cat_terms(params);
    const auto check = cat_success_rate(params.x0, params.kappa, params.a, params.B);
    const double a = ct.a;
    const double d = ct.d;
    const double kx = ct.kappa * ct.x0;
    const double pref = a / (kPi * d * ct.S * ct.norm);
    Field f = [ct, a, d, kx, pref](double x, double p) {
        const double u = a * x;
        const double lobes = 0.5 * (std::exp(-2.0 * (u - kx) * (u - kx) / (d * d))
                                    + std::exp(-2.0 * (u + kx) * (u + kx) / (d * d)));
        const double fringe = std::exp(-2.0 * u * u / (d * d));
        return pref * std::exp(-2.0 * p * p) * (lobes * ct.erf_part(p) + fringe * ct.cerf_part(p));
    };
    const double xr = (kx + 6.5 * d) / a;
    WignerFunction w(std::move(f), {-xr, xr, -6.5, 6.5}, "uploaded cat");
    w = w.with_normalization(1.0);

    const double x0p = kx / d;
    if (post_correct)
        w = w.stretched(a / d, d / a);

    UploadReport rep;
    rep.params = params;
    rep.S = ct.S;
    rep.x0_prime = x0p;
    rep.N = negativity(w);
    rep.F = fidelity(w, wigner_cat(x0p, post_correct ? 1.0 : a / d), 1e-10, exec);
    rep.post_corrected = post_correct;
    if (check.imag_residual > 1e-8) {
        std::ostringstream os;
        os << "loss of cancellation in the success rate: imaginary residual " << check.imag_residual;
        rep.warnings.push_back(os.str());
    }
    if (params.eta != 1.0)
        rep.warnings.push_back("closed form ignores eta");
    return {std::move(w), std::move(rep)};
}

double cat_marginal(const PostSelectParams& params, double p)
{
    params.validate();
    const auto ct = cat_terms(params);
    return std::exp(-2.0 * p * p) * (ct.erf_part(p) + ct.cerf_part(p)) / (std::sqrt(2.0 * kPi) * ct.S * ct.norm);
}

double approx_marginal(const PostSelectParams& params, MarginalForm form, double p)
{
    params.validate();
    const double a = params.a;
    const double d = params.d();
    const double x0p = params.kappa * params.x0 / d;
    const double env = 4.0 * std::exp(-2.0 * d * d * p * p / (a * a)) / std::sqrt(2.0 * kPi);
    const double c = std::cos(2.0 * d * x0p * p / a);
    const double norm = 1.0 + std::exp(-2.0 * x0p * x0p);
    switch (form) {
    case MarginalForm::SmallB:
    case MarginalForm::ReducedAmplitude:
        // 2 d x0' / a = 2 kappa x0 / a: both forms coincide numerically
        return env * c * c / norm;
    case MarginalForm::Limit:
        return (d / a) * env * c * c / norm;
    }
    return 0.0;
}

// --- numeric engine -----------------------------------------------------------

namespace {

// The light integral does not depend on the atomic p, so each x row is
// computed once per thread and reused along the row.
struct EngineRows {
    std::uint64_t id;
    double kappa;
    QuadRule q;
    // fills out[k] = weight_k * inner(x, q_k)
    std::function<void(double, std::vector<double>&)> fill;

    const std::vector<double>& row(double x) const
    {
        struct Cache {
            std::uint64_t id = 0;
            double x = std::numeric_limits<double>::quiet_NaN();
            std::vector<double> v;
        };
        thread_local Cache cache;
        if (cache.id != id || cache.x != x) {
            cache.v.assign(q.nodes.size(), 0.0);
            fill(x, cache.v);
            cache.id = id;
            cache.x = x;
        }
        return cache.v;
    }
};

std::uint64_t next_engine_id()
{
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

} // namespace

NumericUpload postselect_upload_numeric(const WignerFunction& light, double kappa, double B, double eta)
{
    require_positive(kappa, "kappa");
    require_positive(B, "B");
    require_finite(eta, "eta");
    if (!(eta > 0.0) || eta > 1.0)
        throw ParameterError("efficiency eta must lie in (0, 1]");

    const auto wl = light.field();
    const Rect ls = light.support();
    const double atom_x = 6.5;
    // smallest feature scale of the light, used to size the fixed panels
    const double scale = std::min(ls.x_hi - ls.x_lo, ls.p_hi - ls.p_lo) / 26.0;

    auto rows = std::make_shared<EngineRows>();
    rows->id = next_engine_id();
    rows->kappa = kappa;
    rows->q = gauss_legendre(ls.p_lo, ls.p_hi, panel_count(ls.p_lo, ls.p_hi, scale));
    const auto qn = rows->q.nodes;
    const auto qw = rows->q.weights;

    if (eta == 1.0) {
        const double lo = std::max(-B, ls.x_lo - kappa * atom_x);
        const double hi = std::min(B, ls.x_hi + kappa * atom_x);
        if (hi <= lo)
            throw DomainError("acceptance window misses the light state entirely");
        const auto rule = gauss_legendre(lo, hi, panel_count(lo, hi, scale));
        rows->fill = [wl, kappa, rule, qn, qw](double x, std::vector<double>& out) {
            for (std::size_t k = 0; k < qn.size(); ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < rule.nodes.size(); ++j)
                    s += rule.weights[j] * wl(rule.nodes[j] - kappa * x, qn[k]);
                out[k] = qw[k] * s;
            }
        };
    } else {
        // lossy detection: X'_L is attenuated by sqrt(eta) and gains vacuum
        // noise of variance (1 - eta)/4 before the window, which turns the
        // window into a smooth acceptance A(u).
        const double se = std::sqrt(eta);
        const double soft = kSqrt2 / std::sqrt(1.0 - eta);
        const double sigma = std::sqrt((1.0 - eta) / 4.0);
        const double reach = (B + 9.0 * sigma) / se;
        auto accept = [soft, se, B](double u) { return 0.5 * erf_window(soft * B, soft * se * u); };
        // with y = u - k x the light is sampled on a fixed grid shared by all rows
        const double R = reach + kappa * atom_x;
        const double ylo = std::max(ls.x_lo, -R);
        const double yhi = std::min(ls.x_hi, R);
        if (yhi <= ylo)
            throw DomainError("acceptance window misses the light state entirely");
        const std::size_t panels = panel_count(ylo, yhi, std::min(scale, sigma / se));
        if (panels > 256) {
            // acceptance edges too sharp for a shared grid: integrate per node
            rows->fill = [wl, kappa, ls, reach, accept, qn, qw](double x, std::vector<double>& out) {
                const double lo = std::max(-reach, ls.x_lo + kappa * x);
                const double hi = std::min(reach, ls.x_hi + kappa * x);
                if (hi <= lo)
                    return;
                for (std::size_t k = 0; k < qn.size(); ++k) {
                    auto g = [&](double u) { return accept(u) * wl(u - kappa * x, qn[k]); };
                    out[k] = qw[k] * integrate_adaptive(g, lo, hi, 1e-10, 1e-14).value;
                }
            };
        } else {
            const auto yr = gauss_legendre(ylo, yhi, panels);
            const auto ny = static_cast<Eigen::Index>(yr.nodes.size());
            const auto nq = static_cast<Eigen::Index>(qn.size());
            auto table = std::make_shared<Eigen::MatrixXd>(nq, ny);
            for_each_index(static_cast<std::size_t>(ny), [&](std::size_t j) {
                for (Eigen::Index k = 0; k < nq; ++k)
                    (*table)(k, static_cast<Eigen::Index>(j)) = wl(yr.nodes[j], qn[static_cast<std::size_t>(k)]);
            });
            rows->fill = [table, yr, kappa, accept, qw](double x, std::vector<double>& out) {
                Eigen::VectorXd wa(static_cast<Eigen::Index>(yr.nodes.size()));
                for (std::size_t j = 0; j < yr.nodes.size(); ++j)
                    wa(static_cast<Eigen::Index>(j)) = yr.weights[j] * accept(yr.nodes[j] + kappa * x);
                const Eigen::VectorXd r = (*table) * wa;
                for (std::size_t k = 0; k < out.size(); ++k)
                    out[k] = qw[k] * r(static_cast<Eigen::Index>(k));
            };
        }
    }

    // S = int dx sqrt(2/pi) exp(-2x^2) int dq inner(x, q)
    auto s_integrand = [&](double x) {
        const auto& r = rows->row(x);
        double acc = 0.0;
        for (double v : r)
            acc += v;
        return std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x) * acc;
    };
    const auto s_res = integrate_adaptive(s_integrand, -atom_x, atom_x, 1e-13, 1e-300);
    const double S = s_res.value;
    if (!(S > 1e-14))
        throw NumericError("success probability below the resolvable floor", S);

    Field eval = [rows, S](double x, double p) {
        const double vx = (2.0 / kPi) * std::exp(-2.0 * x * x);
        if (vx == 0.0)
            return 0.0;
        const auto& r = rows->row(x);
        const auto& qn = rows->q.nodes;
        double acc = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double t = p + rows->kappa * qn[k];
            acc += r[k] * std::exp(-2.0 * t * t);
        }
        return vx * acc / S;
    };
    const double p_reach = 6.5 + kappa * std::max(std::abs(ls.p_lo), std::abs(ls.p_hi));
    WignerFunction w(std::move(eval), {-atom_x, atom_x, -p_reach, p_reach}, "numeric upload");
    return {w.with_normalization(1.0), S, s_res.error};
}

GaussianUpload vacuum_upload_gaussian(double kappa, double B)
{
    require_positive(kappa, "kappa");
    require_positive(B, "B");
    auto state = GaussianState::vacuum({"L", "A"}, Convention::Quarter);
    state = apply_map(state, qnd_map(QndKind::Type2, kappa));
    const auto hg = homodyne_gain(state, 0, Quadrature::X);
    const double S = hg.window_probability(B);
    if (!(S > 1e-300))
        throw NumericError("success rate underflows", S);
    const double reach = 12.0 * std::sqrt(hg.outcome_variance);
    const double hi = std::min(B, reach);
    const auto rule = gauss_legendre(-hi, hi, panel_count(-hi, hi, 0.1 * reach));
    std::vector<double> wk;
    std::vector<Eigen::Vector2d> means;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        wk.push_back(rule.weights[k] * hg.pdf(rule.nodes[k]) / S);
        const Eigen::VectorXd m = hg.base_mean + hg.gain * (rule.nodes[k] - hg.outcome_mean);
        means.emplace_back(m(0), m(1));
    }
    const Eigen::Matrix2d cov = hg.cov;
    const Eigen::Matrix2d inv = cov.inverse();
    const double pref = 1.0 / (2.0 * kPi * std::sqrt(cov.determinant()));
    Field f = [wk, means, inv, pref](double x, double p) {
        double s = 0.0;
        for (std::size_t k = 0; k < wk.size(); ++k) {
            const Eigen::Vector2d d(x - means[k](0), p - means[k](1));
            s += wk[k] * std::exp(-0.5 * d.dot(inv * d));
        }
        return pref * s;
    };
    const double sx = 9.0 * std::sqrt(cov(0, 0)) + std::abs(hg.gain(0)) * hi;
    const double sp = 9.0 * std::sqrt(cov(1, 1)) + std::abs(hg.gain(1)) * hi;
    WignerFunction w(std::move(f), {-sx, sx, -sp, sp}, "gaussian upload");
    return {w.with_normalization(1.0), S};
}

double fidelity_on_grid(const WignerFunction& w, const WignerFunction& target, double tol, Exec exec)
{
    const Rect r = w.support().intersect(target.support());
    if (r.empty())
        return 0.0;
    const auto& f = w.field();
    const auto& g = target.field();
    return kPi * integrate_plane([&](double x, double p) { return f(x, p) * g(x, p); }, r, tol / kPi, exec, 16, 1024)
                     .value;
}

Upload lossy_photon_upload(const PostSelectParams& params, bool post_correct, const NumericOptions& options)
{
    params.validate();
    const double a = params.a;
    const double d = params.d();
    auto num = postselect_upload_numeric(wigner_squeezed_photon(a), params.kappa, params.B, params.eta);
    WignerFunction w = num.w;
    if (post_correct)
        w = w.stretched(d / a, a / d);
    UploadReport rep;
    rep.params = params;
    rep.S = num.S;
    rep.N = negativity(w);
    rep.F = fidelity_on_grid(w, wigner_single_photon(), 1e-7, options.exec);
    rep.post_corrected = post_correct;
    return {std::move(w), std::move(rep)};
}

Asymptotics asymptotics(const PostSelectParams& params)
{
    params.validate();
    const double k = params.kappa;
    const double a = params.a;
    const double B = params.B;
    const double a4 = a * a * a * a;
    Asymptotics out;
    out.F_B2 = 4.0 / (3.0 * k * k) + k * k / (2.0 * a4);
    out.N_B2 = 16.0 / (3.0 * kPi * k * k) + 4.0 * k * k / (kPi * a4);
    out.P_S_slope = 2.0 * kSqrt2 * k * k / (std::sqrt(kPi) * a * a * a);
    out.F_expansion = 1.0 - out.F_B2 * B * B;
    out.N_expansion = -2.0 / kPi + out.N_B2 * B * B;
    out.P_S = out.P_S_slope * B;
    out.F_max = photon_fidelity_max(k, a);
    if (B * B / (k * k) > 0.1)
        out.warnings.push_back("B^2 / kappa^2 > 0.1: outside the small-window regime");
    if (k > 0.3)
        out.warnings.push_back("kappa > 0.3: expansion in kappa is unreliable");
    return out;
}

} // namespace cvmem
