#include "cvmem/record.hpp"

#include <algorithm>
#include <cmath>

#include "cvmem/error.hpp"

namespace cvmem {

RecordGains solve_record_gains(double kappa, double c)
{
    require_positive(kappa, "kappa");
    require_positive(c, "c");
    const double k2 = c * c * kappa * kappa;
    return {-c * c * kappa / (1.0 + k2), 1.0 / std::sqrt(1.0 + k2), k2 / (1.0 + k2)};
}

PostCorrection postcorrection_params(double kappa_prime)
{
    require_finite(kappa_prime, "kappa'");
    if (kappa_prime <= 0.0)
        throw ParameterError("kappa' must be positive");
    if (kappa_prime >= 1.0)
        throw DomainError("post-correction needs kappa' < 1 (b^2 = 1 - kappa'^2 must be positive)");
    const double b2 = 1.0 - kappa_prime * kappa_prime;
    return {-kappa_prime, std::sqrt(b2), b2};
}

double composed_transmission(double kappa, double c)
{
    require_finite(kappa, "kappa");
    require_positive(c, "c");
    if (kappa < 0.0)
        throw ParameterError("kappa must be non-negative");
    const double k2 = c * c * kappa * kappa;
    if (k2 == 0.0)
        return 0.0;
    // symmetric in k2 <-> 1/k2, so rounding cannot push it past 1/4
    return 1.0 / (2.0 + k2 + 1.0 / k2);
}

namespace {

constexpr std::size_t L = 0;
constexpr std::size_t A = 1;
constexpr std::size_t L0 = 2;

} // namespace

ChannelReport record_channel_report(double kappa, double c, bool with_postcorrection,
                                    std::optional<double> gain_override)
{
    require_finite(kappa, "kappa");
    require_positive(c, "c");
    if (kappa < 0.0)
        throw ParameterError("kappa must be non-negative");

    ChannelReport rep;
    rep.kappa = kappa;
    rep.c = c;
    rep.post_corrected = with_postcorrection;
    rep.frame = "X_A <- P_L, P_A <- -X_L";

    // kappa = 0 decouples the atom, which then keeps its vacuum
    const RecordGains gains = kappa > 0.0 ? solve_record_gains(kappa, c) : RecordGains{0.0, 1.0, 0.0};
    rep.g = gain_override.value_or(gains.g);
    rep.a = gains.a;

    SymplecticMap m = squeeze_map(L, 3, c, SqueezeAxis::XDownPUp)
                          .then(qnd_map(QndKind::Type1, kappa).embed({L, A}, 3))
                          .then(feed_forward_map(L, A, Quadrature::P, rep.g, 3));

    double sx = gains.a;
    double sp = 1.0 / gains.a;
    if (with_postcorrection && kappa > 0.0) {
        rep.kappa_prime = std::sqrt(gains.T_R); // matched: b = a
        const auto post = postcorrection_params(rep.kappa_prime);
        rep.g_post = post.g;
        rep.b = post.b;
        m = m.then(qnd_map(QndKind::Type2, rep.kappa_prime).embed({L0, A}, 3))
                .then(feed_forward_map(L0, A, Quadrature::X, post.g, 3));
    }
    if (with_postcorrection)
        sx = sp = 1.0;

    const Eigen::MatrixXd& M = m.matrix();
    const auto xa = static_cast<Eigen::Index>(2 * A);
    const auto pa = xa + 1;
    // columns: 0 X_L, 1 P_L, 2 X_A, 3 P_A, 4 X_L0, 5 P_L0 (all inputs but L are vacuum)
    auto ancilla_noise = [&](Eigen::Index row, double scale) {
        double v = 0.0;
        for (Eigen::Index col = 2; col < 6; ++col)
            v += (scale * M(row, col)) * (scale * M(row, col));
        return v;
    };
    rep.T_x = std::pow(sx * M(xa, 1), 2);
    rep.T_p = std::pow(sp * M(pa, 0), 2);
    rep.V_Nx = ancilla_noise(xa, sx);
    rep.V_Np = ancilla_noise(pa, sp);
    rep.cross_talk = std::max(std::abs(sx * M(xa, 0)), std::abs(sp * M(pa, 1)));

    const double tol = 1e-9;
    rep.noise_excess_free = rep.V_Nx <= 1.0 - rep.T_x + tol && rep.V_Np <= 1.0 - rep.T_p + tol
                            && rep.cross_talk <= tol;
    return rep;
}

} // namespace cvmem
