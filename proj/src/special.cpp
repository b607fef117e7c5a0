#include "cvmem/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace cvmem {

namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
    double L;
    std::array<double, kTerms + 1> a{}; // a[1..N]
};

WeidemanTable make_table()
{
    WeidemanTable t;
    const int m = 2 * kTerms;
    t.L = std::sqrt(kTerms / std::sqrt(2.0));
    std::array<double, 2 * m> f{};
    // k runs over -m+1 .. m-1, theta = k pi / m
    for (int k = -m + 1; k <= m - 1; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double s = t.L * std::tan(theta / 2.0);
        f[static_cast<std::size_t>(k + m)] = std::exp(-s * s) * (t.L * t.L + s * s);
    }
    for (int n = 1; n <= kTerms; ++n) {
        double sum = 0.0;
        for (int k = -m + 1; k <= m - 1; ++k)
            sum += f[static_cast<std::size_t>(k + m)] * std::cos(std::numbers::pi * k * n / m);
        t.a[static_cast<std::size_t>(n)] = sum / (2.0 * m);
    }
    return t;
}

const WeidemanTable& table()
{
    static const WeidemanTable t = make_table();
    return t;
}

std::complex<double> faddeeva_upper(std::complex<double> z)
{
    const auto& t = table();
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> lmz = t.L - i * z;
    const std::complex<double> zz = (t.L + i * z) / lmz;
    std::complex<double> p = 0.0;
    for (int n = kTerms; n >= 1; --n)
        p = p * zz + t.a[static_cast<std::size_t>(n)];
    return 2.0 * p / (lmz * lmz) + (1.0 / std::sqrt(std::numbers::pi)) / lmz;
}

} // namespace

std::complex<double> faddeeva(std::complex<double> z)
{
    if (z.imag() >= 0.0)
        return faddeeva_upper(z);
    return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

std::complex<double> erf(std::complex<double> z)
{
    if (z.imag() == 0.0)
        return std::erf(z.real());
    if (z.real() < 0.0)
        return -erf(-z);
    // erfc(z) = exp(-z^2) w(iz); Im(iz) = Re z >= 0
    const std::complex<double> i(0.0, 1.0);
    return 1.0 - std::exp(-z * z) * faddeeva(i * z);
}

std::complex<double> scaled_erf(double r, double y)
{
    if (r < 0.0)
        return -scaled_erf(-r, -y);
    // exp(-y^2) [1 - exp(-(r+iy)^2) w(i(r+iy))]
    //   = exp(-y^2) - exp(-r^2 - 2iry) w(-y + ir)
    const std::complex<double> w = faddeeva({-y, r});
    const std::complex<double> phase = std::polar(std::exp(-r * r), -2.0 * r * y);
    return std::exp(-y * y) - phase * w;
}

double scaled_re_erf(double r, double y)
{
    return scaled_erf(r, y).real();
}

double erf_diff(double hi, double lo)
{
    const double h = 0.5 * (hi - lo);
    const double m = 0.5 * (hi + lo);
    if (h > 0.0 && h <= 0.25 && std::abs(m) * h <= 2.0) {
        // narrow window: integrate exp(-t^2) about the midpoint
        auto f = [m](double s) { return std::exp(-s * s - 2.0 * m * s); };
        const double r = boost::math::quadrature::gauss<double, 20>::integrate(f, -h, h);
        return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-m * m) * r;
    }
    if (lo >= 0.0)
        return std::erfc(lo) - std::erfc(hi);
    if (hi <= 0.0)
        return std::erfc(-hi) - std::erfc(-lo);
    return std::erf(hi) - std::erf(lo);
}

double erf_window(double b, double c)
{
    return erf_diff(b + c, c - b);
}

} // namespace cvmem
