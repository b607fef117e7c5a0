#ifndef CVMEM_SPECIAL_HPP
#define CVMEM_SPECIAL_HPP

#include <complex>

namespace cvmem {

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Rational approximation of Weideman (40 terms) in the upper half plane,
/// reflected to the lower half plane. Absolute error below 1e-14 for Im z >= 0.
std::complex<double> faddeeva(std::complex<double> z);

/// Error function of a complex argument.
std::complex<double> erf(std::complex<double> z);

/// exp(-y^2) * erf(r + iy), free of overflow for large |y|.
std::complex<double> scaled_erf(double r, double y);

/// exp(-y^2) * Re erf(r + iy).
double scaled_re_erf(double r, double y);

/// erf(hi) - erf(lo) without cancellation when both arguments share a sign.
double erf_diff(double hi, double lo);

/// erf(b - c) + erf(b + c): probability mass of a unit-scale window, evaluated
/// accurately when the window is far in a tail.
double erf_window(double b, double c);

} // namespace cvmem

#endif
