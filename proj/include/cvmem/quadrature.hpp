#ifndef CVMEM_QUADRATURE_HPP
#define CVMEM_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace cvmem {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15/31) on [lo, hi].
///
/// Converged when error <= max(abs_tol, rel_tol * L1 norm). Throws NumericError
/// with the achieved estimate otherwise.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                              double rel_tol, double abs_tol = 0.0, unsigned max_depth = 18);

/// Composite Gauss-Legendre rule with 32 nodes per panel on [lo, hi].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadRule gauss_legendre(double lo, double hi, std::size_t panels = 1);

/// Panels needed so each is no wider than max_width.
std::size_t panel_count(double lo, double hi, double max_width);

} // namespace cvmem

#endif
