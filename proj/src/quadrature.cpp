#include "cvmem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cvmem/error.hpp"

namespace cvmem {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                              double rel_tol, double abs_tol, unsigned max_depth)
{
    using boost::math::quadrature::gauss_kronrod;
    if (hi == lo)
        return {};
    double err = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(f, lo, hi, max_depth, rel_tol, &err, &l1);
    if (!std::isfinite(value))
        throw NumericError("quadrature produced a non-finite value", err);
    if (err > std::max(abs_tol, 10.0 * rel_tol * l1)) {
        std::ostringstream os;
        os << "adaptive quadrature did not converge on [" << lo << ", " << hi << "]: error estimate " << err;
        throw NumericError(os.str(), err);
    }
    return {value, err};
}

QuadRule gauss_legendre(double lo, double hi, std::size_t panels)
{
    using rule = boost::math::quadrature::gauss<double, 32>;
    const auto& abscissa = rule::abscissa();
    const auto& weights = rule::weights();
    panels = std::max<std::size_t>(panels, 1);
    QuadRule out;
    out.nodes.reserve(32 * panels);
    out.weights.reserve(32 * panels);
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double mid = a + 0.5 * width;
        const double half = 0.5 * width;
        // boost stores the non-negative half of a symmetric rule
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            out.nodes.push_back(mid - half * abscissa[i]);
            out.weights.push_back(half * weights[i]);
            if (abscissa[i] != 0.0) {
                out.nodes.push_back(mid + half * abscissa[i]);
                out.weights.push_back(half * weights[i]);
            }
        }
    }
    return out;
}

std::size_t panel_count(double lo, double hi, double max_width)
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / max_width)));
}

} // namespace cvmem
