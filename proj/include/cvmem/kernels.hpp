#ifndef CVMEM_KERNELS_HPP
#define CVMEM_KERNELS_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace cvmem {

/// Parallel kernels come with a serial reference that must agree with them
/// (bitwise for sampling, to round-off for reductions).
enum class Exec { Serial, Parallel };

using Field = std::function<double(double, double)>;

struct Rect {
    double x_lo, x_hi, p_lo, p_hi;

    Rect unite(const Rect& o) const;
    Rect intersect(const Rect& o) const;
    bool empty() const { return x_hi <= x_lo || p_hi <= p_lo; }
};

/// Regular grid including both end points in each direction.
struct Grid {
    double x_lo, x_hi;
    std::size_t nx;
    double p_lo, p_hi;
    std::size_t np;

    double x(std::size_t i) const;
    double p(std::size_t j) const;
    std::size_t size() const { return nx * np; }
};

/// Values in row-major order: index i * np + j holds (x_i, p_j).
std::vector<double> sample_grid(const Field& f, const Grid& grid, Exec exec = Exec::Parallel);

struct PlaneIntegral {
    double value = 0.0;
    double error = 0.0;
    std::size_t points_per_axis = 0;
};

/// Trapezoid rule on `rect`, halving the step until successive estimates agree
/// to abs_tol. The integrand must be negligible on the boundary; for smooth
/// rapidly decaying functions the rule converges spectrally.
PlaneIntegral integrate_plane(const Field& f, const Rect& rect, double abs_tol, Exec exec = Exec::Parallel,
                              std::size_t start_intervals = 32, std::size_t max_intervals = 4096);

/// Number of worker threads used by Exec::Parallel kernels.
int worker_threads();

/// Cap the worker count (CVMEM_THREADS); n <= 0 restores the default.
void set_worker_threads(int n);

/// Run body(i) for i in [0, n). Exceptions raised inside workers are captured
/// and the first one (lowest index) is rethrown on the calling thread.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec = Exec::Parallel);

} // namespace cvmem

#endif
