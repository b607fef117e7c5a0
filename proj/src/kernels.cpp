#include "cvmem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <omp.h>

#include "cvmem/error.hpp"

namespace cvmem {

Rect Rect::unite(const Rect& o) const
{
    return {std::min(x_lo, o.x_lo), std::max(x_hi, o.x_hi), std::min(p_lo, o.p_lo), std::max(p_hi, o.p_hi)};
}

Rect Rect::intersect(const Rect& o) const
{
    return {std::max(x_lo, o.x_lo), std::min(x_hi, o.x_hi), std::max(p_lo, o.p_lo), std::min(p_hi, o.p_hi)};
}

double Grid::x(std::size_t i) const
{
    if (nx < 2)
        return x_lo;
    return x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(nx - 1);
}

double Grid::p(std::size_t j) const
{
    if (np < 2)
        return p_lo;
    return p_lo + (p_hi - p_lo) * static_cast<double>(j) / static_cast<double>(np - 1);
}

namespace {

int g_thread_cap = 0;

} // namespace

int worker_threads()
{
    return g_thread_cap > 0 ? std::min(g_thread_cap, omp_get_max_threads()) : omp_get_max_threads();
}

void set_worker_threads(int n)
{
    g_thread_cap = n > 0 ? n : 0;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec)
{
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_threads())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<double> sample_grid(const Field& f, const Grid& grid, Exec exec)
{
    std::vector<double> out(grid.size());
    for_each_index(
        grid.nx,
        [&](std::size_t i) {
            const double x = grid.x(i);
            for (std::size_t j = 0; j < grid.np; ++j)
                out[i * grid.np + j] = f(x, grid.p(j));
        },
        exec);
    return out;
}

namespace {

// Sum of f over grid points (x_lo + i hx, p_lo + j hp), i in [0,n], j in [0,n],
// restricted to points not on the coarser grid when `only_new` is set.
double lattice_sum(const Field& f, const Rect& r, std::size_t n, bool only_new, Exec exec)
{
    const double hx = (r.x_hi - r.x_lo) / static_cast<double>(n);
    const double hp = (r.p_hi - r.p_lo) / static_cast<double>(n);
    std::vector<double> rows(n + 1, 0.0);
    for_each_index(
        n + 1,
        [&](std::size_t i) {
            const double x = r.x_lo + hx * static_cast<double>(i);
            const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
            const bool odd_row = (i % 2) == 1;
            const std::size_t step = (only_new && !odd_row) ? 2 : 1;
            const std::size_t first = (only_new && !odd_row) ? 1 : 0;
            double s = 0.0;
            for (std::size_t j = first; j <= n; j += step) {
                const double wp = (j == 0 || j == n) ? 0.5 : 1.0;
                s += wp * f(x, r.p_lo + hp * static_cast<double>(j));
            }
            rows[i] = wx * s;
        },
        exec);
    double total = 0.0;
    for (double v : rows)
        total += v;
    return total;
}

} // namespace

PlaneIntegral integrate_plane(const Field& f, const Rect& rect, double abs_tol, Exec exec,
                              std::size_t start_intervals, std::size_t max_intervals)
{
    if (rect.empty())
        return {};
    std::size_t n = std::max<std::size_t>(2, start_intervals);
    double sum = lattice_sum(f, rect, n, false, exec);
    auto area_per_point = [&](std::size_t m) {
        return (rect.x_hi - rect.x_lo) * (rect.p_hi - rect.p_lo) / static_cast<double>(m * m);
    };
    double estimate = sum * area_per_point(n);
    int agreed = 0;
    while (2 * n <= max_intervals) {
        sum += lattice_sum(f, rect, 2 * n, true, exec);
        n *= 2;
        const double refined = sum * area_per_point(n);
        const double diff = std::abs(refined - estimate);
        estimate = refined;
        if (!std::isfinite(estimate))
            throw NumericError("plane integral produced a non-finite value");
        // two agreeing refinements guard against a coarse grid missing a feature
        agreed = diff <= abs_tol ? agreed + 1 : 0;
        if (agreed == 2)
            return {estimate, diff, n + 1};
    }
    std::ostringstream os;
    os << "plane integral did not converge with " << n << " intervals per axis";
    throw NumericError(os.str(), std::abs(estimate));
}

} // namespace cvmem
