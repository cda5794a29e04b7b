#ifndef NCDIST_TRIDIAGONAL_HPP
#define NCDIST_TRIDIAGONAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ncdist {

/// Symmetric tridiagonal matrix with zero diagonal, stored by its
/// superdiagonal.  Order n means offdiag has n-1 entries.
struct SymTridiagonal {
    std::vector<double> offdiag;

    SymTridiagonal() = default;
    explicit SymTridiagonal(std::vector<double> b) : offdiag(std::move(b)) {}

    std::size_t order() const { return offdiag.size() + 1; }
};

namespace detail {

// Number of eigenvalues strictly below x, by the Sturm sign-count of the
// LDL^t recurrence.  Diagonal entries are all zero.
inline std::size_t sturm_count_below(const std::vector<double>& b, double x) {
    constexpr double tiny = 1e-300;
    std::size_t count = 0;
    double q = -x;
    if (q < 0.0) ++count;
    for (double bi : b) {
        if (std::abs(q) < tiny) q = (q < 0.0) ? -tiny : tiny;
        q = -x - bi * bi / q;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace detail

/// Largest eigenvalue magnitude of a zero-diagonal symmetric tridiagonal
/// matrix.  The spectrum is symmetric about zero, so this equals the
/// largest eigenvalue, located by bisection on the Sturm count.
inline double spectral_radius(const SymTridiagonal& m) {
    const auto& b = m.offdiag;
    const std::size_t n = m.order();
    if (n == 1) return 0.0;

    // Gershgorin bound.
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        if (i > 0) row += std::abs(b[i - 1]);
        if (i < n - 1) row += std::abs(b[i]);
        hi = std::max(hi, row);
    }
    if (hi == 0.0) return 0.0;

    double lo = 0.0;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (detail::sturm_count_below(b, mid) < n)
            lo = mid;  // some eigenvalue >= mid
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// All eigenvalues, ascending, by Sturm bisection per index.
/// Used by tests to check the plus/minus pairing of the spectrum.
inline std::vector<double> eigenvalues(const SymTridiagonal& m) {
    const auto& b = m.offdiag;
    const std::size_t n = m.order();
    double bound = spectral_radius(m);
    if (bound == 0.0) return std::vector<double>(n, 0.0);
    bound *= 1.0 + 1e-12;

    std::vector<double> ev(n);
    for (std::size_t k = 0; k < n; ++k) {
        double lo = -bound, hi = bound;
        for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * bound; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (detail::sturm_count_below(b, mid) <= k)
                lo = mid;
            else
                hi = mid;
        }
        ev[k] = 0.5 * (lo + hi);
    }
    return ev;
}

} // namespace ncdist

#endif
