#ifndef NCDIST_STAIRCASE_HPP
#define NCDIST_STAIRCASE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ncdist/tridiagonal.hpp"

namespace ncdist {

/// Staircase (block-bidiagonal) matrix built from n-1 entries: entry i
/// (1-based) sits at row ceil((i+1)/2), column ceil(i/2); everything else
/// is zero.  Its singular values are the nonnegative eigenvalues of the
/// zero-diagonal tridiagonal matrix with the same entries on the
/// superdiagonal.
struct BidiagonalStaircase {
    std::vector<double> entries;

    BidiagonalStaircase() = default;
    explicit BidiagonalStaircase(std::vector<double> e) : entries(std::move(e)) {}

    std::size_t path_order() const { return entries.size() + 1; }
    std::size_t rows() const { return (path_order() + 1) / 2; }
    std::size_t cols() const { return path_order() / 2; }

    // 0-based position of 1-based entry i.
    static std::size_t entry_row(std::size_t i) { return i / 2; }       // ceil((i+1)/2)-1
    static std::size_t entry_col(std::size_t i) { return (i - 1) / 2; } // ceil(i/2)-1

    /// x = T y
    std::vector<double> apply(const std::vector<double>& y) const {
        if (y.size() != cols()) throw std::invalid_argument("staircase apply: size mismatch");
        std::vector<double> x(rows(), 0.0);
        for (std::size_t i = 1; i <= entries.size(); ++i)
            x[entry_row(i)] += entries[i - 1] * y[entry_col(i)];
        return x;
    }

    /// y = T^t x
    std::vector<double> apply_transpose(const std::vector<double>& x) const {
        if (x.size() != rows()) throw std::invalid_argument("staircase apply_transpose: size mismatch");
        std::vector<double> y(cols(), 0.0);
        for (std::size_t i = 1; i <= entries.size(); ++i)
            y[entry_col(i)] += entries[i - 1] * x[entry_row(i)];
        return y;
    }

    /// Spectral norm, via the associated tridiagonal matrix.
    double norm() const { return spectral_radius(SymTridiagonal(entries)); }
};

struct PerronPair {
    std::vector<double> x; // left singular vector, positive, unit
    std::vector<double> y; // right singular vector, positive, unit
    double sigma = 0.0;    // largest singular value
};

/// Perron singular pair of a staircase matrix with strictly positive
/// entries: the unique positive unit vectors with T y = sigma x and
/// T^t x = sigma y.  Power iteration on the shifted block embedding
/// [0 T; T^t 0] + s I with a positive start vector.
inline PerronPair perron_pair(const BidiagonalStaircase& t) {
    if (t.entries.empty())
        throw std::invalid_argument("perron_pair: empty staircase");
    for (double e : t.entries)
        if (!(e > 0.0))
            throw std::invalid_argument("perron_pair: entries must be strictly positive");

    const std::size_t r = t.rows(), c = t.cols();
    const std::size_t n = r + c;
    const double sigma = t.norm();
    const double shift = sigma; // keeps the iteration matrix's Perron gap open

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    const int max_iters = 100000;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));
        std::vector<double> y(v.begin() + static_cast<std::ptrdiff_t>(r), v.end());
        auto Ty = t.apply(y);
        auto Ttx = t.apply_transpose(x);
        double nrm = 0.0;
        for (std::size_t i = 0; i < r; ++i) { w[i] = Ty[i] + shift * v[i]; nrm += w[i] * w[i]; }
        for (std::size_t i = 0; i < c; ++i) { w[r + i] = Ttx[i] + shift * v[r + i]; nrm += w[r + i] * w[r + i]; }
        nrm = std::sqrt(nrm);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= nrm;
            delta = std::max(delta, std::abs(w[i] - v[i]));
        }
        v.swap(w);
        if (delta <= 1e-14) break;
    }

    PerronPair out;
    out.sigma = sigma;
    out.x.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(r));
    out.y.assign(v.begin() + static_cast<std::ptrdiff_t>(r), v.end());
    double nx = 0.0, ny = 0.0;
    for (double e : out.x) nx += e * e;
    for (double e : out.y) ny += e * e;
    nx = std::sqrt(nx);
    ny = std::sqrt(ny);
    for (double& e : out.x) e /= nx;
    for (double& e : out.y) e /= ny;
    return out;
}

} // namespace ncdist

#endif
