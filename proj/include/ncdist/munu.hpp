#ifndef NCDIST_MUNU_HPP
#define NCDIST_MUNU_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ncdist/staircase.hpp"

namespace ncdist {

/// Raised when a weight vector is so strongly graded that the alternating
/// ratio products would leave binary64 range.
class weight_overflow_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Strictly positive superdiagonal weights of a path's Dirac operator.
/// d has n-1 entries for a path on n vertices.
class PathDiracOperator {
  public:
    explicit PathDiracOperator(std::vector<double> d) : d_(std::move(d)) {
        if (d_.empty()) throw std::invalid_argument("path weights: need at least one edge");
        for (std::size_t i = 0; i < d_.size(); ++i)
            if (!(d_[i] > 0.0) || !std::isfinite(d_[i]))
                throw std::invalid_argument("path weights: entry " + std::to_string(i + 1) +
                                            " must be a positive finite number");
        // Alternating ratio products must stay representable.
        double lmu = 0.0, lnu = 0.0;
        for (std::size_t k = 1; 2 * k <= d_.size(); ++k) {
            lmu += std::log(d_[2 * k - 2]) - std::log(d_[2 * k - 1]);
            if (std::abs(lmu) > 600.0)
                throw weight_overflow_error("path weights: cumulative ratio exceeds binary64 range");
        }
        for (std::size_t k = 1; 2 * k + 1 <= d_.size(); ++k) {
            lnu += std::log(d_[2 * k - 1]) - std::log(d_[2 * k]);
            if (std::abs(lnu) > 600.0)
                throw weight_overflow_error("path weights: cumulative ratio exceeds binary64 range");
        }
    }

    std::size_t order() const { return d_.size() + 1; } // n
    std::size_t edges() const { return d_.size(); }     // n-1
    const std::vector<double>& weights() const { return d_; }
    double operator[](std::size_t i) const { return d_[i - 1]; } // 1-based d_i

    /// Weights of the sub-path with edges a..b (1-based, inclusive).
    PathDiracOperator slice(std::size_t a, std::size_t b) const {
        if (a < 1 || b > edges() || a > b) throw std::invalid_argument("path slice out of range");
        return PathDiracOperator(std::vector<double>(d_.begin() + static_cast<std::ptrdiff_t>(a - 1),
                                                     d_.begin() + static_cast<std::ptrdiff_t>(b)));
    }

  private:
    std::vector<double> d_;
};

/// The alternating ratio-product vectors of a weighted path:
///   mu_1 = nu_1 = 1,  mu_{k+1} = mu_k d_{2k-1}/d_{2k},
///   nu_{k+1} = nu_k d_{2k}/d_{2k+1}.
/// mu has floor((n+1)/2) entries, nu has floor(n/2).
struct MuNu {
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<double> mu_prefix_sq; // mu_prefix_sq[k] = ||mu^(k+1)||^2
    std::vector<double> nu_prefix_sq;

    double mu_norm() const { return std::sqrt(mu_prefix_sq.back()); }
    double nu_norm() const { return std::sqrt(nu_prefix_sq.back()); }
    double mu_prefix_norm_sq(std::size_t k) const { return mu_prefix_sq[k - 1]; } // ||mu^(k)||^2
    double nu_prefix_norm_sq(std::size_t k) const { return nu_prefix_sq[k - 1]; }
};

inline MuNu build_munu(const PathDiracOperator& d) {
    const std::size_t n = d.order();
    MuNu out;
    out.mu.reserve((n + 1) / 2);
    out.nu.reserve(n / 2);
    double m = 1.0;
    out.mu.push_back(m);
    for (std::size_t k = 1; out.mu.size() < (n + 1) / 2; ++k) {
        m *= d[2 * k - 1] / d[2 * k];
        out.mu.push_back(m);
    }
    double v = 1.0;
    out.nu.push_back(v);
    for (std::size_t k = 1; out.nu.size() < n / 2; ++k) {
        v *= d[2 * k] / d[2 * k + 1];
        out.nu.push_back(v);
    }
    out.mu_prefix_sq.resize(out.mu.size());
    out.nu_prefix_sq.resize(out.nu.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < out.mu.size(); ++i) {
        acc += out.mu[i] * out.mu[i];
        out.mu_prefix_sq[i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = 0; i < out.nu.size(); ++i) {
        acc += out.nu[i] * out.nu[i];
        out.nu_prefix_sq[i] = acc;
    }
    return out;
}

/// mu[a,b] and nu[a,b]: the entries of mu and nu aligned with the rows and
/// columns occupied by staircase entries a..b (1-based edge indices).
inline std::pair<std::vector<double>, std::vector<double>>
truncated_munu(const PathDiracOperator& d, std::size_t a, std::size_t b) {
    if (a < 1 || b > d.edges() || a > b) throw std::invalid_argument("truncated_munu: range out of bounds");
    const MuNu mn = build_munu(d);
    // mu indices ceil((a+1)/2)..ceil((b+1)/2), nu indices ceil(a/2)..ceil(b/2), 1-based.
    const std::size_t mi = (a + 2) / 2, mj = (b + 2) / 2;
    const std::size_t ni = (a + 1) / 2, nj = (b + 1) / 2;
    std::vector<double> mu(mn.mu.begin() + static_cast<std::ptrdiff_t>(mi - 1),
                           mn.mu.begin() + static_cast<std::ptrdiff_t>(mj));
    std::vector<double> nu(mn.nu.begin() + static_cast<std::ptrdiff_t>(ni - 1),
                           mn.nu.begin() + static_cast<std::ptrdiff_t>(nj));
    return {std::move(mu), std::move(nu)};
}

/// Staircase T(d,z) with entries d_i z_i.
inline BidiagonalStaircase staircase(const PathDiracOperator& d, const std::vector<double>& z) {
    if (z.size() != d.edges()) throw std::invalid_argument("staircase: z length mismatch");
    std::vector<double> e(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) e[i] = d.weights()[i] * z[i];
    return BidiagonalStaircase(std::move(e));
}

/// |mu^t T(z) nu - d_1 sum(z)|, a self-test residual that vanishes in
/// exact arithmetic for every nonnegative z.
inline double bilinear_identity_residual(const PathDiracOperator& d, const std::vector<double>& z) {
    const MuNu mn = build_munu(d);
    const BidiagonalStaircase t = staircase(d, z);
    const auto tnu = t.apply(mn.nu);
    double lhs = 0.0;
    for (std::size_t i = 0; i < tnu.size(); ++i) lhs += mn.mu[i] * tnu[i];
    double sum = 0.0;
    for (double zi : z) sum += zi;
    return std::abs(lhs - d[1] * sum);
}

} // namespace ncdist

#endif
