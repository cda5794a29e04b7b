#ifndef NCDIST_PATH_SOLVER_HPP
#define NCDIST_PATH_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ncdist/munu.hpp"
#include "ncdist/staircase.hpp"
#include "ncdist/tridiagonal.hpp"

namespace ncdist {

/// Indices (1-based, within {2,...,n-2}) where z vanishes.  Never contains
/// two adjacent indices and never the first or last edge.
struct ZeroPattern {
    std::vector<std::size_t> zeros; // sorted ascending

    bool operator==(const ZeroPattern& o) const { return zeros == o.zeros; }
};

/// Maximal run of nonzero coordinates: edges alpha..beta inclusive, 1-based.
struct Block {
    std::size_t alpha;
    std::size_t beta;
};

/// Runs of {1,...,n-1} left after removing the pattern's zeros.  Consecutive
/// blocks satisfy beta_k + 2 = alpha_{k+1}.
inline std::vector<Block> block_decomposition(const ZeroPattern& p, std::size_t n) {
    std::vector<Block> blocks;
    std::size_t start = 1;
    for (std::size_t zi : p.zeros) {
        blocks.push_back({start, zi - 1});
        start = zi + 1;
    }
    blocks.push_back({start, n - 1});
    return blocks;
}

/// Every subset of {2,...,n-2} with no two adjacent elements, streamed in
/// lexicographic order (empty set first).  The count obeys
/// P(n) = P(n-1) + P(n-2) with P(2) = P(3) = 1.
inline void enumerate_patterns(std::size_t n, const std::function<void(const ZeroPattern&)>& emit) {
    if (n < 2) throw std::invalid_argument("enumerate_patterns: n must be >= 2");
    ZeroPattern p;
    emit(p);
    if (n < 4) return;
    std::function<void(std::size_t)> extend = [&](std::size_t from) {
        for (std::size_t e = from; e <= n - 2; ++e) {
            p.zeros.push_back(e);
            emit(p);
            if (e + 2 <= n - 2) extend(e + 2);
            p.zeros.pop_back();
        }
    };
    extend(2);
}

inline std::vector<ZeroPattern> enumerate_patterns(std::size_t n) {
    std::vector<ZeroPattern> out;
    enumerate_patterns(n, [&](const ZeroPattern& p) { out.push_back(p); });
    return out;
}

enum class BlockStatus { Viable, Tie, Negative };

/// Closed-form solution of T(z) y = x, T(z)^t x = y on one irreducible
/// block, together with its contribution ||mu|| ||nu|| / d_first.
/// Entries below the strict-positivity tolerance make the block non-viable:
/// Tie when inside the dead band around zero, Negative when clearly below.
struct BlockSolution {
    std::vector<double> z;
    double value = 0.0;
    BlockStatus status = BlockStatus::Viable;
};

inline BlockSolution solve_block(const PathDiracOperator& f) {
    const std::size_t m = f.edges();
    const MuNu mn = build_munu(f);
    const double mu = mn.mu_norm(), nu = mn.nu_norm();
    const double d1 = f[1];

    BlockSolution out;
    out.value = mu * nu / d1;
    out.z.resize(m);
    out.z[0] = nu / (d1 * mu);
    const double denom = d1 * mu * nu;
    for (std::size_t i = 1; 2 * i <= m; ++i)
        out.z[2 * i - 1] =
            (mn.nu_prefix_norm_sq(i) * mu * mu - mn.mu_prefix_norm_sq(i) * nu * nu) / denom;
    for (std::size_t i = 1; 2 * i + 1 <= m; ++i)
        out.z[2 * i] =
            (mn.mu_prefix_norm_sq(i + 1) * nu * nu - mn.nu_prefix_norm_sq(i) * mu * mu) / denom;

    double zmax = 0.0;
    for (double zi : out.z) zmax = std::max(zmax, std::abs(zi));
    const double tol = 1e-12 * zmax;
    for (double zi : out.z) {
        if (zi < -tol) {
            out.status = BlockStatus::Negative;
            return out;
        }
        if (zi < tol) out.status = BlockStatus::Tie;
    }
    return out;
}

/// A zero pattern whose every block admits the closed-form solution with
/// strictly positive entries.
struct ViableCandidate {
    ZeroPattern pattern;
    std::vector<double> z;             // length n-1, zero exactly on pattern.zeros
    double objective = 0.0;            // sum of z, equals sum of block_values
    std::vector<double> block_values;  // ||mu(f_k)|| ||nu(f_k)|| / d_alpha_k
    double eigen_residual = 0.0;       // relative residual of T(z)T(z)^t mu = mu etc.
};

struct VerificationRecord {
    bool passed = false;
    double eigen_residual = 0.0;  // max over mu/nu identities, relative
    double norm_deviation = 0.0;  // max_k | ||T_k(z)|| - 1 |
    double bj_residual = 0.0;     // max Birkhoff-James certificate defect
};

namespace detail {

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

// Relative residuals of T(z)T(z)^t mu = mu and T(z)^t T(z) nu = nu with the
// whole-path mu, nu.
inline double eigen_residual(const PathDiracOperator& d, const std::vector<double>& z) {
    const MuNu mn = build_munu(d);
    const BidiagonalStaircase t = staircase(d, z);
    const auto ttm = t.apply(t.apply_transpose(mn.mu));
    const auto ttn = t.apply_transpose(t.apply(mn.nu));
    double rm = 0.0, rn = 0.0;
    for (std::size_t i = 0; i < mn.mu.size(); ++i) rm = std::max(rm, std::abs(ttm[i] - mn.mu[i]));
    for (std::size_t i = 0; i < mn.nu.size(); ++i) rn = std::max(rn, std::abs(ttn[i] - mn.nu[i]));
    return std::max(rm / inf_norm(mn.mu), rn / inf_norm(mn.nu));
}

} // namespace detail

/// Recheck a candidate from scratch: the whole-path eigen identities, the
/// per-block unit norm, and the Birkhoff-James certificates
/// x^t (R_j - R_{j+1}) y = 0 along each block.  Never throws; a failed
/// record means the candidate does not actually attain the claimed value.
inline VerificationRecord verify_candidate(const PathDiracOperator& d, const ViableCandidate& c) {
    VerificationRecord rec;
    if (c.z.size() != d.edges()) return rec; // structurally broken, passed=false
    rec.eigen_residual = detail::eigen_residual(d, c.z);

    for (const Block& b : block_decomposition(c.pattern, d.order())) {
        const PathDiracOperator f = d.slice(b.alpha, b.beta);
        std::vector<double> u(c.z.begin() + static_cast<std::ptrdiff_t>(b.alpha - 1),
                              c.z.begin() + static_cast<std::ptrdiff_t>(b.beta));
        const BidiagonalStaircase tk = staircase(f, u);
        rec.norm_deviation = std::max(rec.norm_deviation, std::abs(tk.norm() - 1.0));

        const MuNu mn = build_munu(f);
        std::vector<double> x = mn.mu, y = mn.nu;
        for (double& e : x) e /= mn.mu_norm();
        for (double& e : y) e /= mn.nu_norm();
        // x^t R_j y with R_{2k-1} = d_{2k-1} E_{k,k}, R_{2k} = d_{2k} E_{k+1,k}.
        const std::size_t m = f.edges();
        std::vector<double> s(m);
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t k = (j + 1) / 2;
            s[j - 1] = (j % 2 == 1) ? f[j] * x[k - 1] * y[k - 1] : f[j] * x[k] * y[k - 1];
        }
        for (std::size_t j = 0; j + 1 < m; ++j)
            rec.bj_residual = std::max(rec.bj_residual, std::abs(s[j] - s[j + 1]));
    }

    rec.passed = rec.eigen_residual <= 1e-9 && rec.norm_deviation <= 1e-9 && rec.bj_residual <= 1e-9;
    return rec;
}

struct SolveOptions {
    bool prune = true;          // skip refinements of already-viable patterns
    bool collect_all = false;   // keep every viable candidate in the report
};

/// Full result of the exact solver.
struct DistanceReport {
    double distance = 0.0;
    std::vector<double> optimal_z;
    std::vector<double> optimal_a;  // a_j - a_{j+1} = z_j, a_n = 0
    ZeroPattern pattern;
    std::vector<Block> blocks;
    std::vector<double> block_values;
    double geodesic = 0.0;          // sum of 1/d_i
    VerificationRecord verification;
    std::vector<ViableCandidate> all_candidates;
};

namespace detail {

inline std::uint64_t zeros_mask(const std::vector<std::size_t>& zeros) {
    std::uint64_t m = 0;
    for (std::size_t e : zeros) m |= std::uint64_t{1} << e;
    return m;
}

inline std::vector<double> accumulate_a(const std::vector<double>& z) {
    std::vector<double> a(z.size() + 1, 0.0);
    for (std::size_t j = z.size(); j-- > 0;) a[j] = a[j + 1] + z[j];
    return a;
}

inline double path_geodesic(const PathDiracOperator& d) {
    double g = 0.0;
    for (double di : d.weights()) g += 1.0 / di;
    return g;
}

inline DistanceReport finalize_report(const PathDiracOperator& d, const ViableCandidate& best,
                                      std::vector<ViableCandidate> all) {
    DistanceReport rep;
    rep.distance = best.objective;
    rep.optimal_z = best.z;
    rep.optimal_a = accumulate_a(best.z);
    rep.pattern = best.pattern;
    rep.blocks = block_decomposition(best.pattern, d.order());
    rep.block_values = best.block_values;
    rep.geodesic = path_geodesic(d);
    rep.verification = verify_candidate(d, best);
    rep.all_candidates = std::move(all);
    return rep;
}

} // namespace detail

/// Exact noncommutative distance between the endpoints of the weighted
/// path: enumerate admissible zero patterns, solve each block in closed
/// form, keep the viable ones, and take the maximum of the block-value
/// sums.  Patterns refining an already-viable pattern cannot do better and
/// are skipped unless pruning is disabled.
inline DistanceReport solve_path(const PathDiracOperator& d, const SolveOptions& opts = {}) {
    const std::size_t n = d.order();

    std::vector<std::uint64_t> viable_masks; // pruning bases (strictly viable, no ties)
    std::optional<ViableCandidate> best;
    std::vector<ViableCandidate> all;

    enumerate_patterns(n, [&](const ZeroPattern& p) {
        const std::uint64_t mask = detail::zeros_mask(p.zeros);
        if (opts.prune) {
            for (std::uint64_t base : viable_masks)
                if ((base & mask) == base && base != mask) return; // strict refinement
        }

        ViableCandidate cand;
        cand.pattern = p;
        cand.z.assign(n - 1, 0.0);
        bool tie = false;
        for (const Block& b : block_decomposition(p, n)) {
            BlockSolution sol = solve_block(d.slice(b.alpha, b.beta));
            if (sol.status == BlockStatus::Negative) return;
            if (sol.status == BlockStatus::Tie) tie = true;
            cand.block_values.push_back(sol.value);
            cand.objective += sol.value;
            std::copy(sol.z.begin(), sol.z.end(),
                      cand.z.begin() + static_cast<std::ptrdiff_t>(b.alpha - 1));
        }
        // A tie entry means the zeroed refinement attains the same value and
        // carries the strict-positivity structure; it is enumerated on its own.
        if (tie) return;

        viable_masks.push_back(mask);
        cand.eigen_residual = detail::eigen_residual(d, cand.z);
        if (opts.collect_all) all.push_back(cand);

        if (!best) {
            best = std::move(cand);
            return;
        }
        const double rel = (cand.objective - best->objective) /
                           std::max(1.0, std::max(cand.objective, best->objective));
        if (rel > 1e-12) {
            best = std::move(cand);
        } else if (rel >= -1e-12 && cand.pattern.zeros.size() < best->pattern.zeros.size()) {
            best = std::move(cand); // tie: prefer fewer zeros
        }
    });

    if (!best) throw std::logic_error("solve_path: no viable pattern found (solver bug)");
    return detail::finalize_report(d, *best, std::move(all));
}

/// Closed-form answers for n <= 5 and for uniform weights; empty when the
/// instance is outside those cases.
inline std::optional<DistanceReport> solve_path_fastpath(const PathDiracOperator& d) {
    const std::size_t n = d.order();
    const auto& w = d.weights();

    const auto report_from_z = [&](std::vector<double> z) {
        // Derive the pattern from the zeros of z (exact zeros only).
        double zmax = 0.0;
        for (double zi : z) zmax = std::max(zmax, std::abs(zi));
        ViableCandidate cand;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (std::abs(z[i]) <= 1e-12 * zmax) {
                z[i] = 0.0;
                cand.pattern.zeros.push_back(i + 1);
            }
        cand.z = z;
        for (const Block& b : block_decomposition(cand.pattern, n)) {
            BlockSolution sol = solve_block(d.slice(b.alpha, b.beta));
            cand.block_values.push_back(sol.value);
            cand.objective += sol.value;
        }
        cand.eigen_residual = detail::eigen_residual(d, cand.z);
        return detail::finalize_report(d, cand, {});
    };

    const bool uniform = std::all_of(w.begin(), w.end(), [&](double x) { return x == w[0]; });

    if (n == 2) {
        return report_from_z({1.0 / w[0]});
    }
    if (n == 3) {
        const double d1 = w[0], d2 = w[1];
        const double r = std::sqrt(d1 * d1 + d2 * d2);
        return report_from_z({d2 / (d1 * r), d1 / (d2 * r)});
    }
    if (n == 4) {
        const double d1 = w[0], d2 = w[1], d3 = w[2];
        if (d2 * d2 > d1 * d3) {
            return report_from_z({1.0 / d1, 0.0, 1.0 / d3});
        }
        const MuNu mn = build_munu(d);
        const double mu = mn.mu_norm(), nu = mn.nu_norm();
        const double den = d1 * mu * nu;
        return report_from_z({nu * nu / den, (mu * mu - nu * nu) / den,
                              (mu * mu * nu * nu - mu * mu) / den});
    }
    if (n == 5) {
        const double d1 = w[0], d2 = w[1], d3 = w[2], d4 = w[3];
        const MuNu mn = build_munu(d);
        const double mu = mn.mu_norm(), nu = mn.nu_norm();
        if (nu > mu) {
            const double r = std::sqrt(d3 * d3 + d4 * d4);
            return report_from_z({1.0 / d1, 0.0, d4 / (d3 * r), d3 / (d4 * r)});
        }
        if (mu > std::sqrt(1.0 + (d1 * d1) / (d2 * d2)) * nu) {
            const double r = std::sqrt(d1 * d1 + d2 * d2);
            return report_from_z({d2 / (d1 * r), d1 / (d2 * r), 0.0, 1.0 / d4});
        }
        const double den = d1 * mu * nu;
        const double head = 1.0 + (d1 * d1) / (d2 * d2);
        return report_from_z({nu * nu / den, (mu * mu - nu * nu) / den,
                              (head * nu * nu - mu * mu) / den,
                              (nu * nu * mu * mu - head * nu * nu) / den});
    }
    if (uniform) {
        const double c = w[0];
        if (n % 2 == 0) {
            std::vector<double> z(n - 1, 0.0);
            for (std::size_t j = 0; j < n - 1; j += 2) z[j] = 1.0 / c;
            return report_from_z(std::move(z));
        }
        const double k = static_cast<double>((n + 1) / 2);
        const double up = std::sqrt(k / (k - 1.0)), down = std::sqrt((k - 1.0) / k);
        std::vector<double> z(n - 1, 0.0);
        for (std::size_t j = 1; j <= (n - 1) / 2; ++j) {
            const double dj = static_cast<double>(j);
            z[2 * j - 2] = (dj * down - (dj - 1.0) * up) / c;
            z[2 * j - 1] = dj * (up - down) / c;
        }
        return report_from_z(std::move(z));
    }
    return std::nullopt;
}

} // namespace ncdist

#endif
