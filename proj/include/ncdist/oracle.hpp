#ifndef NCDIST_ORACLE_HPP
#define NCDIST_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ncdist/graph.hpp"
#include "ncdist/munu.hpp"
#include "ncdist/tridiagonal.hpp"

namespace ncdist {

struct OracleConfig {
    int restarts = 32;
    int max_iters = 20000;    // objective evaluations per restart
    double step_init = 0.25;
    double step_min = 1e-9;
    double shrink = 0.5;
    std::uint64_t seed = 0;
    double tolerance = 1e-8;  // feasibility residual bound for success
};

struct OracleResult {
    double value = 0.0;
    std::vector<double> argument;
    double feasibility_residual = 0.0;
    bool converged = false;
    long iterations = 0;
    bool infinite = false;    // disconnected endpoints
};

namespace detail {

// splitmix64: tiny, portable, and identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

// Coordinate ascent with geometrically shrinking steps on a scale-invariant
// objective, accelerated by pattern moves so progress along diagonal ridges
// does not require one shrink cycle per step.  lower_bounded clamps
// coordinates at zero.  Returns the number of objective evaluations;
// locally_converged is set when the step reached step_min before the
// evaluation budget ran out.
inline long coordinate_ascent(std::vector<double>& x, double& fx,
                              const std::function<double(const std::vector<double>&)>& f,
                              const OracleConfig& cfg, bool lower_bounded, Rng& rng,
                              bool& locally_converged) {
    long evals = 0;
    fx = f(x);
    ++evals;
    double step = cfg.step_init;
    locally_converged = false;

    const auto explore = [&](std::vector<double>& y, double& fy) {
        for (std::size_t i = 0; i < y.size() && evals < cfg.max_iters; ++i) {
            for (double sgn : {1.0, -1.0}) {
                const double old = y[i];
                double cand = old + sgn * step;
                if (lower_bounded && cand < 0.0) cand = 0.0;
                if (cand == old) continue;
                y[i] = cand;
                const double fc = f(y);
                ++evals;
                if (fc > fy) {
                    fy = fc;
                    break;
                }
                y[i] = old;
            }
        }
    };

    // The spectral radius is nonsmooth where eigenvalues cross, so axis
    // moves alone can stall on a kinked ridge; random directions make such
    // stalls vanishingly unlikely.
    const auto explore_random = [&](std::vector<double>& y, double& fy) {
        const std::size_t tries = 4 * y.size();
        for (std::size_t t = 0; t < tries && evals < cfg.max_iters; ++t) {
            std::vector<double> dir(y.size());
            double nrm = 0.0;
            for (double& e : dir) {
                e = rng.normal();
                nrm += e * e;
            }
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) continue;
            std::vector<double> cand = y;
            for (std::size_t i = 0; i < y.size(); ++i) {
                cand[i] += step * dir[i] / nrm;
                if (lower_bounded && cand[i] < 0.0) cand[i] = 0.0;
            }
            const double fc = f(cand);
            ++evals;
            if (fc > fy) {
                fy = fc;
                y = std::move(cand);
                return true;
            }
        }
        return false;
    };

    while (evals < cfg.max_iters) {
        std::vector<double> e = x;
        double fe = fx;
        explore(e, fe);
        if (fe <= fx) explore_random(e, fe);
        if (fe > fx) {
            std::vector<double> prev = x;
            x = std::move(e);
            fx = fe;
            while (evals < cfg.max_iters) {
                std::vector<double> p(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    p[i] = 2.0 * x[i] - prev[i];
                    if (lower_bounded && p[i] < 0.0) p[i] = 0.0;
                }
                double fp = f(p);
                ++evals;
                explore(p, fp);
                if (fp <= fx) break;
                prev = x;
                x = std::move(p);
                fx = fp;
            }
        } else {
            step *= cfg.shrink;
            if (step < cfg.step_min) {
                locally_converged = true;
                break;
            }
        }
    }
    return evals;
}

// Shared multi-start driver.  Restart r uses seed = base_seed + r.  The
// result is converged when the best restart terminated locally and at least
// one other restart reproduced the best value to 1e-7 relative.
inline OracleResult multistart(const OracleConfig& cfg, std::size_t dim, bool lower_bounded,
                               const std::function<std::vector<double>(Rng&)>& sample_start,
                               const std::function<double(const std::vector<double>&)>& objective) {
    if (cfg.restarts < 1 || !(cfg.step_min < cfg.step_init) || !(cfg.tolerance > 0.0))
        throw std::invalid_argument("oracle config: invalid parameters");

    OracleResult res;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> best_x(dim, 0.0);
    bool best_local = false;
    std::vector<double> finals;
    std::vector<char> locals;

    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
        std::vector<double> x = sample_start(rng);
        double fx;
        bool local;
        res.iterations += coordinate_ascent(x, fx, objective, cfg, lower_bounded, rng, local);
        finals.push_back(fx);
        locals.push_back(local ? 1 : 0);
        if (fx > best) {
            best = fx;
            best_x = x;
            best_local = local;
        }
    }

    int agree = 0;
    for (std::size_t r = 0; r < finals.size(); ++r)
        if (locals[r] && std::abs(finals[r] - best) <= 1e-7 * std::max(1.0, std::abs(best))) ++agree;

    res.value = best;
    res.argument = std::move(best_x);
    res.converged = best_local && (cfg.restarts == 1 || agree >= 2);
    return res;
}

} // namespace detail

/// Numerical maximization of z_1 + ... + z_{n-1} subject to
/// rho(L(d,z)) <= 1, via the scale-invariant objective
/// f(z) = sum(z) / rho(L(d,z)).  The search runs over the offdiagonal
/// entries y_i = d_i z_i of L: at any optimum rho(L) = 1 forces every
/// y_i into [0, 1], so the search domain is well scaled no matter how
/// anisotropic the weights are.
inline OracleResult oracle_path(const PathDiracOperator& d, const OracleConfig& cfg = {}) {
    const std::size_t m = d.edges();
    // L(y) is reducible wherever y vanishes, so rho <= 1 binds per maximal
    // nonzero run and each run may be rescaled onto the boundary on its own.
    // Summing sum_k / rho_k over runs evaluates that tight rescaling, keeps
    // the objective smooth away from run boundaries, and rewards coordinates
    // clamped to exactly zero as soon as decoupling pays off.
    const auto objective = [&](const std::vector<double>& y) {
        double value = 0.0;
        bool any = false;
        std::size_t i = 0;
        while (i < m) {
            if (y[i] == 0.0) {
                ++i;
                continue;
            }
            std::size_t j = i;
            double sum = 0.0;
            while (j < m && y[j] != 0.0) {
                sum += y[j] / d.weights()[j];
                ++j;
            }
            const double rho =
                spectral_radius(SymTridiagonal(std::vector<double>(y.begin() + i, y.begin() + j)));
            if (rho > 1e-300) {
                value += sum / rho;
                any = true;
            }
            i = j;
        }
        if (!any) return -std::numeric_limits<double>::infinity();
        return value;
    };
    const auto start = [m](detail::Rng& rng) {
        // Uniform point on the simplex via normalized exponentials.
        std::vector<double> y(m);
        double s = 0.0;
        for (double& e : y) {
            e = -std::log(1.0 - rng.uniform());
            s += e;
        }
        for (double& e : y) e /= s;
        return y;
    };

    OracleResult res = detail::multistart(cfg, m, true, start, objective);
    // Rescale each maximal nonzero run onto its constraint boundary, then
    // map back to z coordinates.
    std::vector<double>& y = res.argument;
    std::size_t i = 0;
    while (i < m) {
        if (y[i] == 0.0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < m && y[j] != 0.0) ++j;
        const double rho =
            spectral_radius(SymTridiagonal(std::vector<double>(y.begin() + i, y.begin() + j)));
        if (rho > 0.0)
            for (std::size_t k = i; k < j; ++k) y[k] /= rho;
        i = j;
    }
    double sum = 0.0;
    std::vector<double> off(m);
    for (std::size_t k = 0; k < m; ++k) {
        off[k] = y[k];
        y[k] /= d.weights()[k];
        sum += y[k];
    }
    res.value = sum;
    res.feasibility_residual = std::abs(spectral_radius(SymTridiagonal(std::move(off))) - 1.0);
    if (res.feasibility_residual > cfg.tolerance) res.converged = false;
    return res;
}

/// Numerical maximization of a_i - a_j subject to ||[A,D]|| <= 1 on a
/// general graph, with the gauge a_j = 0.  Disconnected endpoints give an
/// infinite distance, reported through the infinite marker.
inline OracleResult oracle_graph(const GraphDiracOperator& D, std::size_t i, std::size_t j,
                                 const OracleConfig& cfg = {}) {
    const std::size_t n = D.order();
    if (i >= n || j >= n || i == j) throw std::invalid_argument("oracle_graph: bad vertex pair");
    if (!connected(D, i, j)) {
        OracleResult res;
        res.infinite = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }

    const auto objective = [&](const std::vector<double>& a) {
        const double nrm = commutator_norm(D, a);
        if (nrm < 1e-300) return -std::numeric_limits<double>::infinity();
        return (a[i] - a[j]) / nrm;
    };
    const auto start = [&](detail::Rng& rng) {
        std::vector<double> a(n);
        for (double& e : a) e = rng.normal();
        a[j] = 0.0;
        return a;
    };

    // The gauge coordinate stays pinned: ascent moves that change a_j are
    // wasted but harmless; keep it simple by fixing it in the objective.
    const auto gauged = [&](const std::vector<double>& a) {
        if (a[j] != 0.0) {
            std::vector<double> b = a;
            const double shift = b[j];
            for (double& e : b) e -= shift;
            return objective(b);
        }
        return objective(a);
    };

    OracleResult res = detail::multistart(cfg, n, false, start, gauged);
    const double shift = res.argument[j];
    for (double& e : res.argument) e -= shift;
    const double nrm = commutator_norm(D, res.argument);
    if (nrm > 0.0)
        for (double& e : res.argument) e /= nrm;
    res.value = res.argument[i] - res.argument[j];
    res.feasibility_residual = std::abs(commutator_norm(D, res.argument) - 1.0);
    if (res.feasibility_residual > cfg.tolerance) res.converged = false;
    return res;
}

} // namespace ncdist

#endif
