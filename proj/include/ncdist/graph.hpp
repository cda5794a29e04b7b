#ifndef NCDIST_GRAPH_HPP
#define NCDIST_GRAPH_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ncdist {

/// Dirac operator of a general finite graph: a real symmetric n x n matrix
/// with zero diagonal whose support is the edge set.
class GraphDiracOperator {
  public:
    GraphDiracOperator(std::size_t n, std::vector<double> entries)
        : n_(n), m_(std::move(entries)) {
        if (n == 0) throw std::invalid_argument("graph: order must be positive");
        if (m_.size() != n * n) throw std::invalid_argument("graph: entry count != n*n");
        for (std::size_t i = 0; i < n; ++i) {
            if (m_[i * n + i] != 0.0)
                throw std::invalid_argument("graph: diagonal must be zero");
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(m_[i * n + j] - m_[j * n + i]) > 1e-12)
                    throw std::invalid_argument("graph: matrix must be symmetric");
        }
    }

    std::size_t order() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }

  private:
    std::size_t n_;
    std::vector<double> m_; // row-major
};

namespace detail {

// Largest eigenvalue magnitude of a dense symmetric matrix by cyclic
// Jacobi rotations.  Small orders only.
inline double jacobi_spectral_radius(std::vector<double> a, std::size_t n) {
    if (n == 1) return std::abs(a[0]);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    double frob = 0.0;
    for (double e : a) frob += e * e;
    frob = std::sqrt(frob);
    if (frob == 0.0) return 0.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (std::sqrt(2.0 * off) <= 1e-15 * frob) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho = std::max(rho, std::abs(at(i, i)));
    return rho;
}

} // namespace detail

/// Operator norm of [A, D] for A = diag(a).  The commutator is the real
/// skew-symmetric matrix K with K_ij = (a_i - a_j) d_ij; its norm is the
/// largest singular value, computed as sqrt(lambda_max(K^t K)).
inline double commutator_norm(const GraphDiracOperator& D, const std::vector<double>& a) {
    const std::size_t n = D.order();
    if (a.size() != n) throw std::invalid_argument("commutator_norm: length mismatch");
    std::vector<double> k(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            k[i * n + j] = (a[i] - a[j]) * D(i, j);
    // G = K^t K (symmetric PSD)
    std::vector<double> g(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < n; ++l) s += k[l * n + i] * k[l * n + j];
            g[i * n + j] = g[j * n + i] = s;
        }
    const double lmax = detail::jacobi_spectral_radius(std::move(g), n);
    return std::sqrt(std::max(lmax, 0.0));
}

/// True when vertices i and j lie in the same connected component.
inline bool connected(const GraphDiracOperator& D, std::size_t i, std::size_t j) {
    const std::size_t n = D.order();
    if (i >= n || j >= n) throw std::invalid_argument("connected: vertex out of range");
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{i};
    seen[i] = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        if (u == j) return true;
        for (std::size_t v = 0; v < n; ++v)
            if (!seen[v] && D(u, v) != 0.0) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return false;
}

/// Weighted shortest-path distance with edge weights 1/|d_ij| (Dijkstra).
/// Returns +infinity when i and j are disconnected.
inline double geodesic(const GraphDiracOperator& D, std::size_t i, std::size_t j) {
    const std::size_t n = D.order();
    if (i >= n || j >= n) throw std::invalid_argument("geodesic: vertex out of range");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    dist[i] = 0.0;
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.emplace(0.0, i);
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > dist[u]) continue;
        if (u == j) return du;
        for (std::size_t v = 0; v < n; ++v) {
            const double d = D(u, v);
            if (d == 0.0) continue;
            const double nd = du + 1.0 / std::abs(d);
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist[j];
}

} // namespace ncdist

#endif
