#include "fwsliding/oracles.hpp"

#include "fwsliding/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fwsliding {

namespace {

void require_dim(const Point &g, std::size_t n, const char *who) {
    if (static_cast<std::size_t>(g.size()) != n) {
        throw InvalidArgument(std::string(who) + ": expected dimension " + std::to_string(n) +
                              ", got " + std::to_string(g.size()));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Simplex

SimplexLmo::SimplexLmo(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgument("SimplexLmo: dimension must be positive");
}

LmoResult SimplexLmo::minimize(const Point &g) const {
    require_dim(g, n_, "SimplexLmo");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < g.size(); ++i) {
        if (g[i] < g[best]) best = i;
    }
    Point v = Point::Zero(g.size());
    v[best] = 1.0;
    return {std::move(v), g[best]};
}

std::optional<double> SimplexLmo::diameter_exact() const {
    return n_ >= 2 ? std::numbers::sqrt2 : 0.0;
}

double SimplexLmo::diameter_bound() const { return *diameter_exact(); }

// ---------------------------------------------------------------------------
// Symmetric smallest eigenpair

namespace {

struct Tridiagonal {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;                        // off[i] couples i and i+1
    std::vector<Eigen::VectorXd> reflectors;    // reflectors[k] acts on rows k+1..n-1
};

Tridiagonal householder_tridiagonalize(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    Tridiagonal t;
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        Eigen::VectorXd x = a.col(k).tail(m);
        const double xnorm = x.norm();
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        if (xnorm > 0.0 && x.tail(m - 1).squaredNorm() > 0.0) {
            const double alpha = -std::copysign(xnorm, x[0]);
            w = x;
            w[0] -= alpha;
            w /= w.norm();
            auto sub = a.bottomRightCorner(m, m);
            const Eigen::VectorXd p = sub * w;
            const Eigen::VectorXd q = p - w.dot(p) * w;
            sub.noalias() -= 2.0 * (w * q.transpose() + q * w.transpose());
            a.col(k).tail(m).setZero();
            a.row(k).tail(m).setZero();
            a(k + 1, k) = alpha;
            a(k, k + 1) = alpha;
        }
        t.reflectors.push_back(std::move(w));
    }
    t.diag = a.diagonal();
    t.off = n > 1 ? Eigen::VectorXd(a.diagonal(-1)) : Eigen::VectorXd();
    return t;
}

// Number of eigenvalues of the tridiagonal matrix strictly less than x.
int sturm_count(const Tridiagonal &t, double x) {
    const Eigen::Index n = t.diag.size();
    constexpr double tiny = std::numeric_limits<double>::min();
    int count = 0;
    double q = t.diag[0] - x;
    if (q < 0.0) ++count;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (q == 0.0) q = tiny;
        q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

double smallest_eigenvalue(const Tridiagonal &t) {
    const Eigen::Index n = t.diag.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off[i - 1]);
        if (i + 1 < n) r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    // count(lo) == 0 and count(hi') >= 1 for any hi' above the spectrum.
    hi += 1.0 + std::abs(hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// Solves (T - sigma I) w = v for T - sigma I symmetric positive definite by
// an LDL^T sweep. Returns false when a pivot is not positive.
bool shifted_solve(const Tridiagonal &t, double sigma, const Eigen::VectorXd &v,
                   Eigen::VectorXd &w) {
    const Eigen::Index n = t.diag.size();
    Eigen::VectorXd d(n), l(n), y(n);
    d[0] = t.diag[0] - sigma;
    if (!(d[0] > 0.0)) return false;
    y[0] = v[0];
    for (Eigen::Index i = 1; i < n; ++i) {
        l[i] = t.off[i - 1] / d[i - 1];
        d[i] = t.diag[i] - sigma - l[i] * t.off[i - 1];
        if (!(d[i] > 0.0)) return false;
        y[i] = v[i] - l[i] * y[i - 1];
    }
    w.resize(n);
    w[n - 1] = y[n - 1] / d[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        w[i] = y[i] / d[i] - l[i + 1] * w[i + 1];
    }
    return std::isfinite(w.squaredNorm());
}

Eigen::VectorXd tridiagonal_times(const Tridiagonal &t, const Eigen::VectorXd &v) {
    const Eigen::Index n = t.diag.size();
    Eigen::VectorXd out = t.diag.cwiseProduct(v);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        out[i] += t.off[i] * v[i + 1];
        out[i + 1] += t.off[i] * v[i];
    }
    return out;
}

}  // namespace

EigenPair min_eigenpair(const Eigen::MatrixXd &sym, double rel_tol, int cap) {
    const Eigen::Index n = sym.rows();
    if (n == 0 || sym.cols() != n) throw InvalidArgument("min_eigenpair: need a square, non-empty matrix");
    if (!sym.allFinite()) throw CorruptObjective("min_eigenpair: non-finite matrix entry");

    const double scale = std::max(sym.cwiseAbs().rowwise().sum().maxCoeff(),
                                  std::numeric_limits<double>::min());
    if (n == 1) {
        return {sym(0, 0), Eigen::VectorXd::Ones(1), 0.0};
    }

    const Tridiagonal t = householder_tridiagonalize(sym);
    const double lambda = smallest_eigenvalue(t);

    CounterRng rng(hash_doubles({sym.data(), static_cast<std::size_t>(sym.size())}), 0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
    v.normalize();

    // Shift just below the spectrum so the shifted matrix is positive definite.
    double delta = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    double residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXd w;
    for (int it = 0; it < cap; ++it) {
        if (!shifted_solve(t, lambda - delta, v, w)) {
            delta *= 16.0;
            continue;
        }
        v = w / w.norm();
        const Eigen::VectorXd tv = tridiagonal_times(t, v);
        residual = (tv - v.dot(tv) * v).norm();
        if (residual <= rel_tol * scale) break;
    }
    if (!(residual <= rel_tol * scale)) {
        throw CapExceeded("min_eigenpair: inverse iteration did not converge, residual " +
                              std::to_string(residual),
                          residual);
    }

    for (auto k = static_cast<Eigen::Index>(t.reflectors.size()) - 1; k >= 0; --k) {
        const Eigen::VectorXd &h = t.reflectors[static_cast<std::size_t>(k)];
        auto tail = v.tail(h.size());
        tail -= 2.0 * h.dot(tail) * h;
    }
    v.normalize();
    const Eigen::VectorXd gv = sym * v;
    const double value = v.dot(gv);
    return {value, v, (gv - value * v).norm()};
}

// ---------------------------------------------------------------------------
// Spectrahedron

SpectrahedronLmo::SpectrahedronLmo(std::size_t n, double eig_tol, int eig_cap)
    : n_(n), eig_tol_(eig_tol), eig_cap_(eig_cap) {
    if (n == 0) throw InvalidArgument("SpectrahedronLmo: side must be positive");
    if (!(eig_tol > 0.0) || eig_cap <= 0) throw InvalidArgument("SpectrahedronLmo: bad eigensolver limits");
}

LmoResult SpectrahedronLmo::minimize(const Point &g) const {
    require_dim(g, n_ * n_, "SpectrahedronLmo");
    const auto n = static_cast<Eigen::Index>(n_);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> gm(g.data(), n, n);
    const Eigen::MatrixXd sym = 0.5 * (gm + gm.transpose());

    const EigenPair pair = min_eigenpair(sym, eig_tol_, eig_cap_);
    Point vertex(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            vertex[i * n + j] = pair.vector[i] * pair.vector[j];
        }
    }
    return {std::move(vertex), pair.value};
}

std::optional<double> SpectrahedronLmo::diameter_exact() const {
    return n_ >= 2 ? std::numbers::sqrt2 : 0.0;
}

double SpectrahedronLmo::diameter_bound() const { return *diameter_exact(); }

// ---------------------------------------------------------------------------
// Hamiltonian cycles

std::size_t edge_index(std::size_t i, std::size_t j) {
    if (i == j) throw InvalidArgument("edge_index: self loop");
    if (i < j) std::swap(i, j);
    return i * (i - 1) / 2 + j;
}

std::size_t edge_count(std::size_t nodes) { return nodes * (nodes - 1) / 2; }

Point cycle_incidence(const std::vector<std::size_t> &order, std::size_t nodes) {
    Point x = Point::Zero(static_cast<Eigen::Index>(edge_count(nodes)));
    for (std::size_t i = 0; i < order.size(); ++i) {
        x[static_cast<Eigen::Index>(edge_index(order[i], order[(i + 1) % order.size()]))] = 1.0;
    }
    return x;
}

bool is_cycle_vertex(const Point &p, std::size_t nodes, double tol) {
    if (static_cast<std::size_t>(p.size()) != edge_count(nodes)) {
        throw InvalidArgument("is_cycle_vertex: dimension mismatch");
    }
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t i = 1; i < nodes; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double v = p[static_cast<Eigen::Index>(edge_index(i, j))];
            if (std::abs(v - 1.0) <= tol) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            } else if (std::abs(v) > tol) {
                return false;
            }
        }
    }
    for (const auto &a : adj) {
        if (a.size() != 2) return false;
    }
    // Degree 2 everywhere: the support is a union of cycles. Walk one.
    std::size_t prev = 0, cur = adj[0][0], seen = 1;
    while (cur != 0) {
        const std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
        ++seen;
        if (seen > nodes) return false;
    }
    return seen == nodes;
}

bool satisfies_degree_relaxation(const Point &p, std::size_t nodes, double tol) {
    if (static_cast<std::size_t>(p.size()) != edge_count(nodes)) {
        throw InvalidArgument("satisfies_degree_relaxation: dimension mismatch");
    }
    std::vector<double> degree(nodes, 0.0);
    for (std::size_t i = 1; i < nodes; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double v = p[static_cast<Eigen::Index>(edge_index(i, j))];
            if (v < -tol || v > 1.0 + tol) return false;
            degree[i] += v;
            degree[j] += v;
        }
    }
    return std::all_of(degree.begin(), degree.end(),
                       [tol](double d) { return std::abs(d - 2.0) <= tol; });
}

TourResult held_karp(const Point &c, std::size_t nodes) {
    if (nodes < 3) throw InvalidArgument("held_karp: need at least 3 nodes");
    if (nodes > kMaxCycleNodes) {
        throw InvalidArgument("held_karp: at most " + std::to_string(kMaxCycleNodes) + " nodes");
    }
    require_dim(c, edge_count(nodes), "held_karp");

    const std::size_t others = nodes - 1;  // nodes 1..n-1 map to bits 0..n-2
    const std::size_t subsets = std::size_t{1} << others;
    auto cost = [&](std::size_t a, std::size_t b) { return c[static_cast<Eigen::Index>(edge_index(a, b))]; };

    // togo[S * others + (j - 1)]: cheapest path from j through all of S back to 0.
    std::vector<double> togo(subsets * others, std::numeric_limits<double>::infinity());
    for (std::size_t j = 1; j < nodes; ++j) togo[j - 1] = cost(j, 0);
    for (std::size_t s = 1; s < subsets; ++s) {
        for (std::size_t j = 1; j < nodes; ++j) {
            if (s & (std::size_t{1} << (j - 1))) continue;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 1; k < nodes; ++k) {
                const std::size_t bit = std::size_t{1} << (k - 1);
                if (!(s & bit)) continue;
                const double cand = cost(j, k) + togo[(s ^ bit) * others + (k - 1)];
                if (cand < best) best = cand;
            }
            togo[s * others + (j - 1)] = best;
        }
    }

    // Forward reconstruction, lowest index on ties: lexicographically smallest tour.
    TourResult tour;
    tour.order.push_back(0);
    std::size_t remaining = subsets - 1;
    std::size_t cur = 0;
    while (remaining != 0) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t k = 1; k < nodes; ++k) {
            const std::size_t bit = std::size_t{1} << (k - 1);
            if (!(remaining & bit)) continue;
            const double cand = cost(cur, k) + togo[(remaining ^ bit) * others + (k - 1)];
            if (cand < best) {
                best = cand;
                pick = k;
            }
        }
        tour.order.push_back(pick);
        remaining ^= std::size_t{1} << (pick - 1);
        cur = pick;
    }
    tour.cost = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) tour.cost += cost(tour.order[i], tour.order[(i + 1) % nodes]);
    return tour;
}

HamiltonianLmo::HamiltonianLmo(std::size_t nodes) : nodes_(nodes) {
    if (nodes < 3) throw InvalidArgument("HamiltonianLmo: need at least 3 nodes");
    if (nodes > kMaxCycleNodes) {
        throw InvalidArgument("HamiltonianLmo: at most " + std::to_string(kMaxCycleNodes) + " nodes");
    }
}

LmoResult HamiltonianLmo::minimize(const Point &c) const {
    const TourResult tour = held_karp(c, nodes_);
    Point vertex = cycle_incidence(tour.order, nodes_);
    const double value = c.dot(vertex);
    return {std::move(vertex), value};
}

std::optional<double> HamiltonianLmo::diameter_exact() const {
    // K_n has two edge-disjoint Hamiltonian cycles once n >= 5.
    if (nodes_ >= 5) return std::sqrt(2.0 * static_cast<double>(nodes_));
    return std::nullopt;
}

double HamiltonianLmo::diameter_bound() const { return std::sqrt(2.0 * static_cast<double>(nodes_)); }

}  // namespace fwsliding
