#include "fwsliding/instances.hpp"

#include "fwsliding/oracles.hpp"
#include "fwsliding/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numeric>
#include <vector>

namespace fwsliding {

// ---------------------------------------------------------------------------
// QuadraticObjective

QuadraticObjective::QuadraticObjective(SparseMatrix a, Eigen::VectorXd b, std::optional<double> lipschitz)
    : a_(std::move(a)), b_(std::move(b)), lipschitz_(lipschitz) {
    if (a_.rows() != b_.size()) throw InvalidArgument("QuadraticObjective: rows of A must match length of b");
    a_.makeCompressed();
}

double QuadraticObjective::value(const Point &x) const {
    if (x.size() != a_.cols()) throw InvalidArgument("QuadraticObjective: dimension mismatch");
    return 0.5 * (a_ * x - b_).squaredNorm();
}

Point QuadraticObjective::gradient(const Point &x) const { return value_and_gradient(x).second; }

std::pair<double, Point> QuadraticObjective::value_and_gradient(const Point &x) const {
    if (x.size() != a_.cols()) throw InvalidArgument("QuadraticObjective: dimension mismatch");
    const Eigen::VectorXd r = a_ * x - b_;
    Point g = a_.transpose() * r;
    return {0.5 * r.squaredNorm(), std::move(g)};
}

QuadraticObjective QuadraticObjective::half_squared_norm(std::size_t n) {
    SparseMatrix eye(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    eye.setIdentity();
    return {std::move(eye), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), 1.0};
}

// ---------------------------------------------------------------------------
// Specs

const char *to_string(Family f) {
    switch (f) {
        case Family::Spectrahedron: return "SPECTRAHEDRON";
        case Family::Hamiltonian: return "HAMILTONIAN";
        case Family::Simplex: return "SIMPLEX";
        case Family::SimplexNorm: return "SIMPLEX_NORM";
    }
    return "?";
}

std::optional<Family> parse_family(const std::string &s) {
    for (Family f : {Family::Spectrahedron, Family::Hamiltonian, Family::Simplex, Family::SimplexNorm}) {
        if (s == to_string(f)) return f;
    }
    return std::nullopt;
}

void InstanceSpec::validate() const {
    if (m < 1) throw InvalidArgument("instance.m must be >= 1");
    if (n < 1) throw InvalidArgument("instance.n must be >= 1");
    if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("instance.density must lie in (0, 1]");
    if (family == Family::Hamiltonian && (n < 3 || n > static_cast<long>(kMaxCycleNodes))) {
        throw InvalidArgument("instance.n must lie in [3, 16] for HAMILTONIAN");
    }
}

// ---------------------------------------------------------------------------
// Generators

namespace {

QuadraticObjective::SparseMatrix random_sparse(long m, long cols, double density, std::uint64_t seed,
                                               bool gaussian) {
    CounterRng pattern = make_rng(seed, Stream::Pattern);
    CounterRng values = make_rng(seed, Stream::Values);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(static_cast<double>(m) * static_cast<double>(cols) * density) + 16);
    for (long i = 0; i < m; ++i) {
        for (long j = 0; j < cols; ++j) {
            if (density < 1.0 && pattern.uniform() >= density) continue;
            const double v = gaussian ? values.normal() : values.uniform();
            entries.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
        }
    }
    QuadraticObjective::SparseMatrix a(m, cols);
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

std::vector<std::size_t> random_permutation(std::size_t n, CounterRng &rng) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(p[i - 1], p[rng.below(i)]);
    }
    return p;
}

Point uniform_simplex_point(Eigen::Index n, CounterRng &rng) {
    Point x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = -std::log(rng.uniform_open0());
    return x / x.sum();
}

}  // namespace

std::pair<QuadraticObjective, Point> gen_spectrahedron(long m, long n, double density, std::uint64_t seed) {
    InstanceSpec{Family::Spectrahedron, m, n, density, seed}.validate();
    auto a = random_sparse(m, n * n, density, seed, /*gaussian=*/true);

    CounterRng planted = make_rng(seed, Stream::Planted);
    Eigen::MatrixXd gauss(n, n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) gauss(i, j) = planted.normal();
    }
    const Eigen::MatrixXd u = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ();
    Eigen::VectorXd s(n);
    for (long i = 0; i < n; ++i) s[i] = planted.uniform();
    s /= s.sum();
    Eigen::MatrixXd x = u * s.asDiagonal() * u.transpose();
    x = 0.5 * (x + x.transpose()).eval();

    Point flat(n * n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) flat[i * n + j] = x(i, j);
    }
    Eigen::VectorXd b = a * flat;
    return {QuadraticObjective(std::move(a), std::move(b)), std::move(flat)};
}

std::pair<QuadraticObjective, Point> gen_hamiltonian(long m, long n, double density, std::uint64_t seed) {
    InstanceSpec{Family::Hamiltonian, m, n, density, seed}.validate();
    const auto nodes = static_cast<std::size_t>(n);
    auto a = random_sparse(m, static_cast<long>(edge_count(nodes)), density, seed, /*gaussian=*/false);

    CounterRng planted = make_rng(seed, Stream::Planted);
    const Point v1 = cycle_incidence(random_permutation(nodes, planted), nodes);
    const Point v2 = cycle_incidence(random_permutation(nodes, planted), nodes);
    Point x = 0.8 * v1 + 0.2 * v2;
    Eigen::VectorXd b = a * x;
    return {QuadraticObjective(std::move(a), std::move(b)), std::move(x)};
}

std::pair<QuadraticObjective, Point> gen_simplex(long m, long n, std::uint64_t seed) {
    InstanceSpec{Family::Simplex, m, n, 1.0, seed}.validate();
    auto a = random_sparse(m, n, 1.0, seed, /*gaussian=*/true);
    CounterRng planted = make_rng(seed, Stream::Planted);
    Point x = uniform_simplex_point(n, planted);
    Eigen::VectorXd b = a * x;
    return {QuadraticObjective(std::move(a), std::move(b)), std::move(x)};
}

Instance make_instance(const InstanceSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n);
    switch (spec.family) {
        case Family::Spectrahedron: {
            auto [obj, x] = gen_spectrahedron(spec.m, spec.n, spec.density, spec.seed);
            return {spec, std::move(obj), std::move(x), 0.0, std::make_unique<SpectrahedronLmo>(n)};
        }
        case Family::Hamiltonian: {
            auto [obj, x] = gen_hamiltonian(spec.m, spec.n, spec.density, spec.seed);
            return {spec, std::move(obj), std::move(x), 0.0, std::make_unique<HamiltonianLmo>(n)};
        }
        case Family::Simplex: {
            auto [obj, x] = gen_simplex(spec.m, spec.n, spec.seed);
            return {spec, std::move(obj), std::move(x), 0.0, std::make_unique<SimplexLmo>(n)};
        }
        case Family::SimplexNorm: {
            Point center = Point::Constant(spec.n, 1.0 / static_cast<double>(spec.n));
            return {spec, QuadraticObjective::half_squared_norm(n), std::move(center),
                    0.5 / static_cast<double>(spec.n), std::make_unique<SimplexLmo>(n)};
        }
    }
    throw InvalidArgument("make_instance: unknown family");
}

// ---------------------------------------------------------------------------
// Lipschitz estimate

double estimate_lmin(const QuadraticObjective &obj, double tol, long cap) {
    const auto &a = obj.op();
    const Eigen::Index d = a.cols();
    if (d == 0 || a.nonZeros() == 0) return 0.0;

    CounterRng rng(0x1D5EEDULL, 0);
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
    v.normalize();

    double mu = 0.0, prev_delta = 0.0;
    for (long it = 0; it < cap; ++it) {
        Eigen::VectorXd w = a.transpose() * (a * v);
        const double next = v.dot(w);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        v = w / wn;
        const double delta = std::abs(next - mu);
        mu = next;
        if (it >= 2 && prev_delta > 0.0) {
            // Geometric convergence: remaining error ~ delta * rho / (1 - rho).
            const double rho = std::min(delta / prev_delta, 0.999999);
            if (delta * rho / (1.0 - rho) <= tol * mu && delta <= tol * mu) return mu;
        } else if (it >= 2 && delta == 0.0) {
            return mu;
        }
        prev_delta = delta;
    }
    throw CapExceeded("estimate_lmin: power iteration did not converge", mu);
}

// ---------------------------------------------------------------------------
// Random feasible points

Point random_feasible_point(const LinearMinimizationOracle &lmo, std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, static_cast<std::uint64_t>(Stream::Probe) * 0x10000ULL + index);
    const SetId id = lmo.set_id();
    switch (id.kind) {
        case SetKind::Simplex:
            return uniform_simplex_point(static_cast<Eigen::Index>(id.size), rng);
        case SetKind::Spectrahedron: {
            const auto n = static_cast<Eigen::Index>(id.size);
            const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
            Eigen::MatrixXd w(n, rank);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < rank; ++j) w(i, j) = rng.normal();
            }
            Eigen::MatrixXd x = w * w.transpose();
            x /= x.trace();
            x = 0.5 * (x + x.transpose()).eval();
            Point flat(n * n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) flat[i * n + j] = x(i, j);
            }
            return flat;
        }
        case SetKind::HamiltonianCycles: {
            const int parts = 1 + static_cast<int>(rng.below(4));
            Point weights(parts);
            for (int i = 0; i < parts; ++i) weights[i] = -std::log(rng.uniform_open0());
            weights /= weights.sum();
            Point x = Point::Zero(static_cast<Eigen::Index>(edge_count(id.size)));
            for (int i = 0; i < parts; ++i) {
                x += weights[i] * cycle_incidence(random_permutation(id.size, rng), id.size);
            }
            return x;
        }
    }
    throw InvalidArgument("random_feasible_point: unknown set");
}

}  // namespace fwsliding
