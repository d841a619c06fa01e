#include "fwsliding/verification.hpp"

#include "fwsliding/oracles.hpp"
#include "fwsliding/rng.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace fwsliding::verify {

double simplex_min_by_enumeration(const Point &g) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        Point e = Point::Zero(g.size());
        e[i] = 1.0;
        best = std::min(best, g.dot(e));
    }
    return best;
}

double spectrahedron_min_dense(const Point &g, std::size_t n) {
    const auto side = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m(side, side);
    for (Eigen::Index i = 0; i < side; ++i) {
        for (Eigen::Index j = 0; j < side; ++j) m(i, j) = g[i * side + j];
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double tour_min_by_permutation(const Point &costs, std::size_t nodes) {
    auto cost = [&](std::size_t a, std::size_t b) {
        const std::size_t i = std::max(a, b), j = std::min(a, b);
        return costs[static_cast<Eigen::Index>(i * (i - 1) / 2 + j)];
    };
    std::vector<std::size_t> rest(nodes - 1);
    std::iota(rest.begin(), rest.end(), std::size_t{1});
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = cost(0, rest.front()) + cost(rest.back(), 0);
        for (std::size_t i = 0; i + 1 < rest.size(); ++i) c += cost(rest[i], rest[i + 1]);
        best = std::min(best, c);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

namespace {

std::string echo(const Point &g) {
    std::ostringstream ss;
    ss << '[';
    for (Eigen::Index i = 0; i < g.size(); ++i) ss << (i ? ", " : "") << fmt::format("{:.17g}", g[i]);
    ss << ']';
    return ss.str();
}

}  // namespace

EquivalenceReport lmo_equivalence(const std::string &family, std::size_t size, long trials,
                                  std::uint64_t seed) {
    std::unique_ptr<LinearMinimizationOracle> lmo;
    if (family == "simplex") {
        lmo = std::make_unique<SimplexLmo>(size);
    } else if (family == "spectrahedron") {
        lmo = std::make_unique<SpectrahedronLmo>(size);
    } else if (family == "hamiltonian") {
        lmo = std::make_unique<HamiltonianLmo>(size);
    } else {
        throw InvalidArgument("lmo_equivalence: unknown family '" + family + "'");
    }
    const SetId id = lmo->set_id();
    const auto dim = static_cast<Eigen::Index>(id.ambient_dim());

    EquivalenceReport rep;
    CounterRng rng(seed, 0xC0FFEEULL);
    for (long t = 0; t < trials; ++t) {
        Point g(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            g[i] = family == "hamiltonian" ? rng.uniform() : rng.normal();
        }
        double reference = 0.0;
        if (family == "simplex") {
            reference = simplex_min_by_enumeration(g);
        } else if (family == "spectrahedron") {
            reference = spectrahedron_min_dense(g, size);
        } else {
            reference = tour_min_by_permutation(g, size);
        }
        const LmoResult got = lmo->minimize(g);
        const double scale = std::max(1.0, std::abs(reference));
        const double err = std::abs(got.value - reference) / scale;
        const double consistency = std::abs(g.dot(got.vertex) - got.value) / scale;
        const bool member = membership_check(id, got.vertex, 1e-9);
        rep.worst_error = std::max({rep.worst_error, err, consistency});
        ++rep.trials;
        if (err > kEquivalenceTol || consistency > kEquivalenceTol || !member) {
            ++rep.mismatches;
            if (!rep.first_failure) {
                rep.first_failure = fmt::format("trial {} g = {} (oracle {:.17g}, reference {:.17g}{})", t, echo(g),
                                                got.value, reference, member ? "" : ", vertex infeasible");
            }
        }
    }
    return rep;
}

}  // namespace fwsliding::verify
