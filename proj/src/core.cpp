#include "fwsliding/core.hpp"

#include "fwsliding/oracles.hpp"

#include <cmath>
#include <string>

namespace fwsliding {

std::size_t SetId::ambient_dim() const {
    switch (kind) {
        case SetKind::Simplex: return size;
        case SetKind::Spectrahedron: return size * size;
        case SetKind::HamiltonianCycles: return edge_count(size);
    }
    return 0;
}

void SolverConfig::validate() const {
    auto positive = [](double v, const char *field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument(std::string(field) + " must be a finite positive number");
        }
    };
    positive(epsilon, "epsilon");
    positive(l0, "l0");
    positive(d_estimate, "d_estimate");
    positive(max_wall_seconds, "max_wall_seconds");
    if (max_outer <= 0) throw InvalidArgument("max_outer must be positive");
    if (max_inner_per_call && *max_inner_per_call <= 0) {
        throw InvalidArgument("max_inner_per_call must be positive");
    }
    if (schedule != Schedule::LsCubic) {
        if (!fixed_n) throw InvalidArgument("fixed_n is required by the FIXED_N schedules");
        if (*fixed_n <= 0) throw InvalidArgument("fixed_n must be positive");
    }
}

const char *to_string(Schedule s) {
    switch (s) {
        case Schedule::LsCubic: return "LS_CUBIC";
        case Schedule::FixedNQuad: return "FIXED_N_QUAD";
        case Schedule::FixedNSq: return "FIXED_N_SQ";
    }
    return "?";
}

const char *to_string(Termination t) {
    switch (t) {
        case Termination::Certified: return "CERTIFIED";
        case Termination::MaxOuter: return "MAX_OUTER";
        case Termination::MaxTime: return "MAX_TIME";
    }
    return "?";
}

const char *to_string(SetKind k) {
    switch (k) {
        case SetKind::Simplex: return "simplex";
        case SetKind::Spectrahedron: return "spectrahedron";
        case SetKind::HamiltonianCycles: return "hamiltonian";
    }
    return "?";
}

bool all_finite(const Point &p) { return p.allFinite(); }

double wolfe_gap(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo, const Point &y) {
    const Point g = obj.gradient(y);
    if (!all_finite(g)) throw CorruptObjective("wolfe_gap: non-finite gradient");
    return g.dot(y) - lmo.minimize(g).value;
}

bool membership_check(const SetId &set, const Point &p, double tol) {
    if (static_cast<std::size_t>(p.size()) != set.ambient_dim()) {
        throw InvalidArgument("membership_check: dimension " + std::to_string(p.size()) +
                              " does not match set dimension " + std::to_string(set.ambient_dim()));
    }
    if (!all_finite(p)) return false;
    switch (set.kind) {
        case SetKind::Simplex:
            return p.minCoeff() >= -tol && std::abs(p.sum() - 1.0) <= tol;
        case SetKind::Spectrahedron: {
            const auto n = static_cast<Eigen::Index>(set.size);
            using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
            const Eigen::Map<const RowMajor> x(p.data(), n, n);
            if ((x - x.transpose()).cwiseAbs().maxCoeff() > tol) return false;
            if (std::abs(x.trace() - 1.0) > tol) return false;
            return min_eigenpair(0.5 * (x + x.transpose())).value >= -tol;
        }
        case SetKind::HamiltonianCycles:
            return is_cycle_vertex(p, set.size, tol);
    }
    return false;
}

}  // namespace fwsliding
