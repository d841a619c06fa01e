#include "fwsliding/cndg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fwsliding {

namespace {
constexpr double kTinyStep = 1e-16;  // ||v_t - u_t||^2 below this ends the solve
}

long cndg_default_cap(double beta, double eta, double diameter) {
    const double t = std::ceil(6.0 * beta * diameter * diameter / eta);
    if (!std::isfinite(t) || t > 1e9) return 1'000'000'000L;
    return 10L * std::max(1L, static_cast<long>(t));
}

CndgResult cndg(const Point &g, const Point &u, double beta, double eta,
                const LinearMinimizationOracle &lmo, long cap) {
    if (!(beta > 0.0) || !(eta > 0.0)) throw InvalidArgument("cndg: beta and eta must be positive");
    if (cap <= 0) throw InvalidArgument("cndg: cap must be positive");
    if (g.size() != u.size()) throw InvalidArgument("cndg: g and u differ in dimension");
    if (!all_finite(g)) throw CorruptObjective("cndg: non-finite gradient");

    Point ut = u;
    Point d(u.size());
    double gap = kNaN;
    for (long t = 1; t <= cap; ++t) {
        d = g + beta * (ut - u);
        const LmoResult r = lmo.minimize(d);
        gap = d.dot(ut) - r.value;
        if (gap <= eta) return {std::move(ut), t, gap};

        const Point dir = r.vertex - ut;
        const double dd = dir.squaredNorm();
        if (dd == 0.0) {
            throw LmoInconsistency("cndg: oracle returned the current iterate with gap " +
                                   std::to_string(gap) + " > eta");
        }
        if (dd < kTinyStep) return {std::move(ut), t, gap};
        const double alpha = std::min(1.0, gap / (beta * dd));
        ut += alpha * dir;
    }
    throw CndgCapExceeded("cndg: no eta-solution after " + std::to_string(cap) +
                              " oracle calls (last gap " + std::to_string(gap) + ")",
                          std::move(ut), gap);
}

double verify_inner_condition(const Point &g, const Point &u, double beta, double /*eta*/,
                              const Point &u_plus, const LinearMinimizationOracle &lmo) {
    const Point d = g + beta * (u_plus - u);
    return d.dot(u_plus) - lmo.minimize(d).value;
}

}  // namespace fwsliding
