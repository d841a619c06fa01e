#include "fwsliding/cgsls.hpp"
#include "fwsliding/instances.hpp"
#include "fwsliding/oracles.hpp"
#include "fwsliding/rng.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

using namespace fwsliding;
using fwtest::vec;

namespace {

// Cardano's formula for the real root of g^3 + r g - r = 0 (one real root
// since the discriminant is negative for r > 0).
double cardano(double r) {
    const double q = r / 2.0;
    const double s = std::sqrt(q * q + r * r * r / 27.0);
    return std::cbrt(q + s) + std::cbrt(q - s);
}

Point start_vertex(const LinearMinimizationOracle &lmo, std::uint64_t seed) {
    CounterRng rng(seed, 77);
    Point d(static_cast<Eigen::Index>(lmo.ambient_dim()));
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = rng.normal();
    return lmo.minimize(d).vertex;
}

// Value jumps by 1e300 per unit of x_0 while the gradient claims slope -1.
class Cliff final : public ObjectiveOracle {
public:
    std::size_t dim() const override { return 2; }
    double value(const Point &x) const override { return 1e300 * x[0]; }
    Point gradient(const Point &) const override { return vec({-1.0, 0.0}); }
};

class NanAfterStart final : public ObjectiveOracle {
public:
    std::size_t dim() const override { return 2; }
    double value(const Point &x) const override { return x[0] > 0.25 ? NAN : 0.5 * x.squaredNorm(); }
    Point gradient(const Point &x) const override { return x[0] > 0.25 ? vec({NAN, NAN}) : x; }
};

}  // namespace

// ---- gamma ----------------------------------------------------------------

TEST(GammaCubic, RatioOne) {
    EXPECT_NEAR(solve_gamma_cubic(1.0, 1.0), 0.6823278038280193, 1e-15);
    EXPECT_NEAR(solve_gamma_cubic(7.5, 7.5), 0.6823278038280193, 1e-15);
}

TEST(GammaCubic, RatioOneHalf) {
    // root of g^3 + 0.5 g - 0.5 (40-digit reference: 0.58975451230145838...)
    EXPECT_NEAR(solve_gamma_cubic(0.5, 1.0), 0.5897545123014584, 1e-15);
}

TEST(GammaCubic, MatchesClosedFormOnRandomRatios) {
    CounterRng rng(2024, 0);
    for (int i = 0; i < 1000; ++i) {
        const double l = std::exp(rng.uniform() * 20.0 - 10.0);
        const double ratio = rng.uniform_open0();
        const double g = solve_gamma_cubic(ratio * l, l);
        EXPECT_NEAR(g, cardano(ratio), 1e-10);
        EXPECT_GT(g, 0.0);
        EXPECT_LT(g, 1.0);
    }
}

TEST(GammaCubic, ExtremeRatios) {
    for (double r : {1e-300, 1e-30, 1e-12, 1e-6, 1e3, 1e12}) {
        const double g = solve_gamma_cubic(r, 1.0);
        EXPECT_GT(g, 0.0);
        EXPECT_LT(g, 1.0);
        EXPECT_LE(std::abs(g * g * g + r * g - r), 1e-14 * std::max(1.0, r)) << r;
    }
}

TEST(GammaCubic, RejectsNonPositive) {
    EXPECT_THROW(solve_gamma_cubic(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(solve_gamma_cubic(1.0, -1.0), InvalidArgument);
    EXPECT_THROW(solve_gamma_cubic(NAN, 1.0), InvalidArgument);
}

TEST(GammaQuadratic, Examples) {
    EXPECT_NEAR(solve_gamma_quadratic(1.0, 1.0), 0.6180339887498949, 1e-15);
    EXPECT_NEAR(solve_gamma_quadratic(2.0, 2.0), 0.6180339887498949, 1e-15);
    EXPECT_THROW(solve_gamma_quadratic(0.0, 1.0), InvalidArgument);
}

TEST(Schedule, FirstStepAndFormulas) {
    const auto p1 = schedule_params(Schedule::LsCubic, 1, 4.0, kNaN, 2.0, std::nullopt);
    EXPECT_EQ(p1.gamma, 1.0);
    EXPECT_EQ(p1.big_gamma, 4.0);
    EXPECT_EQ(p1.beta, 4.0);
    EXPECT_EQ(p1.eta, 16.0);

    const auto p3 = schedule_params(Schedule::LsCubic, 3, 4.0, 0.5, 2.0, std::nullopt);
    EXPECT_NEAR(p3.big_gamma, 0.5 * (1.0 - p3.gamma), 1e-15);
    EXPECT_NEAR(p3.eta, 4.0 * p3.gamma * 4.0 / 3.0, 1e-15);

    const auto q = schedule_params(Schedule::FixedNQuad, 4, 3.0, kNaN, 1.0, 10);
    EXPECT_DOUBLE_EQ(q.gamma, 0.4);
    EXPECT_DOUBLE_EQ(q.big_gamma, 0.1);
    EXPECT_DOUBLE_EQ(q.beta, 1.5);
    EXPECT_DOUBLE_EQ(q.eta, 0.15);

    const auto s = schedule_params(Schedule::FixedNSq, 2, 1.0, 1.0, 1.0, 10);
    EXPECT_NEAR(s.gamma, 0.6180339887498949, 1e-15);
    EXPECT_NEAR(s.big_gamma, s.gamma * s.gamma, 1e-15);
    EXPECT_NEAR(s.eta, s.gamma / 10.0, 1e-15);
    EXPECT_THROW(schedule_params(Schedule::LsCubic, 0, 1.0, 1.0, 1.0, std::nullopt), InvalidArgument);
}

// ---- lower bound ----------------------------------------------------------

TEST(LowerBound, FirstStepOnSegment) {
    SolverState s = initial_state(vec({0, 1}));
    s.lb_const = 123.0;  // must be wiped out by gamma = 1
    s.lb_grad = vec({4, 5});
    lower_bound_update(s, vec({0, 1}), 0.5, vec({0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(s.lb_const, -0.5);
    EXPECT_EQ(s.lb_grad, vec({0, 1}));
    EXPECT_DOUBLE_EQ(s.lower_model(vec({0.3, 0.7})), 0.2);
    const SimplexLmo lmo(2);
    EXPECT_DOUBLE_EQ(lower_bound_min(s, lmo), -0.5);
    EXPECT_LE(lower_bound_min(s, lmo), 0.25);
}

TEST(LowerBound, ConstantModel) {
    SolverState s = initial_state(vec({0.2, 0.8}));
    s.lb_const = 3.0;
    EXPECT_DOUBLE_EQ(lower_bound_min(s, SimplexLmo(2)), 3.0);
}

TEST(LowerBound, ValidAlongRun) {
    const auto inst = make_instance({Family::Spectrahedron, 30, 5, 0.6, 8});
    const LinearMinimizationOracle &lmo = *inst.lmo;
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    cfg.d_estimate = std::sqrt(2.0);
    long checked = 0;
    run(inst.objective, lmo, cfg, start_vertex(lmo, 8), [&](const SolverState &s, const TraceRecord &rec) {
        if (s.k % 10 != 1) return;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Point x = random_feasible_point(lmo, 99, static_cast<std::uint64_t>(s.k) * 100 + i);
            ASSERT_LE(s.lower_model(x), inst.objective.value(x) + 1e-9);
            ++checked;
        }
        ASSERT_LE(rec.lower_bound, inst.f_star + 1e-9);
    });
    EXPECT_GT(checked, 0);
}

// ---- full runs ------------------------------------------------------------

TEST(Run, SegmentDemo) {
    const auto f = QuadraticObjective::half_squared_norm(2);
    SolverConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.l0 = 1.0;
    cfg.d_estimate = std::sqrt(2.0);
    const SolveResult r = run(f, SimplexLmo(2), cfg, vec({0, 1}));
    EXPECT_EQ(r.termination, Termination::Certified);
    EXPECT_LE(r.f_final, 0.25 + 1e-6);
    EXPECT_GE(r.f_final, 0.25 - 1e-15);
    EXPECT_LE(r.cert_gap_final, 1e-6);
    EXPECT_EQ(r.total_backtracks, 0);
}

TEST(Run, LooseEpsilonCertifiesAtFirstStep) {
    const auto f = QuadraticObjective::half_squared_norm(2);
    SolverConfig cfg;
    cfg.epsilon = 10.0;
    const SolveResult r = run(f, SimplexLmo(2), cfg, vec({0, 1}));
    EXPECT_EQ(r.termination, Termination::Certified);
    EXPECT_EQ(r.outer_iters, 1);
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].gamma, 1.0);
}

TEST(Run, SpectrahedronCertifiesWithinGradientBound) {
    const auto inst = make_instance({Family::Spectrahedron, 60, 6, 0.5, 3});
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.d_estimate = std::sqrt(2.0);
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 3));
    ASSERT_EQ(r.termination, Termination::Certified);
    EXPECT_LE(r.f_final, 1e-3);
    const double l_min = estimate_lmin(inst.objective);
    const double lmax = std::max(2.0 * l_min, cfg.l0);
    const double c = std::sqrt(27.0 / 2.0 + 27.0) * std::pow(lmax / cfg.l0, 1.0 / 6.0);
    EXPECT_LE(static_cast<double>(r.outer_iters), c * std::sqrt(lmax * 2.0 / cfg.epsilon));
}

TEST(Run, NoBacktrackingWhenL0IsValid) {
    const auto inst = make_instance({Family::Simplex, 40, 25, 1.0, 4});
    const double l_min = estimate_lmin(inst.objective);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.l0 = l_min * 1.0001;
    cfg.d_estimate = std::sqrt(2.0);
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 4));
    EXPECT_EQ(r.total_backtracks, 0);
    for (const auto &rec : r.trace) EXPECT_EQ(rec.l_k, cfg.l0);
}

TEST(Run, BacktrackingCountFromSmallL0) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = make_instance({Family::Simplex, 50, 30, 1.0, seed});
        const double l_min = estimate_lmin(inst.objective);
        SolverConfig cfg;
        cfg.epsilon = 1e-3;
        cfg.l0 = l_min / 8.0;
        cfg.d_estimate = std::sqrt(2.0);
        const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, seed));
        EXPECT_LE(r.total_backtracks, 4);
        EXPECT_LE(r.trace.back().l_k, std::max(2.0 * l_min, cfg.l0) * (1 + 1e-12));
        for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i].l_k, r.trace[i - 1].l_k);
    }
}

TEST(Run, LipschitzEstimateStaysBelowCeiling) {
    const auto inst = make_instance({Family::Simplex, 80, 50, 1.0, 17});
    const double l_min = estimate_lmin(inst.objective);
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.l0 = 1e-3;
    cfg.d_estimate = std::sqrt(2.0);
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 17));
    EXPECT_EQ(r.termination, Termination::Certified);
    EXPECT_LE(r.trace.back().l_k, std::max(2.0 * l_min, cfg.l0) * (1 + 1e-12));
}

TEST(Run, VerifiedInnerSolves) {
    const auto inst = make_instance({Family::Hamiltonian, 40, 6, 0.6, 2});
    SolverConfig cfg;
    cfg.epsilon = 1e-2;
    cfg.verify_certificates = true;
    cfg.d_estimate = inst.lmo->diameter_bound();
    long seen = 0;
    const SolveResult r =
        run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 2), [&](const SolverState &s, const TraceRecord &) {
            ASSERT_LE(s.inner_check, s.eta + 1e-9);
            ++seen;
        });
    EXPECT_EQ(seen, r.outer_iters);
    EXPECT_EQ(r.termination, Termination::Certified);
}

TEST(Run, GradientAndOracleAccounting) {
    const auto inst = make_instance({Family::Simplex, 30, 20, 1.0, 6});
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.l0 = 0.5;
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 6));
    EXPECT_GE(r.grad_evals, r.outer_iters);
    EXPECT_LE(r.grad_evals, r.outer_iters + r.total_backtracks);
    EXPECT_EQ(r.cert_check_lmo, r.outer_iters);
    long inner = 0;
    for (const auto &rec : r.trace) inner += rec.inner_iters;
    EXPECT_LE(inner, r.total_lmo);  // retries add to the total
    EXPECT_EQ(r.trace.back().cum_lmo, r.total_lmo);
}

TEST(Run, OuterCapReturnsBestEffort) {
    const auto inst = make_instance({Family::Simplex, 30, 20, 1.0, 6});
    SolverConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.max_outer = 5;
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 6));
    EXPECT_EQ(r.termination, Termination::MaxOuter);
    EXPECT_EQ(r.outer_iters, 5);
    EXPECT_TRUE(membership_check(inst.lmo->set_id(), r.y_final, 1e-9));
    EXPECT_DOUBLE_EQ(r.f_final, inst.objective.value(r.y_final));
}

TEST(Run, WallClockCap) {
    const auto inst = make_instance({Family::Simplex, 30, 20, 1.0, 6});
    SolverConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.max_wall_seconds = 1e-9;
    const SolveResult r = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 6));
    EXPECT_EQ(r.termination, Termination::MaxTime);
    EXPECT_EQ(r.outer_iters, 1);
}

TEST(Run, TooManyDoublingsIsAnError) {
    // eta grows with L, so a tiny D keeps the inner solve from returning u
    // unchanged before the doubling limit.
    const Cliff f;
    SolverConfig cfg;
    cfg.d_estimate = 1e-40;
    EXPECT_THROW(run(f, SimplexLmo(2), cfg, vec({0, 1})), SolverError);
}

TEST(Run, NonFiniteObjectiveIsCorrupt) {
    const NanAfterStart f;
    SolverConfig cfg;
    cfg.epsilon = 1e-9;
    EXPECT_THROW(run(f, SimplexLmo(2), cfg, vec({0, 1})), CorruptObjective);
}

TEST(Run, DimensionMismatch) {
    const auto f = QuadraticObjective::half_squared_norm(3);
    EXPECT_THROW(run(f, SimplexLmo(2), SolverConfig{}, vec({0, 1})), InvalidArgument);
}

TEST(Run, FixedSchedulesFollowTheirFormulas) {
    const auto inst = make_instance({Family::Simplex, 30, 20, 1.0, 9});
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    cfg.fixed_n = 50;
    cfg.l0 = estimate_lmin(inst.objective);
    cfg.schedule = Schedule::FixedNQuad;
    const SolveResult q = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 9));
    for (const auto &rec : q.trace) {
        const double k = static_cast<double>(rec.k);
        EXPECT_DOUBLE_EQ(rec.gamma, 2.0 / (k + 1.0));
        EXPECT_DOUBLE_EQ(rec.big_gamma, 2.0 / (k * (k + 1.0)));
    }
    cfg.schedule = Schedule::FixedNSq;
    const SolveResult s = run(inst.objective, *inst.lmo, cfg, start_vertex(*inst.lmo, 9));
    for (const auto &rec : s.trace) EXPECT_NEAR(rec.big_gamma, rec.l_k * rec.gamma * rec.gamma, 1e-12 * rec.l_k);
}

TEST(Run, Deterministic) {
    const auto inst = make_instance({Family::Spectrahedron, 40, 5, 0.4, 21});
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    const Point y0 = start_vertex(*inst.lmo, 21);
    const SolveResult a = run(inst.objective, *inst.lmo, cfg, y0);
    const SolveResult b = run(inst.objective, *inst.lmo, cfg, y0);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    EXPECT_EQ(a.y_final, b.y_final);
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].f_y, b.trace[i].f_y);
        EXPECT_EQ(a.trace[i].cum_lmo, b.trace[i].cum_lmo);
    }
}
