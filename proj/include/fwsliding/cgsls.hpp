#pragma once

#include "fwsliding/core.hpp"

#include <functional>

namespace fwsliding {

/// Unique positive root of L g^3 = Gamma_prev (1 - g); lies in (0, 1).
/// Safeguarded Newton on the convex increasing cubic g^3 + r g - r with
/// r = Gamma_prev / L, started above the root at min(1, cbrt(r)).
double solve_gamma_cubic(double gamma_prev_big, double l_k);

/// Unique positive root of L g^2 = Gamma_prev (1 - g).
double solve_gamma_quadratic(double gamma_prev_big, double l_k);

struct StepParams {
    double gamma;
    double big_gamma;
    double beta;
    double eta;
};

/// Stepsize, Gamma, prox weight and inner accuracy of outer iteration k >= 1
/// for a candidate Lipschitz estimate `l_k`.
StepParams schedule_params(Schedule schedule, long k, double l_k, double gamma_prev_big,
                           double d_estimate, std::optional<long> fixed_n);

/// xi_k = (1 - gamma) xi_{k-1} + gamma (f(z) + <grad f(z), . - z>).
void lower_bound_update(SolverState &state, const Point &z, double f_z, const Point &grad_z,
                        double gamma_k);

/// min_{x in X} xi_k(x), one oracle call.
double lower_bound_min(const SolverState &state, const LinearMinimizationOracle &lmo);

/// Fresh state at x_0 = y_0, xi_0 = 0, k = 0.
SolverState initial_state(const Point &y0);

/// One outer iteration. Starting from L = L_{k-1} (L_0 when k = 1) it
/// computes gamma_k, Gamma_k, beta_k, eta_k, z_k, x_k = CndG(...), y_k and
/// doubles L until
///   f(y_k) <= f(z_k) + <grad f(z_k), y_k - z_k> + L/2 ||y_k - z_k||^2 + eps/2 gamma_k.
/// With `backtracking` off the first candidate is accepted as is.
SolverState backtracking_step(const SolverState &state, const ObjectiveOracle &obj,
                              const LinearMinimizationOracle &lmo, const SolverConfig &config,
                              bool backtracking = true);

inline constexpr int kMaxDoublings = 200;

using IterationObserver = std::function<void(const SolverState &, const TraceRecord &)>;

enum class StopRule { Certificate, WolfeGap };

struct LoopOptions {
    bool backtracking = true;
    StopRule stop = StopRule::Certificate;
};

/// The sliding loop shared by CGS-ls and the fixed-L CGS baseline.
SolveResult run_sliding(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                        const SolverConfig &config, const Point &y0, LoopOptions options,
                        const IterationObserver &observer = {});

/// CGS with backtracking linesearch and the lower-bound certificate. Stops
/// with Certified once f(y_k) - min xi_k <= epsilon, which bounds
/// f(y_k) - f* by epsilon.
SolveResult run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                const SolverConfig &config, const Point &y0,
                const IterationObserver &observer = {});

}  // namespace fwsliding
