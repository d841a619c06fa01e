#pragma once

#include "fwsliding/cgsls.hpp"
#include "fwsliding/core.hpp"

#include <cstdint>
#include <optional>

namespace fwsliding {

struct BaselineConfig {
    double epsilon = 1e-2;           ///< Wolfe-gap threshold
    std::optional<double> lipschitz; ///< CGS only
    std::optional<long> fixed_n;     ///< CGS only
    double d_estimate = 1.0;         ///< CGS only: D in eta_k = 2 L D^2 / (N k)
    long max_iters = 1'000'000;
    double max_wall_seconds = 3600.0;
    std::uint64_t seed = 0;

    void validate(bool needs_cgs_fields) const;
};

/// Conditional gradient with gamma_k = 2/(k+1):
///   x_k = argmin_{x in X} <grad f(y_{k-1}), x>,  y_k = (1 - gamma_k) y_{k-1} + gamma_k x_k,
/// which equals the weighted average y_k = sum_i 2i/(k(k+1)) x_i. The oracle
/// call of step k also yields the Wolfe gap of y_{k-1}; the loop stops at the
/// first iterate whose gap is <= epsilon. outer_iters counts gradient
/// evaluations.
SolveResult cg_run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                   const BaselineConfig &config, const Point &y0,
                   const IterationObserver &observer = {});

/// Fixed-L conditional gradient sliding: beta_k = 2L/k, gamma_k = 2/(k+1),
/// eta_k = 2 L D^2 / (N k), no linesearch, Wolfe-gap termination.
SolveResult cgs_run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                    const BaselineConfig &config, const Point &y0,
                    const IterationObserver &observer = {});

/// N = ceil(sqrt(12 L D^2 / eps)), the outer-iteration count that certifies
/// eps-accuracy for the fixed-N schedule.
long default_fixed_n(double lipschitz, double d, double epsilon);

}  // namespace fwsliding
