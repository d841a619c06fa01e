#pragma once

#include "fwsliding/core.hpp"

namespace fwsliding {

struct CndgResult {
    Point u_plus;
    long inner_iters = 0;  ///< oracle calls consumed, >= 1
    double final_gap = kNaN;
};

/// CndG ran out of iterations before V <= eta.
class CndgCapExceeded : public CapExceeded {
public:
    CndgCapExceeded(const std::string &what, Point best, double gap)
        : CapExceeded(what, gap), best_(std::move(best)) {}
    const Point &best() const noexcept { return best_; }

private:
    Point best_;
};

/// Conditional-gradient solve of the prox subproblem
///   min_{x in X} <g, x> + beta/2 ||x - u||^2
/// to Wolfe-gap accuracy eta. Each step calls the oracle on the subproblem
/// gradient d_t = g + beta (u_t - u), stops when
/// V = <d_t, u_t> - min_x <d_t, x> <= eta, and otherwise moves to
/// u_{t+1} = (1 - a) u_t + a v_t with the exact line-search step
/// a = min{1, V / (beta ||v_t - u_t||^2)}.
///
/// On return <g + beta (u+ - u), u+ - x> <= eta for all x in X.
CndgResult cndg(const Point &g, const Point &u, double beta, double eta,
                const LinearMinimizationOracle &lmo, long cap);

/// Default cap: 10 * ceil(6 beta D^2 / eta).
long cndg_default_cap(double beta, double eta, double diameter);

/// max_{x in X} <g + beta (u+ - u), u+ - x>, one oracle call.
double verify_inner_condition(const Point &g, const Point &u, double beta, double eta,
                              const Point &u_plus, const LinearMinimizationOracle &lmo);

}  // namespace fwsliding
