#pragma once

#include "fwsliding/core.hpp"

#include <vector>

namespace fwsliding {

/// Complexity bounds of CGS-ls under the LS_CUBIC schedule
/// (beta_k = L_k gamma_k, eta_k = L_k gamma_k D^2 / k), and checks of the
/// identities every trace must satisfy.
struct BoundInputs {
    double epsilon;
    double l0;
    double l_min;       ///< smallest valid Lipschitz constant (or an upper estimate)
    double d_estimate;  ///< D used by the schedule
    double d_x;         ///< diameter of X (or an upper bound)
};

/// max{2 L_min, L_0}: no accepted L_k exceeds it.
double lipschitz_ceiling(const BoundInputs &in);

/// sqrt(27/2 + 27 D^2 / D_X^2) * (max{2 L_min, L_0} / L_0)^(1/6)
double n_grad_constant(const BoundInputs &in);

/// C sqrt(max{2 L_min, L_0} D_X^2 / eps): outer iterations needed to certify.
double n_grad_bound(const BoundInputs &in);

/// 6 D_X^2 / D^2 * N_grad^2 + N_grad: total inner oracle calls.
double n_lin_bound(const BoundInputs &in);

/// ceil(6 beta D_X^2 / eta): inner oracle calls of one CndG call.
long inner_iter_bound(double beta, double eta, double d_x);

struct BoundCheck {
    bool pass = true;
    double measured = 0.0;
    double bound = 0.0;
};

struct TraceBoundReport {
    BoundCheck n_grad;         ///< outer iterations vs N_grad
    BoundCheck n_lin;          ///< total inner calls vs N_lin
    BoundCheck inner_iters;    ///< worst T_k - (ceil(6 beta_k D_X^2/eta_k) + 1); bound 0
    BoundCheck l_bound;        ///< max L_k vs max{2 L_min, L_0}
    BoundCheck l_monotone;     ///< number of decreases of L_k; bound 0
    BoundCheck gamma_sandwich; ///< violations of L_0/k^3 <= Gamma_k <= 27 max/k^3; bound 0
    BoundCheck sumone;         ///< max |Gamma_k sum gamma_i/Gamma_i - 1|; bound 1e-10
    BoundCheck recursion;      ///< max |Gamma_k - Gamma_{k-1}(1-gamma_k)| / Gamma_{k-1}; bound 1e-12
    BoundCheck gamma_range;    ///< gamma_1 = 1, gamma_k in (0,1) and decreasing; violations, bound 0

    bool all_pass() const;
};

inline constexpr double kSumOneTol = 1e-10;
inline constexpr double kRecursionTol = 1e-12;
inline constexpr double kLBoundRelTol = 1e-12;

/// Evaluates every bound against a CGS-ls result. `trace` must start at k = 1.
TraceBoundReport check_trace_bounds(const SolveResult &result, const BoundInputs &in);

/// max_k |Gamma_k sum_{i<=k} gamma_i / Gamma_i - 1| over a gamma/Gamma sequence.
double sumone_residual(const std::vector<double> &gamma, const std::vector<double> &big_gamma);

}  // namespace fwsliding
