#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fwsliding {

/// Dense element of the feasible set. Spectrahedron iterates are n x n
/// symmetric matrices flattened row-major (entry (i, j) at i * n + j).
using Point = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kLmoValueRelTol = 1e-12;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Errors

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public SolverError {
public:
    using SolverError::SolverError;
};

/// Gradient or value came back NaN/inf.
class CorruptObjective : public SolverError {
public:
    using SolverError::SolverError;
};

/// The oracle returned a vertex that cannot be the minimizer it claims to be.
class LmoInconsistency : public SolverError {
public:
    using SolverError::SolverError;
};

/// An iterative routine ran past its iteration cap. Carries the best value
/// reached so callers can report it.
class CapExceeded : public SolverError {
public:
    CapExceeded(const std::string &what, double residual)
        : SolverError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// ---------------------------------------------------------------------------
// Oracle contracts

/// Smooth convex objective f with gradient. Implementations must be
/// immutable after construction; all methods are const and thread-safe.
class ObjectiveOracle {
public:
    virtual ~ObjectiveOracle() = default;

    virtual std::size_t dim() const = 0;
    virtual double value(const Point &x) const = 0;
    virtual Point gradient(const Point &x) const = 0;

    /// One pass for both; override when the two share work.
    virtual std::pair<double, Point> value_and_gradient(const Point &x) const {
        return {value(x), gradient(x)};
    }

    /// A constant L with ||grad f(x) - grad f(y)|| <= L ||x - y|| when known.
    virtual std::optional<double> lipschitz_hint() const { return std::nullopt; }
};

enum class SetKind { Simplex, Spectrahedron, HamiltonianCycles };

/// Identifies a feasible set. `size` is the simplex dimension, the matrix
/// side of the spectrahedron, or the node count of the cycle polytope.
struct SetId {
    SetKind kind;
    std::size_t size;

    std::size_t ambient_dim() const;
};

struct LmoResult {
    Point vertex;
    double value;  ///< <g, vertex>
};

/// Linear minimization over a compact convex set X: argmin_{x in X} <g, x>.
/// Deterministic in g. Safe to call concurrently.
class LinearMinimizationOracle {
public:
    virtual ~LinearMinimizationOracle() = default;

    virtual LmoResult minimize(const Point &g) const = 0;
    virtual SetId set_id() const = 0;

    std::size_t ambient_dim() const { return set_id().ambient_dim(); }

    /// max ||x - y|| over X when known in closed form.
    virtual std::optional<double> diameter_exact() const { return std::nullopt; }
    /// An upper bound on the diameter; equals diameter_exact() when known.
    virtual double diameter_bound() const = 0;
};

// ---------------------------------------------------------------------------
// Solver configuration and state

enum class Schedule {
    LsCubic,     ///< Gamma_k = L_k gamma_k^3, eta_k = L_k gamma_k D^2 / k
    FixedNQuad,  ///< gamma_k = 2/(k+1), beta_k = 2 L_k / k, eta_k = 2 L_k D^2 / (N k)
    FixedNSq,    ///< Gamma_k = L_k gamma_k^2, eta_k = L_k gamma_k D^2 / N
};

struct SolverConfig {
    double epsilon = 1e-3;
    double l0 = 10.0;
    double d_estimate = 1.0;
    Schedule schedule = Schedule::LsCubic;
    std::optional<long> fixed_n;
    long max_outer = 100000;
    /// Per-call CndG cap. When unset, 10 * ceil(6 beta D_X^2 / eta) is used,
    /// with D_X the larger of d_estimate and the oracle's diameter bound.
    std::optional<long> max_inner_per_call;
    double max_wall_seconds = 3600.0;
    bool verify_certificates = false;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument naming the offending field.
    void validate() const;
};

/// Everything Algorithm CGS-ls carries between outer iterations.
struct SolverState {
    long k = 0;
    Point x;
    Point y;
    Point z;
    double l_k = kNaN;
    double gamma = kNaN;
    double big_gamma = kNaN;
    double beta = kNaN;
    double eta = kNaN;
    /// xi_k(x) = lb_const + <lb_grad, x>
    double lb_const = 0.0;
    Point lb_grad;
    long n_grad_evals = 0;
    long n_lmo_calls = 0;  ///< inner (CndG) oracle calls, including backtracking retries
    long n_cert_lmo_calls = 0;
    long n_verify_lmo_calls = 0;
    long n_backtracks = 0;
    double f_y = kNaN;
    /// T_k of the accepted inner solve at iteration k.
    long inner_iters = 0;
    /// Last verify_inner_condition result (only with verify_certificates).
    double inner_check = kNaN;

    double lower_model(const Point &p) const { return lb_const + lb_grad.dot(p); }
};

struct TraceRecord {
    long k = 0;
    double l_k = kNaN;
    double gamma = kNaN;
    double big_gamma = kNaN;
    double beta = kNaN;
    double eta = kNaN;
    long inner_iters = 0;
    double f_y = kNaN;
    double lower_bound = kNaN;
    double cert_gap = kNaN;
    double wolfe_gap = kNaN;
    long cum_lmo = 0;
    long cum_backtracks = 0;
    double elapsed_seconds = 0.0;
};

enum class Termination { Certified, MaxOuter, MaxTime };

struct SolveResult {
    Point y_final;
    double f_final = kNaN;
    double cert_gap_final = kNaN;
    double wolfe_gap_final = kNaN;
    long outer_iters = 0;
    long grad_evals = 0;
    long total_lmo = 0;  ///< inner oracle calls (CndG, or one per CG step)
    long cert_check_lmo = 0;
    long total_backtracks = 0;
    Termination termination = Termination::MaxOuter;
    double elapsed_seconds = 0.0;
    std::vector<TraceRecord> trace;
};

const char *to_string(Schedule s);
const char *to_string(Termination t);
const char *to_string(SetKind k);

// ---------------------------------------------------------------------------
// Operations

/// max_{x in X} <grad f(y), y - x>. Uses exactly one oracle call.
double wolfe_gap(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                 const Point &y);

/// Feasibility test within `tol`. The cycle polytope is only decided at its
/// vertices: true iff p is the incidence vector of a Hamiltonian cycle.
bool membership_check(const SetId &set, const Point &p, double tol = kDefaultTol);

bool all_finite(const Point &p);

}  // namespace fwsliding
