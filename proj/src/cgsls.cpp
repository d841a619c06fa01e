#include "fwsliding/cgsls.hpp"

#include "fwsliding/cndg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace fwsliding {

double solve_gamma_cubic(double gamma_prev_big, double l_k) {
    if (!(gamma_prev_big > 0.0) || !(l_k > 0.0)) {
        throw InvalidArgument("solve_gamma_cubic: Gamma_{k-1} and L_k must be positive");
    }
    const double r = gamma_prev_big / l_k;
    auto p = [r](double g) { return g * g * g + r * g - r; };

    // The root satisfies g^3 = r (1 - g) < r, so cbrt(r) bounds it from above.
    double hi = std::min(1.0, std::cbrt(r));
    double lo = 0.0;
    double g = hi;
    for (int it = 0; it < 200; ++it) {
        const double pg = p(g);
        if (pg == 0.0) break;
        if (pg > 0.0) {
            hi = g;
        } else {
            lo = g;
        }
        double next = g - pg / (3.0 * g * g + r);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == g || hi - lo <= 0.0) break;
        g = next;
        if (hi == std::nextafter(lo, hi)) break;
    }
    // Pick the endpoint with the smaller residual.
    for (double cand : {lo, hi}) {
        if (cand > 0.0 && std::abs(p(cand)) < std::abs(p(g))) g = cand;
    }
    return g;
}

double solve_gamma_quadratic(double gamma_prev_big, double l_k) {
    if (!(gamma_prev_big > 0.0) || !(l_k > 0.0)) {
        throw InvalidArgument("solve_gamma_quadratic: Gamma_{k-1} and L_k must be positive");
    }
    const double r = gamma_prev_big / l_k;
    // Rationalized root of g^2 + r g - r = 0; no cancellation for small r.
    return 2.0 * r / (r + std::sqrt(r * r + 4.0 * r));
}

StepParams schedule_params(Schedule schedule, long k, double l_k, double gamma_prev_big,
                           double d_estimate, std::optional<long> fixed_n) {
    if (k < 1) throw InvalidArgument("schedule_params: k must be >= 1");
    const double kd = static_cast<double>(k);
    const double d2 = d_estimate * d_estimate;
    StepParams p{};
    switch (schedule) {
        case Schedule::LsCubic:
            p.gamma = k == 1 ? 1.0 : solve_gamma_cubic(gamma_prev_big, l_k);
            p.big_gamma = l_k * p.gamma * p.gamma * p.gamma;
            p.beta = l_k * p.gamma;
            p.eta = l_k * p.gamma * d2 / kd;
            break;
        case Schedule::FixedNQuad: {
            const double n = static_cast<double>(fixed_n.value());
            p.gamma = 2.0 / (kd + 1.0);
            p.big_gamma = 2.0 / (kd * (kd + 1.0));
            p.beta = 2.0 * l_k / kd;
            p.eta = 2.0 * l_k * d2 / (n * kd);
            break;
        }
        case Schedule::FixedNSq: {
            const double n = static_cast<double>(fixed_n.value());
            p.gamma = k == 1 ? 1.0 : solve_gamma_quadratic(gamma_prev_big, l_k);
            p.big_gamma = l_k * p.gamma * p.gamma;
            p.beta = l_k * p.gamma;
            p.eta = l_k * p.gamma * d2 / n;
            break;
        }
    }
    return p;
}

void lower_bound_update(SolverState &state, const Point &z, double f_z, const Point &grad_z,
                        double gamma_k) {
    if (state.lb_grad.size() != grad_z.size()) state.lb_grad = Point::Zero(grad_z.size());
    state.lb_const = (1.0 - gamma_k) * state.lb_const + gamma_k * (f_z - grad_z.dot(z));
    state.lb_grad = (1.0 - gamma_k) * state.lb_grad + gamma_k * grad_z;
}

double lower_bound_min(const SolverState &state, const LinearMinimizationOracle &lmo) {
    return state.lb_const + lmo.minimize(state.lb_grad).value;
}

SolverState initial_state(const Point &y0) {
    SolverState s;
    s.x = y0;
    s.y = y0;
    s.z = y0;
    s.lb_grad = Point::Zero(y0.size());
    return s;
}

SolverState backtracking_step(const SolverState &state, const ObjectiveOracle &obj,
                              const LinearMinimizationOracle &lmo, const SolverConfig &config,
                              bool backtracking) {
    SolverState s = state;
    const long k = state.k + 1;
    double l = state.k == 0 ? config.l0 : state.l_k;

    double cached_gamma = kNaN;
    Point z;
    double f_z = kNaN;
    Point grad_z;
    for (int doublings = 0;; ++doublings) {
        const StepParams p =
            schedule_params(config.schedule, k, l, state.big_gamma, config.d_estimate, config.fixed_n);
        // z_k only moves when gamma_k does.
        if (p.gamma != cached_gamma) {
            z = (1.0 - p.gamma) * state.y + p.gamma * state.x;
            std::tie(f_z, grad_z) = obj.value_and_gradient(z);
            ++s.n_grad_evals;
            if (!std::isfinite(f_z) || !all_finite(grad_z)) {
                throw CorruptObjective("backtracking_step: non-finite objective at z_" + std::to_string(k));
            }
            cached_gamma = p.gamma;
        }

        const long cap = config.max_inner_per_call
                             ? *config.max_inner_per_call
                             : cndg_default_cap(p.beta, p.eta, std::max(config.d_estimate, lmo.diameter_bound()));
        CndgResult inner = cndg(grad_z, state.x, p.beta, p.eta, lmo, cap);
        s.n_lmo_calls += inner.inner_iters;

        Point y = (1.0 - p.gamma) * state.y + p.gamma * inner.u_plus;
        const double f_y = obj.value(y);
        const Point step = y - z;
        const double model = f_z + grad_z.dot(step) + 0.5 * l * step.squaredNorm() +
                             0.5 * config.epsilon * p.gamma;

        if (!backtracking || f_y <= model) {
            if (config.verify_certificates) {
                s.inner_check = verify_inner_condition(grad_z, state.x, p.beta, p.eta, inner.u_plus, lmo);
                ++s.n_verify_lmo_calls;
                if (s.inner_check > p.eta + kDefaultTol) {
                    throw SolverError("inner solve at k=" + std::to_string(k) + " violates its accuracy: " +
                                      std::to_string(s.inner_check) + " > eta=" + std::to_string(p.eta));
                }
            }
            s.k = k;
            s.x = std::move(inner.u_plus);
            s.y = std::move(y);
            s.z = z;
            s.f_y = f_y;
            s.l_k = l;
            s.gamma = p.gamma;
            s.big_gamma = p.big_gamma;
            s.beta = p.beta;
            s.eta = p.eta;
            s.inner_iters = inner.inner_iters;
            lower_bound_update(s, z, f_z, grad_z, p.gamma);
            return s;
        }
        if (doublings >= kMaxDoublings) {
            throw SolverError("backtracking_step: more than " + std::to_string(kMaxDoublings) +
                              " doublings of L at k=" + std::to_string(k) +
                              "; objective is not smooth or is mis-specified");
        }
        l *= 2.0;
        ++s.n_backtracks;
        spdlog::debug("k={} backtrack -> L={}", k, l);
    }
}

SolveResult run_sliding(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                        const SolverConfig &config, const Point &y0, LoopOptions options,
                        const IterationObserver &observer) {
    config.validate();
    if (obj.dim() != lmo.ambient_dim() || static_cast<std::size_t>(y0.size()) != obj.dim()) {
        throw InvalidArgument("run: objective, oracle and starting point disagree on dimension");
    }
    if (!all_finite(y0)) throw InvalidArgument("run: starting point has non-finite entries");

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SolveResult result;
    SolverState state = initial_state(y0);
    result.termination = Termination::MaxOuter;
    while (state.k < config.max_outer) {
        state = backtracking_step(state, obj, lmo, config, options.backtracking);

        TraceRecord rec;
        rec.k = state.k;
        rec.l_k = state.l_k;
        rec.gamma = state.gamma;
        rec.big_gamma = state.big_gamma;
        rec.beta = state.beta;
        rec.eta = state.eta;
        rec.inner_iters = state.inner_iters;
        rec.f_y = state.f_y;
        if (options.stop == StopRule::Certificate) {
            rec.lower_bound = lower_bound_min(state, lmo);
            ++state.n_cert_lmo_calls;
            rec.cert_gap = state.f_y - rec.lower_bound;
        } else {
            rec.wolfe_gap = wolfe_gap(obj, lmo, state.y);
            ++state.n_grad_evals;
            ++state.n_cert_lmo_calls;
        }
        rec.cum_lmo = state.n_lmo_calls;
        rec.cum_backtracks = state.n_backtracks;
        rec.elapsed_seconds = elapsed();
        result.trace.push_back(rec);
        if (observer) observer(state, rec);
        spdlog::debug("k={} L={} f_y={} cert_gap={} wolfe_gap={} T_k={}", rec.k, rec.l_k, rec.f_y,
                      rec.cert_gap, rec.wolfe_gap, rec.inner_iters);

        const double gap = options.stop == StopRule::Certificate ? rec.cert_gap : rec.wolfe_gap;
        if (gap <= config.epsilon) {
            result.termination = Termination::Certified;
            break;
        }
        if (rec.elapsed_seconds >= config.max_wall_seconds) {
            result.termination = Termination::MaxTime;
            break;
        }
    }

    result.y_final = state.y;
    result.f_final = state.f_y;
    if (!result.trace.empty()) {
        result.cert_gap_final = result.trace.back().cert_gap;
        result.wolfe_gap_final = result.trace.back().wolfe_gap;
    }
    result.outer_iters = state.k;
    result.grad_evals = state.n_grad_evals;
    result.total_lmo = state.n_lmo_calls;
    result.cert_check_lmo = state.n_cert_lmo_calls;
    result.total_backtracks = state.n_backtracks;
    result.elapsed_seconds = elapsed();
    spdlog::info("sliding loop finished: {} after k={} ({} oracle calls, {} backtracks)",
                 to_string(result.termination), result.outer_iters, result.total_lmo,
                 result.total_backtracks);
    return result;
}

SolveResult run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                const SolverConfig &config, const Point &y0, const IterationObserver &observer) {
    return run_sliding(obj, lmo, config, y0, LoopOptions{}, observer);
}

}  // namespace fwsliding
