#include "fwsliding/baselines.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <string>

namespace fwsliding {

void BaselineConfig::validate(bool needs_cgs_fields) const {
    auto positive = [](double v, const char *field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument(std::string(field) + " must be a finite positive number");
        }
    };
    positive(epsilon, "epsilon");
    positive(max_wall_seconds, "max_wall_seconds");
    if (max_iters <= 0) throw InvalidArgument("max_iters must be positive");
    if (needs_cgs_fields) {
        if (!lipschitz) throw InvalidArgument("lipschitz is required by CGS");
        positive(*lipschitz, "lipschitz");
        if (!fixed_n) throw InvalidArgument("fixed_n is required by CGS");
        if (*fixed_n <= 0) throw InvalidArgument("fixed_n must be positive");
        positive(d_estimate, "d_estimate");
    }
}

long default_fixed_n(double lipschitz, double d, double epsilon) {
    return static_cast<long>(std::ceil(std::sqrt(12.0 * lipschitz * d * d / epsilon)));
}

SolveResult cg_run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                   const BaselineConfig &config, const Point &y0, const IterationObserver &observer) {
    config.validate(false);
    if (obj.dim() != lmo.ambient_dim() || static_cast<std::size_t>(y0.size()) != obj.dim()) {
        throw InvalidArgument("cg_run: objective, oracle and starting point disagree on dimension");
    }

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SolveResult result;
    SolverState state = initial_state(y0);
    result.termination = Termination::MaxOuter;
    for (long k = 1; k <= config.max_iters; ++k) {
        auto [f, g] = obj.value_and_gradient(state.y);
        ++state.n_grad_evals;
        if (!std::isfinite(f) || !all_finite(g)) throw CorruptObjective("cg_run: non-finite objective");
        const LmoResult r = lmo.minimize(g);
        ++state.n_lmo_calls;
        const double gap = g.dot(state.y) - r.value;

        state.k = k;
        state.f_y = f;
        state.gamma = 2.0 / (static_cast<double>(k) + 1.0);
        state.big_gamma = 2.0 / (static_cast<double>(k) * (static_cast<double>(k) + 1.0));
        state.inner_iters = 1;

        TraceRecord rec;
        rec.k = k;
        rec.gamma = state.gamma;
        rec.big_gamma = state.big_gamma;
        rec.inner_iters = 1;
        rec.f_y = f;  // objective and gap are those of y_{k-1}
        rec.wolfe_gap = gap;
        rec.cum_lmo = state.n_lmo_calls;
        rec.elapsed_seconds = elapsed();

        if (gap <= config.epsilon) {
            result.trace.push_back(rec);
            if (observer) observer(state, rec);
            result.termination = Termination::Certified;
            break;
        }
        state.x = r.vertex;
        state.y = (1.0 - state.gamma) * state.y + state.gamma * r.vertex;
        result.trace.push_back(rec);
        if (observer) observer(state, rec);
        if (rec.elapsed_seconds >= config.max_wall_seconds) {
            result.termination = Termination::MaxTime;
            break;
        }
    }

    result.y_final = state.y;
    result.f_final = result.termination == Termination::Certified ? state.f_y : obj.value(state.y);
    result.wolfe_gap_final = result.trace.empty() ? kNaN : result.trace.back().wolfe_gap;
    result.outer_iters = state.k;
    result.grad_evals = state.n_grad_evals;
    result.total_lmo = state.n_lmo_calls;
    result.elapsed_seconds = elapsed();
    spdlog::info("CG finished: {} after {} iterations, gap {}", to_string(result.termination),
                 result.outer_iters, result.wolfe_gap_final);
    return result;
}

SolveResult cgs_run(const ObjectiveOracle &obj, const LinearMinimizationOracle &lmo,
                    const BaselineConfig &config, const Point &y0, const IterationObserver &observer) {
    config.validate(true);
    SolverConfig sc;
    sc.epsilon = config.epsilon;
    sc.l0 = *config.lipschitz;
    sc.d_estimate = config.d_estimate;
    sc.schedule = Schedule::FixedNQuad;
    sc.fixed_n = config.fixed_n;
    sc.max_outer = config.max_iters;
    sc.max_wall_seconds = config.max_wall_seconds;
    sc.seed = config.seed;
    return run_sliding(obj, lmo, sc, y0, LoopOptions{false, StopRule::WolfeGap}, observer);
}

}  // namespace fwsliding
