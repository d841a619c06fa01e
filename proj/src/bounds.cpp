#include "fwsliding/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace fwsliding {

double lipschitz_ceiling(const BoundInputs &in) { return std::max(2.0 * in.l_min, in.l0); }

double n_grad_constant(const BoundInputs &in) {
    const double ratio = in.d_estimate * in.d_estimate / (in.d_x * in.d_x);
    return std::sqrt(27.0 / 2.0 + 27.0 * ratio) * std::pow(lipschitz_ceiling(in) / in.l0, 1.0 / 6.0);
}

double n_grad_bound(const BoundInputs &in) {
    return n_grad_constant(in) * std::sqrt(lipschitz_ceiling(in) * in.d_x * in.d_x / in.epsilon);
}

double n_lin_bound(const BoundInputs &in) {
    const double ng = n_grad_bound(in);
    return 6.0 * in.d_x * in.d_x / (in.d_estimate * in.d_estimate) * ng * ng + ng;
}

long inner_iter_bound(double beta, double eta, double d_x) {
    return static_cast<long>(std::ceil(6.0 * beta * d_x * d_x / eta));
}

bool TraceBoundReport::all_pass() const {
    return n_grad.pass && n_lin.pass && inner_iters.pass && l_bound.pass && l_monotone.pass &&
           gamma_sandwich.pass && sumone.pass && recursion.pass && gamma_range.pass;
}

double sumone_residual(const std::vector<double> &gamma, const std::vector<double> &big_gamma) {
    double sum = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        sum += gamma[i] / big_gamma[i];
        worst = std::max(worst, std::abs(big_gamma[i] * sum - 1.0));
    }
    return worst;
}

TraceBoundReport check_trace_bounds(const SolveResult &result, const BoundInputs &in) {
    TraceBoundReport rep;
    const double ceiling = lipschitz_ceiling(in);

    rep.n_grad.measured = static_cast<double>(result.outer_iters);
    rep.n_grad.bound = n_grad_bound(in);
    rep.n_grad.pass = rep.n_grad.measured <= rep.n_grad.bound;

    rep.n_lin.measured = static_cast<double>(result.total_lmo);
    rep.n_lin.bound = n_lin_bound(in);
    rep.n_lin.pass = rep.n_lin.measured <= rep.n_lin.bound;

    std::vector<double> gammas, bigs;
    double worst_tk = -1e300;
    double max_l = 0.0;
    long decreases = 0, sandwich = 0, range = 0;
    double worst_rec = 0.0;
    const TraceRecord *prev = nullptr;
    for (const TraceRecord &r : result.trace) {
        const double k = static_cast<double>(r.k);
        gammas.push_back(r.gamma);
        bigs.push_back(r.big_gamma);

        const long tk_bound = inner_iter_bound(r.beta, r.eta, in.d_x) + 1;
        worst_tk = std::max(worst_tk, static_cast<double>(r.inner_iters - tk_bound));

        max_l = std::max(max_l, r.l_k);
        if (r.big_gamma < in.l0 / (k * k * k) || r.big_gamma > 27.0 * ceiling / (k * k * k)) ++sandwich;

        if (r.k == 1) {
            if (r.gamma != 1.0) ++range;
        } else if (!(r.gamma > 0.0 && r.gamma < 1.0)) {
            ++range;
        }
        if (prev) {
            if (r.l_k < prev->l_k) ++decreases;
            if (!(r.gamma < prev->gamma)) ++range;
            worst_rec = std::max(worst_rec,
                                 std::abs(r.big_gamma - prev->big_gamma * (1.0 - r.gamma)) / prev->big_gamma);
        }
        prev = &r;
    }
    if (result.trace.empty()) worst_tk = 0.0;

    rep.inner_iters = {worst_tk <= 0.0, worst_tk, 0.0};
    rep.l_bound = {max_l <= ceiling * (1.0 + kLBoundRelTol), max_l, ceiling};
    rep.l_monotone = {decreases == 0, static_cast<double>(decreases), 0.0};
    rep.gamma_sandwich = {sandwich == 0, static_cast<double>(sandwich), 0.0};
    const double so = sumone_residual(gammas, bigs);
    rep.sumone = {so <= kSumOneTol, so, kSumOneTol};
    rep.recursion = {worst_rec <= kRecursionTol, worst_rec, kRecursionTol};
    rep.gamma_range = {range == 0, static_cast<double>(range), 0.0};
    return rep;
}

}  // namespace fwsliding
