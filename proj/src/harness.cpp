#include "fwsliding/harness.hpp"

#include "fwsliding/cgsls.hpp"
#include "fwsliding/oracles.hpp"
#include "fwsliding/rng.hpp"
#include "fwsliding/verification.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace fwsliding {

using json = nlohmann::json;
using PathElem = std::variant<std::string, std::size_t>;
using JsonPath = std::vector<PathElem>;

const char *to_string(Algorithm a) {
    switch (a) {
        case Algorithm::CG: return "CG";
        case Algorithm::CGS: return "CGS";
        case Algorithm::CGSLS: return "CGSLS";
    }
    return "?";
}

namespace {

std::string path_string(const JsonPath &path) {
    std::string out;
    for (const auto &e : path) {
        if (const auto *key = std::get_if<std::string>(&e)) {
            if (!out.empty()) out += '.';
            out += *key;
        } else {
            out += fmt::format("[{}]", std::get<std::size_t>(e));
        }
    }
    return out.empty() ? "<root>" : out;
}

std::string compose_message(const std::string &path, int line, const std::string &message) {
    if (line > 0) return fmt::format("line {}: {}: {}", line, path, message);
    return fmt::format("{}: {}", path, message);
}

// Minimal position-tracking JSON scanner. Only used to turn a JSON path into
// a line number for error messages; the document has already been parsed by
// nlohmann::json, so the text is known to be well formed.
class Scanner {
public:
    explicit Scanner(const std::string &s) : s_(s) {}

    std::optional<std::size_t> find(const JsonPath &path) {
        pos_ = 0;
        return descend(path, 0);
    }

private:
    std::optional<std::size_t> descend(const JsonPath &path, std::size_t depth) {
        skip_ws();
        if (depth == path.size()) return pos_;
        if (pos_ >= s_.size()) return std::nullopt;
        if (const auto *key = std::get_if<std::string>(&path[depth])) {
            if (s_[pos_] != '{') return std::nullopt;
            ++pos_;
            while (true) {
                skip_ws();
                if (pos_ >= s_.size() || s_[pos_] == '}') return std::nullopt;
                const std::size_t key_pos = pos_;
                const std::string k = read_string();
                skip_ws();
                ++pos_;  // ':'
                if (k == *key) {
                    if (depth + 1 == path.size()) return key_pos;
                    return descend(path, depth + 1);
                }
                skip_value();
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
            }
        }
        const std::size_t index = std::get<std::size_t>(path[depth]);
        if (s_[pos_] != '[') return std::nullopt;
        ++pos_;
        for (std::size_t i = 0;; ++i) {
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] == ']') return std::nullopt;
            if (i == index) return descend(path, depth + 1);
            skip_value();
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') ++pos_;
        }
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    std::string read_string() {
        std::string out;
        ++pos_;  // opening quote
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\') ++pos_;
            if (pos_ < s_.size()) out += s_[pos_++];
        }
        ++pos_;
        return out;
    }

    void skip_value() {
        skip_ws();
        if (pos_ >= s_.size()) return;
        const char c = s_[pos_];
        if (c == '"') {
            read_string();
        } else if (c == '{' || c == '[') {
            int depth = 0;
            while (pos_ < s_.size()) {
                const char d = s_[pos_];
                if (d == '"') {
                    read_string();
                    continue;
                }
                if (d == '{' || d == '[') ++depth;
                if (d == '}' || d == ']') {
                    --depth;
                    if (depth == 0) {
                        ++pos_;
                        return;
                    }
                }
                ++pos_;
            }
        } else {
            while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' &&
                   !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
        }
    }

    const std::string &s_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Config reader

class Reader {
public:
    Reader(const std::string &raw, JsonPath base) : raw_(raw), base_(std::move(base)) {}

    [[noreturn]] void fail(const JsonPath &rel, const std::string &message) const {
        JsonPath full = base_;
        full.insert(full.end(), rel.begin(), rel.end());
        // Missing keys have no position of their own; fall back to the parent.
        int line = 0;
        for (JsonPath p = full; line == 0; p.pop_back()) {
            line = locate_json_path(raw_, p);
            if (p.empty()) break;
        }
        throw ConfigError(path_string(full), line, message);
    }

    const json &object(const json &doc, const JsonPath &at) const {
        if (!doc.is_object()) fail(at, "expected an object");
        return doc;
    }

    void only_keys(const json &obj, const JsonPath &at, const std::set<std::string> &allowed,
                   const std::string &context) const {
        for (const auto &[key, value] : obj.items()) {
            if (!allowed.count(key)) {
                JsonPath p = at;
                p.emplace_back(key);
                fail(p, "unknown field" + (context.empty() ? "" : " for " + context));
            }
        }
    }

    const json *field(const json &obj, const JsonPath &at, const std::string &key, bool required) const {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) {
                JsonPath p = at;
                p.emplace_back(key);
                fail(p, "missing required field");
            }
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json &obj, const JsonPath &at, const std::string &key,
                                 bool required = false) const {
        const json *v = field(obj, at, key, required);
        if (!v) return std::nullopt;
        JsonPath p = at;
        p.emplace_back(key);
        if (!v->is_number()) fail(p, "expected a number");
        const double d = v->get<double>();
        if (!std::isfinite(d)) fail(p, "must be finite");
        return d;
    }

    std::optional<double> positive(const json &obj, const JsonPath &at, const std::string &key,
                                   bool required = false) const {
        auto d = number(obj, at, key, required);
        if (d && !(*d > 0.0)) {
            JsonPath p = at;
            p.emplace_back(key);
            fail(p, fmt::format("must be a finite positive number (got {})", *d));
        }
        return d;
    }

    std::optional<long> integer(const json &obj, const JsonPath &at, const std::string &key,
                                bool required = false, long min_value = 1) const {
        const json *v = field(obj, at, key, required);
        if (!v) return std::nullopt;
        JsonPath p = at;
        p.emplace_back(key);
        if (!v->is_number_integer()) fail(p, "expected an integer");
        if (v->is_number_unsigned() && v->get<std::uint64_t>() > static_cast<std::uint64_t>(LONG_MAX)) {
            fail(p, "out of range");
        }
        const long n = v->get<long>();
        if (n < min_value) fail(p, fmt::format("must be >= {} (got {})", min_value, n));
        return n;
    }

    std::optional<std::uint64_t> unsigned_int(const json &obj, const JsonPath &at, const std::string &key) const {
        const json *v = field(obj, at, key, false);
        if (!v) return std::nullopt;
        JsonPath p = at;
        p.emplace_back(key);
        if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<long long>() < 0)) {
            fail(p, "expected a non-negative integer");
        }
        return v->get<std::uint64_t>();
    }

    std::optional<bool> boolean(const json &obj, const JsonPath &at, const std::string &key) const {
        const json *v = field(obj, at, key, false);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) {
            JsonPath p = at;
            p.emplace_back(key);
            fail(p, "expected true or false");
        }
        return v->get<bool>();
    }

    std::optional<std::string> string(const json &obj, const JsonPath &at, const std::string &key,
                                      bool required = false) const {
        const json *v = field(obj, at, key, required);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            JsonPath p = at;
            p.emplace_back(key);
            fail(p, "expected a string");
        }
        return v->get<std::string>();
    }

private:
    const std::string &raw_;
    JsonPath base_;
};

std::optional<Algorithm> parse_algorithm(const std::string &s) {
    for (Algorithm a : {Algorithm::CG, Algorithm::CGS, Algorithm::CGSLS}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

std::optional<Schedule> parse_schedule(const std::string &s) {
    for (Schedule sc : {Schedule::LsCubic, Schedule::FixedNQuad, Schedule::FixedNSq}) {
        if (s == to_string(sc)) return sc;
    }
    return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::string path, int line, const std::string &message)
    : InvalidArgument(compose_message(path, line, message)), path_(std::move(path)), line_(line) {}

int locate_json_path(const std::string &raw, const JsonPath &path) {
    Scanner scanner(raw);
    const auto pos = scanner.find(path);
    if (!pos) return 0;
    return 1 + static_cast<int>(std::count(raw.begin(), raw.begin() + static_cast<long>(*pos), '\n'));
}

RunConfig parse_run_config(const json &doc, const std::string &raw, const JsonPath &base) {
    const Reader r(raw, base);
    RunConfig cfg;
    r.object(doc, {});
    r.only_keys(doc, {}, {"instance", "algorithm", "solver", "outputs"}, "");

    // instance
    const json *inst = r.field(doc, {}, "instance", true);
    const JsonPath ip{std::string("instance")};
    r.object(*inst, ip);
    r.only_keys(*inst, ip, {"family", "m", "n", "density", "seed"}, "instance");
    const std::string family = *r.string(*inst, ip, "family", true);
    const auto fam = parse_family(family);
    if (!fam) {
        r.fail({std::string("instance"), std::string("family")},
               "unknown family '" + family + "' (SPECTRAHEDRON, HAMILTONIAN, SIMPLEX, SIMPLEX_NORM)");
    }
    cfg.instance.family = *fam;
    cfg.instance.n = *r.integer(*inst, ip, "n", true);
    cfg.instance.m = r.integer(*inst, ip, "m", cfg.instance.family != Family::SimplexNorm).value_or(1);
    if (auto d = r.positive(*inst, ip, "density")) {
        if (*d > 1.0) r.fail({std::string("instance"), std::string("density")}, "must lie in (0, 1]");
        cfg.instance.density = *d;
    }
    cfg.instance.seed = r.unsigned_int(*inst, ip, "seed").value_or(0);
    try {
        cfg.instance.validate();
    } catch (const InvalidArgument &e) {
        r.fail(ip, e.what());
    }

    // algorithm
    const std::string alg = *r.string(doc, {}, "algorithm", true);
    const auto algorithm = parse_algorithm(alg);
    if (!algorithm) r.fail({std::string("algorithm")}, "unknown algorithm '" + alg + "' (CG, CGS, CGSLS)");
    cfg.algorithm = *algorithm;

    // solver
    const JsonPath sp{std::string("solver")};
    const json empty = json::object();
    const json *solver = r.field(doc, {}, "solver", false);
    const json &s = solver ? r.object(*solver, sp) : empty;
    const char *ctx = to_string(cfg.algorithm);
    switch (cfg.algorithm) {
        case Algorithm::CGSLS: {
            r.only_keys(s, sp,
                        {"epsilon", "l0", "d_estimate", "schedule", "fixed_n", "max_outer", "max_inner_per_call",
                         "max_wall_seconds", "verify_certificates", "seed"},
                        ctx);
            SolverConfig &c = cfg.solver;
            if (auto v = r.positive(s, sp, "epsilon")) c.epsilon = *v;
            if (auto v = r.positive(s, sp, "l0")) c.l0 = *v;
            if (auto v = r.positive(s, sp, "d_estimate")) {
                c.d_estimate = *v;
                cfg.d_estimate_given = true;
            }
            if (auto v = r.string(s, sp, "schedule")) {
                const auto sc = parse_schedule(*v);
                if (!sc) {
                    r.fail({std::string("solver"), std::string("schedule")},
                           "unknown schedule '" + *v + "' (LS_CUBIC, FIXED_N_QUAD, FIXED_N_SQ)");
                }
                c.schedule = *sc;
            }
            c.fixed_n = r.integer(s, sp, "fixed_n");
            if (auto v = r.integer(s, sp, "max_outer")) c.max_outer = *v;
            c.max_inner_per_call = r.integer(s, sp, "max_inner_per_call");
            if (auto v = r.positive(s, sp, "max_wall_seconds")) c.max_wall_seconds = *v;
            if (auto v = r.boolean(s, sp, "verify_certificates")) c.verify_certificates = *v;
            if (auto v = r.unsigned_int(s, sp, "seed")) c.seed = *v;
            if (c.schedule != Schedule::LsCubic && !c.fixed_n) {
                r.fail({std::string("solver"), std::string("fixed_n")}, "required by the FIXED_N schedules");
            }
            try {
                c.validate();
            } catch (const InvalidArgument &e) {
                r.fail(sp, e.what());
            }
            break;
        }
        case Algorithm::CG:
        case Algorithm::CGS: {
            const bool cgs = cfg.algorithm == Algorithm::CGS;
            std::set<std::string> keys{"epsilon", "max_iters", "max_wall_seconds", "seed"};
            if (cgs) keys.insert({"lipschitz", "fixed_n", "d_estimate"});
            r.only_keys(s, sp, keys, ctx);
            BaselineConfig &c = cfg.baseline;
            if (auto v = r.positive(s, sp, "epsilon")) c.epsilon = *v;
            if (auto v = r.integer(s, sp, "max_iters")) c.max_iters = *v;
            if (auto v = r.positive(s, sp, "max_wall_seconds")) c.max_wall_seconds = *v;
            if (auto v = r.unsigned_int(s, sp, "seed")) c.seed = *v;
            if (cgs) {
                c.lipschitz = r.positive(s, sp, "lipschitz");
                c.fixed_n = r.integer(s, sp, "fixed_n");
                if (auto v = r.positive(s, sp, "d_estimate")) {
                    c.d_estimate = *v;
                    cfg.d_estimate_given = true;
                }
            }
            try {
                c.validate(false);
            } catch (const InvalidArgument &e) {
                r.fail(sp, e.what());
            }
            break;
        }
    }

    // outputs
    if (const json *out = r.field(doc, {}, "outputs", false)) {
        const JsonPath op{std::string("outputs")};
        r.object(*out, op);
        r.only_keys(*out, op, {"trace_csv", "summary_json"}, "outputs");
        cfg.outputs.trace_csv = r.string(*out, op, "trace_csv");
        cfg.outputs.summary_json = r.string(*out, op, "summary_json");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

json check_json(const BoundCheck &c) {
    return {{"result", c.pass ? "pass" : "fail"}, {"measured", c.measured}, {"bound", c.bound}};
}

json not_applicable() { return {{"result", "not_applicable"}}; }

Point starting_vertex(const LinearMinimizationOracle &lmo, std::uint64_t seed) {
    CounterRng rng = make_rng(seed, Stream::Start);
    Point dir(static_cast<Eigen::Index>(lmo.ambient_dim()));
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = rng.normal();
    return lmo.minimize(dir).vertex;
}

}  // namespace

RunOutcome execute_run(const RunConfig &config) {
    RunOutcome out;
    out.config = config;
    const Instance inst = make_instance(config.instance);
    const LinearMinimizationOracle &lmo = *inst.lmo;
    out.f_star = inst.f_star;
    out.d_x = lmo.diameter_bound();
    // A hair above the power-iteration estimate so it stays an upper bound.
    out.l_min = estimate_lmin(inst.objective) * (1.0 + 1e-6);

    const std::uint64_t seed = config.algorithm == Algorithm::CGSLS ? config.solver.seed : config.baseline.seed;
    const Point y0 = starting_vertex(lmo, seed);
    spdlog::info("run {} on {} m={} n={} density={} seed={}", to_string(config.algorithm),
                 to_string(config.instance.family), config.instance.m, config.instance.n, config.instance.density,
                 config.instance.seed);

    json summary;
    summary["instance"] = {{"family", to_string(config.instance.family)},
                           {"m", config.instance.m},
                           {"n", config.instance.n},
                           {"density", config.instance.density},
                           {"seed", config.instance.seed}};
    summary["algorithm"] = to_string(config.algorithm);

    double epsilon = 0.0;
    switch (config.algorithm) {
        case Algorithm::CGSLS: {
            SolverConfig sc = config.solver;
            if (!config.d_estimate_given) sc.d_estimate = out.d_x;
            epsilon = sc.epsilon;
            out.result = run(inst.objective, lmo, sc, y0);
            summary["schedule"] = to_string(sc.schedule);
            summary["l0"] = sc.l0;
            summary["d_estimate"] = sc.d_estimate;

            const BoundInputs in{sc.epsilon, sc.l0, out.l_min, sc.d_estimate, out.d_x};
            const TraceBoundReport rep = check_trace_bounds(out.result, in);
            out.bounds = rep;
            const bool cubic = sc.schedule == Schedule::LsCubic;
            json checks;
            checks["n_grad_bound"] = cubic ? check_json(rep.n_grad) : not_applicable();
            checks["n_lin_bound"] = cubic ? check_json(rep.n_lin) : not_applicable();
            checks["inner_iter_bound"] = cubic ? check_json(rep.inner_iters) : not_applicable();
            checks["gamma_sandwich"] = cubic ? check_json(rep.gamma_sandwich) : not_applicable();
            checks["l_bound"] = check_json(rep.l_bound);
            checks["l_monotone"] = check_json(rep.l_monotone);
            checks["sumone_residual"] = check_json(rep.sumone);
            checks["gamma_recursion"] = check_json(rep.recursion);
            checks["gamma_range"] = cubic ? check_json(rep.gamma_range) : not_applicable();
            summary["bound_checks"] = checks;
            break;
        }
        case Algorithm::CG: {
            epsilon = config.baseline.epsilon;
            out.result = cg_run(inst.objective, lmo, config.baseline, y0);
            break;
        }
        case Algorithm::CGS: {
            BaselineConfig bc = config.baseline;
            if (!config.d_estimate_given) bc.d_estimate = out.d_x;
            if (!bc.lipschitz) bc.lipschitz = out.l_min;
            if (!bc.fixed_n) bc.fixed_n = default_fixed_n(*bc.lipschitz, bc.d_estimate, bc.epsilon);
            epsilon = bc.epsilon;
            out.result = cgs_run(inst.objective, lmo, bc, y0);
            summary["lipschitz"] = *bc.lipschitz;
            summary["fixed_n"] = *bc.fixed_n;
            summary["d_estimate"] = bc.d_estimate;
            break;
        }
    }

    const SolveResult &res = out.result;
    summary["epsilon"] = epsilon;
    summary["termination"] = to_string(res.termination);
    summary["outer_iters"] = res.outer_iters;
    summary["grad_evals"] = res.grad_evals;
    summary["inner_lmo"] = res.total_lmo;
    summary["cert_check_lmo"] = res.cert_check_lmo;
    summary["backtracks"] = res.total_backtracks;
    summary["f_final"] = res.f_final;
    summary["f_star"] = out.f_star;
    if (config.algorithm == Algorithm::CGSLS) {
        summary["cert_gap"] = res.cert_gap_final;
    } else {
        summary["wolfe_gap"] = res.wolfe_gap_final;
    }
    summary["l_min_estimate"] = out.l_min;
    summary["d_x"] = out.d_x;
    summary["elapsed_seconds"] = res.elapsed_seconds;
    out.summary = std::move(summary);
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string real(double v) { return std::isfinite(v) ? fmt::format("{:.17g}", v) : std::string(); }

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolverError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw SolverError("failed writing '" + path + "'");
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SolverError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json parse_document(const std::string &text, const std::string &path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        // byte offsets are 1-based; count newlines before the error
        const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(at), '\n');
        throw ConfigError(path, static_cast<int>(line), "malformed JSON");
    }
}

int exit_code(Termination t) { return t == Termination::Certified ? 0 : 2; }

}  // namespace

void write_trace_csv(std::ostream &out, const std::vector<TraceRecord> &trace) {
    out << kTraceHeader << '\n';
    for (const auto &r : trace) {
        out << r.k << ',' << real(r.l_k) << ',' << real(r.gamma) << ',' << real(r.big_gamma) << ','
            << real(r.beta) << ',' << real(r.eta) << ',' << r.inner_iters << ',' << real(r.f_y) << ','
            << real(r.lower_bound) << ',' << real(r.cert_gap) << ',' << real(r.wolfe_gap) << ',' << r.cum_lmo
            << ',' << r.cum_backtracks << ',' << real(r.elapsed_seconds) << '\n';
    }
}

int cli_run(const std::string &config_path, std::ostream &out, std::ostream &err) {
    try {
        const std::string text = read_file(config_path);
        const RunConfig cfg = parse_run_config(parse_document(text, config_path), text);
        const RunOutcome res = execute_run(cfg);
        if (cfg.outputs.trace_csv) {
            std::ostringstream csv;
            write_trace_csv(csv, res.result.trace);
            write_file(*cfg.outputs.trace_csv, csv.str());
        }
        if (cfg.outputs.summary_json) write_file(*cfg.outputs.summary_json, res.summary.dump(2) + "\n");
        out << fmt::format("{} {}: termination={} outer={} inner_lmo={} f_final={:.10g}\n",
                           to_string(cfg.algorithm), to_string(cfg.instance.family),
                           to_string(res.result.termination), res.result.outer_iters, res.result.total_lmo,
                           res.result.f_final);
        if (res.bounds && !res.bounds->all_pass()) {
            err << "warning: at least one bound check failed; see summary\n";
        }
        return exit_code(res.result.termination);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

// ---------------------------------------------------------------------------
// Bench

namespace {

struct RowResult {
    std::optional<RunConfig> config;
    std::optional<RunOutcome> outcome;
    std::string error;
    bool ok() const { return outcome.has_value(); }
};

struct Comparison {
    std::string lhs_alg, lhs_metric, op, rhs_alg, rhs_metric, text;
};

const std::set<std::string> kMetrics{"outer_iters", "grad_evals", "inner_lmo", "backtracks", "f_final",
                                     "elapsed_seconds"};

std::optional<Comparison> parse_comparison(const std::string &text) {
    std::istringstream ss(text);
    std::string lhs, op, rhs, extra;
    if (!(ss >> lhs >> op >> rhs) || (ss >> extra)) return std::nullopt;
    static const std::set<std::string> ops{"<", "<=", "==", ">=", ">"};
    if (!ops.count(op)) return std::nullopt;
    auto split = [](const std::string &s, std::string &alg, std::string &metric) {
        const auto dot = s.find('.');
        if (dot == std::string::npos) return false;
        alg = s.substr(0, dot);
        metric = s.substr(dot + 1);
        return parse_algorithm(alg).has_value() && kMetrics.count(metric) > 0;
    };
    Comparison c;
    c.op = op;
    c.text = text;
    if (!split(lhs, c.lhs_alg, c.lhs_metric) || !split(rhs, c.rhs_alg, c.rhs_metric)) return std::nullopt;
    return c;
}

double metric(const RunOutcome &o, const std::string &name) {
    const SolveResult &r = o.result;
    if (name == "outer_iters") return static_cast<double>(r.outer_iters);
    if (name == "grad_evals") return static_cast<double>(r.grad_evals);
    if (name == "inner_lmo") return static_cast<double>(r.total_lmo);
    if (name == "backtracks") return static_cast<double>(r.total_backtracks);
    if (name == "f_final") return r.f_final;
    return r.elapsed_seconds;
}

bool compare(double a, const std::string &op, double b) {
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == "==") return a == b;
    if (op == ">=") return a >= b;
    return a > b;
}

// Per-run invariants the bench always checks.
std::vector<std::pair<std::string, bool>> run_invariants(const RunOutcome &o) {
    std::vector<std::pair<std::string, bool>> checks;
    const SolveResult &r = o.result;
    checks.emplace_back("certified", r.termination == Termination::Certified);
    bool ordered = true;
    for (std::size_t i = 0; i < r.trace.size(); ++i) ordered = ordered && r.trace[i].k == static_cast<long>(i + 1);
    checks.emplace_back("trace_ordered", ordered);
    const bool counters = r.trace.empty() || (r.trace.back().cum_lmo == r.total_lmo &&
                                              r.trace.back().cum_backtracks == r.total_backtracks);
    checks.emplace_back("counters_match_trace", counters);
    if (o.bounds) {
        const bool cubic = o.config.solver.schedule == Schedule::LsCubic;
        const TraceBoundReport &b = *o.bounds;
        bool all = b.l_bound.pass && b.l_monotone.pass && b.sumone.pass && b.recursion.pass;
        if (cubic) all = all && b.n_grad.pass && b.n_lin.pass && b.inner_iters.pass && b.gamma_sandwich.pass &&
                         b.gamma_range.pass;
        checks.emplace_back("bound_checks", all);
    }
    return checks;
}

}  // namespace

int cli_bench(const std::string &suite_path, int parallelism, std::ostream &out, std::ostream &err) {
    std::string text;
    json suite;
    std::vector<Comparison> comparisons;
    std::optional<std::string> csv_path, report_path;
    try {
        if (parallelism < 1) throw InvalidArgument("--parallel must be >= 1");
        text = read_file(suite_path);
        suite = parse_document(text, suite_path);
        const Reader r(text, {});
        r.object(suite, {});
        r.only_keys(suite, {}, {"runs", "comparisons", "outputs"}, "suite");
        const json *runs = r.field(suite, {}, "runs", true);
        if (!runs->is_array() || runs->empty()) r.fail({std::string("runs")}, "expected a non-empty array");
        if (const json *cmp = r.field(suite, {}, "comparisons", false)) {
            if (!cmp->is_array()) r.fail({std::string("comparisons")}, "expected an array of strings");
            for (std::size_t i = 0; i < cmp->size(); ++i) {
                const json &c = (*cmp)[i];
                const auto parsed = c.is_string() ? parse_comparison(c.get<std::string>()) : std::nullopt;
                if (!parsed) {
                    r.fail({std::string("comparisons"), i},
                           "expected \"ALG.metric OP ALG.metric\" with OP in < <= == >= > and metric in "
                           "outer_iters, grad_evals, inner_lmo, backtracks, f_final, elapsed_seconds");
                }
                comparisons.push_back(*parsed);
            }
        }
        if (const json *o = r.field(suite, {}, "outputs", false)) {
            const JsonPath op{std::string("outputs")};
            r.object(*o, op);
            r.only_keys(*o, op, {"aggregate_csv", "report_json"}, "outputs");
            csv_path = r.string(*o, op, "aggregate_csv");
            report_path = r.string(*o, op, "report_json");
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    const json &runs = suite["runs"];
    std::vector<RowResult> rows(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                rows[i].config = parse_run_config(runs[i], text, {std::string("runs"), i});
                rows[i].outcome = execute_run(*rows[i].config);
            } catch (const std::exception &e) {
                rows[i].error = e.what();
                spdlog::error("suite run {} failed: {}", i, e.what());
            }
        }
    };
    const int threads = std::min<int>(parallelism, static_cast<int>(rows.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    // Group runs by instance, keeping first-appearance order.
    std::vector<InstanceSpec> instances;
    std::vector<std::map<Algorithm, std::size_t>> by_instance;
    std::set<Algorithm> algorithms;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].config) continue;
        const InstanceSpec &spec = rows[i].config->instance;
        auto it = std::find(instances.begin(), instances.end(), spec);
        std::size_t idx = static_cast<std::size_t>(it - instances.begin());
        if (it == instances.end()) {
            instances.push_back(spec);
            by_instance.emplace_back();
        }
        by_instance[idx][rows[i].config->algorithm] = i;
        algorithms.insert(rows[i].config->algorithm);
    }

    std::ostringstream csv;
    csv << "family,m,n,density,seed";
    for (Algorithm a : algorithms) {
        const char *n = to_string(a);
        csv << fmt::format(",{0}_status,{0}_outer,{0}_inner,{0}_time,{0}_obj", n);
    }
    csv << '\n';
    for (std::size_t g = 0; g < instances.size(); ++g) {
        const InstanceSpec &s = instances[g];
        csv << to_string(s.family) << ',' << s.m << ',' << s.n << ',' << real(s.density) << ',' << s.seed;
        for (Algorithm a : algorithms) {
            const auto it = by_instance[g].find(a);
            if (it == by_instance[g].end()) {
                csv << ",,,,,";
                continue;
            }
            const RowResult &row = rows[it->second];
            if (!row.ok()) {
                csv << ",ERROR,,,,";
                continue;
            }
            const SolveResult &r = row.outcome->result;
            csv << ',' << to_string(r.termination) << ',' << r.outer_iters << ',' << r.total_lmo << ','
                << real(r.elapsed_seconds) << ',' << real(r.f_final);
        }
        csv << '\n';
    }

    bool all_pass = true;
    json report;
    report["runs"] = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        json entry{{"index", i}};
        if (!rows[i].ok()) {
            entry["status"] = "error";
            entry["error"] = rows[i].error;
            all_pass = false;
        } else {
            entry["status"] = "ok";
            entry["algorithm"] = to_string(rows[i].config->algorithm);
            json inv = json::object();
            for (const auto &[name, pass] : run_invariants(*rows[i].outcome)) {
                inv[name] = pass ? "pass" : "fail";
                all_pass = all_pass && pass;
            }
            entry["invariants"] = inv;
            entry["summary"] = rows[i].outcome->summary;
        }
        report["runs"].push_back(entry);
    }
    report["comparisons"] = json::array();
    for (std::size_t g = 0; g < instances.size(); ++g) {
        for (const Comparison &c : comparisons) {
            json entry{{"instance", g}, {"check", c.text}};
            const auto l = by_instance[g].find(*parse_algorithm(c.lhs_alg));
            const auto rr = by_instance[g].find(*parse_algorithm(c.rhs_alg));
            if (l == by_instance[g].end() || rr == by_instance[g].end()) {
                entry["result"] = "skipped";
            } else if (!rows[l->second].ok() || !rows[rr->second].ok()) {
                entry["result"] = "fail";
                all_pass = false;
            } else {
                const double a = metric(*rows[l->second].outcome, c.lhs_metric);
                const double b = metric(*rows[rr->second].outcome, c.rhs_metric);
                const bool pass = compare(a, c.op, b);
                entry["lhs"] = a;
                entry["rhs"] = b;
                entry["result"] = pass ? "pass" : "fail";
                all_pass = all_pass && pass;
            }
            report["comparisons"].push_back(entry);
        }
    }
    report["all_pass"] = all_pass;

    try {
        if (csv_path) write_file(*csv_path, csv.str());
        if (report_path) write_file(*report_path, report.dump(2) + "\n");
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    if (!csv_path) out << csv.str();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok()) err << "run " << i << ": " << rows[i].error << '\n';
    }
    out << fmt::format("{} runs, {} instances: {}\n", rows.size(), instances.size(), all_pass ? "PASS" : "FAIL");
    return all_pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// Demo and oracle gate

int cli_demo_segment(std::ostream &out, std::ostream &err) {
    const QuadraticObjective obj = QuadraticObjective::half_squared_norm(2);
    const SimplexLmo lmo(2);
    BaselineConfig cfg;
    cfg.epsilon = 1e-12;
    cfg.max_iters = 3;
    Point y0(2);
    y0 << 0.0, 1.0;

    std::vector<Point> ys{y0};
    std::vector<Point> vertices;
    const auto observer = [&](const SolverState &s, const TraceRecord &) {
        ys.push_back(s.y);
        vertices.push_back(s.x);
    };
    cg_run(obj, lmo, cfg, y0, observer);

    out << fmt::format("y0 = ({:.17g}, {:.17g})\n", y0[0], y0[1]);
    for (std::size_t k = 1; k < ys.size(); ++k) {
        out << fmt::format("k={} vertex = ({:g}, {:g})  y{} = ({:.17g}, {:.17g})\n", k, vertices[k - 1][0],
                           vertices[k - 1][1], k, ys[k][0], ys[k][1]);
    }

    const double tol = 1e-12;
    auto near = [&](const Point &p, double a, double b) {
        return std::abs(p[0] - a) <= tol && std::abs(p[1] - b) <= tol;
    };
    bool ok = ys.size() == 4 && vertices.size() == 3;
    ok = ok && near(vertices[0], 1, 0) && near(vertices[1], 0, 1) && near(vertices[2], 1, 0);
    ok = ok && near(ys[2], 1.0 / 3.0, 2.0 / 3.0) && near(ys[3], 2.0 / 3.0, 1.0 / 3.0);
    if (!ok) {
        err << "demo-segment: trajectory does not match y2 = (1/3, 2/3), y3 = (2/3, 1/3)\n";
        return 1;
    }
    return 0;
}

int cli_lmo_check(const std::string &family, long size, long trials, std::uint64_t seed, std::ostream &out,
                  std::ostream &err) {
    struct Range {
        long lo, hi;
    };
    static const std::map<std::string, Range> ranges{
        {"simplex", {1, 4096}}, {"spectrahedron", {1, 64}}, {"hamiltonian", {3, 10}}};
    const auto it = ranges.find(family);
    if (it == ranges.end()) {
        err << "error: unknown family '" << family << "' (simplex, spectrahedron, hamiltonian)\n";
        return 1;
    }
    if (size < it->second.lo || size > it->second.hi) {
        err << fmt::format("error: size {} outside the brute-force range [{}, {}] for {}\n", size, it->second.lo,
                           it->second.hi, family);
        return 1;
    }
    if (trials < 1) {
        err << "error: trials must be >= 1\n";
        return 1;
    }
    try {
        const auto rep = verify::lmo_equivalence(family, static_cast<std::size_t>(size), trials, seed);
        out << fmt::format("{} n={}: {} trials, {} mismatches, worst error {:.3e}\n", family, size, rep.trials,
                           rep.mismatches, rep.worst_error);
        if (rep.mismatches > 0) {
            err << "mismatch on input: " << rep.first_failure.value_or("?") << '\n';
            return 1;
        }
        return 0;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

void configure_logging() {
    static const bool once = [] {
        auto logger = spdlog::stderr_color_mt("fw_sliding");
        spdlog::set_default_logger(logger);
        return true;
    }();
    (void)once;
    const char *env = std::getenv("FW_SLIDING_LOG");
    const std::string level = env ? env : "error";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::err);
    }
}

}  // namespace fwsliding
