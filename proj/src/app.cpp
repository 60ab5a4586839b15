#include "seccache/app.hpp"

#include "seccache/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace seccache {

using nlohmann::json;

Command parse_command(const std::string& name) {
    if (name == "analytic") return Command::analytic;
    if (name == "mc") return Command::mc;
    if (name == "optimize") return Command::optimize;
    if (name == "sweep") return Command::sweep;
    throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::analytic: return "analytic";
        case Command::mc: return "mc";
        case Command::optimize: return "optimize";
        case Command::sweep: return "sweep";
    }
    return "?";
}

namespace {

double density(double mean_distance) {
    return 1.0 / (mean_distance * mean_distance * std::numbers::pi);
}

json tier(double lambda, double P, int M, double phi, double C) {
    return {{"lambda", lambda}, {"P", P}, {"M", M}, {"phi", phi}, {"C", C}};
}

json common_defaults() {
    return {
        {"caching", {{"scheme", "optimize"}, {"algorithm", "gpm"}}},
        {"optimizer",
         {{"eps_err", 1e-6}, {"t_max", 100}, {"step_c", 50.0}, {"inner_tol", 1e-8}, {"inner_max", 20000}}},
        {"run", {{"reps", 100000}, {"seed", 1}, {"window_radius", 0.0}}},
    };
}

}  // namespace

json preset(const std::string& name) {
    json j = common_defaults();
    if (name == "none") return j;
    if (name == "paper-v") {
        j["network"] = {{"alpha", 4.0},
                        {"jammers", {{"lambda", density(250)}, {"P", 1.0}}},
                        {"tiers", {tier(density(250), 20, 10, 0.9, 15), tier(density(25), 0.13, 10, 0.9, 10)}}};
        j["catalog"] = {{"N", 20}, {"beta", 0.6}};
        j["rates"] = {{"R_u", 1.3}, {"R_s", 0.2}, {"epsilon", 0.7}};
        j["run"]["sweep"] = {{"axis", "epsilon"}, {"values", {0.5, 0.6, 0.7, 0.8, 0.9}}, {"warm_start", false}};
        return j;
    }
    if (name == "fig1" || name == "fig5") {
        j["network"] = {{"alpha", 3.5},
                        {"jammers", {{"lambda", density(150)}, {"P", 1.0}}},
                        {"tiers", {tier(density(250), 20, 4, 0.9, 1), tier(density(50), 0.13, 2, 0.5, 1)}}};
        j["catalog"] = {{"N", 20}, {"beta", 0.6}};
        j["caching"]["scheme"] = "most_popular";
        if (name == "fig1") {
            j["rates"] = {{"R_u", 1.0}, {"R_s", 0.0}, {"epsilon", 0.0}};
            j["run"]["mc"] = {{"metric", "rtp"}, {"T_n", {0.9, 0.8}}, {"values", {0.5, 1.0, 1.5, 2.0, 2.5}}};
        } else {
            j["rates"] = {{"R_u", 2.6}, {"R_s", 1.1}, {"epsilon", 0.0}};
            j["run"]["mc"] = {{"metric", "ctp"},
                              {"T_n", {0.8, 0.7}},
                              {"values", {0.5, 0.8, 1.1, 1.5, 2.0, 2.5}}};
        }
        return j;
    }
    throw ConfigError("unknown preset '" + name + "' (expected paper-v, fig1, fig5 or none)");
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items())
        if (!ok.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
}

const json& need(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& where, const char* key) {
    const json& v = need(j, where, key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::int64_t integer(const json& j, const std::string& where, const char* key) {
    const json& v = need(j, where, key);
    if (!v.is_number_integer() && !(v.is_number() && v.get<double>() == std::floor(v.get<double>())))
        throw ConfigError(where + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void require_ok(const ValidationReport& r) {
    if (!r.ok()) throw ConfigError("invalid configuration:\n" + r.str());
}

// Expands {start, stop, step} into an explicit list so the resolved tree is self-contained.
std::vector<double> sweep_values(json& s) {
    if (s.contains("values")) {
        if (s.contains("start") || s.contains("stop") || s.contains("step"))
            throw ConfigError("run.sweep: give either values or start/stop/step");
        return numbers(s["values"], "run.sweep.values");
    }
    if (!s.contains("start")) return {};
    const double a = number(s, "run.sweep", "start"), b = number(s, "run.sweep", "stop"),
                 h = number(s, "run.sweep", "step");
    if (!(h > 0.0)) throw ConfigError("run.sweep.step must be positive");
    std::vector<double> v;
    const auto n = std::int64_t(std::floor((b - a) / h + 1e-9));
    for (std::int64_t i = 0; i <= n; ++i) v.push_back(a + double(i) * h);
    s.erase("start");
    s.erase("stop");
    s.erase("step");
    s["values"] = v;
    return v;
}

bool strictly_monotone(const std::vector<double>& v) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        up = up && v[i] > v[i - 1];
        down = down && v[i] < v[i - 1];
    }
    return up || down;
}

}  // namespace

ExperimentConfig parse_config(const json& user) {
    if (!user.is_object()) throw ConfigError("config: expected a JSON object");
    const std::string base = user.value("defaults", std::string("none"));
    json j = preset(base);
    json patch = user;
    patch.erase("defaults");
    // A user range replaces the preset's value list rather than merging with it.
    if (patch.contains("run") && patch["run"].is_object() && patch["run"].contains("sweep") &&
        patch["run"]["sweep"].is_object() && patch["run"]["sweep"].contains("start") &&
        !patch["run"]["sweep"].contains("values"))
        patch["run"]["sweep"]["values"] = nullptr;
    j.merge_patch(patch);
    check_keys(j, "config", {"network", "catalog", "rates", "caching", "optimizer", "run"});

    ExperimentConfig cfg;
    auto& model = cfg.problem.model;

    const json& net = need(j, "config", "network");
    check_keys(net, "network", {"alpha", "jammers", "tiers"});
    model.alpha = number(net, "network", "alpha");
    if (net.contains("jammers")) {
        const json& jam = net["jammers"];
        check_keys(jam, "network.jammers", {"lambda", "P"});
        model.lambda_J = number(jam, "network.jammers", "lambda");
        model.P_J = number(jam, "network.jammers", "P");
    }
    const json& tiers = need(net, "network", "tiers");
    if (!tiers.is_array() || tiers.empty()) throw ConfigError("network.tiers: expected a non-empty array");
    for (std::size_t k = 0; k < tiers.size(); ++k) {
        const std::string w = "network.tiers[" + std::to_string(k) + "]";
        check_keys(tiers[k], w, {"lambda", "P", "M", "phi", "C"});
        TierParams t;
        t.lambda = number(tiers[k], w, "lambda");
        t.P = number(tiers[k], w, "P");
        t.M = int(integer(tiers[k], w, "M"));
        t.phi = number(tiers[k], w, "phi");
        t.C = number(tiers[k], w, "C");
        model.tiers.push_back(t);
    }
    require_ok(validate_network(model));

    const json& cat = need(j, "config", "catalog");
    check_keys(cat, "catalog", {"N", "beta", "popularity"});
    if (cat.contains("popularity")) {
        if (cat.contains("N") || cat.contains("beta"))
            throw ConfigError("catalog: give either popularity or N and beta");
        cfg.problem.catalog = explicit_popularity(numbers(cat["popularity"], "catalog.popularity"));
    } else {
        const auto N = integer(cat, "catalog", "N");
        if (N < 1) throw ConfigError("catalog.N must be at least 1");
        const double beta = number(cat, "catalog", "beta");
        if (!(beta >= 0.0)) throw ConfigError("catalog.beta must be non-negative");
        cfg.problem.catalog = zipf_popularity(std::size_t(N), beta);
    }

    const json& rates = need(j, "config", "rates");
    check_keys(rates, "rates", {"R_u", "R_s", "epsilon"});
    cfg.problem.rates = {number(rates, "rates", "R_u"), number(rates, "rates", "R_s"),
                         number(rates, "rates", "epsilon")};

    const json& cach = need(j, "config", "caching");
    check_keys(cach, "caching", {"scheme", "algorithm", "matrix"});
    const std::string scheme = cach.value("scheme", "optimize");
    if (scheme == "optimize") cfg.scheme = Scheme::optimize;
    else if (scheme == "most_popular") cfg.scheme = Scheme::most_popular;
    else if (scheme == "uniform") cfg.scheme = Scheme::uniform;
    else if (scheme == "matrix") cfg.scheme = Scheme::matrix;
    else throw ConfigError("caching.scheme: expected optimize, most_popular, uniform or matrix");
    cfg.algorithm = cach.value("algorithm", "gpm");
    if (cfg.algorithm != "gpm" && cfg.algorithm != "ccp")
        throw ConfigError("caching.algorithm: expected gpm or ccp");

    const auto N = cfg.problem.catalog.N(), K = model.K();
    Matrix T0(N, K);
    if (cfg.scheme == Scheme::matrix) {
        const json& rows = need(cach, "caching", "matrix");
        if (!rows.is_array() || rows.size() != N)
            throw ConfigError("caching.matrix: expected " + std::to_string(N) + " rows");
        Matrix T(N, K);
        for (std::size_t i = 0; i < N; ++i) {
            // Rows are given in file order; internally files are ranked by popularity.
            const auto row = numbers(rows[cfg.problem.catalog.order[i]], "caching.matrix row");
            if (row.size() != K) throw ConfigError("caching.matrix: expected " + std::to_string(K) + " columns");
            for (std::size_t k = 0; k < K; ++k) T(i, k) = row[k];
        }
        cfg.matrix = T;
        T0 = T;
    } else if (cfg.scheme == Scheme::most_popular || cfg.scheme == Scheme::uniform) {
        T0 = baseline(cfg.scheme == Scheme::uniform ? Baseline::uniform : Baseline::most_popular,
                      cfg.problem.catalog, model.tiers);
    }
    if (cfg.scheme != Scheme::optimize)
        require_ok(validate(model, cfg.problem.catalog, T0, cfg.problem.rates));
    else
        require_ok(validate(model, cfg.problem.catalog,
                            baseline(Baseline::uniform, cfg.problem.catalog, model.tiers), cfg.problem.rates));

    const json& opt = need(j, "config", "optimizer");
    check_keys(opt, "optimizer", {"eps_err", "t_max", "step_c", "inner_tol", "inner_max", "paper_sign"});
    cfg.opt.eps_err = number(opt, "optimizer", "eps_err");
    cfg.opt.t_max = int(integer(opt, "optimizer", "t_max"));
    cfg.opt.step_c = number(opt, "optimizer", "step_c");
    cfg.opt.inner_tol = number(opt, "optimizer", "inner_tol");
    cfg.opt.inner_max = int(integer(opt, "optimizer", "inner_max"));
    cfg.opt.paper_sign = opt.value("paper_sign", false);
    if (!(cfg.opt.eps_err > 0.0) || cfg.opt.t_max < 1 || !(cfg.opt.step_c > 0.0) ||
        !(cfg.opt.inner_tol > 0.0) || cfg.opt.inner_max < 1)
        throw ConfigError("optimizer: tolerances, step constant and iteration limits must be positive");

    json& run = j["run"];
    check_keys(run, "run", {"command", "reps", "seed", "window_radius", "out", "mc", "sweep"});
    const auto reps = integer(run, "run", "reps");
    if (reps < 1) throw ConfigError("run.reps must be at least 1");
    cfg.reps = std::uint64_t(reps);
    const json& seed = need(run, "run", "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
        throw ConfigError("run.seed: expected a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
    cfg.window_radius = number(run, "run", "window_radius");
    if (cfg.window_radius < 0.0) throw ConfigError("run.window_radius must be >= 0 (0 selects the default)");
    cfg.out = run.value("out", "");
    if (run.contains("mc")) {
        const json& mc = run["mc"];
        check_keys(mc, "run.mc", {"metric", "T_n", "values"});
        cfg.mc.metric = mc.value("metric", "rtp");
        if (cfg.mc.metric != "rtp" && cfg.mc.metric != "ctp") throw ConfigError("run.mc.metric: expected rtp or ctp");
        cfg.mc.T_n = numbers(need(mc, "run.mc", "T_n"), "run.mc.T_n");
        cfg.mc.values = numbers(need(mc, "run.mc", "values"), "run.mc.values");
        if (cfg.mc.T_n.size() != K) throw ConfigError("run.mc.T_n: expected one entry per tier");
        for (double t : cfg.mc.T_n)
            if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("run.mc.T_n: entries must lie in [0,1]");
        if (cfg.mc.values.empty()) throw ConfigError("run.mc.values: empty");
        for (double v : cfg.mc.values) {
            const bool ok = cfg.mc.metric == "rtp" ? v > 0.0 : (v > 0.0 && v < cfg.problem.rates.R_u);
            if (!ok) throw ConfigError("run.mc.values: rates must be positive (and R_e < R_u for ctp)");
        }
    }
    if (run.contains("sweep")) {
        json& s = run["sweep"];
        check_keys(s, "run.sweep", {"axis", "values", "start", "stop", "step", "warm_start"});
        cfg.sweep.axis = need(s, "run.sweep", "axis").get<std::string>();
        cfg.sweep.values = sweep_values(s);
        cfg.sweep.warm_start = s.value("warm_start", false);
        if (cfg.sweep.values.empty()) throw ConfigError("run.sweep: empty range");
        if (!strictly_monotone(cfg.sweep.values)) throw ConfigError("run.sweep: values must be strictly monotone");
        for (double v : cfg.sweep.values) (void)with_axis(cfg.problem, cfg.sweep.axis, v);
    }
    cfg.resolved = j;
    return cfg;
}

json load_config_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const std::string tag = "# config: ";
    if (text.rfind("#", 0) == 0) {
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line) && line.rfind("#", 0) == 0)
            if (line.rfind(tag, 0) == 0) return json::parse(line.substr(tag.size()));
        throw ConfigError("'" + path + "' has a comment header without an embedded config");
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
}

void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::uint64_t> reps, std::optional<std::string> algorithm) {
    json j = cfg.resolved;
    if (seed) j["run"]["seed"] = *seed;
    if (reps) j["run"]["reps"] = *reps;
    if (algorithm) j["caching"]["algorithm"] = *algorithm;
    cfg = parse_config(j);
}

Problem with_axis(const Problem& p, const std::string& axis, double value) {
    Problem q = p;
    auto& m = q.model;
    static const std::regex indexed(R"((lambda|P|M|phi|C)\[(\d+)\])");
    std::smatch match;
    if (axis == "epsilon") q.rates.epsilon = value;
    else if (axis == "R_u") q.rates.R_u = value;
    else if (axis == "R_s") q.rates.R_s = value;
    else if (axis == "alpha") m.alpha = value;
    else if (axis == "P_J") m.P_J = value;
    else if (axis == "lambda_J") m.lambda_J = value;
    else if (std::regex_match(axis, match, indexed)) {
        const auto k = std::stoul(match[2].str());
        if (k < 1 || k > m.K()) throw ConfigError("sweep axis '" + axis + "': tiers are numbered from 1 to K");
        auto& t = m.tiers[k - 1];
        const std::string f = match[1].str();
        if (f == "lambda") t.lambda = value;
        else if (f == "P") t.P = value;
        else if (f == "phi") t.phi = value;
        else if (f == "C") t.C = value;
        else {
            if (value != std::floor(value)) throw ConfigError("sweep axis '" + axis + "' needs integer values");
            t.M = int(value);
        }
    } else {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
    require_ok(validate_network(m));
    require_ok(validate(m, q.catalog, baseline(Baseline::uniform, q.catalog, m.tiers), q.rates));
    return q;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double prob(double x) { return std::clamp(x, 0.0, 1.0); }

void header(std::ostream& out, const ExperimentConfig& cfg, const std::string& what) {
    out << "# seccache " << what << "\n";
    out << "# seed: " << cfg.seed << "\n";
    out << "# config: " << cfg.resolved.dump() << "\n";
}

template <class... Ts>
void row(std::ostream& out, const Ts&... cols) {
    bool first = true;
    ((out << (first ? "" : ",") << cols, first = false), ...);
    out << "\n";
}

OptTrace optimize_from(const Problem& p, const FeasibleSet& fs, const CachingMatrix& T0,
                       const std::string& alg, const OptOptions& opt) {
    return alg == "ccp" ? ccp(p, T0, fs, opt) : gpm(p, T0, fs, opt);
}

CachingMatrix caching_matrix(const ExperimentConfig& cfg) {
    const auto& p = cfg.problem;
    switch (cfg.scheme) {
        case Scheme::matrix: return *cfg.matrix;
        case Scheme::most_popular: return baseline(Baseline::most_popular, p.catalog, p.model.tiers);
        case Scheme::uniform: return baseline(Baseline::uniform, p.catalog, p.model.tiers);
        case Scheme::optimize: break;
    }
    const auto fs = feasible_set(p);
    return optimize_from(p, fs, random_start(fs, cfg.seed), cfg.algorithm, cfg.opt).final();
}

}  // namespace

int run_analytic(const ExperimentConfig& cfg, std::ostream& out) {
    const auto& p = cfg.problem;
    header(out, cfg, "analytic");
    CachingMatrix T;
    try {
        T = caching_matrix(cfg);
    } catch (const InfeasibleError& e) {
        out << "# status: infeasible (" << e.what() << ")\n";
        return 3;
    }
    row(out, "n", "file", "a_n", "rtp_lower", "rtp_exact", "rtp_upper", "rtp_upper_raw", "ctp");
    double sa = 0.0, sl = 0.0, se = 0.0, su = 0.0, sr = 0.0, sc = 0.0;
    for (std::size_t n = 0; n < p.catalog.N(); ++n) {
        const auto fm = file_metrics(T.row(n), p.rates, p.model);
        const double a = p.catalog.a[n];
        row(out, n + 1, p.catalog.order[n] + 1, num(a), num(prob(fm.rtp_lower)), num(prob(fm.rtp_exact)),
            num(prob(fm.rtp_upper)), num(fm.rtp_upper), num(prob(fm.ctp)));
        sa += a;
        sl += a * fm.rtp_lower;
        se += a * fm.rtp_exact;
        su += a * std::min(fm.rtp_upper, 1.0);
        sr += a * fm.rtp_upper;
        sc += a * fm.ctp;
    }
    row(out, "avg", "", num(sa), num(prob(sl)), num(prob(se)), num(prob(su)), num(sr), num(prob(sc)));
    out << "# epsilon: " << num(p.rates.epsilon) << ", avg ctp slack: " << num(sc - p.rates.epsilon) << "\n";
    return 0;
}

int run_mc(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.mc.T_n.empty()) throw ConfigError("mc: run.mc section is required");
    const auto& model = cfg.problem.model;
    const double W = cfg.window_radius > 0.0 ? cfg.window_radius : default_window_radius(model);
    McOptions opts;
    opts.window_radius = W;
    header(out, cfg, "mc " + cfg.mc.metric);
    out << "# window_radius: " << num(W) << "\n";
    const auto& v = cfg.mc.values;
    std::vector<McEstimate> est;
    std::vector<double> an;
    if (cfg.mc.metric == "rtp") {
        est = estimate_rtp_sweep(model, cfg.mc.T_n, v, {W}, cfg.reps, cfg.seed, opts).rtp.front();
        for (double R_u : v) an.push_back(rtp_exact(cfg.mc.T_n, RateParams{R_u, 0.0, 0.0}, model));
        row(out, "R_u", "analytic", "mc_mean", "mc_stderr", "reps", "seed");
    } else {
        est = estimate_ctp_sweep(model, cfg.mc.T_n, v, {W}, cfg.reps, cfg.seed, opts).front();
        for (double R_e : v) an.push_back(ctp(cfg.mc.T_n, rates_from_thresholds(cfg.problem.rates.R_u, R_e), model).value);
        row(out, "R_e", "analytic", "mc_mean", "mc_stderr", "reps", "seed");
    }
    for (std::size_t i = 0; i < v.size(); ++i)
        row(out, num(v[i]), num(prob(an[i])), num(est[i].mean), num(est[i].std_error), est[i].reps, est[i].seed);
    return 0;
}

int run_optimize(const ExperimentConfig& cfg, std::ostream& trace_out, std::ostream& matrix_out,
                 std::ostream& summary_out) {
    const auto& p = cfg.problem;
    const auto fs = feasible_set(p);
    header(trace_out, cfg, "optimize " + cfg.algorithm + " trace");
    header(matrix_out, cfg, "optimize " + cfg.algorithm + " caching matrix");
    header(summary_out, cfg, "optimize " + cfg.algorithm + " summary");
    row(summary_out, "scheme", "avg_rtp_upper_raw", "avg_rtp_exact", "avg_ctp", "feasible", "ctp_slack");
    const UpperBound ub(p.model, p.rates);
    auto report = [&](const std::string& name, const CachingMatrix& T) {
        const auto f = feasibility(T, fs);
        const auto ex = avg_metrics(T, p.catalog, p.rates, p.model, RtpVariant::exact);
        row(summary_out, name, num(ub.average(T, p.catalog)), num(prob(ex.avg_rtp)), num(prob(fs.avg_ctp(T))),
            int(f.feasible), num(f.ctp_slack));
    };
    report("most_popular", baseline(Baseline::most_popular, p.catalog, p.model.tiers));
    report("uniform", baseline(Baseline::uniform, p.catalog, p.model.tiers));
    if (!fs.nonempty()) {
        const std::string msg = "# status: infeasible (no caching matrix meets epsilon under the cache budgets)\n";
        trace_out << msg;
        matrix_out << msg;
        summary_out << msg;
        return 3;
    }
    const auto tr = optimize_from(p, fs, random_start(fs, cfg.seed), cfg.algorithm, cfg.opt);
    row(trace_out, "iter", "objective", "ctp", "step_or_inner_iters", "residual");
    for (std::size_t t = 0; t < tr.objectives.size(); ++t)
        row(trace_out, t, num(tr.objectives[t]), num(prob(tr.ctps[t])), num(tr.stats[t]), num(tr.residuals[t]));
    trace_out << "# converged: " << int(tr.converged) << ", iterations: " << tr.iterations << "\n";

    const auto& T = tr.final();
    std::vector<std::string> cols{"n", "file"};
    for (std::size_t k = 0; k < p.model.K(); ++k) cols.push_back("T_" + std::to_string(k + 1));
    for (std::size_t i = 0; i < cols.size(); ++i) matrix_out << (i ? "," : "") << cols[i];
    matrix_out << "\n";
    for (std::size_t n = 0; n < T.rows; ++n) {
        matrix_out << n + 1 << "," << p.catalog.order[n] + 1;
        for (std::size_t k = 0; k < T.cols; ++k) matrix_out << "," << num(T(n, k));
        matrix_out << "\n";
    }
    report("optimized_" + cfg.algorithm, T);
    return 0;
}

int run_sweep(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.sweep.values.empty()) throw ConfigError("sweep: run.sweep section is required");
    header(out, cfg, "sweep " + cfg.sweep.axis + " " + cfg.algorithm);
    row(out, cfg.sweep.axis, "opt_feasible", "opt_avg_rtp_upper_raw", "opt_avg_ctp", "opt_iterations",
        "most_popular_avg_rtp_upper_raw", "most_popular_avg_ctp", "most_popular_feasible",
        "uniform_avg_rtp_upper_raw", "uniform_avg_ctp", "uniform_feasible");
    std::optional<CachingMatrix> warm;
    for (double x : cfg.sweep.values) {
        const Problem q = with_axis(cfg.problem, cfg.sweep.axis, x);
        const auto fs = feasible_set(q);
        const UpperBound ub(q.model, q.rates);
        std::string opt_cols;
        if (fs.nonempty()) {
            const CachingMatrix T0 =
                cfg.sweep.warm_start && warm && warm->cols == fs.K ? project(*warm, fs) : random_start(fs, cfg.seed);
            const auto tr = optimize_from(q, fs, T0, cfg.algorithm, cfg.opt);
            warm = tr.final();
            opt_cols = "1," + num(tr.final_objective()) + "," + num(prob(fs.avg_ctp(tr.final()))) + "," +
                       std::to_string(tr.iterations);
        } else {
            opt_cols = "0,,,";
        }
        std::string base_cols;
        for (auto b : {Baseline::most_popular, Baseline::uniform}) {
            const auto T = baseline(b, q.catalog, q.model.tiers);
            base_cols += "," + num(ub.average(T, q.catalog)) + "," + num(prob(fs.avg_ctp(T))) + "," +
                         std::to_string(int(feasibility(T, fs).feasible));
        }
        out << num(x) << "," << opt_cols << base_cols << "\n";
    }
    return 0;
}

}  // namespace seccache
