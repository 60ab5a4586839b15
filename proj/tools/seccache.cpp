// Command-line front end: analytic | mc | optimize | sweep.

#include "seccache/app.hpp"
#include "seccache/mathkit.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace seccache;

namespace {

// Default output directory when neither --out nor run.out is given; otherwise stdout.
constexpr const char* kOutDirEnv = "SECCACHE_OUT_DIR";

struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;
};

Sink open_sink(const std::string& path) {
    Sink s;
    if (path.empty()) return s;
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    s.file = std::make_unique<std::ofstream>(path);
    if (!*s.file) throw std::runtime_error("cannot write '" + path + "'");
    s.os = s.file.get();
    return s;
}

// out.csv -> out_<tag>.csv
std::string sibling(const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    fs::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + tag + p.extension().string())).string();
}

int run(Command cmd, ExperimentConfig& cfg, std::string out) {
    if (out.empty()) out = cfg.out;
    if (out.empty())
        if (const char* dir = std::getenv(kOutDirEnv); dir && *dir)
            out = (fs::path(dir) / (to_string(cmd) + ".csv")).string();

    switch (cmd) {
        case Command::analytic: return run_analytic(cfg, *open_sink(out).os);
        case Command::mc: return run_mc(cfg, *open_sink(out).os);
        case Command::sweep: return run_sweep(cfg, *open_sink(out).os);
        case Command::optimize: {
            auto trace = open_sink(out);
            auto matrix = open_sink(sibling(out, "matrix"));
            auto summary = open_sink(sibling(out, "summary"));
            return run_optimize(cfg, *trace.os, *matrix.os, *summary.os);
        }
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-aware random caching in multi-tier networks: analysis, simulation, optimization"};
    std::string command, config, out, alg;
    std::uint64_t seed = 0, reps = 0;
    app.add_option("command", command, "analytic | mc | optimize | sweep")
        ->required()
        ->check(CLI::IsMember({"analytic", "mc", "optimize", "sweep"}));
    app.add_option("--config", config, "JSON config, or a CSV previously written by this tool")->required();
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides run.seed)");
    auto* reps_opt = app.add_option("--reps", reps, "Monte Carlo replications (overrides run.reps)")
                         ->check(CLI::PositiveNumber);
    auto* alg_opt = app.add_option("--alg", alg, "optimizer")->check(CLI::IsMember({"gpm", "ccp"}));
    app.add_option("--out", out, std::string("output CSV (default: run.out, then $") + kOutDirEnv + ", then stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = parse_config(load_config_tree(config));
        apply_overrides(cfg, seed_opt->count() ? std::optional(seed) : std::nullopt,
                        reps_opt->count() ? std::optional(reps) : std::nullopt,
                        alg_opt->count() ? std::optional(alg) : std::nullopt);
        const int rc = run(parse_command(command), cfg, out);
        if (rc == 3) std::cerr << "infeasible: see the status line in the output\n";
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
