#pragma once

#include "seccache/mcsim.hpp"
#include "seccache/optimize.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace seccache {

enum class Command { analytic, mc, optimize, sweep };

Command parse_command(const std::string& name);
std::string to_string(Command c);

enum class Scheme { optimize, most_popular, uniform, matrix };

struct McSpec {
    std::string metric = "rtp";  // rtp: values are R_u; ctp: values are R_e at fixed R_u
    std::vector<double> T_n;
    std::vector<double> values;
};

struct SweepSpec {
    std::string axis;  // epsilon, R_u, R_s, alpha, P_J, lambda_J, or <field>[k] with field in lambda, P, M, phi, C
    std::vector<double> values;
    bool warm_start = false;
};

struct ExperimentConfig {
    Problem problem;
    Scheme scheme = Scheme::optimize;
    std::string algorithm = "gpm";
    std::optional<CachingMatrix> matrix;
    OptOptions opt;
    std::uint64_t reps = 100000;
    std::uint64_t seed = 1;
    double window_radius = 0.0;
    McSpec mc;
    SweepSpec sweep;
    std::string out;
    // Fully resolved tree; written into every CSV header and accepted back as a config.
    nlohmann::json resolved;
};

// Preset trees: "paper-v" (optimization scenario), "fig1" (rtp validation), "fig5" (ctp validation).
nlohmann::json preset(const std::string& name);

// Merges the user tree over its `defaults` preset and checks every field. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& user);

// Reads a config file, or the embedded config of a CSV written by this program.
nlohmann::json load_config_tree(const std::string& path);

// Re-resolves after command-line overrides so the header reflects what actually ran.
void apply_overrides(ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<std::uint64_t> reps, std::optional<std::string> algorithm);

// Every command writes a CSV whose comment header embeds the resolved config and seed.
// Returns the process exit status: 0 ok, 3 infeasible.
int run_analytic(const ExperimentConfig& cfg, std::ostream& out);
int run_mc(const ExperimentConfig& cfg, std::ostream& out);
// `matrix_out` and `summary_out` receive the final caching matrix and the scheme comparison.
int run_optimize(const ExperimentConfig& cfg, std::ostream& trace_out, std::ostream& matrix_out,
                 std::ostream& summary_out);
int run_sweep(const ExperimentConfig& cfg, std::ostream& out);

// Applies one sweep value to a copy of the problem.
Problem with_axis(const Problem& p, const std::string& axis, double value);

}  // namespace seccache
