#pragma once

#include "seccache/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace seccache {

struct BsPoint {
    double r = 0.0;      // distance to the origin, m
    double angle = 0.0;  // rad
    bool caches = false;
    double h = 0.0;   // information-signal fading toward the origin, Exp(1)
    double an = 0.0;  // artificial-noise leakage, Gamma(M-1,1); 0 for a single antenna
};

struct JammerPoint {
    double r = 0.0;
    double angle = 0.0;
    double h = 0.0;  // Exp(1)
};

// One network snapshot around a receiver at the origin.
struct Realization {
    double window_radius = 0.0;
    std::vector<std::vector<BsPoint>> tiers;
    std::vector<JammerPoint> jammers;
    // Beamformed gain Gamma(M_k,1) used if the serving BS belongs to tier k.
    std::vector<double> serving_gain;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
};

McEstimate make_estimate(std::uint64_t hits, std::uint64_t reps, std::uint64_t seed);

struct McOptions {
    double window_radius = 0.0;  // 0 selects the default
    unsigned threads = 0;        // 0 selects hardware concurrency
    // Adds the mean interference of BSs and jammers beyond the window as a constant.
    bool tail_correction = true;
};

// Mean aggregate power received at the origin from all transmitters farther than `radius`.
double tail_interference(const NetworkModel& model, double radius);

// 10 / sqrt(pi min_k lambda_k).
double default_window_radius(const NetworkModel& model);

// Seed of replication `rep` derived from the master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t rep);

Realization realize(const NetworkModel& model, const std::vector<double>& T_n, double window_radius,
                    std::mt19937_64& rng);
void realize(const NetworkModel& model, const std::vector<double>& T_n, double window_radius,
             std::mt19937_64& rng, Realization& out);

struct UserOutcome {
    bool served = false;
    int tier = -1;
    double sir = 0.0;
};
// SIR at the typical user, ignoring points beyond `cutoff`; `extra` is added to the interference.
UserOutcome user_sir(const Realization& x, const NetworkModel& model, double cutoff, double extra = 0.0);
// Largest SIR the eavesdropper at the origin sees from any caching BS within `cutoff`; 0 if none.
double eavesdropper_max_sir(const Realization& x, const NetworkModel& model, double cutoff,
                            double extra = 0.0);

McEstimate estimate_rtp(const NetworkModel& model, const std::vector<double>& T_n,
                        const RateParams& rates, std::uint64_t reps, std::uint64_t seed,
                        const McOptions& opts = {});
McEstimate estimate_ctp(const NetworkModel& model, const std::vector<double>& T_n,
                        const RateParams& rates, std::uint64_t reps, std::uint64_t seed,
                        const McOptions& opts = {});

// Shared realizations across several thresholds (and window cutoffs).
struct RtpSweep {
    // rtp[c][i]: cutoff c, threshold R_u[i]
    std::vector<std::vector<McEstimate>> rtp;
    // association[c][k]: fraction of served realizations attached to tier k
    std::vector<std::vector<McEstimate>> association;
};
RtpSweep estimate_rtp_sweep(const NetworkModel& model, const std::vector<double>& T_n,
                            const std::vector<double>& R_u, const std::vector<double>& cutoffs,
                            std::uint64_t reps, std::uint64_t seed, const McOptions& opts = {});

// ctp[c][i]: cutoff c, redundancy rate R_e[i]
std::vector<std::vector<McEstimate>> estimate_ctp_sweep(const NetworkModel& model,
                                                        const std::vector<double>& T_n,
                                                        const std::vector<double>& R_e,
                                                        const std::vector<double>& cutoffs,
                                                        std::uint64_t reps, std::uint64_t seed,
                                                        const McOptions& opts = {});

}  // namespace seccache
