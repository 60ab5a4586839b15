#pragma once
// Acceptance checks, shared by the acceptance gate and the unit tests.

#include <cstdint>
#include <string>

namespace criteria {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// 1. Analytic rtp against simulation on the Fig-1 network, both jammer densities.
Outcome mc_rtp(const std::string& config_dir);
// 2. Analytic ctp against simulation on the Fig-5 network, both jammer densities.
Outcome mc_ctp(const std::string& config_dir);
// 3. lower <= exact <= upper on random networks.
Outcome sandwich(int configs, std::uint64_t seed);
// 4. Upper-bound and concave-part gradients against central differences.
Outcome gradients(int points, std::uint64_t seed);
// 5. Linearity, concavity, monotonicity and threshold sign flips.
Outcome structure(int segments, std::uint64_t seed);
// 6. Both optimizers reach the grid maximum of a three-file single-tier instance.
Outcome small_instance();
// 7. Multi-start agreement on the default scenario and ccp ascent.
Outcome multistart(int starts);
// 8. Baseline dominance, an epsilon where only the optimizer is feasible, non-monotone cache sweep.
Outcome regimes(const std::string& config_dir);
// 9. Every command reproduces its own output from the config embedded in it.
Outcome determinism(const std::string& cli, const std::string& config_dir, const std::string& work_dir);

}  // namespace criteria
