#include "seccache/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace seccache {

McEstimate make_estimate(std::uint64_t hits, std::uint64_t reps, std::uint64_t seed) {
    McEstimate e;
    e.reps = reps;
    e.seed = seed;
    if (reps == 0) return e;
    e.mean = double(hits) / double(reps);
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / double(reps));
    return e;
}

double default_window_radius(const NetworkModel& model) {
    double lmin = model.tiers.front().lambda;
    for (const auto& t : model.tiers) lmin = std::min(lmin, t.lambda);
    return 10.0 / std::sqrt(lmin * std::numbers::pi);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t rep) {
    // splitmix64 finalizer over a Weyl sequence
    std::uint64_t z = master + (rep + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void realize(const NetworkModel& model, const std::vector<double>& T_n, double window_radius,
             std::mt19937_64& rng, Realization& out) {
    const double area = std::numbers::pi * window_radius * window_radius;
    // 53-bit uniforms on [0,1); std::generate_canonical dominates the profile otherwise.
    auto unif = [](std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; };
    auto expo = [&](std::mt19937_64& g) { return -std::log(1.0 - unif(g)); };  // 1 - u is exact
    auto place = [&](double& r, double& angle) {
        r = window_radius * std::sqrt(unif(rng));
        angle = 2.0 * std::numbers::pi * unif(rng);
    };

    out.window_radius = window_radius;
    out.tiers.resize(model.K());
    out.serving_gain.resize(model.K());
    for (std::size_t k = 0; k < model.K(); ++k) {
        const auto& tier = model.tiers[k];
        auto& pts = out.tiers[k];
        const auto n = std::poisson_distribution<long>(tier.lambda * area)(rng);
        pts.resize(std::size_t(n));
        const double t = std::clamp(T_n[k], 0.0, 1.0);
        std::gamma_distribution<double> leak(tier.M > 1 ? tier.M - 1.0 : 1.0, 1.0);
        for (auto& p : pts) {
            place(p.r, p.angle);
            p.caches = unif(rng) < t;
            p.h = expo(rng);
            // Gamma(1,1) is Exp(1); the generic gamma sampler is several times slower.
            p.an = tier.M > 2 ? leak(rng) : tier.M == 2 ? expo(rng) : 0.0;
        }
        out.serving_gain[k] = std::gamma_distribution<double>(tier.M, 1.0)(rng);
    }
    const double lj = model.P_J > 0.0 ? model.lambda_J : 0.0;
    const auto nj = lj > 0.0 ? std::poisson_distribution<long>(lj * area)(rng) : 0L;
    out.jammers.resize(std::size_t(nj));
    for (auto& j : out.jammers) {
        place(j.r, j.angle);
        j.h = expo(rng);
    }
}

Realization realize(const NetworkModel& model, const std::vector<double>& T_n, double window_radius,
                    std::mt19937_64& rng) {
    Realization x;
    realize(model, T_n, window_radius, rng, x);
    return x;
}

namespace {

double jammer_power(const Realization& x, const NetworkModel& model, double cutoff) {
    double s = 0.0;
    for (const auto& j : x.jammers)
        if (j.r <= cutoff) s += model.P_J * j.h * std::pow(j.r, -model.alpha);
    return s;
}

}  // namespace

double tail_interference(const NetworkModel& model, double radius) {
    // Each BS radiates P_k on average (information plus artificial noise).
    double power_density = model.lambda_J * model.P_J;
    for (const auto& t : model.tiers) power_density += t.lambda * t.P;
    return 2.0 * std::numbers::pi * power_density * std::pow(radius, 2.0 - model.alpha) / (model.alpha - 2.0);
}

UserOutcome user_sir(const Realization& x, const NetworkModel& model, double cutoff, double extra) {
    // Serving BS: largest phi P r^-alpha among caching BSs, i.e. smallest r / (phi P)^{1/alpha}.
    int best_k = -1;
    std::size_t best_i = 0;
    double best_score = 0.0;
    for (std::size_t k = 0; k < x.tiers.size(); ++k) {
        const auto& t = model.tiers[k];
        const double scale = std::pow(t.phi * t.P, -1.0 / model.alpha);
        for (std::size_t i = 0; i < x.tiers[k].size(); ++i) {
            const auto& p = x.tiers[k][i];
            if (!p.caches || p.r > cutoff) continue;
            const double score = p.r * scale;
            if (best_k < 0 || score < best_score) {
                best_k = int(k);
                best_i = i;
                best_score = score;
            }
        }
    }
    UserOutcome out;
    if (best_k < 0) return out;

    double interference = extra + jammer_power(x, model, cutoff);
    for (std::size_t k = 0; k < x.tiers.size(); ++k) {
        const auto& t = model.tiers[k];
        const double xi = t.xi();
        const double pw = t.phi * t.P;
        for (std::size_t i = 0; i < x.tiers[k].size(); ++i) {
            const auto& p = x.tiers[k][i];
            if (p.r > cutoff || (int(k) == best_k && i == best_i)) continue;
            interference += pw * (p.h + xi * p.an) * std::pow(p.r, -model.alpha);
        }
    }
    const auto& st = model.tiers[best_k];
    const double r = x.tiers[best_k][best_i].r;
    const double signal = st.phi * st.P * x.serving_gain[best_k] * std::pow(r, -model.alpha);
    out.served = true;
    out.tier = best_k;
    out.sir = interference > 0.0 ? signal / interference : HUGE_VAL;
    return out;
}

double eavesdropper_max_sir(const Realization& x, const NetworkModel& model, double cutoff,
                            double extra) {
    double total = extra + jammer_power(x, model, cutoff);
    double best = -1.0;
    for (std::size_t k = 0; k < x.tiers.size(); ++k) {
        const auto& t = model.tiers[k];
        const double xi = t.xi();
        const double pw = t.phi * t.P;
        for (const auto& p : x.tiers[k]) {
            if (p.r > cutoff) continue;
            const double path = std::pow(p.r, -model.alpha);
            total += pw * (p.h + xi * p.an) * path;
            if (p.caches) best = std::max(best, pw * p.h * path);
        }
    }
    if (best < 0.0) return 0.0;
    const double rest = total - best;
    return rest > 0.0 ? best / rest : HUGE_VAL;
}

namespace {

unsigned worker_count(const McOptions& opts, std::uint64_t reps) {
    unsigned n = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    return unsigned(std::min<std::uint64_t>(n, std::max<std::uint64_t>(reps, 1)));
}

// Runs `body(realization, counts)` for every replication and sums integer counters.
// Each replication owns its RNG substream, so the result is independent of scheduling.
template <class Body>
std::vector<std::uint64_t> count_reps(const NetworkModel& model, const std::vector<double>& T_n,
                                      double radius, std::uint64_t reps, std::uint64_t seed,
                                      std::size_t ncounters, const McOptions& opts, Body body) {
    const unsigned nw = worker_count(opts, reps);
    std::vector<std::vector<std::uint64_t>> partial(nw, std::vector<std::uint64_t>(ncounters, 0));
    auto work = [&](unsigned w) {
        Realization x;
        std::mt19937_64 rng;
        const std::uint64_t lo = reps * w / nw, hi = reps * (w + 1) / nw;
        for (std::uint64_t rep = lo; rep < hi; ++rep) {
            rng.seed(substream_seed(seed, rep));
            realize(model, T_n, radius, rng, x);
            body(x, partial[w]);
        }
    };
    if (nw == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < nw; ++w) pool.emplace_back(work, w);
    }
    std::vector<std::uint64_t> total(ncounters, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < ncounters; ++i) total[i] += p[i];
    return total;
}

std::vector<double> resolve_cutoffs(const NetworkModel& model, const std::vector<double>& cutoffs,
                                    const McOptions& opts, double& radius) {
    radius = opts.window_radius > 0.0 ? opts.window_radius : default_window_radius(model);
    std::vector<double> c = cutoffs.empty() ? std::vector<double>{radius} : cutoffs;
    for (double v : c) radius = std::max(radius, v);
    return c;
}

}  // namespace

RtpSweep estimate_rtp_sweep(const NetworkModel& model, const std::vector<double>& T_n,
                            const std::vector<double>& R_u, const std::vector<double>& cutoffs,
                            std::uint64_t reps, std::uint64_t seed, const McOptions& opts) {
    double radius = 0.0;
    const auto cut = resolve_cutoffs(model, cutoffs, opts, radius);
    std::vector<double> theta;
    for (double r : R_u) theta.push_back(std::exp2(r) - 1.0);
    const std::size_t K = model.K(), nt = theta.size();
    std::vector<double> tail;
    for (double c : cut) tail.push_back(opts.tail_correction ? tail_interference(model, c) : 0.0);
    // Per cutoff: nt success counters, K association counters, one served counter.
    const std::size_t stride = nt + K + 1;

    auto counts = count_reps(model, T_n, radius, reps, seed, stride * cut.size(), opts,
                             [&](const Realization& x, std::vector<std::uint64_t>& c) {
                                 for (std::size_t ci = 0; ci < cut.size(); ++ci) {
                                     const auto u = user_sir(x, model, cut[ci], tail[ci]);
                                     if (!u.served) continue;
                                     auto* base = c.data() + ci * stride;
                                     for (std::size_t i = 0; i < nt; ++i)
                                         if (u.sir >= theta[i]) ++base[i];
                                     ++base[nt + std::size_t(u.tier)];
                                     ++base[nt + K];
                                 }
                             });

    RtpSweep out;
    for (std::size_t ci = 0; ci < cut.size(); ++ci) {
        const auto* base = counts.data() + ci * stride;
        std::vector<McEstimate> rtp, assoc;
        for (std::size_t i = 0; i < nt; ++i) rtp.push_back(make_estimate(base[i], reps, seed));
        for (std::size_t k = 0; k < K; ++k) assoc.push_back(make_estimate(base[nt + k], base[nt + K], seed));
        out.rtp.push_back(std::move(rtp));
        out.association.push_back(std::move(assoc));
    }
    return out;
}

std::vector<std::vector<McEstimate>> estimate_ctp_sweep(const NetworkModel& model,
                                                        const std::vector<double>& T_n,
                                                        const std::vector<double>& R_e,
                                                        const std::vector<double>& cutoffs,
                                                        std::uint64_t reps, std::uint64_t seed,
                                                        const McOptions& opts) {
    double radius = 0.0;
    const auto cut = resolve_cutoffs(model, cutoffs, opts, radius);
    std::vector<double> theta;
    for (double r : R_e) theta.push_back(std::exp2(r) - 1.0);
    const std::size_t nt = theta.size();
    std::vector<double> tail;
    for (double c : cut) tail.push_back(opts.tail_correction ? tail_interference(model, c) : 0.0);

    auto counts = count_reps(model, T_n, radius, reps, seed, nt * cut.size(), opts,
                             [&](const Realization& x, std::vector<std::uint64_t>& c) {
                                 for (std::size_t ci = 0; ci < cut.size(); ++ci) {
                                     const double s = eavesdropper_max_sir(x, model, cut[ci], tail[ci]);
                                     for (std::size_t i = 0; i < nt; ++i)
                                         if (s <= theta[i]) ++c[ci * nt + i];
                                 }
                             });

    std::vector<std::vector<McEstimate>> out(cut.size());
    for (std::size_t ci = 0; ci < cut.size(); ++ci)
        for (std::size_t i = 0; i < nt; ++i) out[ci].push_back(make_estimate(counts[ci * nt + i], reps, seed));
    return out;
}

McEstimate estimate_rtp(const NetworkModel& model, const std::vector<double>& T_n,
                        const RateParams& rates, std::uint64_t reps, std::uint64_t seed,
                        const McOptions& opts) {
    return estimate_rtp_sweep(model, T_n, {rates.R_u}, {}, reps, seed, opts).rtp[0][0];
}

McEstimate estimate_ctp(const NetworkModel& model, const std::vector<double>& T_n,
                        const RateParams& rates, std::uint64_t reps, std::uint64_t seed,
                        const McOptions& opts) {
    return estimate_ctp_sweep(model, T_n, {rates.R_e()}, {}, reps, seed, opts)[0][0];
}

}  // namespace seccache
