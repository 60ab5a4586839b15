#include "oracles.hpp"
#include "seccache/analytic.hpp"
#include "seccache/mathkit.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace seccache;

TEST_CASE("U and V match the integral oracle") {
    struct Case {
        int M;
        double phi, theta, alpha;
    };
    const std::vector<Case> cases = {
        {1, 1.0, 0.5, 4.0},   {1, 1.0, 3.0, 3.0},   {2, 0.5, 1.0, 3.5},  {2, 0.9, 0.2, 4.0},
        {4, 0.9, 2.0, 3.5},   {4, 0.3, 0.7, 2.8},   {6, 0.99, 5.0, 4.5}, {6, 0.4, 1.5, 3.2},
        {10, 0.9, 1.46, 4.0},
        // xi within 1e-6 of 1, and xi close enough to 1 that the general branch cancels
        {4, 0.25, 1.3, 4.0},  {3, 0.3334, 0.8, 3.5}, {5, 0.2002, 2.0, 4.0},
    };
    for (const auto& c : cases) {
        const double delta = 2.0 / c.alpha;
        const double xi = TierParams{1, 1, c.M, c.phi, 0}.xi();
        for (int m = 0; m < c.M && m < 6; ++m) {
            CAPTURE(c.M);
            CAPTURE(c.phi);
            CAPTURE(m);
            CAPTURE(c.theta);
            CHECK(coeff_U(m, c.M, xi, c.theta, delta) ==
                  doctest::Approx(oracle::U(m, c.M, xi, c.theta, delta)).epsilon(1e-8));
            CHECK(coeff_V(m, c.M, xi, c.theta, delta) ==
                  doctest::Approx(oracle::V(m, c.M, xi, c.theta, delta)).epsilon(1e-8));
        }
    }
}

TEST_CASE("coefficients are continuous across the xi = 1 switch") {
    const double delta = 0.5, theta = 1.7;
    for (int M : {2, 4, 7})
        for (int m = 0; m < M; ++m) {
            const double u1 = coeff_U(m, M, 1.0, theta, delta);
            const double v1 = coeff_V(m, M, 1.0, theta, delta);
            for (double d : {1e-7, 1e-5, 1e-3}) {
                CHECK(coeff_U(m, M, 1.0 - d, theta, delta) == doctest::Approx(u1).epsilon(10 * d));
                CHECK(coeff_V(m, M, 1.0 + d, theta, delta) == doctest::Approx(v1).epsilon(10 * d));
            }
        }
}

TEST_CASE("coefficients at theta = 0") {
    const auto model = oracle::fig1();
    for (int M : {1, 3})
        for (double xi : {0.0, 0.4}) {
            CHECK(coeff_U(0, M, xi, 0.0, 0.5) == doctest::Approx(1.0));
            CHECK(coeff_V(0, M, xi, 0.0, 0.5) == 0.0);
        }
    CHECK(coeff_U(1, 3, 0.4, 0.0, 0.5) == 0.0);
    CHECK(coeff_W(0, 0.0, model) == 0.0);
    const std::vector<double> T{0.3, 0.6};
    CHECK(f_m(T, 0.0, 0, model) ==
          doctest::Approx(model.tier_weight(0) * T[0] + model.tier_weight(1) * T[1]));
}

TEST_CASE("kernel domain") {
    CHECK_THROWS_AS(kernel_kappa(0, 1, 0.5, 1.0, 0.5), DomainError);
    CHECK(kernel_eta(2, 3, 0.0, 1.0, 0.5) == 0.0);
}

TEST_CASE("jammer coefficient") {
    auto m = oracle::fig1();
    const double d = m.delta();
    CHECK(coeff_W(0, 1.0, m) == doctest::Approx(m.lambda_J * std::pow(m.P_J, d) * std::tgamma(1 + d) * std::tgamma(1 - d)));
    m.P_J = 0.0;
    CHECK(coeff_W(0, 1.0, m) == 0.0);
}

TEST_CASE("single-antenna single-tier closed form") {
    // no jammers, T = 1, alpha = 4: p = 1 / (1 + sqrt(theta)(pi/2 - atan(1/sqrt(theta))))
    NetworkModel m;
    m.alpha = 4.0;
    m.tiers = {{1e-5, 1.0, 1, 1.0, 1}};
    for (double R : {0.5, 1.0, 2.0}) {
        const RateParams r{R, 0.0, 0.0};
        const double s = std::sqrt(r.theta_u());
        const double want = 1.0 / (1.0 + s * (std::numbers::pi / 2 - std::atan(1.0 / s)));
        CHECK(rtp_exact({1.0}, r, m) == doctest::Approx(want).epsilon(1e-12));
        const auto b = rtp_bounds({1.0}, r, m);
        CHECK(b.lower == doctest::Approx(want).epsilon(1e-12));
        CHECK(b.upper == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("rtp_exact matches the Taylor-coefficient oracle") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 25; ++i) {
        const auto m = oracle::random_network(rng, 3, 6);
        const auto T = oracle::random_T(rng, m.K(), 0.05);
        const double theta = 0.2 + 4.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        const RateParams r{std::log2(1 + theta), 0.0, 0.0};
        CAPTURE(i);
        CHECK(rtp_exact(T, r, m) == doctest::Approx(oracle::rtp_taylor(T, theta, m)).epsilon(1e-7));
    }
}

TEST_CASE("frozen values on the Fig-1 network") {
    // Cross-checked against the Taylor oracle above and the simulator (acceptance criterion 1).
    const auto m = oracle::fig1();
    const std::vector<double> T{0.9, 0.8};
    CHECK(rtp_exact(T, {0.5, 0, 0}, m) == doctest::Approx(0.692417826745).epsilon(1e-10));
    CHECK(rtp_exact(T, {1.0, 0, 0}, m) == doctest::Approx(0.512224053972).epsilon(1e-10));
    CHECK(rtp_exact(T, {2.5, 0, 0}, m) == doctest::Approx(0.238469576861).epsilon(1e-10));
    const auto b = rtp_bounds(T, {1.0, 0, 0}, m);
    CHECK(b.lower < 0.512224053972);
    CHECK(b.upper > 0.512224053972);
}

TEST_CASE("CTP on the Fig-5 network") {
    const auto m = oracle::fig1();
    const std::vector<double> T{0.8, 0.7};
    const auto c = ctp(T, rates_from_thresholds(2.6, 1.5), m);
    CHECK(c.value == doctest::Approx(0.891238833712).epsilon(1e-10));
    CHECK_FALSE(c.approximate);
    CHECK(ctp(T, rates_from_thresholds(2.6, 0.8), m).approximate);
    CHECK(ctp({0.0, 0.0}, rates_from_thresholds(2.6, 1.5), m).value == 1.0);
    // closed form of the loss coefficients
    const auto r = rates_from_thresholds(2.6, 1.5);
    const auto g = ctp_loss_coeffs(r, m);
    const double th = r.theta_e(), d = m.delta();
    double D = coeff_W(0, th, m);
    for (std::size_t k = 0; k < 2; ++k) D += m.tier_weight(k) * coeff_V(0, m.tiers[k].M, m.tiers[k].xi(), th, d);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(g[k] == doctest::Approx(m.tier_weight(k) * std::pow(1 + m.tiers[k].xi() * th, 1 - m.tiers[k].M) / D));
}

TEST_CASE("upper bound DC split") {
    const auto p = oracle::paper_v();
    const UpperBound ub(p.model, p.rates);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto T = oracle::random_T(rng, 2);
        CHECK(ub.value(T) == doctest::Approx(ub.part(T, 1) - ub.part(T, 2) + 1.0).epsilon(1e-12));
        CHECK(pu_part(T, 1, p.rates, p.model) == doctest::Approx(ub.part(T, 1)));
    }
    const std::vector<double> zero{0.0, 0.0};
    CHECK(ub.value(zero) == 0.0);
    CHECK(ub.part(zero, 1) == 0.0);
    CHECK(ub.part(zero, 2) == 1.0);
    CHECK_THROWS_AS(grad_pu2({0.5, 0.5}, p.rates, oracle::fig1()), ConfigError);
}

namespace {

std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double x0 = x[k];
        x[k] = x0 + h;
        const double fp = f(x);
        x[k] = x0 - h;
        const double fm = f(x);
        x[k] = x0;
        g[k] = (fp - fm) / (2 * h);
    }
    return g;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double rel) {
    double scale = 0.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= rel * std::max(scale, 1e-12));
}

}  // namespace

TEST_CASE("upper-bound gradients match central differences") {
    std::mt19937_64 rng(77);
    SUBCASE("paper-V homogeneous scenario") {
        const auto p = oracle::paper_v();
        const UpperBound ub(p.model, p.rates);
        for (int i = 0; i < 30; ++i) {
            const auto T = oracle::random_T(rng, 2, 0.01);
            check_close(ub.gradient(T), central_diff([&](const auto& x) { return ub.value(x); }, T), 1e-5);
            check_close(grad_pu1(T, p.rates, p.model), central_diff([&](const auto& x) { return ub.part(x, 1); }, T), 1e-5);
            check_close(grad_pu2(T, p.rates, p.model), central_diff([&](const auto& x) { return ub.part(x, 2); }, T), 1e-5);
        }
    }
    SUBCASE("heterogeneous tiers") {
        for (int i = 0; i < 30; ++i) {
            const auto m = oracle::random_network(rng, 3, 6);
            const RateParams r{1.0, 0.0, 0.0};
            const UpperBound ub(m, r);
            const auto T = oracle::random_T(rng, m.K(), 0.01);
            check_close(ub.gradient(T), central_diff([&](const auto& x) { return ub.value(x); }, T), 1e-5);
        }
    }
    SUBCASE("average gradient is the per-file gradient scaled by popularity") {
        const auto p = oracle::paper_v();
        const auto T = baseline(Baseline::uniform, p.catalog, p.model.tiers);
        const auto G = grad_avg_rtp_upper(T, p.catalog, p.rates, p.model);
        const auto g0 = UpperBound(p.model, p.rates).gradient(T.row(3));
        for (std::size_t k = 0; k < 2; ++k) CHECK(G(3, k) == doctest::Approx(p.catalog.a[3] * g0[k]));
    }
    SUBCASE("symmetric tiers give equal entries") {
        auto p = oracle::paper_v();
        p.model.tiers[1] = p.model.tiers[0];
        const auto g = grad_pu2({0.4, 0.4}, p.rates, p.model);
        CHECK(g[0] == doctest::Approx(g[1]).epsilon(1e-12));
    }
}

TEST_CASE("CTP is affine in the caching probabilities") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        const auto m = oracle::random_network(rng, 3, 6);
        const auto r = rates_from_thresholds(2.0, 1.2);
        auto T = oracle::random_T(rng, m.K());
        for (std::size_t k = 0; k < m.K(); ++k) {
            const double h = 0.1, t0 = T[k];
            T[k] = std::clamp(t0, h, 1 - h);
            const double c0 = ctp(T, r, m).value;
            T[k] += h;
            const double cp = ctp(T, r, m).value;
            T[k] -= 2 * h;
            const double cm = ctp(T, r, m).value;
            T[k] = t0;
            CHECK(std::abs(cp - 2 * c0 + cm) <= 1e-10);
        }
    }
}

TEST_CASE("association probabilities") {
    const auto m = oracle::fig1();
    const std::vector<double> T{0.9, 0.8};
    CHECK(association_prob(T, 0, m) + association_prob(T, 1, m) == doctest::Approx(1.0));
    NetworkModel one = m;
    one.tiers.resize(1);
    CHECK(association_prob({0.3}, 0, one) == 1.0);
    CHECK_THROWS_AS(association_prob({0.0, 0.0}, 0, m), DomainError);
}

TEST_CASE("thresholds") {
    auto p = oracle::paper_v();
    SUBCASE("single tier without jammers is degenerate") {
        NetworkModel m = p.model;
        m.tiers.resize(1);
        m.lambda_J = 0.0;
        CHECK(thresholds({0.5}, 0, p.rates, m).T_u_th == 0.0);
    }
    SUBCASE("symmetric tiers") {
        p.model.tiers[1] = p.model.tiers[0];
        const auto a = thresholds({0.3, 0.3}, 0, p.rates, p.model);
        const auto b = thresholds({0.3, 0.3}, 1, p.rates, p.model);
        CHECK(a.T_u_th == doctest::Approx(b.T_u_th));
        CHECK(a.T_e_th == doctest::Approx(b.T_e_th));
    }
    SUBCASE("heterogeneous tiers only support the ctp threshold") {
        CHECK_THROWS_AS(thresholds({0.3, 0.3}, 0, p.rates, oracle::fig1()), ConfigError);
        CHECK_NOTHROW(threshold_ctp({0.3, 0.3}, 0, p.rates, oracle::fig1()));
    }
}
