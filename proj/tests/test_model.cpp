#include "oracles.hpp"
#include "seccache/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace seccache;

TEST_CASE("AN leakage scale") {
    CHECK(TierParams{1e-5, 1, 1, 1.0, 1}.xi() == 0.0);
    CHECK(TierParams{1e-5, 1, 1, 0.5, 1}.xi() == 0.0);
    CHECK(TierParams{1e-5, 1, 3, 0.5, 1}.xi() == doctest::Approx(0.5));
    CHECK(TierParams{1e-5, 1, 4, 0.25, 1}.xi() == doctest::Approx(1.0));
    CHECK(TierParams{1e-5, 1, 10, 1.0, 1}.xi() == 0.0);
}

TEST_CASE("network helpers") {
    const auto m = oracle::fig1();
    CHECK(m.delta() == doctest::Approx(2 / 3.5));
    CHECK(m.tier_weight(0) == doctest::Approx(m.tiers[0].lambda * std::pow(0.9 * 20, 2 / 3.5)));
    CHECK_FALSE(m.homogeneous());
    CHECK(oracle::paper_v().model.homogeneous());
}

TEST_CASE("rates") {
    const RateParams r{1.3, 0.2, 0.7};
    CHECK(r.R_e() == doctest::Approx(1.1));
    CHECK(r.theta_u() == doctest::Approx(std::pow(2.0, 1.3) - 1));
    CHECK(r.theta_e() == doctest::Approx(std::pow(2.0, 1.1) - 1));
    const auto q = rates_from_thresholds(2.6, 1.5, 0.3);
    CHECK(q.R_s == doctest::Approx(1.1));
    CHECK(q.epsilon == 0.3);
}

TEST_CASE("Zipf popularity") {
    const auto c = zipf_popularity(20, 0.6);
    CHECK(c.N() == 20);
    CHECK(std::accumulate(c.a.begin(), c.a.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t n = 1; n < c.N(); ++n) CHECK(c.a[n] < c.a[n - 1]);
    CHECK(c.a[0] / c.a[1] == doctest::Approx(std::pow(2.0, 0.6)));
    const auto flat = zipf_popularity(4, 0.0);
    for (double a : flat.a) CHECK(a == doctest::Approx(0.25));
    CHECK(zipf_popularity(1, 0.6).a == std::vector<double>{1.0});
}

TEST_CASE("explicit popularity is ranked with a stable order") {
    const auto c = explicit_popularity({0.2, 0.5, 0.1, 0.2});
    CHECK(c.a == std::vector<double>{0.5, 0.2, 0.2, 0.1});
    CHECK(c.order == std::vector<std::size_t>{1, 0, 3, 2});
}

TEST_CASE("validation reports every violated constraint") {
    auto p = oracle::paper_v();
    const auto T = baseline(Baseline::uniform, p.catalog, p.model.tiers);
    CHECK(validate(p.model, p.catalog, T, p.rates).ok());

    SUBCASE("network") {
        auto m = p.model;
        m.alpha = 2.0;
        m.tiers[0].phi = 1.5;
        m.tiers[1].C = 2.5;
        const auto r = validate_network(m);
        CHECK(r.violations.size() == 3);
        CHECK_FALSE(r.str().empty());
    }
    SUBCASE("box and budget") {
        auto bad = T;
        bad(0, 0) = 1.2;
        const auto r = validate(p.model, p.catalog, bad, p.rates);
        bool box = false, budget = false;
        for (const auto& v : r.violations) {
            box = box || v.constraint.find("box") != std::string::npos;
            budget = budget || v.constraint.find("budget") != std::string::npos;
        }
        CHECK(box);
        CHECK(budget);
    }
    SUBCASE("budget tolerance") {
        auto near = T;
        near(0, 0) += 0.5 * kBudgetTol;
        CHECK(validate(p.model, p.catalog, near, p.rates).ok());
        near(0, 0) += 10 * kBudgetTol;
        CHECK_FALSE(validate(p.model, p.catalog, near, p.rates).ok());
    }
    SUBCASE("rates and catalog") {
        auto r = p.rates;
        r.R_s = r.R_u;
        CHECK_FALSE(validate(p.model, p.catalog, T, r).ok());
        r = p.rates;
        r.epsilon = 1.2;
        CHECK_FALSE(validate(p.model, p.catalog, T, r).ok());
        auto c = p.catalog;
        c.a[0] += 0.01;
        CHECK_FALSE(validate(p.model, c, T, p.rates).ok());
    }
    SUBCASE("cache larger than the catalog") {
        auto m = p.model;
        m.tiers[0].C = 21;
        CHECK_FALSE(validate(m, p.catalog, T, p.rates).ok());
    }
}

TEST_CASE("Frobenius distance") {
    Matrix a(2, 2, 1.0), b(2, 2, 1.0);
    CHECK(frobenius_distance(a, b) == 0.0);
    b(1, 1) = 4.0;
    b(0, 0) = -3.0;
    CHECK(frobenius_distance(a, b) == doctest::Approx(5.0));
}
