#include "seccache/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace seccache {

double NetworkModel::tier_weight(std::size_t k) const {
    const auto& t = tiers[k];
    return t.lambda * std::pow(t.phi * t.P, delta());
}

bool NetworkModel::homogeneous() const {
    for (const auto& t : tiers)
        if (t.M != tiers.front().M || t.phi != tiers.front().phi) return false;
    return true;
}

double frobenius_distance(const Matrix& x, const Matrix& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double d = x.data[i] - y.data[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double RateParams::theta_u() const { return std::exp2(R_u) - 1.0; }
double RateParams::theta_e() const { return std::exp2(R_e()) - 1.0; }

RateParams rates_from_thresholds(double R_u, double R_e, double epsilon) {
    return RateParams{R_u, R_u - R_e, epsilon};
}

Catalog zipf_popularity(std::size_t N, double beta) {
    Catalog c;
    c.a.resize(N);
    c.order.resize(N);
    double z = 0.0;
    // Sum smallest terms first.
    for (std::size_t i = N; i-- > 0;) z += std::pow(double(i + 1), -beta);
    for (std::size_t i = 0; i < N; ++i) {
        c.a[i] = std::pow(double(i + 1), -beta) / z;
        c.order[i] = i;
    }
    return c;
}

Catalog explicit_popularity(std::vector<double> a) {
    Catalog c;
    c.order.resize(a.size());
    std::iota(c.order.begin(), c.order.end(), std::size_t{0});
    std::stable_sort(c.order.begin(), c.order.end(),
                     [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
    c.a.reserve(a.size());
    for (auto i : c.order) c.a.push_back(a[i]);
    return c;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.constraint << " [" << v.where << "] magnitude " << v.magnitude << "\n";
    return os.str();
}

namespace {

std::string tier_name(std::size_t k) { return "tier " + std::to_string(k + 1); }

}  // namespace

ValidationReport validate_network(const NetworkModel& model) {
    ValidationReport r;
    auto add = [&](std::string c, std::string w, double m) {
        r.violations.push_back({std::move(c), std::move(w), m});
    };
    if (model.tiers.empty()) add("at least one tier", "network", 0.0);
    if (!(model.alpha > 2.0)) add("path-loss bound alpha > 2", "network", 2.0 - model.alpha);
    if (!(model.lambda_J >= 0.0)) add("jammer density lambda_J >= 0", "network", -model.lambda_J);
    if (!(model.P_J >= 0.0)) add("jammer power P_J >= 0", "network", -model.P_J);
    for (std::size_t k = 0; k < model.tiers.size(); ++k) {
        const auto& t = model.tiers[k];
        if (!(t.lambda > 0.0)) add("BS density lambda > 0", tier_name(k), -t.lambda);
        if (!(t.P > 0.0)) add("BS power P > 0", tier_name(k), -t.P);
        if (t.M < 1) add("antenna count M >= 1", tier_name(k), 1.0 - t.M);
        if (!(t.phi > 0.0 && t.phi <= 1.0))
            add("power split 0 < phi <= 1", tier_name(k), t.phi <= 0.0 ? -t.phi : t.phi - 1.0);
        if (!(t.C >= 0.0)) add("cache size C >= 0", tier_name(k), -t.C);
        if (t.C != std::floor(t.C)) add("cache size integer", tier_name(k), t.C - std::floor(t.C));
    }
    return r;
}

ValidationReport validate(const NetworkModel& model, const Catalog& catalog, const CachingMatrix& T,
                          const RateParams& rates) {
    ValidationReport r = validate_network(model);
    auto add = [&](std::string c, std::string w, double m) {
        r.violations.push_back({std::move(c), std::move(w), m});
    };
    const std::size_t N = catalog.N();
    const std::size_t K = model.K();

    if (N == 0) add("file count N >= 1", "catalog", 1.0);
    double sum = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const double a = catalog.a[n];
        sum += a;
        if (!(a >= 0.0 && a <= 1.0)) add("popularity in [0,1]", "file " + std::to_string(n + 1), a);
        if (n > 0 && a > catalog.a[n - 1])
            add("popularity sorted descending", "file " + std::to_string(n + 1), a - catalog.a[n - 1]);
    }
    if (N > 0 && std::abs(sum - 1.0) > 1e-12) add("popularity sums to 1", "catalog", sum - 1.0);
    for (std::size_t k = 0; k < K; ++k)
        if (model.tiers[k].C > double(N))
            add("cache size C <= N", tier_name(k), model.tiers[k].C - double(N));

    if (!(rates.R_s >= 0.0)) add("secrecy rate R_s >= 0", "rates", -rates.R_s);
    if (!(rates.R_u > rates.R_s)) add("rate order R_u > R_s", "rates", rates.R_s - rates.R_u);
    if (!(rates.epsilon >= 0.0 && rates.epsilon <= 1.0))
        add("confidentiality level in [0,1]", "rates", rates.epsilon);

    if (T.rows != N || T.cols != K) {
        add("caching matrix shape N x K", "T", double(T.rows * T.cols) - double(N * K));
        return r;
    }
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < K; ++k) {
            const double v = T(n, k);
            if (!(v >= 0.0 && v <= 1.0))
                add("box 0 <= T <= 1",
                    "file " + std::to_string(n + 1) + ", " + tier_name(k), v < 0.0 ? -v : v - 1.0);
        }
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < N; ++n) s += T(n, k);
        const double excess = s - model.tiers[k].C;
        if (std::abs(excess) > kBudgetTol) add("cache budget", tier_name(k), excess);
    }
    return r;
}

}  // namespace seccache
