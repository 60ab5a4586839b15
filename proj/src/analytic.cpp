#include "seccache/analytic.hpp"

#include "seccache/mathkit.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

namespace seccache {

namespace {

constexpr double kXiOneTol = 1e-6;
// Below this value of |1-xi|^{M-1} the general branch loses too many digits.
constexpr double kCancellationTol = 1e-3;

double factorial(int m) { return std::exp(ln_gamma(m + 1.0)); }

double sign_pow(int m) { return m % 2 == 0 ? 1.0 : -1.0; }

bool near_one(double xi) { return std::abs(xi - 1.0) < kXiOneTol; }

bool cancels(int M, double xi) {
    return std::pow(std::abs(1.0 - xi), M - 1) < kCancellationTol;
}

// Interference mark Exp(1) + xi Gamma(M-1) equals (xi + (1-xi)u) Gamma(M) in law,
// u ~ Beta(1, M-1). U is then a mixture of its xi = 1 form over the scale.
double U_mixture(int m, int M, double xi, double theta, double delta) {
    auto integrand = [&](double u) {
        const double t = xi + (1.0 - xi) * u;
        return (M - 1) * std::pow(1.0 - u, M - 2) * kernel_eta(m, M - 1, t, theta, delta) / t;
    };
    return boost::math::quadrature::gauss<double, 30>::integrate(integrand, 0.0, 1.0);
}

// V through the fractional moment E[Y^delta] = Gamma(M+delta)/Gamma(M) 2F1(-delta, M-1; M; 1-xi).
double V_moment(int m, int M, double xi, double theta, double delta) {
    const double moment = std::exp(ln_gamma(M + delta) - ln_gamma(M)) *
                          gauss_2f1(-delta, M - 1.0, M, 1.0 - xi);
    return sign_pow(m) * factorial_poch(delta, m, Poch::falling) / factorial(m) *
           std::tgamma(1.0 - delta) * std::pow(theta, delta) * moment;
}

}  // namespace

double kernel_eta(int m, int i, double xi, double theta, double delta) {
    if (xi == 0.0) return 0.0;
    const double pre = factorial_poch(i + 1.0, m, Poch::rising) * delta / (factorial(m) * (delta - m));
    return pre * std::pow(xi, m + 1) * gauss_2f1(m - delta, m + i + 1.0, m - delta + 1.0, -xi * theta) *
           std::pow(theta, m);
}

double kernel_kappa(int m, int i, double xi, double theta, double delta) {
    if (i < 2) throw DomainError("kernel_kappa: i must be at least 2");
    if (theta == 0.0 || xi == 0.0) return 0.0;
    const double g = std::exp(ln_gamma(i + delta - 1.0) - ln_gamma(i - 1.0));
    return sign_pow(m) * factorial_poch(delta, m, Poch::falling) * g / factorial(m) *
           std::tgamma(1.0 - delta) * std::pow(xi, delta + 1.0) * std::pow(theta, delta);
}

double coeff_U(int m, int M, double xi, double theta, double delta) {
    if (M == 1) return kernel_eta(m, 0, 1.0, theta, delta);
    if (near_one(xi)) return kernel_eta(m, M - 1, 1.0, theta, delta);
    if (cancels(M, xi)) return U_mixture(m, M, xi, theta, delta);
    double s = kernel_eta(m, 0, 1.0, theta, delta);
    double w = 1.0;
    for (int i = 0; i <= M - 2; ++i) {
        s -= w * kernel_eta(m, i, xi, theta, delta);
        w *= 1.0 - xi;
    }
    return s / w;
}

double coeff_V(int m, int M, double xi, double theta, double delta) {
    if (M == 1) return kernel_kappa(m, 2, 1.0, theta, delta);
    if (near_one(xi)) return kernel_kappa(m, M + 1, 1.0, theta, delta);
    if (cancels(M, xi)) return V_moment(m, M, xi, theta, delta);
    double s = kernel_kappa(m, 2, 1.0, theta, delta);
    double w = 1.0;
    for (int i = 0; i <= M - 2; ++i) {
        s -= w * kernel_kappa(m, i + 2, xi, theta, delta);
        w *= 1.0 - xi;
    }
    return s / w;
}

double coeff_W(int m, double theta, const NetworkModel& model) {
    if (model.lambda_J == 0.0 || model.P_J == 0.0) return 0.0;
    const double delta = model.delta();
    return model.lambda_J * std::pow(model.P_J, delta) * kernel_kappa(m, 2, 1.0, theta, delta);
}

UVW coeffs_UVW(int m, const TierParams& tier, double theta, const NetworkModel& model) {
    const double delta = model.delta();
    return {coeff_U(m, tier.M, tier.xi(), theta, delta), coeff_V(m, tier.M, tier.xi(), theta, delta),
            coeff_W(m, theta, model)};
}

double f_m(const std::vector<double>& T_n, double theta, int m, const NetworkModel& model) {
    const double delta = model.delta();
    double s = coeff_W(m, theta, model);
    for (std::size_t k = 0; k < model.K(); ++k) {
        const auto& t = model.tiers[k];
        const double U = coeff_U(m, t.M, t.xi(), theta, delta);
        const double V = coeff_V(m, t.M, t.xi(), theta, delta);
        s += model.tier_weight(k) * (T_n[k] * U + (1.0 - T_n[k]) * V);
    }
    return s;
}

double AffineF0::operator()(const std::vector<double>& T_n) const {
    double s = offset;
    for (std::size_t k = 0; k < slope.size(); ++k) s += slope[k] * T_n[k];
    return s;
}

AffineF0 affine_f0(double theta, const NetworkModel& model) {
    const double delta = model.delta();
    AffineF0 f;
    f.offset = coeff_W(0, theta, model);
    f.slope.resize(model.K());
    for (std::size_t k = 0; k < model.K(); ++k) {
        const auto& t = model.tiers[k];
        const double U = coeff_U(0, t.M, t.xi(), theta, delta);
        const double V = coeff_V(0, t.M, t.xi(), theta, delta);
        f.slope[k] = model.tier_weight(k) * (U - V);
        f.offset += model.tier_weight(k) * V;
    }
    return f;
}

double rtp_exact(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model) {
    const double theta = rates.theta_u();
    if (!(theta > 0.0)) throw DomainError("rtp_exact: theta_u must be positive");
    int Mmax = 0;
    for (const auto& t : model.tiers) Mmax = std::max(Mmax, t.M);
    std::vector<double> q(Mmax);
    for (int m = 0; m < Mmax; ++m) q[m] = f_m(T_n, theta, m, model);

    double p = 0.0;
    for (std::size_t j = 0; j < model.K(); ++j) {
        if (T_n[j] == 0.0) continue;
        const int M = model.tiers[j].M;
        LowerToeplitz Q{{q.begin(), q.begin() + M}};
        p += model.tier_weight(j) * T_n[j] * toeplitz_inv_l1(Q);
    }
    return p;
}

RtpBounds rtp_bounds(const std::vector<double>& T_n, const RateParams& rates,
                     const NetworkModel& model) {
    const double theta = rates.theta_u();
    int Mmax = 0;
    for (const auto& t : model.tiers) Mmax = std::max(Mmax, t.M);
    std::vector<double> q(Mmax);
    for (int m = 0; m < Mmax; ++m) q[m] = f_m(T_n, theta, m, model);

    RtpBounds b;
    for (std::size_t k = 0; k < model.K(); ++k) {
        if (T_n[k] == 0.0) continue;
        const int M = model.tiers[k].M;
        double den = 0.0;
        for (int m = 0; m < M; ++m) den += (1.0 - double(m) / M) * q[m];
        // same operation order as rtp_exact, so single-antenna tiers give identical values
        b.lower += model.tier_weight(k) * T_n[k] * (1.0 / den);
    }
    b.upper = UpperBound(model, rates).value(T_n);
    return b;
}

std::vector<double> ctp_loss_coeffs(const RateParams& rates, const NetworkModel& model) {
    const double theta = rates.theta_e();
    const double delta = model.delta();
    double D = coeff_W(0, theta, model);
    for (std::size_t k = 0; k < model.K(); ++k) {
        const auto& t = model.tiers[k];
        D += model.tier_weight(k) * coeff_V(0, t.M, t.xi(), theta, delta);
    }
    std::vector<double> g(model.K());
    for (std::size_t k = 0; k < model.K(); ++k) {
        const auto& t = model.tiers[k];
        g[k] = model.tier_weight(k) * std::pow(1.0 + t.xi() * theta, 1 - t.M) / D;
    }
    return g;
}

CtpValue ctp(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model) {
    if (!(rates.theta_e() > 0.0)) throw DomainError("ctp: theta_e must be positive");
    const auto g = ctp_loss_coeffs(rates, model);
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * T_n[k];
    return {1.0 - s, rates.R_e() <= 1.0};
}

FileMetrics file_metrics(const std::vector<double>& T_n, const RateParams& rates,
                         const NetworkModel& model) {
    FileMetrics f;
    f.rtp_exact = rtp_exact(T_n, rates, model);
    const auto b = rtp_bounds(T_n, rates, model);
    f.rtp_lower = b.lower;
    f.rtp_upper = b.upper;
    const auto c = ctp(T_n, rates, model);
    f.ctp = c.value;
    f.ctp_approximate = c.approximate;
    return f;
}

AvgMetrics avg_metrics(const CachingMatrix& T, const Catalog& catalog, const RateParams& rates,
                       const NetworkModel& model, RtpVariant which) {
    AvgMetrics r;
    const auto g = ctp_loss_coeffs(rates, model);
    const UpperBound ub(model, rates);
    for (std::size_t n = 0; n < catalog.N(); ++n) {
        const auto Tn = T.row(n);
        double rtp = 0.0;
        switch (which) {
            case RtpVariant::exact: rtp = rtp_exact(Tn, rates, model); break;
            case RtpVariant::upper: rtp = ub.value(Tn); break;
            case RtpVariant::lower: rtp = rtp_bounds(Tn, rates, model).lower; break;
        }
        double loss = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) loss += g[k] * Tn[k];
        r.avg_rtp += catalog.a[n] * rtp;
        r.avg_ctp += catalog.a[n] * (1.0 - loss);
    }
    return r;
}

UpperBound::UpperBound(const NetworkModel& model, const RateParams& rates) : K_(model.K()) {
    const double theta = rates.theta_u();
    for (std::size_t j = 0; j < K_; ++j) {
        const int M = model.tiers[j].M;
        const double S = std::pow(factorial(M), -1.0 / M);
        for (int m = 1; m <= M; ++m) {
            const double coef = -binomial(M, m) * sign_pow(m) * model.tier_weight(j);
            terms_.push_back({j, m, coef, affine_f0(m * S * theta, model)});
        }
    }
}

double UpperBound::value(const std::vector<double>& T_n) const {
    double s = 0.0;
    for (const auto& t : terms_)
        if (T_n[t.tier] != 0.0) s += t.coef * T_n[t.tier] / t.f0(T_n);
    return s;
}

std::vector<double> UpperBound::gradient(const std::vector<double>& T_n) const {
    std::vector<double> g(K_, 0.0);
    for (const auto& t : terms_) {
        const double f = t.f0(T_n);
        const double c = t.coef / (f * f);
        g[t.tier] += c * f;
        for (std::size_t k = 0; k < K_; ++k) g[k] -= c * T_n[t.tier] * t.f0.slope[k];
    }
    return g;
}

double UpperBound::part(const std::vector<double>& T_n, int parity) const {
    // Odd terms carry coef > 0, even terms coef < 0; both parts are sums of positive terms.
    double s = parity % 2 == 0 ? 1.0 : 0.0;
    for (const auto& t : terms_)
        if (t.m % 2 == parity % 2 && T_n[t.tier] != 0.0) s += std::abs(t.coef) * T_n[t.tier] / t.f0(T_n);
    return s;
}

std::vector<double> UpperBound::part_gradient(const std::vector<double>& T_n, int parity) const {
    std::vector<double> g(K_, 0.0);
    for (const auto& t : terms_) {
        if (t.m % 2 != parity % 2) continue;
        const double f = t.f0(T_n);
        const double c = std::abs(t.coef) / (f * f);
        g[t.tier] += c * f;
        for (std::size_t k = 0; k < K_; ++k) g[k] -= c * T_n[t.tier] * t.f0.slope[k];
    }
    return g;
}

double UpperBound::average(const CachingMatrix& T, const Catalog& catalog) const {
    double s = 0.0;
    for (std::size_t n = 0; n < catalog.N(); ++n) s += catalog.a[n] * value(T.row(n));
    return s;
}

Matrix UpperBound::average_gradient(const CachingMatrix& T, const Catalog& catalog) const {
    Matrix G(T.rows, T.cols);
    for (std::size_t n = 0; n < T.rows; ++n) {
        const auto g = gradient(T.row(n));
        for (std::size_t k = 0; k < T.cols; ++k) G(n, k) = catalog.a[n] * g[k];
    }
    return G;
}

double rtp_upper(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model) {
    return UpperBound(model, rates).value(T_n);
}

Matrix grad_avg_rtp_upper(const CachingMatrix& T, const Catalog& catalog, const RateParams& rates,
                          const NetworkModel& model) {
    return UpperBound(model, rates).average_gradient(T, catalog);
}

namespace {

void require_homogeneous(const NetworkModel& model, const char* what) {
    if (!model.homogeneous())
        throw ConfigError(std::string(what) + " requires a common antenna count and power split");
}

}  // namespace

std::vector<double> grad_pu1(const std::vector<double>& T_n, const RateParams& rates,
                             const NetworkModel& model) {
    require_homogeneous(model, "grad_pu1");
    return UpperBound(model, rates).part_gradient(T_n, 1);
}

std::vector<double> grad_pu2(const std::vector<double>& T_n, const RateParams& rates,
                             const NetworkModel& model) {
    require_homogeneous(model, "grad_pu2");
    return UpperBound(model, rates).part_gradient(T_n, 2);
}

double pu_part(const std::vector<double>& T_n, int parity, const RateParams& rates,
               const NetworkModel& model) {
    require_homogeneous(model, "pu_part");
    return UpperBound(model, rates).part(T_n, parity);
}

double threshold_ctp(const std::vector<double>& T_n, std::size_t k, const RateParams& rates,
                     const NetworkModel& model) {
    const double delta = model.delta();
    const double theta_e = rates.theta_e();
    auto leak = [&](std::size_t j) {
        const auto& t = model.tiers[j];
        return std::pow(1.0 + t.xi() * theta_e, 1 - t.M);
    };
    double num = 0.0, den = coeff_W(0, theta_e, model);
    for (std::size_t j = 0; j < model.K(); ++j) {
        if (j == k) continue;
        const auto& t = model.tiers[j];
        num += model.tier_weight(j) * T_n[j] * leak(j);
        den += model.tier_weight(j) * coeff_V(0, t.M, t.xi(), theta_e, delta);
    }
    den *= leak(k);
    const auto& tk = model.tiers[k];
    return den == 0.0 ? 0.0 : coeff_V(0, tk.M, tk.xi(), theta_e, delta) * num / den;
}

Thresholds thresholds(const std::vector<double>& T_n, std::size_t k, const RateParams& rates,
                      const NetworkModel& model) {
    require_homogeneous(model, "thresholds");
    const double delta = model.delta();
    const auto& tier = model.tiers.front();
    const int M = tier.M;
    const double theta_u = rates.theta_u();
    double Vbar = 0.0, Wbar = 0.0;
    for (int m = 0; m < M; ++m) {
        const double w = 1.0 - double(m) / M;
        Vbar += w * coeff_V(m, M, tier.xi(), theta_u, delta);
        Wbar += w * coeff_W(m, theta_u, model);
    }
    double cross_T = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < model.K(); ++i) {
        if (i == k) continue;
        cross_T += model.tier_weight(i) * T_n[i];
        cross += model.tier_weight(i);
    }
    const double den = Vbar * cross + Wbar;
    // A single tier has empty cross sums and no sign flip.
    return {den == 0.0 ? 0.0 : Vbar * cross_T / den, threshold_ctp(T_n, k, rates, model)};
}

double association_prob(const std::vector<double>& T_n, std::size_t j, const NetworkModel& model) {
    double den = 0.0;
    for (std::size_t k = 0; k < model.K(); ++k) den += model.tier_weight(k) * T_n[k];
    if (!(den > 0.0)) throw DomainError("association_prob: file is not cached in any tier");
    return model.tier_weight(j) * T_n[j] / den;
}

}  // namespace seccache
