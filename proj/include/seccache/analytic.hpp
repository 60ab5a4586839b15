#pragma once

#include "seccache/model.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace seccache {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Kernels of the reliability expressions; delta = 2/alpha.
double kernel_eta(int m, int i, double xi, double theta, double delta);
double kernel_kappa(int m, int i, double xi, double theta, double delta);

// Per-tier coefficients U_{m,M}(xi,theta), V_{m,M}(xi,theta).
double coeff_U(int m, int M, double xi, double theta, double delta);
double coeff_V(int m, int M, double xi, double theta, double delta);
// Jammer coefficient W_m(theta).
double coeff_W(int m, double theta, const NetworkModel& model);

struct UVW {
    double U = 0.0, V = 0.0, W = 0.0;
};
UVW coeffs_UVW(int m, const TierParams& tier, double theta, const NetworkModel& model);

double f_m(const std::vector<double>& T_n, double theta, int m, const NetworkModel& model);

// f_0(T, theta) is affine in T: sum_k slope_k T_k + offset.
struct AffineF0 {
    std::vector<double> slope;  // Lambda_k(theta)
    double offset = 0.0;        // Psi(theta)
    double operator()(const std::vector<double>& T_n) const;
};
AffineF0 affine_f0(double theta, const NetworkModel& model);

double rtp_exact(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model);

struct RtpBounds {
    double lower = 0.0;
    double upper = 0.0;  // raw value, may exceed 1
};
RtpBounds rtp_bounds(const std::vector<double>& T_n, const RateParams& rates,
                     const NetworkModel& model);

struct CtpValue {
    double value = 1.0;
    bool approximate = false;  // set when R_e <= 1, where the closed form is a bound
};
CtpValue ctp(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model);

// ctp(T_n) = 1 - sum_k g_k T_k; returns g.
std::vector<double> ctp_loss_coeffs(const RateParams& rates, const NetworkModel& model);

struct FileMetrics {
    double rtp_exact = 0.0;
    double rtp_lower = 0.0;
    double rtp_upper = 0.0;
    double ctp = 1.0;
    bool ctp_approximate = false;
};
FileMetrics file_metrics(const std::vector<double>& T_n, const RateParams& rates,
                         const NetworkModel& model);

enum class RtpVariant { exact, upper, lower };

struct AvgMetrics {
    double avg_rtp = 0.0;
    double avg_ctp = 0.0;
};
AvgMetrics avg_metrics(const CachingMatrix& T, const Catalog& catalog, const RateParams& rates,
                       const NetworkModel& model, RtpVariant which);

// Upper-bound RTP as a sum of terms c * T_j / f0(T) with f0 affine in T.
// Precomputed once per (model, rates); every evaluation after that is cheap.
class UpperBound {
public:
    UpperBound(const NetworkModel& model, const RateParams& rates);

    double value(const std::vector<double>& T_n) const;
    std::vector<double> gradient(const std::vector<double>& T_n) const;

    // DC parts: value = p1 - p2 + 1, both concave when tiers are homogeneous.
    // p2 carries the constant m = 0 term (its continuous extension, 1).
    double part(const std::vector<double>& T_n, int parity) const;
    std::vector<double> part_gradient(const std::vector<double>& T_n, int parity) const;

    double average(const CachingMatrix& T, const Catalog& catalog) const;
    Matrix average_gradient(const CachingMatrix& T, const Catalog& catalog) const;

    std::size_t K() const { return K_; }

private:
    struct Term {
        std::size_t tier;
        int m;
        double coef;  // -C(M_j,m)(-1)^m lambda_j (phi_j P_j)^delta
        AffineF0 f0;
    };
    std::size_t K_;
    std::vector<Term> terms_;
};

double rtp_upper(const std::vector<double>& T_n, const RateParams& rates, const NetworkModel& model);

Matrix grad_avg_rtp_upper(const CachingMatrix& T, const Catalog& catalog, const RateParams& rates,
                          const NetworkModel& model);

// Gradients of the concave parts p^{U,1} (odd m) and p^{U,2} (even m).
// Both require tiers with a common antenna count and power split.
std::vector<double> grad_pu1(const std::vector<double>& T_n, const RateParams& rates,
                             const NetworkModel& model);
std::vector<double> grad_pu2(const std::vector<double>& T_n, const RateParams& rates,
                             const NetworkModel& model);
double pu_part(const std::vector<double>& T_n, int parity, const RateParams& rates,
               const NetworkModel& model);

struct Thresholds {
    double T_u_th = 0.0;
    double T_e_th = 0.0;
};
// Caching-probability thresholds at which the effect of P_k and lambda_k flips sign.
// Requires homogeneous tiers.
Thresholds thresholds(const std::vector<double>& T_n, std::size_t k, const RateParams& rates,
                      const NetworkModel& model);

// CTP threshold alone; valid for heterogeneous tiers.
double threshold_ctp(const std::vector<double>& T_n, std::size_t k, const RateParams& rates,
                     const NetworkModel& model);

double association_prob(const std::vector<double>& T_n, std::size_t j, const NetworkModel& model);

}  // namespace seccache
