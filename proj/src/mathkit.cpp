#include "seccache/mathkit.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>
#include <utility>

namespace seccache {

namespace {

constexpr int kMaxTerms = 10000;
constexpr double kRelStop = 1e-16;

bool is_nonpositive_integer(double c) {
    return c <= 0.0 && c == std::floor(c);
}

// Plain Gauss series, valid for 0 <= z < 1.
double series_2f1(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0 || std::abs(term) <= kRelStop * std::abs(sum)) return sum;
    }
    throw ConvergenceError("gauss_2f1: series did not converge within " +
                           std::to_string(kMaxTerms) + " terms");
}

double rgamma(double x) { return is_nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

// 0 <= z < 1. Close to 1 the series is slow; the connection formula around z = 1 maps the
// argument to 1 - z unless c - a - b is (nearly) an integer, where its two terms cancel.
double positive_2f1(double a, double b, double c, double z) {
    const double s = c - a - b;
    if (z <= 0.9 || std::abs(s - std::round(s)) < 1e-5) return series_2f1(a, b, c, z);
    const double gc = std::tgamma(c);
    return gc * std::tgamma(s) * rgamma(c - a) * rgamma(c - b) * series_2f1(a, b, 1.0 - s, 1.0 - z) +
           std::pow(1.0 - z, s) * gc * std::tgamma(-s) * rgamma(a) * rgamma(b) *
               series_2f1(c - a, c - b, 1.0 + s, 1.0 - z);
}

}  // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
        throw DomainError("gauss_2f1: non-finite argument");
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c is a non-positive integer");
    if (z >= 1.0) throw DomainError("gauss_2f1: z must be below 1");
    if (z == 0.0) return 1.0;
    if (z > 0.0) return positive_2f1(a, b, c, z);

    // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
    // Pulling out the smaller parameter gives the faster decaying series.
    if (b < a) std::swap(a, b);
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * positive_2f1(a, c - b, c, w);
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive");
    return boost::math::lgamma(x);
}

double factorial_poch(double x, unsigned m, Poch kind) {
    double r = 1.0;
    const double dir = kind == Poch::rising ? 1.0 : -1.0;
    for (unsigned i = 0; i < m; ++i) r *= x + dir * i;
    return r;
}

std::vector<double> toeplitz_inv_column(const LowerToeplitz& q) {
    const auto& col = q.first_column;
    if (col.empty()) throw DomainError("toeplitz: empty first column");
    if (std::abs(col[0]) < 1e-300) throw DomainError("toeplitz: singular matrix");
    const std::size_t M = col.size();
    std::vector<double> x(M);
    x[0] = 1.0 / col[0];
    for (std::size_t m = 1; m < M; ++m) {
        double s = 0.0;
        for (std::size_t j = 1; j <= m; ++j) s += col[j] * x[m - j];
        x[m] = -s / col[0];
    }
    return x;
}

double toeplitz_inv_l1(const LowerToeplitz& q) {
    // Column j of the inverse holds x_0..x_{M-1-j}; the first column dominates.
    double best = 0.0, partial = 0.0;
    for (double v : toeplitz_inv_column(q)) {
        partial += std::abs(v);
        best = std::max(best, partial);
    }
    return best;
}

double binomial(unsigned n, unsigned k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

}  // namespace seccache
