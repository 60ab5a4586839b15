#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace seccache {

struct TierParams {
    double lambda = 0.0;  // BS density per m^2
    double P = 0.0;       // transmit power, W
    int M = 1;            // antennas
    double phi = 1.0;     // information power fraction
    double C = 0.0;       // cache size in files

    // AN leakage scale: 0 for a single antenna, (1/phi - 1)/(M - 1) otherwise.
    double xi() const { return M == 1 ? 0.0 : (1.0 / phi - 1.0) / (M - 1); }
};

struct NetworkModel {
    std::vector<TierParams> tiers;
    double lambda_J = 0.0;
    double P_J = 0.0;
    double alpha = 4.0;

    double delta() const { return 2.0 / alpha; }
    std::size_t K() const { return tiers.size(); }
    // lambda_k (phi_k P_k)^delta
    double tier_weight(std::size_t k) const;
    // Same antenna count and power split in every tier.
    bool homogeneous() const;
};

struct Catalog {
    std::vector<double> a;
    // Original index of each sorted entry when popularity was supplied explicitly.
    std::vector<std::size_t> order;

    std::size_t N() const { return a.size(); }
};

// Dense row-major matrix; for caching, rows are files and columns tiers.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double v = 0.0) : rows(r), cols(c), data(r * c, v) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::vector<double> row(std::size_t i) const {
        return {data.begin() + i * cols, data.begin() + (i + 1) * cols};
    }
};

using CachingMatrix = Matrix;

double frobenius_distance(const Matrix& x, const Matrix& y);

struct RateParams {
    double R_u = 1.0;
    double R_s = 0.0;
    double epsilon = 0.0;

    double R_e() const { return R_u - R_s; }
    double theta_u() const;
    double theta_e() const;
};

RateParams rates_from_thresholds(double R_u, double R_e, double epsilon = 0.0);

Catalog zipf_popularity(std::size_t N, double beta);

// Sorts explicit popularity descending (stable) and records the permutation.
Catalog explicit_popularity(std::vector<double> a);

struct Violation {
    std::string constraint;
    std::string where;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const;
};

constexpr double kBudgetTol = 1e-9;

ValidationReport validate_network(const NetworkModel& model);
ValidationReport validate(const NetworkModel& model, const Catalog& catalog, const CachingMatrix& T,
                          const RateParams& rates);

}  // namespace seccache
