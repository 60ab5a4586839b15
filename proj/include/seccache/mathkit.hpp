#pragma once

#include <stdexcept>
#include <vector>

namespace seccache {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// First column of an M x M lower-triangular Toeplitz matrix.
struct LowerToeplitz {
    std::vector<double> first_column;
};

enum class Poch { falling, rising };

// Gauss hypergeometric 2F1(a,b;c;z) for real arguments with z < 1.
double gauss_2f1(double a, double b, double c, double z);

double ln_gamma(double x);

double factorial_poch(double x, unsigned m, Poch kind);

// Induced L1 norm of the inverse of a lower-triangular Toeplitz matrix.
double toeplitz_inv_l1(const LowerToeplitz& q);

// First column of the inverse (itself lower-triangular Toeplitz).
std::vector<double> toeplitz_inv_column(const LowerToeplitz& q);

double binomial(unsigned n, unsigned k);

}  // namespace seccache
