#pragma once

#include "seccache/analytic.hpp"
#include "seccache/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seccache {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Problem {
    NetworkModel model;
    Catalog catalog;
    RateParams rates;
};

// box [0,1]^{NxK}, column sums equal to C_k, and sum_{n,k} coef(n,k) T(n,k) <= rhs,
// the last being avg_ctp(T) >= epsilon rewritten with ctp linear in T.
struct FeasibleSet {
    std::size_t N = 0, K = 0;
    std::vector<double> budget;
    Matrix ctp_coef;
    double ctp_rhs = 0.0;
    double epsilon = 0.0;

    // Smallest attainable value of the ctp-loss sum over box and budgets.
    double min_ctp_loss() const;
    double ctp_loss(const Matrix& T) const;
    double avg_ctp(const Matrix& T) const { return ctp_rhs + epsilon - ctp_loss(T); }
    bool nonempty(double tol = 1e-12) const { return min_ctp_loss() <= ctp_rhs + tol; }
};

FeasibleSet feasible_set(const Problem& p);

// Euclidean projection onto the feasible set. Exact dual method: bisection on the
// multiplier of the secrecy halfspace, closed-form breakpoint search per column.
CachingMatrix project(const Matrix& T_raw, const FeasibleSet& fs, double tol = 1e-13);

// Dykstra's alternating projections over {box, budgets, halfspace}; slower, used as a cross-check.
CachingMatrix project_dykstra(const Matrix& T_raw, const FeasibleSet& fs, double tol = 1e-12,
                              int max_sweeps = 200000);

struct FeasibilityReport {
    bool feasible = true;
    double ctp_slack = 0.0;  // avg_ctp(T) - epsilon
    std::vector<Violation> violations;
};
FeasibilityReport feasibility(const CachingMatrix& T, const FeasibleSet& fs, double tol = 1e-7);

enum class Baseline { most_popular, uniform };
CachingMatrix baseline(Baseline scheme, const Catalog& catalog, const std::vector<TierParams>& tiers);

// Smallest epsilon in [0,1] for which T violates the secrecy constraint, by bisection.
double infeasibility_onset(const CachingMatrix& T, const Problem& p, double tol = 1e-10);

struct OptOptions {
    double eps_err = 1e-6;
    int t_max = 100;
    double step_c = 50.0;
    bool paper_sign = false;  // use the printed descent sign in the gradient step
    double inner_tol = 1e-8;
    int inner_max = 20000;
    double proj_tol = 1e-13;
};

struct OptTrace {
    std::vector<CachingMatrix> iterates;
    std::vector<double> objectives;  // average upper-bound RTP
    std::vector<double> ctps;        // average CTP
    std::vector<double> stats;       // step size (gpm) or inner iterations (ccp)
    std::vector<double> residuals;   // ||T^(t) - T^(t-1)||
    bool converged = false;
    int iterations = 0;

    const CachingMatrix& final() const { return iterates.back(); }
    double final_objective() const { return objectives.back(); }
};

OptTrace gpm(const Problem& p, const CachingMatrix& T0, const FeasibleSet& fs,
             const OptOptions& opts = {});

OptTrace ccp(const Problem& p, const CachingMatrix& T0, const FeasibleSet& fs,
             const OptOptions& opts = {});

struct SubproblemResult {
    CachingMatrix T;
    int iterations = 0;
    double residual = 0.0;
};
// Maximizes the concave surrogate with p^{U,2} linearized at T_t.
SubproblemResult ccp_subproblem(const Problem& p, const UpperBound& ub, const CachingMatrix& T_t,
                                const FeasibleSet& fs, const OptOptions& opts = {});

// Projection of a uniform-random budget-scaled matrix.
CachingMatrix random_start(const FeasibleSet& fs, std::uint64_t seed);

}  // namespace seccache
