#include "seccache/optimize.hpp"

#include "seccache/mathkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace seccache {

FeasibleSet feasible_set(const Problem& p) {
    FeasibleSet fs;
    fs.N = p.catalog.N();
    fs.K = p.model.K();
    for (const auto& t : p.model.tiers) fs.budget.push_back(t.C);
    const auto g = ctp_loss_coeffs(p.rates, p.model);
    fs.ctp_coef = Matrix(fs.N, fs.K);
    double asum = 0.0;
    for (std::size_t n = 0; n < fs.N; ++n) {
        asum += p.catalog.a[n];
        for (std::size_t k = 0; k < fs.K; ++k) fs.ctp_coef(n, k) = p.catalog.a[n] * g[k];
    }
    fs.ctp_rhs = asum - p.rates.epsilon;
    fs.epsilon = p.rates.epsilon;
    return fs;
}

double FeasibleSet::ctp_loss(const Matrix& T) const {
    double s = 0.0;
    for (std::size_t i = 0; i < T.data.size(); ++i) s += ctp_coef.data[i] * T.data[i];
    return s;
}

double FeasibleSet::min_ctp_loss() const {
    // Each tier fills its budget with the rows of smallest coefficient.
    double total = 0.0;
    std::vector<std::size_t> idx(N);
    for (std::size_t k = 0; k < K; ++k) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t i, std::size_t j) { return ctp_coef(i, k) < ctp_coef(j, k); });
        double left = budget[k];
        for (std::size_t i : idx) {
            const double take = std::clamp(left, 0.0, 1.0);
            total += take * ctp_coef(i, k);
            left -= take;
            if (left <= 0.0) break;
        }
    }
    return total;
}

namespace {

// x = clamp(v - nu, 0, 1) with sum x = C; s(nu) is piecewise linear with breakpoints v and v - 1.
void project_column(const std::vector<double>& v, double C, std::vector<double>& x) {
    const std::size_t N = v.size();
    x.assign(N, 0.0);
    if (C >= double(N)) {
        std::fill(x.begin(), x.end(), 1.0);
        return;
    }
    if (C <= 0.0) return;

    std::vector<std::pair<double, int>> bp;
    bp.reserve(2 * N);
    for (double vi : v) {
        bp.emplace_back(vi - 1.0, -1);
        bp.emplace_back(vi, +1);
    }
    std::sort(bp.begin(), bp.end());
    double s = double(N), slope = 0.0, prev = bp.front().first, nu = bp.back().first;
    for (const auto& [b, d] : bp) {
        const double sb = s + slope * (b - prev);
        if (sb <= C && slope < 0.0) {
            nu = prev + (s - C) / (-slope);
            break;
        }
        s = sb;
        prev = b;
        slope += d;
    }
    for (std::size_t n = 0; n < N; ++n) x[n] = std::clamp(v[n] - nu, 0.0, 1.0);
}

Matrix project_box_budget(const Matrix& Y, const FeasibleSet& fs, double mu) {
    Matrix X(fs.N, fs.K);
    std::vector<double> v(fs.N), x;
    for (std::size_t k = 0; k < fs.K; ++k) {
        for (std::size_t n = 0; n < fs.N; ++n) v[n] = Y(n, k) - mu * fs.ctp_coef(n, k);
        project_column(v, fs.budget[k], x);
        for (std::size_t n = 0; n < fs.N; ++n) X(n, k) = x[n];
    }
    return X;
}

}  // namespace

CachingMatrix project(const Matrix& T_raw, const FeasibleSet& fs, double tol) {
    if (!fs.nonempty()) throw InfeasibleError("secrecy constraint cannot be met under the cache budgets");
    Matrix X = project_box_budget(T_raw, fs, 0.0);
    if (fs.ctp_loss(X) <= fs.ctp_rhs) return X;

    // The halfspace is active: find mu > 0 with ctp_loss(X(mu)) = rhs; the loss is non-increasing in mu.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && fs.ctp_loss(project_box_budget(T_raw, fs, hi)) > fs.ctp_rhs; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200 && hi - lo > tol * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (fs.ctp_loss(project_box_budget(T_raw, fs, mid)) > fs.ctp_rhs)
            lo = mid;
        else
            hi = mid;
    }
    return project_box_budget(T_raw, fs, hi);
}

CachingMatrix project_dykstra(const Matrix& T_raw, const FeasibleSet& fs, double tol, int max_sweeps) {
    if (!fs.nonempty()) throw InfeasibleError("secrecy constraint cannot be met under the cache budgets");
    const std::size_t sz = T_raw.data.size();
    double cc = 0.0;
    for (double c : fs.ctp_coef.data) cc += c * c;

    Matrix x = T_raw, p1(fs.N, fs.K), p2(fs.N, fs.K), p3(fs.N, fs.K), z(fs.N, fs.K);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const Matrix start = x;
        for (std::size_t i = 0; i < sz; ++i) {
            z.data[i] = x.data[i] + p1.data[i];
            x.data[i] = std::clamp(z.data[i], 0.0, 1.0);
            p1.data[i] = z.data[i] - x.data[i];
        }
        for (std::size_t i = 0; i < sz; ++i) z.data[i] = x.data[i] + p2.data[i];
        for (std::size_t k = 0; k < fs.K; ++k) {
            double s = 0.0;
            for (std::size_t n = 0; n < fs.N; ++n) s += z(n, k);
            const double shift = (s - fs.budget[k]) / double(fs.N);
            for (std::size_t n = 0; n < fs.N; ++n) x(n, k) = z(n, k) - shift;
        }
        for (std::size_t i = 0; i < sz; ++i) {
            p2.data[i] = z.data[i] - x.data[i];
            z.data[i] = x.data[i] + p3.data[i];
        }
        const double excess = fs.ctp_loss(z) - fs.ctp_rhs;
        const double step = excess > 0.0 && cc > 0.0 ? excess / cc : 0.0;
        for (std::size_t i = 0; i < sz; ++i) {
            x.data[i] = z.data[i] - step * fs.ctp_coef.data[i];
            p3.data[i] = z.data[i] - x.data[i];
        }
        if (frobenius_distance(x, start) < tol) return x;
    }
    throw ConvergenceError("project_dykstra: no convergence");
}

FeasibilityReport feasibility(const CachingMatrix& T, const FeasibleSet& fs, double tol) {
    FeasibilityReport r;
    r.ctp_slack = fs.ctp_rhs - fs.ctp_loss(T);
    for (std::size_t n = 0; n < fs.N; ++n)
        for (std::size_t k = 0; k < fs.K; ++k) {
            const double v = T(n, k);
            if (v < -tol || v > 1.0 + tol)
                r.violations.push_back({"box 0 <= T <= 1",
                                        "file " + std::to_string(n + 1) + ", tier " + std::to_string(k + 1),
                                        v < 0.0 ? -v : v - 1.0});
        }
    for (std::size_t k = 0; k < fs.K; ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < fs.N; ++n) s += T(n, k);
        if (std::abs(s - fs.budget[k]) > tol)
            r.violations.push_back({"cache budget", "tier " + std::to_string(k + 1), s - fs.budget[k]});
    }
    if (r.ctp_slack < -tol) r.violations.push_back({"average CTP >= epsilon", "all files", -r.ctp_slack});
    r.feasible = r.violations.empty();
    return r;
}

CachingMatrix baseline(Baseline scheme, const Catalog& catalog, const std::vector<TierParams>& tiers) {
    const std::size_t N = catalog.N();
    Matrix T(N, tiers.size());
    for (std::size_t k = 0; k < tiers.size(); ++k) {
        const double C = tiers[k].C;
        for (std::size_t n = 0; n < N; ++n) {
            if (scheme == Baseline::uniform)
                T(n, k) = C / double(N);
            else
                T(n, k) = double(n) < C ? 1.0 : 0.0;  // catalog is sorted, ties keep index order
        }
    }
    return T;
}

double infeasibility_onset(const CachingMatrix& T, const Problem& p, double tol) {
    double lo = 0.0, hi = 1.0;
    auto feasible_at = [&](double eps) {
        Problem q = p;
        q.rates.epsilon = eps;
        const auto fs = feasible_set(q);
        return fs.ctp_loss(T) <= fs.ctp_rhs;
    };
    if (!feasible_at(lo)) return lo;
    if (feasible_at(hi)) return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible_at(mid) ? lo : hi) = mid;
    }
    return hi;
}

namespace {

void record(OptTrace& tr, const CachingMatrix& T, double obj, const FeasibleSet& fs, double stat,
            double residual) {
    tr.iterates.push_back(T);
    tr.objectives.push_back(obj);
    tr.ctps.push_back(fs.avg_ctp(T));
    tr.stats.push_back(stat);
    tr.residuals.push_back(residual);
}

}  // namespace

OptTrace gpm(const Problem& p, const CachingMatrix& T0, const FeasibleSet& fs, const OptOptions& opts) {
    const UpperBound ub(p.model, p.rates);
    OptTrace tr;
    CachingMatrix T = T0;
    record(tr, T, ub.average(T, p.catalog), fs, 0.0, 0.0);
    const double sign = opts.paper_sign ? -1.0 : 1.0;
    for (int t = 0; t < opts.t_max; ++t) {
        const double zeta = opts.step_c / (2.0 + std::pow(double(t), 0.55));
        Matrix G = ub.average_gradient(T, p.catalog);
        Matrix Y = T;
        for (std::size_t i = 0; i < Y.data.size(); ++i) Y.data[i] += sign * zeta * G.data[i];
        CachingMatrix next = project(Y, fs, opts.proj_tol);
        const double res = frobenius_distance(next, T);
        T = std::move(next);
        tr.iterations = t + 1;
        record(tr, T, ub.average(T, p.catalog), fs, zeta, res);
        if (res < opts.eps_err) {
            tr.converged = true;
            break;
        }
    }
    return tr;
}

namespace {

struct Surrogate {
    const Problem& p;
    const UpperBound& ub;
    Matrix lin;  // a_n grad p^{U,2}(T_t)

    double value(const Matrix& T) const {
        double s = 0.0;
        for (std::size_t n = 0; n < T.rows; ++n) {
            const auto Tn = T.row(n);
            s += p.catalog.a[n] * ub.part(Tn, 1);
            for (std::size_t k = 0; k < T.cols; ++k) s -= lin(n, k) * Tn[k];
        }
        return s;
    }
    Matrix gradient(const Matrix& T) const {
        Matrix G(T.rows, T.cols);
        for (std::size_t n = 0; n < T.rows; ++n) {
            const auto g = ub.part_gradient(T.row(n), 1);
            for (std::size_t k = 0; k < T.cols; ++k) G(n, k) = p.catalog.a[n] * g[k] - lin(n, k);
        }
        return G;
    }
};

double inner(const Matrix& x, const Matrix& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.data.size(); ++i) s += x.data[i] * y.data[i];
    return s;
}

}  // namespace

SubproblemResult ccp_subproblem(const Problem& p, const UpperBound& ub, const CachingMatrix& T_t,
                                const FeasibleSet& fs, const OptOptions& opts) {
    if (!p.model.homogeneous())
        throw ConfigError("ccp requires a common antenna count and power split across tiers");
    Surrogate S{p, ub, Matrix(T_t.rows, T_t.cols)};
    for (std::size_t n = 0; n < T_t.rows; ++n) {
        const auto g = ub.part_gradient(T_t.row(n), 2);
        for (std::size_t k = 0; k < T_t.cols; ++k) S.lin(n, k) = p.catalog.a[n] * g[k];
    }

    // Projected gradient ascent with Barzilai-Borwein trial steps and backtracking. For a concave
    // surrogate f(x+d) - f(x) >= <g(x+d), d>, so the acceptance test needs gradients only and is
    // not defeated by rounding in f once the steps become tiny.
    SubproblemResult r{T_t, 0, 0.0};
    Matrix& x = r.T;
    const double f_start = S.value(x);
    double step = 1.0;
    Matrix g = S.gradient(x), y(x.rows, x.cols), xn, gn, d;
    double best = HUGE_VAL;
    int best_it = 0;
    for (int it = 0; it < opts.inner_max; ++it) {
        for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] = x.data[i] + g.data[i];
        r.residual = frobenius_distance(project(y, fs, opts.proj_tol), x);
        r.iterations = it;
        if (r.residual <= opts.inner_tol) break;
        // At the rounding floor the residual stops improving; further steps are noise.
        if (r.residual < 0.999 * best) {
            best = r.residual;
            best_it = it;
        } else if (it - best_it > 100) {
            break;
        }

        bool accepted = false;
        // Below this step the increase is under the rounding level of <g, d>.
        while (!accepted && step >= 1e-12) {
            for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] = x.data[i] + step * g.data[i];
            xn = project(y, fs, opts.proj_tol);
            d = xn;
            for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= x.data[i];
            gn = S.gradient(xn);
            accepted = inner(gn, d) >= 0.5 * inner(d, d) / step;
            if (!accepted) step *= 0.5;
        }
        if (!accepted) break;
        const double ss = inner(d, d);
        double sy = 0.0;
        for (std::size_t i = 0; i < d.data.size(); ++i) sy -= d.data[i] * (gn.data[i] - g.data[i]);
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(step * 2.0, 1e10);
        x = std::move(xn);
        g = std::move(gn);
    }
    if (r.residual > opts.inner_tol * 1e3)
        throw ConvergenceError("ccp_subproblem: inner solver did not converge");
    // Rounding in the last steps must not undo the ascent property of the outer loop.
    if (S.value(x) < f_start) x = T_t;
    return r;
}

OptTrace ccp(const Problem& p, const CachingMatrix& T0, const FeasibleSet& fs, const OptOptions& opts) {
    if (!p.model.homogeneous())
        throw ConfigError("ccp requires a common antenna count and power split across tiers");
    const UpperBound ub(p.model, p.rates);
    OptTrace tr;
    CachingMatrix T = T0;
    record(tr, T, ub.average(T, p.catalog), fs, 0.0, 0.0);
    for (int t = 0; t < opts.t_max; ++t) {
        auto sub = ccp_subproblem(p, ub, T, fs, opts);
        const double res = frobenius_distance(sub.T, T);
        T = std::move(sub.T);
        tr.iterations = t + 1;
        record(tr, T, ub.average(T, p.catalog), fs, sub.iterations, res);
        if (res < opts.eps_err) {
            tr.converged = true;
            break;
        }
    }
    return tr;
}

CachingMatrix random_start(const FeasibleSet& fs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix Y(fs.N, fs.K);
    for (std::size_t k = 0; k < fs.K; ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < fs.N; ++n) s += Y(n, k) = unif(rng);
        for (std::size_t n = 0; n < fs.N; ++n) Y(n, k) *= s > 0.0 ? fs.budget[k] / s : 0.0;
    }
    return project(Y, fs);
}

}  // namespace seccache
