#pragma once

// Small dense two-phase simplex used as an independent oracle in tests.
// min c^T x  s.t.  a_i^T x {<=,=,>=} b_i,  x >= 0.  Bland's rule, so it
// terminates; problem sizes here are tiny.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lptest {

enum class Rel { Le, Ge, Eq };

struct Constraint {
    std::vector<double> a;
    Rel rel;
    double b;
};

struct LpResult {
    bool feasible = false;
    bool bounded = true;
    double value = 0.0;
    std::vector<double> x;
};

namespace detail {

inline int pivot_col(const std::vector<std::vector<double>>& t, int cols, double tol) {
    // Bland: smallest index with negative reduced cost
    for (int j = 0; j < cols; ++j)
        if (t.back()[j] < -tol) return j;
    return -1;
}

inline int pivot_row(const std::vector<std::vector<double>>& t, int col, int rows, int rhs,
                     const std::vector<int>& basis, double tol) {
    int best = -1;
    double best_ratio = 0;
    for (int i = 0; i < rows; ++i) {
        if (t[i][col] <= tol) continue;
        const double ratio = t[i][rhs] / t[i][col];
        if (best < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[best])) {
            best = i;
            best_ratio = ratio;
        }
    }
    return best;
}

inline void pivot(std::vector<std::vector<double>>& t, std::vector<int>& basis, int row, int col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    for (size_t i = 0; i < t.size(); ++i) {
        if (static_cast<int>(i) == row) continue;
        const double f = t[i][col];
        if (f == 0.0) continue;
        for (size_t j = 0; j < t[i].size(); ++j) t[i][j] -= f * t[row][j];
    }
    basis[row] = col;
}

}  // namespace detail

inline LpResult solve_lp(std::vector<double> c, std::vector<Constraint> cons) {
    const double tol = 1e-11;
    const int n = static_cast<int>(c.size());
    const int m = static_cast<int>(cons.size());
    for (auto& con : cons)
        if (con.b < 0) {
            for (double& v : con.a) v = -v;
            con.b = -con.b;
            con.rel = con.rel == Rel::Le ? Rel::Ge : (con.rel == Rel::Ge ? Rel::Le : Rel::Eq);
        }
    int n_slack = 0, n_art = 0;
    for (const auto& con : cons) {
        if (con.rel != Rel::Eq) ++n_slack;
        if (con.rel != Rel::Le) ++n_art;
    }
    const int cols = n + n_slack + n_art;
    const int rhs = cols;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
    std::vector<int> basis(m, -1);
    int slack_at = n, art_at = n + n_slack;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = cons[i].a[j];
        t[i][rhs] = cons[i].b;
        if (cons[i].rel == Rel::Le) {
            t[i][slack_at] = 1.0;
            basis[i] = slack_at++;
        } else if (cons[i].rel == Rel::Ge) {
            t[i][slack_at++] = -1.0;
            t[i][art_at] = 1.0;
            basis[i] = art_at++;
        } else {
            t[i][art_at] = 1.0;
            basis[i] = art_at++;
        }
    }

    LpResult res;

    // phase 1
    if (n_art > 0) {
        for (int j = n + n_slack; j < cols; ++j) t[m][j] = 1.0;
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n + n_slack)
                for (int j = 0; j <= cols; ++j) t[m][j] -= t[i][j];
        for (;;) {
            const int col = detail::pivot_col(t, cols, tol);
            if (col < 0) break;
            const int row = detail::pivot_row(t, col, m, rhs, basis, tol);
            if (row < 0) break;
            detail::pivot(t, basis, row, col);
        }
        if (t[m][rhs] < -1e-8) return res;  // infeasible
        // drive remaining artificials out of the basis when possible
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n + n_slack) continue;
            int col = -1;
            for (int j = 0; j < n + n_slack; ++j)
                if (std::abs(t[i][j]) > 1e-9) {
                    col = j;
                    break;
                }
            if (col >= 0) detail::pivot(t, basis, i, col);
        }
    }

    // phase 2
    for (int j = 0; j <= cols; ++j) t[m][j] = 0.0;
    for (int j = 0; j < n; ++j) t[m][j] = c[j];
    for (int j = n + n_slack; j < cols; ++j) t[m][j] = 1e9;  // keep artificials parked
    for (int i = 0; i < m; ++i) {
        if (t[m][basis[i]] == 0.0) continue;
        const double f = t[m][basis[i]];
        for (int j = 0; j <= cols; ++j) t[m][j] -= f * t[i][j];
    }
    for (;;) {
        const int col = detail::pivot_col(t, cols, tol);
        if (col < 0) break;
        const int row = detail::pivot_row(t, col, m, rhs, basis, tol);
        if (row < 0) {
            res.feasible = true;
            res.bounded = false;
            return res;
        }
        detail::pivot(t, basis, row, col);
    }

    res.feasible = true;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][rhs];
    res.value = 0;
    for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

// --- oracles built on the simplex ---

// classical D_H^eps as an LP: min sum a_x rho_x, sum a_x sigma_x >= 1-eps,
// 0 <= a <= 1; returns the optimal type-II error.
inline double lp_classical_dh_type2(double eps, const std::vector<double>& sigma,
                                    const std::vector<double>& rho) {
    const int k = static_cast<int>(sigma.size());
    std::vector<Constraint> cons;
    Constraint ge{sigma, Rel::Ge, 1.0 - eps};
    cons.push_back(ge);
    for (int i = 0; i < k; ++i) {
        Constraint ub;
        ub.a.assign(k, 0.0);
        ub.a[i] = 1.0;
        ub.rel = Rel::Le;
        ub.b = 1.0;
        cons.push_back(ub);
    }
    const LpResult r = solve_lp(rho, cons);
    if (!r.feasible || !r.bounded) throw std::runtime_error("dh LP oracle failed");
    return r.value;
}

// smooth max-relative entropy LP: variables (p~, u, mu);
// min mu s.t. p~ <= mu q, sum p~ = 1, |p~ - p| <= u, sum u <= 2 eps.
// Returns the optimal mu, or -1 when infeasible.
inline double lp_smooth_dmax_mu(double eps, const std::vector<double>& p,
                                const std::vector<double>& q) {
    const int k = static_cast<int>(p.size());
    const int nv = 2 * k + 1;  // p~ (k), u (k), mu
    std::vector<double> c(nv, 0.0);
    c[nv - 1] = 1.0;
    std::vector<Constraint> cons;
    for (int i = 0; i < k; ++i) {
        Constraint cap;  // p~_i - mu q_i <= 0
        cap.a.assign(nv, 0.0);
        cap.a[i] = 1.0;
        cap.a[nv - 1] = -q[i];
        cap.rel = Rel::Le;
        cap.b = 0.0;
        cons.push_back(cap);
        Constraint d1;  // p~_i - u_i <= p_i
        d1.a.assign(nv, 0.0);
        d1.a[i] = 1.0;
        d1.a[k + i] = -1.0;
        d1.rel = Rel::Le;
        d1.b = p[i];
        cons.push_back(d1);
        Constraint d2;  // -p~_i - u_i <= -p_i
        d2.a.assign(nv, 0.0);
        d2.a[i] = -1.0;
        d2.a[k + i] = -1.0;
        d2.rel = Rel::Le;
        d2.b = -p[i];
        cons.push_back(d2);
    }
    Constraint norm;
    norm.a.assign(nv, 0.0);
    for (int i = 0; i < k; ++i) norm.a[i] = 1.0;
    norm.rel = Rel::Eq;
    norm.b = 1.0;
    cons.push_back(norm);
    Constraint ball;
    ball.a.assign(nv, 0.0);
    for (int i = 0; i < k; ++i) ball.a[k + i] = 1.0;
    ball.rel = Rel::Le;
    ball.b = 2.0 * eps;
    cons.push_back(ball);
    const LpResult r = solve_lp(c, cons);
    if (!r.feasible) return -1.0;
    if (!r.bounded) throw std::runtime_error("smooth dmax LP oracle unbounded");
    return r.value;
}

}  // namespace lptest
