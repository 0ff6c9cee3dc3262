#include "bellcert/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bellcert {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr long kMaxIters = 200000;

struct Tableau {
    Eigen::MatrixXd t;        // m rows of constraints + 1 objective row; last col rhs
    std::vector<int> basis;   // basic variable per row
    long iterations = 0;

    int rows() const { return int(t.rows()) - 1; }
    int cols() const { return int(t.cols()) - 1; }

    void pivot(int r, int c) {
        t.row(r) /= t(r, c);
        for (int i = 0; i < int(t.rows()); ++i) {
            if (i == r) continue;
            const double f = t(i, c);
            if (std::abs(f) > 0.0) t.row(i) -= f * t.row(r);
        }
        basis[size_t(r)] = c;
    }

    // Dantzig pricing normally; a run of degenerate pivots switches to
    // Bland's rule (smallest improving column, leaving row with the smallest
    // basic index) until progress resumes, which prevents cycling.
    LpStatus iterate(int usable_cols) {
        const int m = rows();
        const int obj = m;
        int degenerate_run = 0;
        while (true) {
            if (++iterations > kMaxIters) return LpStatus::iteration_limit;
            const bool bland = degenerate_run > 40;
            int enter = -1;
            double most_negative = -kCostTol;
            for (int j = 0; j < usable_cols; ++j) {
                if (t(obj, j) < most_negative) {
                    enter = j;
                    if (bland) break;
                    most_negative = t(obj, j);
                }
            }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m; ++i) {
                const double a = t(i, enter);
                if (a > kPivotTol) {
                    const double ratio = t(i, cols()) / a;
                    if (leave < 0 || ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && basis[size_t(i)] < basis[size_t(leave)])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
            pivot(leave, enter);
        }
    }
};

} // namespace

void LpProblem::validate() const {
    const auto n = objective.size();
    if (equality_matrix.cols() != n || lower_bounds.size() != n)
        throw std::invalid_argument("LP dimensions are inconsistent");
    if (equality_matrix.rows() != equality_rhs.size())
        throw std::invalid_argument("LP rhs does not match the constraint count");
    if (!equality_rhs.allFinite() || !objective.allFinite())
        throw std::invalid_argument("LP data must be finite");
}

LpResult lp_solve(const LpProblem& p) {
    p.validate();
    const int n_orig = int(p.objective.size());
    const int m = int(p.equality_matrix.rows());

    // shift finite lower bounds to zero, split free variables into x+ - x-
    std::vector<int> split; // original index of each appended negative part
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(n_orig);
    for (int j = 0; j < n_orig; ++j) {
        if (std::isfinite(p.lower_bounds[j]))
            shift[j] = p.lower_bounds[j];
        else
            split.push_back(j);
    }
    const int n = n_orig + int(split.size());

    Eigen::MatrixXd A(m, n);
    A.leftCols(n_orig) = p.equality_matrix;
    Eigen::VectorXd c(n);
    c.head(n_orig) = p.objective;
    for (size_t s = 0; s < split.size(); ++s) {
        A.col(n_orig + int(s)) = -p.equality_matrix.col(split[s]);
        c[n_orig + long(s)] = -p.objective[split[s]];
    }
    Eigen::VectorXd b = p.equality_rhs - p.equality_matrix * shift;

    // phase 1 tableau with artificials
    Tableau tab;
    tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
    tab.basis.resize(size_t(m));
    for (int i = 0; i < m; ++i) {
        const double sg = b[i] < 0 ? -1.0 : 1.0;
        tab.t.block(i, 0, 1, n) = sg * A.row(i);
        tab.t(i, n + i) = 1.0;
        tab.t(i, n + m) = sg * b[i];
        tab.basis[size_t(i)] = n + i;
    }
    for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i); // price out artificials

    LpResult res;
    LpStatus st = tab.iterate(n); // artificials never re-enter
    res.iterations = tab.iterations;
    if (st == LpStatus::iteration_limit) {
        res.status = st;
        return res;
    }
    if (tab.t(m, n + m) < -1e-7) {
        res.status = LpStatus::infeasible;
        return res;
    }

    // drive leftover artificials out of the basis; rows that cannot pivot are
    // redundant and get neutralized
    for (int i = 0; i < m; ++i) {
        if (tab.basis[size_t(i)] < n) continue;
        int piv = -1;
        for (int j = 0; j < n; ++j) {
            if (std::abs(tab.t(i, j)) > kPivotTol) {
                piv = j;
                break;
            }
        }
        if (piv >= 0)
            tab.pivot(i, piv);
        else
            tab.t.row(i).setZero();
    }

    // phase 2 objective
    tab.t.row(m).setZero();
    tab.t.block(m, 0, 1, n) = c.transpose();
    for (int i = 0; i < m; ++i) {
        const int bv = tab.basis[size_t(i)];
        if (bv < n && std::abs(tab.t(m, bv)) > 0.0) tab.t.row(m) -= tab.t(m, bv) * tab.t.row(i);
    }

    st = tab.iterate(n);
    res.iterations = tab.iterations;
    if (st != LpStatus::optimal) {
        res.status = st;
        return res;
    }

    Eigen::VectorXd xs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (tab.basis[size_t(i)] < n) xs[tab.basis[size_t(i)]] = tab.t(i, n + m);

    res.x = xs.head(n_orig) + shift;
    for (size_t s = 0; s < split.size(); ++s) res.x[split[s]] -= xs[n_orig + long(s)];
    res.objective = p.objective.dot(res.x);
    res.feasibility_residual =
        (p.equality_matrix * res.x - p.equality_rhs).cwiseAbs().maxCoeff();
    res.status = LpStatus::optimal;
    return res;
}

} // namespace bellcert
