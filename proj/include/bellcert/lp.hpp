#pragma once

#include <Eigen/Dense>
#include <limits>

namespace bellcert {

// min objective . x  s.t.  equality_matrix x = equality_rhs, x >= lower_bounds
// (entries of lower_bounds may be -inf for free variables).
struct LpProblem {
    Eigen::VectorXd objective;
    Eigen::MatrixXd equality_matrix;
    Eigen::VectorXd equality_rhs;
    Eigen::VectorXd lower_bounds;

    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Eigen::VectorXd x;
    double feasibility_residual = 0.0;
    long iterations = 0;
};

// Dense two-phase simplex with Bland's anti-cycling rule.
LpResult lp_solve(const LpProblem& p);

inline double lp_minus_infinity() { return -std::numeric_limits<double>::infinity(); }

} // namespace bellcert
