#include "bellcert/dilution.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "bellcert/bellexpr.hpp"
#include "bellcert/lp.hpp"

namespace bellcert {

namespace {

void check_vertex_guard(int n) {
    if (n < 1) throw std::invalid_argument("party count must be positive");
    if (n > 6) throw resource_limit_error("deterministic vertex tables limited to 6 parties");
}

} // namespace

Behavior deterministic_behavior(int n, uint64_t strategy_index) {
    check_vertex_guard(n);
    const uint32_t dim = 1u << n;
    Behavior b;
    b.n_parties = n;
    b.table.assign(size_t(dim) * dim, 0.0);
    for (uint32_t x = 0; x < dim; ++x) {
        uint32_t a = 0;
        for (int k = 0; k < n; ++k) {
            const uint32_t r = (strategy_index >> (2 * k)) & 3u;
            a |= deterministic_response(r, (x >> k) & 1u) << k;
        }
        b.at(x, a) = 1.0;
    }
    return b;
}

std::vector<Behavior> deterministic_vertices(int n) {
    check_vertex_guard(n);
    const uint64_t count = uint64_t(1) << (2 * n);
    std::vector<Behavior> out;
    out.reserve(size_t(count));
    for (uint64_t lam = 0; lam < count; ++lam) out.push_back(deterministic_behavior(n, lam));
    return out;
}

DilutionResult dilution(const Behavior& behavior_in) {
    behavior_in.validate();
    const int n = behavior_in.n_parties;
    check_vertex_guard(n);
    const uint32_t dim = 1u << n;
    const size_t n_cells = size_t(dim) * dim;
    const size_t n_vertices = size_t(1) << (2 * n);

    // variables: w_0..w_{V-1} (= q + eps, >= 0) and eps (>= 0)
    // rows: one per (x,a) cell, plus normalization
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(long(n_cells) + 1, long(n_vertices) + 1);
    Eigen::VectorXd rhs(long(n_cells) + 1);
    for (uint64_t lam = 0; lam < n_vertices; ++lam) {
        const Behavior d = deterministic_behavior(n, lam);
        for (size_t cell = 0; cell < n_cells; ++cell)
            if (d.table[cell] != 0.0) A(long(cell), long(lam)) = 1.0;
        A(long(n_cells), long(lam)) = 1.0;
    }
    const double vertex_sum = std::pow(2.0, n); // sum_l d_l(a|x) for every cell
    for (size_t cell = 0; cell < n_cells; ++cell) {
        A(long(cell), long(n_vertices)) = -vertex_sum;
        rhs[long(cell)] = behavior_in.table[cell];
    }
    A(long(n_cells), long(n_vertices)) = -double(n_vertices);
    rhs[long(n_cells)] = 1.0;

    // The behavior rows are heavily rank-deficient; keep an independent subset
    // via column-pivoted QR of A^T (pivot tolerance 1e-10).
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    qr.setThreshold(1e-10);
    const long rank = qr.rank();
    std::vector<long> keep(qr.colsPermutation().indices().data(),
                           qr.colsPermutation().indices().data() + rank);
    std::sort(keep.begin(), keep.end());

    LpProblem lp;
    lp.objective = Eigen::VectorXd::Zero(long(n_vertices) + 1);
    lp.objective[long(n_vertices)] = 1.0;
    lp.lower_bounds = Eigen::VectorXd::Zero(long(n_vertices) + 1);
    lp.equality_matrix.resize(rank, long(n_vertices) + 1);
    lp.equality_rhs.resize(rank);
    for (long i = 0; i < rank; ++i) {
        lp.equality_matrix.row(i) = A.row(keep[size_t(i)]);
        lp.equality_rhs[i] = rhs[keep[size_t(i)]];
    }

    const LpResult sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal)
        throw solver_error("dilution LP did not reach an optimum (status " +
                           std::to_string(int(sol.status)) + ", " +
                           std::to_string(sol.iterations) + " iterations)");

    DilutionResult out;
    const double eps = sol.x[long(n_vertices)];
    out.epsilon = eps < 0.0 ? 0.0 : eps;
    out.weights.resize(n_vertices);
    for (size_t l = 0; l < n_vertices; ++l) out.weights[l] = sol.x[long(l)] - eps;

    // reconstruction residual against the full original system
    Eigen::VectorXd recon = A * sol.x - rhs;
    out.residual = recon.cwiseAbs().maxCoeff();
    return out;
}

} // namespace bellcert
