#include "bellcert/sosdp.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace bellcert {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kMaxIters = 500;
constexpr double kStepFraction = 0.98;

double trace_product(const std::vector<SdpProblem::MatrixEntry>& a, const MatrixXd& b) {
    double s = 0.0;
    for (const auto& t : a) s += t.value * b(t.row, t.col);
    return s;
}

// Largest step alpha with X + alpha D staying positive definite.
double max_step(const Eigen::LLT<MatrixXd>& lltX, const MatrixXd& d) {
    const MatrixXd l = lltX.matrixL();
    MatrixXd s = l.triangularView<Eigen::Lower>().solve(d);
    s = l.triangularView<Eigen::Lower>().solve(s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (s + s.transpose()),
                                                Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return std::numeric_limits<double>::infinity();
    return -1.0 / lmin;
}

struct Direction {
    MatrixXd dB, dZ;
    VectorXd dy;
    Eigen::Vector2d du;
};

} // namespace

SdpSolution solve(const SdpProblem& p, double tol) {
    p.validate();
    const int n2 = p.real_dim();
    const int m = int(p.constraints.size());

    VectorXd b(m);
    MatrixXd f(m, 2);
    for (int i = 0; i < m; ++i) {
        b[i] = p.constraints[size_t(i)].rhs0;
        f(i, 0) = -p.constraints[size_t(i)].rhs_t;
        f(i, 1) = -p.constraints[size_t(i)].rhs_z;
    }
    const Eigen::Vector2d g(1.0, 0.0); // objective: min t

    double coeff_scale = 1.0;
    for (const auto& [x, c] : p.functional.coeffs) coeff_scale += std::abs(c);
    const double s0 = std::max(1.0, 2.0 * coeff_scale);

    MatrixXd B = s0 * MatrixXd::Identity(n2, n2);
    MatrixXd Z = s0 * MatrixXd::Identity(n2, n2);
    VectorXd y = VectorXd::Zero(m);
    Eigen::Vector2d u(0.0, 0.0);

    auto apply_A = [&](const MatrixXd& x) {
        VectorXd out(m);
        for (int i = 0; i < m; ++i) out[i] = trace_product(p.constraints[size_t(i)].entries, x);
        return out;
    };
    auto apply_At = [&](const VectorXd& v) {
        MatrixXd out = MatrixXd::Zero(n2, n2);
        for (int i = 0; i < m; ++i)
            for (const auto& t : p.constraints[size_t(i)].entries)
                out(t.row, t.col) += v[i] * t.value;
        return out;
    };

    SdpSolution sol;
    const double bnorm = 1.0 + b.cwiseAbs().maxCoeff();

    int it = 0;
    double gap = 1.0, rp_norm = 1.0, rd_norm = 1.0;
    for (; it < kMaxIters; ++it) {
        const double mu = (B * Z).trace() / n2;
        const VectorXd rp = b - apply_A(B) - f * u;
        const MatrixXd rd = -Z - apply_At(y);
        const Eigen::Vector2d rg = g - f.transpose() * y;

        const double pobj = u[0];
        const double dobj = b.dot(y);
        gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        rp_norm = rp.cwiseAbs().maxCoeff() / bnorm;
        rd_norm = rd.cwiseAbs().maxCoeff() / (1.0 + s0);
        const double rg_norm = rg.cwiseAbs().maxCoeff();
        if (gap <= tol && rp_norm <= tol && rd_norm <= tol && rg_norm <= tol) {
            sol.status = SdpStatus::optimal;
            break;
        }

        // factor with a jitter ladder; the iterates turn near-singular close
        // to degenerate optima
        auto factor = [&](MatrixXd& x) {
            Eigen::LLT<MatrixXd> llt(x);
            for (double jitter = 1e-13; llt.info() != Eigen::Success && jitter < 1e-6;
                 jitter *= 100.0) {
                x.diagonal().array() += jitter * std::max(1.0, x.trace() / n2);
                llt.compute(x);
            }
            return llt;
        };
        Eigen::LLT<MatrixXd> lltB = factor(B);
        Eigen::LLT<MatrixXd> lltZ = factor(Z);
        if (lltB.info() != Eigen::Success || lltZ.info() != Eigen::Success) break;

        // Nesterov-Todd scaling point: W Z W = B
        const MatrixXd lb = lltB.matrixL();
        const MatrixXd lz = lltZ.matrixL();
        Eigen::JacobiSVD<MatrixXd> svd(lz.transpose() * lb,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
        const VectorXd sv = svd.singularValues();
        const MatrixXd gm = lb * svd.matrixV() * sv.cwiseSqrt().cwiseInverse().asDiagonal();
        const MatrixXd w = gm * gm.transpose();

        const MatrixXd zinv = lltZ.solve(MatrixXd::Identity(n2, n2));

        // Schur complement M_ij = tr(A_i W A_j W)
        MatrixXd schur(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = i; j < m; ++j) {
                double acc = 0.0;
                for (const auto& ti : p.constraints[size_t(i)].entries)
                    for (const auto& tj : p.constraints[size_t(j)].entries)
                        acc += ti.value * tj.value * w(ti.col, tj.row) *
                               w(tj.col, ti.row);
                schur(i, j) = acc;
                schur(j, i) = acc;
            }
        }
        Eigen::LLT<MatrixXd> lltS(schur);
        if (lltS.info() != Eigen::Success) {
            schur.diagonal().array() += 1e-12 * schur.trace();
            lltS.compute(schur);
            if (lltS.info() != Eigen::Success) break;
        }

        auto solve_direction = [&](const MatrixXd& rc) {
            Direction d;
            const VectorXd r1 = rp - apply_A(rc) + apply_A(w * rd * w);
            const MatrixXd minv_f = lltS.solve(f);
            const Eigen::Matrix2d k = f.transpose() * minv_f;
            d.du = k.ldlt().solve(minv_f.transpose() * r1 - rg);
            d.dy = lltS.solve(r1 - f * d.du);
            d.dZ = rd - apply_At(d.dy);
            d.dB = rc - w * d.dZ * w;
            d.dB = 0.5 * (d.dB + d.dB.transpose()).eval();
            return d;
        };

        // predictor
        Direction aff = solve_direction(-B);
        double ap = std::min(1.0, kStepFraction * max_step(lltB, aff.dB));
        double ad = std::min(1.0, kStepFraction * max_step(lltZ, aff.dZ));
        const double mu_aff =
            ((B + ap * aff.dB) * (Z + ad * aff.dZ)).trace() / n2;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::clamp(sigma, 1e-8, 1.0 - 1e-8);

        // corrector with second-order term
        const MatrixXd t2 = aff.dB * aff.dZ * zinv;
        const MatrixXd rc = sigma * mu * zinv - B - 0.5 * (t2 + t2.transpose());
        Direction dir = solve_direction(rc);

        ap = std::min(1.0, kStepFraction * max_step(lltB, dir.dB));
        ad = std::min(1.0, kStepFraction * max_step(lltZ, dir.dZ));

        B += ap * dir.dB;
        u += ap * dir.du;
        y += ad * dir.dy;
        Z += ad * dir.dZ;
    }

    sol.iterations = it;
    sol.t_opt = u[0];
    sol.z_opt = u[1];
    sol.dual_gap = gap;

    // recover the Hermitian Gram matrix from the realified block
    const int d = p.gram_dim();
    const MatrixXd x = 0.5 * (B.topLeftCorner(d, d) + B.bottomRightCorner(d, d));
    const MatrixXd yim = 0.5 * (B.bottomLeftCorner(d, d) - B.topRightCorner(d, d));
    sol.gram = x.cast<std::complex<double>>() +
               std::complex<double>(0.0, 1.0) * yim.cast<std::complex<double>>();
    sol.gram = 0.5 * (sol.gram + sol.gram.adjoint()).eval();

    const VectorXd final_res = apply_A(B) + f * u - b;
    sol.primal_residual = final_res.cwiseAbs().maxCoeff();
    return sol;
}

} // namespace bellcert
