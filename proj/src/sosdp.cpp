#include "bellcert/sosdp.hpp"

#include <cmath>

#include "bellcert/analytic.hpp"

namespace bellcert {

double epsilon_for_rate(int n, double r, EpsilonBranch branch) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (r < n - 1 - 1e-12 || r > n + 1e-12)
        throw std::invalid_argument("rate must lie in [n-1, n]");
    const double target = std::clamp(r - (n - 1), 0.0, 1.0);
    const double scale = std::pow(2.0, n - 1);
    // endpoints first: hbin is flat at the top, so bisection cannot separate
    // them numerically
    if (target >= 1.0 - 1e-15) return 0.5 / scale;
    if (target <= 1e-15) return branch == EpsilonBranch::low ? 0.0 : 1.0 / scale;
    // hbin is monotone on each half; bisect u = 2^{n-1} eps to 1e-15
    double lo = branch == EpsilonBranch::low ? 0.0 : 0.5;
    double hi = branch == EpsilonBranch::low ? 0.5 : 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool below = hbin(mid) < target;
        const bool go_up = (branch == EpsilonBranch::low) ? below : !below;
        (go_up ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / scale;
}

void SdpProblem::validate() const {
    if (constraints.empty()) throw std::invalid_argument("SDP problem has no constraints");
    if (basis.empty()) throw std::invalid_argument("SDP problem has an empty basis");
}

SdpProblem assemble(int n, const CorrelatorExpression& functional, double r,
                    EpsilonBranch branch) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (functional.n_parties != n)
        throw std::invalid_argument("functional party count does not match n");
    for (const auto& [x, c] : functional.coeffs)
        if (x >= (1u << n)) throw std::invalid_argument("functional input string out of range");

    SdpProblem p;
    p.n_parties = n;
    p.rate = r;
    p.epsilon_r = epsilon_for_rate(n, r, branch);
    p.basis = monomial_basis(n);
    p.functional = functional;

    const int d = p.gram_dim();
    const double corr0 = std::pow(2.0, n) * p.epsilon_r - 1.0; // pinned <A_0>

    // coefficient pattern F^E over the basis
    std::map<Word, Eigen::MatrixXd> fmap;
    for (int mu = 0; mu < d; ++mu) {
        const Word amu = p.basis[size_t(mu)].adjoint();
        for (int nu = 0; nu < d; ++nu) {
            const Word e = word_product(amu, p.basis[size_t(nu)]);
            auto it = fmap.find(e);
            if (it == fmap.end()) it = fmap.emplace(e, Eigen::MatrixXd::Zero(d, d)).first;
            it->second(mu, nu) += 1.0;
        }
    }

    auto push_constraint = [&](const Word& e, bool imag, const Eigen::MatrixXd& g,
                               double rhs0, double rhs_t, double rhs_z) {
        SdpProblem::Constraint c;
        c.word = e;
        c.imag = imag;
        c.rhs0 = rhs0;
        c.rhs_t = rhs_t;
        c.rhs_z = rhs_z;
        const Eigen::MatrixXd a = 0.5 * (g + g.transpose());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                if (a(i, j) != 0.0) c.entries.push_back({i, j, a(i, j)});
        p.constraints.push_back(std::move(c));
    };

    for (const auto& [e, f] : fmap) {
        const Word ea = e.adjoint();
        if (ea < e) continue; // one constraint set per conjugate pair
        // target coefficient of this word
        double rhs0 = 0.0, rhs_t = 0.0, rhs_z = 0.0;
        if (e.is_identity()) {
            rhs_t = 1.0;
            rhs_z = corr0;
        } else if (e.is_full_correlator()) {
            const uint32_t x = e.correlator_inputs();
            auto it = functional.coeffs.find(x);
            if (it != functional.coeffs.end()) rhs0 = -it->second;
            if (x == 0) rhs_z = -1.0;
        }
        // real part: sum F (X_top + X_bottom)/2
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * d, 2 * d);
        g.topLeftCorner(d, d) = 0.5 * f;
        g.bottomRightCorner(d, d) = 0.5 * f;
        push_constraint(e, false, g, rhs0, rhs_t, rhs_z);
        if (!(e == ea)) {
            // imaginary part: sum F Y = 0
            g.setZero();
            g.bottomLeftCorner(d, d) = 0.5 * f;
            g.topRightCorner(d, d) = -0.5 * f;
            push_constraint(e, true, g, 0.0, 0.0, 0.0);
        }
    }
    return p;
}

CertificateCheck verify_certificate(const SdpProblem& p, const SdpSolution& s) {
    const int d = p.gram_dim();
    if (s.gram.rows() != d || s.gram.cols() != d)
        throw std::invalid_argument("solution Gram size does not match problem");

    std::map<Word, std::complex<double>> recon;
    for (int mu = 0; mu < d; ++mu) {
        const Word amu = p.basis[size_t(mu)].adjoint();
        for (int nu = 0; nu < d; ++nu)
            recon[word_product(amu, p.basis[size_t(nu)])] += s.gram(mu, nu);
    }

    const double corr0 = std::pow(2.0, p.n_parties) * p.epsilon_r - 1.0;
    CertificateCheck chk;
    for (const auto& [e, val] : recon) {
        std::complex<double> target(0.0, 0.0);
        if (e.is_identity()) {
            target = s.t_opt + s.z_opt * corr0;
        } else if (e.is_full_correlator()) {
            const uint32_t x = e.correlator_inputs();
            auto it = p.functional.coeffs.find(x);
            if (it != p.functional.coeffs.end()) target = -it->second;
            if (x == 0) target -= s.z_opt;
        }
        chk.max_coeff_error = std::max(chk.max_coeff_error, std::abs(val - target));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s.gram);
    chk.min_eigenvalue = eig.eigenvalues().minCoeff();
    return chk;
}

std::vector<SdpTradeoffPoint> tradeoff_upper(int n, const CorrelatorExpression& functional,
                                             const std::vector<double>& r_grid, double tol) {
    for (double r : r_grid)
        if (r < n - 1 - 1e-12 || r > n + 1e-12)
            throw std::invalid_argument("rate grid must lie in [n-1, n]");
    std::vector<SdpTradeoffPoint> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        SdpTradeoffPoint pt;
        pt.r = r;
        const SdpProblem plo = assemble(n, functional, r, EpsilonBranch::low);
        const SdpProblem phi = assemble(n, functional, r, EpsilonBranch::high);
        pt.epsilon_low = plo.epsilon_r;
        pt.epsilon_high = phi.epsilon_r;
        const SdpSolution slo = solve(plo, tol);
        const SdpSolution shi = solve(phi, tol);
        pt.t_low = slo.t_opt;
        pt.t_high = shi.t_opt;
        // only converged solves certify a bound; an unconverged branch taints
        // the point's status but never contributes its value
        const bool ok_lo = slo.status == SdpStatus::optimal;
        const bool ok_hi = shi.status == SdpStatus::optimal;
        const SdpSolution* best = nullptr;
        if (ok_lo) best = &slo;
        if (ok_hi && (!best || shi.t_opt > best->t_opt)) best = &shi;
        if (!best) best = (shi.t_opt > slo.t_opt) ? &shi : &slo;
        pt.t_opt = best->t_opt;
        pt.gap = best->dual_gap;
        pt.status = (ok_lo && ok_hi) ? SdpStatus::optimal : SdpStatus::iteration_limit;
        out.push_back(pt);
    }
    return out;
}

} // namespace bellcert
