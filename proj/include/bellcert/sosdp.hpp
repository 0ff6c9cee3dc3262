#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bellcert/bellexpr.hpp"

namespace bellcert {

// Product of projective binary observables, one letter list per party.
// Cross-party factors commute; within a party, order is preserved and
// A_x A_x = I. Canonical words therefore have no adjacent equal letters.
struct Word {
    std::vector<std::vector<uint8_t>> letters;

    static Word identity(int n_parties) { return Word{std::vector<std::vector<uint8_t>>(size_t(n_parties))}; }
    int n_parties() const { return int(letters.size()); }
    bool is_identity() const;
    // True when every party carries at most one letter and none is empty.
    bool is_full_correlator() const;
    uint32_t correlator_inputs() const; // packed x for full-correlator words
    Word adjoint() const;
    size_t length() const;
    std::string str() const;

    bool operator==(const Word& o) const = default;
    bool operator<(const Word& o) const { return letters < o.letters; }
};

Word canonical_reduce(Word w);
Word word_product(const Word& a, const Word& b);

// The fixed relaxation basis: one-letter-per-party products over parties
// 0..ceil(n/2)-1 and over ceil(n/2)..n-1.
std::vector<Word> monomial_basis(int n);

// Which solution of r = n-1 + hbin(2^{n-1} eps) to take: low has
// 2^{n-1} eps <= 1/2 (<A_0> <= 0), high is the mirror distribution.
enum class EpsilonBranch { low, high };

double epsilon_for_rate(int n, double r, EpsilonBranch branch);

// Gram-matrix SOS program: min t such that
//   sum_{mu nu} M^{mu nu} R_mu^† R_nu = (t + z(2^n eps - 1)) I - (F + z A_0),
//   M Hermitian PSD,
// realified to a symmetric block of doubled size with equality constraints
// split into real and imaginary parts per canonical word.
struct SdpProblem {
    int n_parties = 0;
    double rate = 0.0;
    double epsilon_r = 0.0;
    std::vector<Word> basis;
    CorrelatorExpression functional;

    struct MatrixEntry {
        int row = 0;
        int col = 0;
        double value = 0.0;
    };

    struct Constraint {
        Word word;         // canonical representative of the {E, E†} pair
        bool imag = false; // imaginary-part constraint
        std::vector<MatrixEntry> entries;            // symmetric realified matrix
        double rhs0 = 0.0, rhs_t = 0.0, rhs_z = 0.0; // rhs = rhs0 + rhs_t t + rhs_z z
    };
    std::vector<Constraint> constraints;

    int gram_dim() const { return int(basis.size()); }
    int real_dim() const { return 2 * int(basis.size()); }
    void validate() const;
};

SdpProblem assemble(int n, const CorrelatorExpression& functional, double r,
                    EpsilonBranch branch = EpsilonBranch::low);

enum class SdpStatus { optimal, iteration_limit };

struct SdpSolution {
    double t_opt = 0.0;
    double z_opt = 0.0;
    Eigen::MatrixXcd gram;      // recovered Hermitian Gram matrix
    double primal_residual = 0.0;
    double dual_gap = 0.0;
    SdpStatus status = SdpStatus::iteration_limit;
    int iterations = 0;
};

// Primal-dual interior-point solve (Nesterov-Todd scaling, single PSD block,
// iteration cap 500). t_opt upper-bounds the constrained quantum maximum.
SdpSolution solve(const SdpProblem& p, double tol = 1e-8);

struct CertificateCheck {
    double max_coeff_error = 0.0; // word-by-word identity reconstruction error
    double min_eigenvalue = 0.0;  // of the Gram matrix
};
CertificateCheck verify_certificate(const SdpProblem& p, const SdpSolution& s);

struct SdpTradeoffPoint {
    double r = 0.0;
    double epsilon_low = 0.0, epsilon_high = 0.0;
    double t_low = 0.0, t_high = 0.0;
    double t_opt = 0.0; // max of the two branch bounds
    double gap = 0.0;
    SdpStatus status = SdpStatus::iteration_limit;
};

// One SOS bound per grid rate; both epsilon branches are solved and the
// larger bound reported, so the output upper-bounds the trade-off curve
// regardless of which mirror distribution is optimal.
std::vector<SdpTradeoffPoint> tradeoff_upper(int n, const CorrelatorExpression& functional,
                                             const std::vector<double>& r_grid,
                                             double tol = 1e-8);

// Sparse SDPA (.dat-s) export of the moment-side encoding; byte-stable.
// The commented header states how the objective maps back to t.
std::string export_sdpa(const SdpProblem& p);

} // namespace bellcert
