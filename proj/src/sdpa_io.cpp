#include "bellcert/sosdp.hpp"

#include <cmath>
#include <cstdio>

namespace bellcert {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string export_sdpa(const SdpProblem& p) {
    p.validate();
    const double corr0 = std::pow(2.0, p.n_parties) * p.epsilon_r - 1.0;
    double c0 = 0.0;
    if (auto it = p.functional.coeffs.find(0); it != p.functional.coeffs.end()) c0 = it->second;

    // moment-side encoding: free variables are all constraints except the two
    // pinned ones (identity = 1, all-zeros correlator = corr0)
    std::vector<int> free_idx;
    int idx_identity = -1, idx_zero = -1;
    for (int i = 0; i < int(p.constraints.size()); ++i) {
        const auto& c = p.constraints[size_t(i)];
        if (!c.imag && c.word.is_identity()) {
            idx_identity = i;
        } else if (!c.imag && c.word.is_full_correlator() && c.word.correlator_inputs() == 0) {
            idx_zero = i;
        } else {
            free_idx.push_back(i);
        }
    }
    if (idx_identity < 0 || idx_zero < 0)
        throw std::invalid_argument("problem lacks the pinned identity/zero-correlator words");

    std::string out;
    out += "* moment-side encoding of the Gram SOS program\n";
    out += "* n_parties=" + std::to_string(p.n_parties) + " rate=" + fmt(p.rate) +
           " epsilon_r=" + fmt(p.epsilon_r) + "\n";
    out += "* recover the SOS optimum as t_opt = c0*corr0 - objective, with c0=" + fmt(c0) +
           " corr0=" + fmt(corr0) + "\n";
    out += std::to_string(free_idx.size()) + " = mDIM\n";
    out += "1 = nBLOCK\n";
    out += std::to_string(p.real_dim()) + " = bLOCKsTRUCT\n";
    for (size_t k = 0; k < free_idx.size(); ++k) {
        out += fmt(p.constraints[size_t(free_idx[k])].rhs0);
        out += (k + 1 < free_idx.size()) ? ' ' : '\n';
    }

    auto emit = [&](int matno, const SdpProblem::Constraint& c, double scale) {
        for (const auto& t : c.entries) {
            if (t.row > t.col) continue; // upper triangle
            const double v = scale * t.value;
            if (v == 0.0) continue;
            out += std::to_string(matno) + " 1 " + std::to_string(t.row + 1) + " " +
                   std::to_string(t.col + 1) + " " + fmt(v) + "\n";
        }
    };

    // F0 = -(A_identity + corr0 * A_zero)
    emit(0, p.constraints[size_t(idx_identity)], -1.0);
    emit(0, p.constraints[size_t(idx_zero)], -corr0);
    for (size_t k = 0; k < free_idx.size(); ++k)
        emit(int(k) + 1, p.constraints[size_t(free_idx[k])], 1.0);
    return out;
}

} // namespace bellcert
