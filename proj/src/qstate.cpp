#include "bellcert/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bellcert {

namespace {

constexpr int kMaxQubits = 20;
constexpr double kNormTol = 1e-12;
constexpr double kZeroProb = 1e-14;

void check_qubit_count(int n) {
    if (n < 1) throw std::invalid_argument("qubit count must be positive");
    if (n > kMaxQubits) throw resource_limit_error("statevector limited to 20 qubits");
}

// Applies a 2x2 matrix to qubit k of v in place.
void apply_single_qubit(std::vector<cplx>& v, const std::array<cplx, 4>& m, int k) {
    const size_t step = size_t(1) << k;
    const size_t dim = v.size();
    for (size_t base = 0; base < dim; base += 2 * step) {
        for (size_t i = base; i < base + step; ++i) {
            const cplx a = v[i];
            const cplx b = v[i + step];
            v[i] = m[0] * a + m[1] * b;
            v[i + step] = m[2] * a + m[3] * b;
        }
    }
}

} // namespace

Statevector Statevector::zero_state(int n) {
    check_qubit_count(n);
    Statevector s;
    s.n_qubits = n;
    s.amplitudes.assign(size_t(1) << n, cplx(0.0, 0.0));
    s.amplitudes[0] = 1.0;
    return s;
}

double Statevector::squared_norm() const {
    double acc = 0.0;
    for (const cplx& a : amplitudes) acc += std::norm(a);
    return acc;
}

void Statevector::validate() const {
    check_qubit_count(n_qubits);
    if (amplitudes.size() != (size_t(1) << n_qubits))
        throw std::invalid_argument("amplitude count does not match qubit count");
    if (std::abs(squared_norm() - 1.0) > kNormTol)
        throw std::invalid_argument("statevector is not normalized");
}

Statevector make_ghz(int n) {
    Statevector s = Statevector::zero_state(n);
    const double r = 1.0 / std::sqrt(2.0);
    s.amplitudes[0] = cplx(r, 0.0);
    s.amplitudes[s.amplitudes.size() - 1] = cplx(0.0, r);
    return s;
}

Observable Observable::equatorial(double angle) {
    return Observable{std::cos(angle), std::sin(angle), 0.0};
}

std::array<cplx, 4> Observable::matrix() const {
    return {cplx(z, 0.0), cplx(x, -y), cplx(x, y), cplx(-z, 0.0)};
}

std::array<cplx, 2> Observable::eigenvector(int outcome) const {
    // Eigenvector of b.sigma for eigenvalue (-1)^outcome.
    std::array<cplx, 2> v;
    if (outcome == 0 ? (1.0 - z < 1e-14) : (1.0 + z < 1e-14)) {
        v = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    } else if (outcome == 0 ? (1.0 + z < 1e-14) : (1.0 - z < 1e-14)) {
        v = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    } else {
        const double w = (outcome == 0) ? 1.0 - z : -1.0 - z;
        v = {cplx(x, -y), cplx(w, 0.0)};
        const double invn = 1.0 / std::sqrt(std::norm(v[0]) + std::norm(v[1]));
        v[0] *= invn;
        v[1] *= invn;
        // fix the global phase: first nonzero component real positive
        const cplx lead = std::abs(v[0]) > 1e-14 ? v[0] : v[1];
        const cplx phase = std::conj(lead) / std::abs(lead);
        v[0] *= phase;
        v[1] *= phase;
    }
    return v;
}

void Observable::validate() const {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (std::abs(n - 1.0) > kNormTol)
        throw std::invalid_argument("observable Bloch vector is not unit length");
}

void Strategy::validate() const {
    state.validate();
    if (n_parties != state.n_qubits)
        throw std::invalid_argument("strategy party count does not match state");
    if (observables.size() != size_t(n_parties))
        throw std::invalid_argument("strategy must provide observables for every party");
    for (const auto& pair : observables) {
        pair[0].validate();
        pair[1].validate();
    }
}

Strategy ghz_strategy_theta(int n, double theta) {
    return ghz_strategy_phi_theta(n, 0.0, theta);
}

Strategy ghz_strategy_phi_theta(int n, double phi, double theta) {
    Strategy s;
    s.n_parties = n;
    s.state = make_ghz(n);
    s.observables.assign(size_t(n), {Observable::equatorial(-phi), Observable::equatorial(theta)});
    return s;
}

Strategy ghz_strategy_max_violation(int n) {
    Strategy s;
    s.n_parties = n;
    s.state = make_ghz(n);
    const double tp = M_PI / (4.0 * n) + M_PI / 4.0;
    const double tm = M_PI / (4.0 * n) - M_PI / 4.0;
    s.observables.assign(size_t(n), {Observable::equatorial(tp), Observable::equatorial(tm)});
    return s;
}

std::vector<double> Behavior::conditional(uint32_t x) const {
    const size_t d = size_t(1) << n_parties;
    std::vector<double> out(d);
    for (size_t a = 0; a < d; ++a) out[a] = at(x, uint32_t(a));
    return out;
}

double Behavior::max_normalization_error() const {
    double worst = 0.0;
    for (uint32_t x = 0; x < n_settings(); ++x) {
        double sum = 0.0;
        for (uint32_t a = 0; a < n_settings(); ++a) sum += at(x, a);
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

double Behavior::min_entry() const {
    return *std::min_element(table.begin(), table.end());
}

double Behavior::max_no_signalling_error() const {
    const int n = n_parties;
    const uint32_t dim = n_settings();
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const uint32_t bit = 1u << k;
        for (uint32_t x = 0; x < dim; ++x) {
            if (x & bit) continue;
            // marginal over all parties but k, for x_k = 0 vs 1
            for (uint32_t rest = 0; rest < dim / 2; ++rest) {
                // expand rest into an outcome string with a hole at bit k
                const uint32_t low = rest & (bit - 1);
                const uint32_t high = (rest >> k) << (k + 1);
                const uint32_t a0 = high | low;
                double m0 = at(x, a0) + at(x, a0 | bit);
                double m1 = at(x | bit, a0) + at(x | bit, a0 | bit);
                worst = std::max(worst, std::abs(m0 - m1));
            }
        }
    }
    return worst;
}

void Behavior::validate() const {
    check_qubit_count(n_parties);
    if (table.size() != (size_t(1) << (2 * n_parties)))
        throw std::invalid_argument("behavior table has wrong size");
    if (max_normalization_error() > 1e-10)
        throw std::invalid_argument("behavior rows are not normalized");
    if (min_entry() < -1e-12)
        throw std::invalid_argument("behavior has negative entries");
    if (max_no_signalling_error() > 1e-10)
        throw std::invalid_argument("behavior violates no-signalling");
}

Behavior behavior(const Strategy& s) {
    s.validate();
    const int n = s.n_parties;
    const uint32_t dim = 1u << n;
    Behavior b;
    b.n_parties = n;
    b.table.assign(size_t(dim) * dim, 0.0);

    std::vector<cplx> work;
    for (uint32_t x = 0; x < dim; ++x) {
        work = s.state.amplitudes;
        for (int k = 0; k < n; ++k) {
            const Observable& o = s.observables[k][(x >> k) & 1u];
            const auto v0 = o.eigenvector(0);
            const auto v1 = o.eigenvector(1);
            // basis-change rows <v_a|
            const std::array<cplx, 4> u = {std::conj(v0[0]), std::conj(v0[1]),
                                           std::conj(v1[0]), std::conj(v1[1])};
            apply_single_qubit(work, u, k);
        }
        for (uint32_t a = 0; a < dim; ++a) {
            double p = std::norm(work[a]);
            b.at(x, a) = (p < kZeroProb) ? 0.0 : p;
        }
    }
    return b;
}

double correlator(const Strategy& s, uint32_t x) {
    s.validate();
    if (x >= (1u << s.n_parties)) throw std::invalid_argument("input string out of range");
    std::vector<cplx> work = s.state.amplitudes;
    for (int k = 0; k < s.n_parties; ++k)
        apply_single_qubit(work, s.observables[k][(x >> k) & 1u].matrix(), k);
    cplx acc(0.0, 0.0);
    for (size_t i = 0; i < work.size(); ++i) acc += std::conj(s.state.amplitudes[i]) * work[i];
    return acc.real();
}

ProjectionResult project_parties(const Statevector& state,
                                 const std::vector<int>& parties,
                                 const std::vector<int>& outcomes,
                                 const std::vector<Observable>& observables) {
    state.validate();
    if (parties.size() != outcomes.size() || parties.size() != observables.size())
        throw std::invalid_argument("parties, outcomes and observables must align");
    uint32_t mask = 0;
    for (int p : parties) {
        if (p < 0 || p >= state.n_qubits) throw std::invalid_argument("party index out of range");
        const uint32_t bit = 1u << p;
        if (mask & bit) throw std::invalid_argument("projected parties must be distinct");
        mask |= bit;
    }

    ProjectionResult res;
    if (parties.empty()) {
        res.probability = 1.0;
        res.post_state = state;
        return res;
    }

    // packed projected outcome pattern and per-party bra vectors
    std::vector<std::array<cplx, 2>> bras(parties.size());
    for (size_t i = 0; i < parties.size(); ++i) {
        if (outcomes[i] != 0 && outcomes[i] != 1)
            throw std::invalid_argument("outcomes must be bits");
        observables[i].validate();
        auto v = observables[i].eigenvector(outcomes[i]);
        bras[i] = {std::conj(v[0]), std::conj(v[1])};
    }

    const int n_rem = state.n_qubits - int(parties.size());
    const size_t rem_dim = size_t(1) << n_rem;
    std::vector<cplx> chi(rem_dim, cplx(0.0, 0.0));

    // remaining qubits keep their relative order
    std::vector<int> rem;
    for (int q = 0; q < state.n_qubits; ++q)
        if (!(mask & (1u << q))) rem.push_back(q);

    const size_t dim = state.amplitudes.size();
    for (size_t idx = 0; idx < dim; ++idx) {
        cplx w(1.0, 0.0);
        for (size_t i = 0; i < parties.size(); ++i) w *= bras[i][(idx >> parties[i]) & 1u];
        if (w == cplx(0.0, 0.0)) continue;
        size_t r = 0;
        for (size_t j = 0; j < rem.size(); ++j) r |= ((idx >> rem[j]) & 1u) << j;
        chi[r] += w * state.amplitudes[idx];
    }

    double prob = 0.0;
    for (const cplx& c : chi) prob += std::norm(c);
    res.probability = prob;
    if (prob > kZeroProb && n_rem > 0) {
        Statevector post;
        post.n_qubits = n_rem;
        post.amplitudes = std::move(chi);
        const double inv = 1.0 / std::sqrt(prob);
        for (cplx& c : post.amplitudes) c *= inv;
        res.post_state = std::move(post);
    }
    return res;
}

} // namespace bellcert
