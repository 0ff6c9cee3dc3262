#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellcert/qstate.hpp"

namespace bellcert {

// Full-correlator Bell expression: sum_x c_x <A_x>.
struct CorrelatorExpression {
    int n_parties = 0;
    std::map<uint32_t, double> coeffs; // input string -> coefficient
    std::optional<double> known_local_bound;
    std::optional<double> known_quantum_bound;
};

// Probability-level Bell functional: sum c_{x,a} p(a|x).
struct BellFunctional {
    int n_parties = 0;
    std::map<uint64_t, double> coeffs; // key(x, a) -> coefficient
    std::optional<double> known_local_bound;
    std::optional<double> known_quantum_bound;

    static uint64_t key(uint32_t x, uint32_t a) { return (uint64_t(x) << 32) | a; }
    static uint32_t key_x(uint64_t k) { return uint32_t(k >> 32); }
    static uint32_t key_a(uint64_t k) { return uint32_t(k & 0xffffffffu); }
};

enum class SeedFamily { i_theta, j_phi_theta };

struct SeedSpec {
    SeedFamily family = SeedFamily::i_theta;
    double theta = 0.0;
    double phi = 0.0; // ignored for i_theta

    void validate() const; // throws std::invalid_argument naming the violated condition
};

// MABK coefficients c_x = 2^((1-N)/2) cos[(pi/2)((N-1)/2 - |x|)]; exact zeros
// (odd N, half the inputs) are omitted from the map.
CorrelatorExpression mabk(int n);

// Input-complement-and-sign relabeling of mabk(n) for odd n, chosen so that
// the ghz_strategy_theta value follows the relabeled closed form.
CorrelatorExpression relabeled_mabk(int n);

// Bipartite seed with closed-form local/quantum bounds attached.
CorrelatorExpression seed(const SeedSpec& spec);

enum class SignRule { parity }; // I_mu = (-1)^{n_mu} * seed

// Star-pattern expansion of a bipartite seed to n parties at probability
// level; known_quantum_bound = (n-1) * seed quantum bound.
BellFunctional expand(const SeedSpec& spec, int n, SignRule rule = SignRule::parity);

// Lossless conversion via <A_x> = sum_a (-1)^{|a|} p(a|x).
BellFunctional to_probability_level(const CorrelatorExpression& e);

double evaluate(const CorrelatorExpression& e, const Behavior& b);
double evaluate(const BellFunctional& f, const Behavior& b);

// Exhaustive maximum over the 4^n local deterministic strategies. A strategy
// is packed base-4, digit k = party k's response (0: a=0, 1: a=1, 2: a=x,
// 3: a=1-x); ties break toward the smallest packed index.
struct LocalBound {
    double max = 0.0;
    uint64_t argmax = 0;
};
LocalBound local_bound(const CorrelatorExpression& e);
LocalBound local_bound(const BellFunctional& f);

// Deterministic response a = f_r(x) for response code r.
inline uint32_t deterministic_response(uint32_t r, uint32_t x) {
    switch (r) {
        case 0: return 0;
        case 1: return 1;
        case 2: return x;
        default: return 1 - x;
    }
}

enum class Facet { m3, s1, s2, s3, s4 };

// Tripartite facet expressions with their known local/quantum bounds.
CorrelatorExpression facet(Facet which);

// Text serialization: header "bellfunctional v1 N=<n>", then one line per
// coefficient "x-bits a-bits value" (party 0 printed first).
std::string to_text(const BellFunctional& f);
BellFunctional functional_from_text(std::string_view text);

} // namespace bellcert
