#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "bellcert/common.hpp"

namespace bellcert {

using cplx = std::complex<double>;

// Dense n-qubit pure state. Party k lives on bit k of all packed indices
// (party numbering is 0-based throughout the API).
struct Statevector {
    int n_qubits = 0;
    std::vector<cplx> amplitudes;

    static Statevector zero_state(int n);
    double squared_norm() const;
    // Checks the amplitude count and normalization (1e-12).
    void validate() const;
};

// (|0...0> + i|1...1>)/sqrt(2)
Statevector make_ghz(int n);

// A binary observable b.sigma given by a unit Bloch vector b.
struct Observable {
    double x = 1.0, y = 0.0, z = 0.0;

    // cos(angle) sigma_X + sin(angle) sigma_Y
    static Observable equatorial(double angle);

    // Row-major 2x2 matrix of b.sigma.
    std::array<cplx, 4> matrix() const;
    // Unit range vector of the projector P_a = (I + (-1)^a b.sigma)/2,
    // phase-fixed so the first nonzero component is real positive.
    std::array<cplx, 2> eigenvector(int outcome) const;
    void validate() const;
};

struct Strategy {
    int n_parties = 0;
    Statevector state;
    // observables[k][x] is party k's observable for input x.
    std::vector<std::array<Observable, 2>> observables;

    void validate() const;
};

// GHZ state, A0 = sigma_X, A1 = cos(theta) sigma_X + sin(theta) sigma_Y.
Strategy ghz_strategy_theta(int n, double theta);
// GHZ state, A0 = cos(phi) sigma_X - sin(phi) sigma_Y, A1 as above.
Strategy ghz_strategy_phi_theta(int n, double phi, double theta);
// GHZ state with the maximally anticommuting pair at angles pi/(4n) +- pi/4.
Strategy ghz_strategy_max_violation(int n);

// Full conditional distribution p(a|x) over n-bit outcome strings.
struct Behavior {
    int n_parties = 0;
    std::vector<double> table; // index (x << n_parties) | a

    uint32_t n_settings() const { return 1u << n_parties; }
    double at(uint32_t x, uint32_t a) const { return table[(size_t(x) << n_parties) | a]; }
    double& at(uint32_t x, uint32_t a) { return table[(size_t(x) << n_parties) | a]; }
    std::vector<double> conditional(uint32_t x) const;

    double max_normalization_error() const;
    double min_entry() const;
    // Largest deviation of any single-party-excluded marginal across that
    // party's two inputs; iterating the one-party condition covers subsets.
    double max_no_signalling_error() const;
    void validate() const;
};

// Born-rule behavior of a strategy: p(a|x) = <psi| prod_k P_{a_k|x_k} |psi>.
Behavior behavior(const Strategy& s);

// Full correlator <A_x> = <psi| prod_k A_{x_k} |psi> (computed by operator
// application, independently of behavior()).
double correlator(const Strategy& s, uint32_t x);

struct ProjectionResult {
    double probability = 0.0;
    std::optional<Statevector> post_state; // absent when probability <= 1e-14
};

// Projects the listed parties (0-based qubit indices, distinct) onto the given
// outcomes of the given observables and returns the probability together with
// the normalized post-measurement state on the remaining qubits.
ProjectionResult project_parties(const Statevector& state,
                                 const std::vector<int>& parties,
                                 const std::vector<int>& outcomes,
                                 const std::vector<Observable>& observables);

} // namespace bellcert
