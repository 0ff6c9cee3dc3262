#pragma once

#include <cstdint>
#include <vector>

#include "bellcert/qstate.hpp"

namespace bellcert {

// The 4^n local deterministic behaviors, ordered by packed strategy index
// (same base-4 encoding as local_bound's argmax).
std::vector<Behavior> deterministic_vertices(int n);
Behavior deterministic_behavior(int n, uint64_t strategy_index);

struct DilutionResult {
    double epsilon = 0.0;
    std::vector<double> weights; // q over the 4^n vertices, sums to 1
    double residual = 0.0;       // max-norm reconstruction error
};

// Minimal polytope dilution: min eps s.t. p = sum q_l d_l, sum q = 1,
// q_l >= -eps. Solved by the internal simplex after QR row elimination of
// the redundant behavior-space rows.
DilutionResult dilution(const Behavior& b);

} // namespace bellcert
