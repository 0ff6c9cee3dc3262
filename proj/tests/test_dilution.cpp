#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bellcert/analytic.hpp"
#include "bellcert/bellexpr.hpp"
#include "bellcert/dilution.hpp"
#include "bellcert/lp.hpp"

using namespace bellcert;

namespace {

constexpr double kPi = 3.14159265358979323846;

Behavior white_noise(int n) {
    Behavior b;
    b.n_parties = n;
    const uint32_t dim = 1u << n;
    b.table.assign(size_t(dim) * dim, 1.0 / dim);
    return b;
}

Behavior random_local_mixture(int n, std::mt19937& rng, int support = 12) {
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    const uint64_t n_vertices = uint64_t(1) << (2 * n);
    Behavior b = white_noise(n);
    for (double& v : b.table) v = 0.0;
    std::vector<double> w(static_cast<size_t>(support));
    double total = 0.0;
    for (double& wi : w) {
        wi = uni(rng);
        total += wi;
    }
    for (int i = 0; i < support; ++i) {
        const Behavior d = deterministic_behavior(n, rng() % n_vertices);
        for (size_t cell = 0; cell < b.table.size(); ++cell)
            b.table[cell] += w[size_t(i)] / total * d.table[cell];
    }
    return b;
}

} // namespace

TEST_CASE("vertex counts and determinism") {
    CHECK(deterministic_vertices(1).size() == 4);
    CHECK(deterministic_vertices(2).size() == 16);
    const auto v3 = deterministic_vertices(3);
    CHECK(v3.size() == 64);
    for (const auto& d : v3) {
        CHECK(d.max_no_signalling_error() == 0.0);
        for (double p : d.table) CHECK((p == 0.0 || p == 1.0));
    }
    CHECK_THROWS_AS(deterministic_vertices(7), resource_limit_error);
}

TEST_CASE("MABK max over the tripartite vertices is the local bound") {
    const auto m3 = mabk(3);
    double best = -1e9;
    for (const auto& d : deterministic_vertices(3)) best = std::max(best, evaluate(m3, d));
    CHECK(best == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simplex solves basic problems") {
    LpProblem p;
    p.objective = Eigen::VectorXd::Ones(1);
    p.equality_matrix = Eigen::MatrixXd::Ones(1, 1);
    p.equality_rhs = Eigen::VectorXd::Ones(1);
    p.lower_bounds = Eigen::VectorXd::Zero(1);
    auto r = lp_solve(p);
    CHECK(r.status == LpStatus::optimal);
    CHECK(r.objective == doctest::Approx(1.0));

    // min x0 - x1 with x0 + x1 = 1: optimum at x1 = 1
    p.objective = Eigen::VectorXd(2);
    p.objective << 1.0, -1.0;
    p.equality_matrix = Eigen::MatrixXd::Ones(1, 2);
    p.lower_bounds = Eigen::VectorXd::Zero(2);
    r = lp_solve(p);
    CHECK(r.objective == doctest::Approx(-1.0));

    // infeasible: x = 1 and x = 2
    p.objective = Eigen::VectorXd::Ones(1);
    p.equality_matrix = Eigen::MatrixXd::Ones(2, 1);
    p.equality_rhs = Eigen::VectorXd(2);
    p.equality_rhs << 1.0, 2.0;
    p.lower_bounds = Eigen::VectorXd::Zero(1);
    CHECK(lp_solve(p).status == LpStatus::infeasible);

    // unbounded: min -x with a free second variable soaking the constraint
    p.objective = Eigen::VectorXd(2);
    p.objective << -1.0, 0.0;
    p.equality_matrix = Eigen::MatrixXd(1, 2);
    p.equality_matrix << 1.0, -1.0;
    p.equality_rhs = Eigen::VectorXd::Ones(1);
    p.lower_bounds = Eigen::VectorXd::Zero(2);
    CHECK(lp_solve(p).status == LpStatus::unbounded);
}

TEST_CASE("simplex handles free variables and duplicate columns") {
    // min y s.t. x + y = 0, x = 3, y free -> y = -3
    LpProblem p;
    p.objective = Eigen::VectorXd(2);
    p.objective << 0.0, 1.0;
    p.equality_matrix = Eigen::MatrixXd(2, 2);
    p.equality_matrix << 1.0, 1.0, 1.0, 0.0;
    p.equality_rhs = Eigen::VectorXd(2);
    p.equality_rhs << 0.0, 3.0;
    p.lower_bounds = Eigen::VectorXd(2);
    p.lower_bounds << 0.0, lp_minus_infinity();
    const auto r = lp_solve(p);
    CHECK(r.status == LpStatus::optimal);
    CHECK(r.x[1] == doctest::Approx(-3.0));

    // duplicated vertex columns (degenerate) still terminate
    LpProblem q;
    q.objective = Eigen::VectorXd::Zero(4);
    q.objective[3] = 1.0;
    q.equality_matrix = Eigen::MatrixXd(2, 4);
    q.equality_matrix << 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
    q.equality_rhs = Eigen::VectorXd(2);
    q.equality_rhs << 1.0, 1.0;
    q.lower_bounds = Eigen::VectorXd::Zero(4);
    const auto r2 = lp_solve(q);
    CHECK(r2.status == LpStatus::optimal);
    CHECK(r2.objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("dilution vanishes on local points") {
    for (int n : {2, 3}) {
        const auto res = dilution(white_noise(n));
        CHECK(res.epsilon <= 1e-9);
        CHECK(res.residual <= 1e-9);
    }
    // deterministic vertices themselves
    for (uint64_t lam : {0ull, 7ull, 13ull}) {
        const auto res = dilution(deterministic_behavior(2, lam));
        CHECK(res.epsilon <= 1e-9);
    }
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + int(rng() % 3); // 2..4
        const auto res = dilution(random_local_mixture(n, rng));
        CHECK(res.epsilon <= 1e-8);
        CHECK(res.residual <= 1e-7);
    }
}

TEST_CASE("dilution is positive for nonlocal strategies") {
    const auto r2 = dilution(behavior(ghz_strategy_theta(2, theta_star(2))));
    CHECK(r2.epsilon > 1e-4);
    for (double th : {1.0, 1.3, 2.0}) {
        const auto r3 = dilution(behavior(ghz_strategy_theta(3, th)));
        CHECK(r3.epsilon > 1e-4);
    }
    // below the MABK local bound yet still nonlocal
    const double th = 0.9; // M_3(0.9) < 1
    CHECK(mabk_of_theta(3, th) < 1.0);
    CHECK(dilution(behavior(ghz_strategy_theta(3, th))).epsilon > 1e-4);
}

TEST_CASE("dilution certificates reconstruct the behavior") {
    const Behavior b = behavior(ghz_strategy_theta(3, 1.2));
    const auto res = dilution(b);
    CHECK(res.residual <= 1e-7);
    double total = 0.0, minw = 1e9;
    for (double w : res.weights) {
        total += w;
        minw = std::min(minw, w);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(minw >= -res.epsilon - 1e-8);
    // rebuild p from the weights
    Behavior rebuilt = b;
    for (double& v : rebuilt.table) v = 0.0;
    for (uint64_t lam = 0; lam < res.weights.size(); ++lam) {
        const Behavior d = deterministic_behavior(3, lam);
        for (size_t cell = 0; cell < rebuilt.table.size(); ++cell)
            rebuilt.table[cell] += res.weights[size_t(lam)] * d.table[cell];
    }
    for (size_t cell = 0; cell < b.table.size(); ++cell)
        CHECK(rebuilt.table[cell] == doctest::Approx(b.table[cell]).epsilon(1e-7));
}

TEST_CASE("dilution is invariant under party relabeling") {
    const Behavior b = behavior(ghz_strategy_phi_theta(3, 0.15, 1.1));
    Behavior swapped = b; // exchange parties 0 and 1
    for (uint32_t x = 0; x < 8; ++x) {
        for (uint32_t a = 0; a < 8; ++a) {
            const uint32_t xs = (x & 4u) | ((x & 1u) << 1) | ((x >> 1) & 1u);
            const uint32_t as = (a & 4u) | ((a & 1u) << 1) | ((a >> 1) & 1u);
            swapped.at(xs, as) = b.at(x, a);
        }
    }
    CHECK(dilution(b).epsilon == doctest::Approx(dilution(swapped).epsilon).epsilon(1e-7));
}

TEST_CASE("dilution decreases under mixing with white noise") {
    const Behavior b = behavior(ghz_strategy_theta(3, 1.4));
    const Behavior noise = white_noise(3);
    double prev = 1e9;
    for (double lam : {1.0, 0.8, 0.5, 0.2}) {
        Behavior m = b;
        for (size_t i = 0; i < m.table.size(); ++i)
            m.table[i] = lam * b.table[i] + (1 - lam) * noise.table[i];
        const double eps = dilution(m).epsilon;
        CHECK(eps <= prev + 1e-9);
        prev = eps;
    }
}

TEST_CASE("two-party dilution reaches zero; more parties stay separated") {
    // the two-party family becomes local toward theta = 0 and pi
    CHECK(dilution(behavior(ghz_strategy_theta(2, 0.01))).epsilon < 1e-6);
    CHECK(dilution(behavior(ghz_strategy_theta(2, kPi - 0.01))).epsilon < 1e-6);
    // frozen from an independent LP run: the G-boundary point is nonlocal
    CHECK(dilution(behavior(ghz_strategy_theta(2, kPi / 4 + 0.01))).epsilon ==
          doctest::Approx(0.013378).epsilon(1e-3));
    // for three to five parties the curve stays bounded away from zero
    for (int n : {3, 4, 5}) {
        double mineps = 1e9;
        for (double th : {kPi / 4 + 0.01, 1.1, kPi / 2, 2.0, 3 * kPi / 4 - 0.01}) {
            if (n == 5 && th != kPi / 4 + 0.01 && th != 3 * kPi / 4 - 0.01 && th != kPi / 2)
                continue; // keep the large LP count small
            mineps = std::min(mineps, dilution(behavior(ghz_strategy_theta(n, th))).epsilon);
        }
        CHECK(mineps > 1e-4);
    }
}
