#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellcert/analytic.hpp"
#include "bellcert/bellexpr.hpp"

using namespace bellcert;

namespace {

constexpr double kPi = 3.14159265358979323846;

// radical forms of the peak values, cross-checked against the closed-form
// curve; kept as an independent route through the same constants
double peak_radical(int n) {
    switch (n) {
        case 2: return 3.0 * std::sqrt(3.0) / 4.0;
        case 4: return (5.0 / 8.0) * std::sqrt((5.0 / 2.0) * (5.0 + std::sqrt(5.0)));
        case 6:
            return (7.0 / 8.0) * (std::cos(kPi / 14) + 3 * std::sqrt(2.0) * std::cos(3 * kPi / 28) -
                                  3 * std::cos(kPi / 7) + 5 * std::cos(3 * kPi / 14));
        case 8:
            return 45.0 / 16 + 33 * std::sqrt(3.0) / 4 +
                   (45 * std::sqrt(2.0) / 16) * (3 + std::sqrt(3.0)) * std::cos(kPi / 36) -
                   (1.0 / 16) * (180 * std::sqrt(3.0) + 90) * std::pow(std::cos(kPi / 36), 2);
        case 10:
            return (11.0 / 32) *
                   (std::cos(kPi / 22) + 30 * std::sqrt(2.0) * std::cos(3 * kPi / 44) -
                    5 * std::cos(kPi / 11) + 15 * std::cos(3 * kPi / 22) +
                    5 * std::sqrt(2.0) * std::cos(7 * kPi / 44) - 30 * std::cos(2 * kPi / 11) +
                    42 * std::cos(5 * kPi / 22));
        case 12:
            return (429 * std::sqrt(2.0) / 16) * std::cos(kPi / 52) +
                   (39 * std::sqrt(2.0) / 32) * std::cos(9 * kPi / 52) +
                   (715 * std::sqrt(2.0) / 64) * std::cos(5 * kPi / 52) +
                   (13.0 / 64) * std::cos(kPi / 26) + (1287.0 / 64) * std::cos(5 * kPi / 26) -
                   (715.0 / 64) * std::cos(2 * kPi / 13) + (143.0 / 32) * std::cos(3 * kPi / 26) -
                   (39.0 / 32) * std::cos(kPi / 13) - (429.0 / 16) * std::cos(3 * kPi / 13);
        default: throw std::invalid_argument("no radical stored");
    }
}

} // namespace

TEST_CASE("single-angle MABK closed form") {
    CHECK(mabk_of_theta(2, 2 * kPi / 3) == doctest::Approx(1.29903811).epsilon(1e-8));
    CHECK(mabk_of_theta(2, kPi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mabk_of_theta(4, theta_star(4)) == doctest::Approx(2.65828378).epsilon(1e-7));
    CHECK(mabk_of_theta(6, theta_star(6)) == doctest::Approx(5.41251947).epsilon(1e-7));
}

TEST_CASE("two-angle MABK closed form") {
    for (int n : {2, 4, 6}) {
        for (double th : {1.1, 2.3})
            CHECK(mabk_of_phitheta(n, 0.0, th) == doctest::Approx(mabk_of_theta(n, th)).epsilon(1e-14));
        const double ps = phi_star(n);
        CHECK(mabk_of_phitheta(n, ps, theta_of_phi(n, ps)) ==
              doctest::Approx(std::pow(2.0, (n - 1) / 2.0)).epsilon(1e-12));
        CHECK(mabk_of_phitheta(n, 0.0, theta_of_phi(n, 0.0)) ==
              doctest::Approx(m_star(n)).epsilon(1e-12));
    }
}

TEST_CASE("relabeled closed form at the special points") {
    CHECK(mabk_relabeled_of_theta(5, kPi / 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(mabk_relabeled_of_theta(9, 3 * kPi / 2) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(std::abs(mabk_relabeled_of_theta(5, 0.0)) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(mabk_relabeled_of_theta(4, 1.0), std::invalid_argument);
}

TEST_CASE("t sequence and theta_star intervals") {
    const long expected[] = {1, 1, 5, 7, 3, 3, 11, 13, 5, 5};
    for (int i = 0; i < 10; ++i) CHECK(t_seq(2 * (i + 1)) == expected[i]);
    CHECK_THROWS_AS(t_seq(3), std::invalid_argument);

    CHECK(theta_star(2) == doctest::Approx(2 * kPi / 3).epsilon(1e-15));
    CHECK(theta_star(2) > kPi / 2);
    CHECK(theta_star(2) < 3 * kPi / 4);
    CHECK(theta_star(4) == doctest::Approx(2 * kPi / 5).epsilon(1e-15));
    CHECK(theta_star(4) > kPi / 4);
    CHECK(theta_star(4) < kPi / 2);
    CHECK(theta_star(6) == doctest::Approx(10 * kPi / 7).epsilon(1e-15));
    CHECK(theta_star(6) > 5 * kPi / 4);
    CHECK(theta_star(6) < 3 * kPi / 2);

    for (int n = 2; n <= 200; n += 2) CHECK(in_G(theta_star(n)));
}

TEST_CASE("peak values match the stored decimals and radicals") {
    const double decimals[] = {1.29903811, 2.65828378, 5.41251947,
                               10.93208548, 22.00126184, 44.19316043};
    int i = 0;
    for (int n : {2, 4, 6, 8, 10, 12}) {
        CHECK(std::abs(m_star(n) - decimals[i]) < 1e-8);
        CHECK(std::abs(m_star(n) - peak_radical(n)) < 1e-12);
        ++i;
    }
    CHECK_THROWS_AS(m_star(3), std::invalid_argument);
}

TEST_CASE("phi_star signs for small n") {
    CHECK(phi_star(2) == doctest::Approx(-kPi / 8).epsilon(1e-15));
    CHECK(phi_star(4) == doctest::Approx(kPi / 16).epsilon(1e-15));
    CHECK(phi_star(6) > 0);
    CHECK(phi_star(8) < 0);
}

TEST_CASE("shifted parameters at phi = 0 and along the working range") {
    for (int n = 2; n <= 40; n += 2) {
        const auto at0 = shifted_params(n, 0.0, theta_star(n));
        CHECK(at0.phi == 0.0);
        CHECK(at0.theta == doctest::Approx(theta_star(n)).epsilon(1e-15));
        const double ps = phi_star(n);
        for (int i = 0; i <= 100; ++i) {
            const double phi = ps * i / 100;
            const auto sp = shifted_params(n, phi, theta_of_phi(n, phi));
            CHECK(in_F(sp.phi, sp.theta));
        }
    }
}

TEST_CASE("membership in G and F") {
    CHECK(!in_G(kPi / 2));
    CHECK(!in_G(kPi / 4));
    CHECK(in_G(kPi / 3));
    CHECK(in_G(2 * kPi / 3));
    CHECK(in_G(10 * kPi / 7));
    CHECK(in_F(0.1, kPi / 2));
    CHECK(!in_F(0.0, kPi / 2));
    CHECK(in_F(-0.2, 3 * kPi / 2));
    CHECK(in_F(0.0, 2 * kPi / 3));
    CHECK(!in_F(kPi / 4, 2 * kPi / 3));
}

TEST_CASE("entropy helpers") {
    CHECK(hbin(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hbin(0.0) == 0.0);
    CHECK(hbin(1.0) == 0.0);
    CHECK_THROWS_AS(hbin(1.5), std::invalid_argument);

    std::vector<double> uniform(16, 1.0 / 16);
    CHECK(shannon(uniform) == doctest::Approx(4.0).epsilon(1e-12));
    std::vector<double> bad{0.5, 0.2};
    CHECK_THROWS_AS(shannon(bad), std::invalid_argument);

    for (int n : {2, 4, 6}) {
        CHECK(rate_r(n, 0.0) == doctest::Approx(double(n)).epsilon(1e-15));
        const double at_star = n + 0.5 - std::log2(1.0 + std::sqrt(2.0)) / std::sqrt(2.0);
        CHECK(rate_r(n, phi_star(n)) == doctest::Approx(at_star).epsilon(1e-12));
    }
}

TEST_CASE("rate decreases away from phi = 0") {
    for (int n = 2; n <= 12; n += 2) {
        const double ps = phi_star(n);
        double prev = rate_r(n, 0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double r = rate_r(n, ps * i / 1000.0);
            CHECK(r <= prev + 1e-12);
            prev = r;
        }
    }
}

TEST_CASE("closed forms agree with full simulation on parameter grids") {
    // single-angle family, even and odd N
    for (int n = 2; n <= 8; ++n) {
        const auto m = mabk(n);
        for (int i = 0; i < 25; ++i) {
            const double th = 0.05 + (2 * kPi - 0.1) * i / 24;
            const Behavior b = behavior(ghz_strategy_theta(n, th));
            CHECK(evaluate(m, b) == doctest::Approx(mabk_of_theta(n, th)).epsilon(1e-9));
        }
    }
    // two-angle family
    for (int n = 2; n <= 8; n += 2) {
        const auto m = mabk(n);
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double th = 0.1 + 6.0 * i / 9;
                const double ph = -0.6 + 1.2 * j / 4;
                const Behavior b = behavior(ghz_strategy_phi_theta(n, ph, th));
                CHECK(evaluate(m, b) == doctest::Approx(mabk_of_phitheta(n, ph, th)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("asymptotics of the peak ratio") {
    // increasing on each N mod 8 subsequence up to 40, and near 1 by N = 200
    for (int residue : {2, 4, 6, 8}) {
        double prev = -1.0;
        for (int n = residue; n <= 40; n += 8) {
            const double ratio = normalized_mabk_of_theta(n, theta_star(n));
            CHECK(ratio > prev);
            prev = ratio;
        }
    }
    const double r200 = normalized_mabk_of_theta(200, theta_star(200));
    CHECK(r200 > 0.99);
    CHECK(std::abs(r200 - 1.0) < 0.05);
    CHECK(r200 > normalized_mabk_of_theta(12, theta_star(12)));
    // the ratio column of the stored table
    const double decimals[] = {1.29903811, 2.65828378, 5.41251947,
                               10.93208548, 22.00126184, 44.19316043};
    int i = 0;
    for (int n : {2, 4, 6, 8, 10, 12}) {
        const double ratio = decimals[i] / std::pow(2.0, (n - 1) / 2.0);
        CHECK(std::abs(normalized_mabk_of_theta(n, theta_star(n)) - ratio) < 1e-8);
        ++i;
    }
}

TEST_CASE("theta search hits requested MABK values") {
    // peak case returns theta_star itself
    CHECK(find_theta_for_mabk(4, m_star(4)) == doctest::Approx(theta_star(4)).epsilon(1e-12));
    // interior target for three parties lies in (pi/4, pi/2)
    const double th3 = find_theta_for_mabk(3, 1.5);
    CHECK(in_G(th3));
    CHECK(mabk_of_theta(3, th3) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(th3 > kPi / 4);
    CHECK(th3 < kPi / 2);
    // barely nonlocal target
    const double th4 = find_theta_for_mabk(4, 1.0 + 1e-6);
    CHECK(in_G(th4));
    CHECK(mabk_of_theta(4, th4) == doctest::Approx(1.0 + 1e-6).epsilon(1e-10));
    // odd N = 5 uses the relabeled expression
    const double th5 = find_theta_for_mabk(5, 2.5);
    CHECK(in_G(th5));
    CHECK(mabk_relabeled_of_theta(5, th5) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK_THROWS_AS(find_theta_for_mabk(4, 0.5), std::out_of_range);
    CHECK_THROWS_AS(find_theta_for_mabk(4, 10.0), std::out_of_range);
}

TEST_CASE("conjectured trade-off endpoints and monotonicity") {
    for (int n : {2, 4, 6, 8, 10, 12}) {
        const double qmax = std::pow(2.0, (n - 1) / 2.0);
        CHECK(conjectured_tradeoff(n, m_star(n)).r == doctest::Approx(double(n)).epsilon(1e-12));
        const double r_end = conjectured_tradeoff(n, qmax).r;
        const double want = n + 0.5 - std::log2(1.0 + std::sqrt(2.0)) / std::sqrt(2.0);
        CHECK(r_end == doctest::Approx(want).epsilon(1e-7));
        // strictly between the endpoints in the middle
        const double mid = 0.5 * (m_star(n) + qmax);
        const double r_mid = conjectured_tradeoff(n, mid).r;
        CHECK(r_mid < double(n));
        CHECK(r_mid > r_end);
        // non-increasing over an s grid
        double prev = n + 1.0;
        for (int i = 1; i <= 50; ++i) {
            const double s = 1.0 + (qmax - 1.0) * i / 50.0;
            const double r = conjectured_tradeoff(n, s).r;
            CHECK(r <= prev + 1e-9);
            prev = r;
        }
    }
    CHECK_THROWS_AS(conjectured_tradeoff(4, 0.9), std::out_of_range);
    TradeoffDiagnostics diag;
    conjectured_tradeoff(4, 2.7, &diag);
    CHECK(diag.grid_roots.size() == 1); // minimization is trivial here
    CHECK(std::abs(mabk_of_phitheta(4, diag.phi_s, theta_of_phi(4, diag.phi_s)) - 2.7) < 1e-9);
}

TEST_CASE("facet curves on the single-angle family") {
    CHECK(s1_value(0.0) == doctest::Approx(0.0));
    CHECK(s2_value(kPi / 2) == doctest::Approx(0.0).epsilon(1e-15));
    const auto s1 = facet(Facet::s1);
    const auto s2 = facet(Facet::s2);
    double max1 = 0.0, max2 = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double th = kPi * i / 100;
        const Behavior b = behavior(ghz_strategy_theta(3, th));
        CHECK(evaluate(s1, b) == doctest::Approx(s1_value(th)).epsilon(1e-10));
        CHECK(evaluate(s2, b) == doctest::Approx(s2_value(th)).epsilon(1e-10));
        max1 = std::max(max1, s1_value(th));
        max2 = std::max(max2, s2_value(th));
    }
    CHECK(max1 < 5.0 / 3.0);
    CHECK(max2 < 2 * std::sqrt(2.0));
}
