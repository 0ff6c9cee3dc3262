#include "bellcert/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace bellcert {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSlack = 1e-12;

void require_even(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
}

double bisect(double lo, double hi, double flo, const auto& f) {
    // flo carries the sign of f(lo); bisects to ~1e-13 in the argument
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double normalized_mabk_of_theta(int n, double theta) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return std::pow(std::cos(theta / 2 + kPi / 4), n) * std::sin(n * theta / 2 + kPi / 4) +
           std::pow(std::cos(theta / 2 - kPi / 4), n) * std::sin(n * theta / 2 - kPi / 4);
}

double mabk_of_theta(int n, double theta) {
    return std::pow(2.0, (n - 1) / 2.0) * normalized_mabk_of_theta(n, theta);
}

double mabk_of_phitheta(int n, double phi, double theta) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    const double u = (theta + phi) / 2;
    const double v = n * (theta - phi) / 2;
    return std::pow(2.0, (n - 1) / 2.0) *
           (std::pow(std::cos(u + kPi / 4), n) * std::sin(v + kPi / 4) +
            std::pow(std::cos(u - kPi / 4), n) * std::sin(v - kPi / 4));
}

double mabk_relabeled_of_theta(int n, double theta) {
    if (n % 2 == 0) throw std::invalid_argument("relabeled MABK closed form needs odd n");
    return std::pow(2.0, (n - 1) / 2.0) *
           (std::pow(std::cos(theta / 2 + kPi / 4), n) * std::sin(-n * theta / 2 + kPi / 4) -
            std::pow(std::cos(theta / 2 - kPi / 4), n) * std::sin(n * theta / 2 + kPi / 4));
}

long t_seq(int n) {
    require_even(n);
    switch (n % 8) {
        case 2: return n / 4 + 1;
        case 4: return n / 4;
        case 6: return (3 * n + 2) / 4;
        default: return 3 * n / 4 + 1; // n = 0 (mod 8)
    }
}

double theta_star(int n) { return 2.0 * kPi * double(t_seq(n)) / (n + 1); }

double m_star(int n) { return mabk_of_theta(n, theta_star(n)); }

double phi_star(int n) {
    require_even(n);
    const double sg = std::sin(2.0 * theta_star(n)) > 0 ? 1.0 : -1.0;
    return sg * kPi / (4.0 * n);
}

double theta_of_phi(int n, double phi) {
    require_even(n);
    return double(n - 1) / double(n + 1) * phi + theta_star(n);
}

ShiftedParams shifted_params(int n, double phi, double theta) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return {phi * n / 2.0, theta - (n - 2) * phi / 2.0};
}

bool in_G(double theta) {
    return std::cos(2.0 * theta) < -kSlack && std::abs(std::cos(theta)) > kSlack;
}

bool in_F(double phi, double theta) {
    if (!(std::abs(phi) < kPi / 4 - kSlack)) return false;
    if (in_G(theta)) return true;
    if (std::abs(phi) <= kSlack) return false;
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0) t += 2.0 * kPi;
    return std::abs(t - kPi / 2) <= kSlack || std::abs(t - 3 * kPi / 2) <= kSlack;
}

double hbin(double p) {
    if (p < -kSlack || p > 1.0 + kSlack) throw std::invalid_argument("probability out of [0,1]");
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double shannon(std::span<const double> dist) {
    double sum = 0.0, h = 0.0;
    for (double p : dist) {
        if (p < -kSlack) throw std::invalid_argument("negative probability");
        if (p > 0.0) h -= p * std::log2(p);
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("distribution is not normalized");
    return h;
}

double rate_r(int n, double phi) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return n - 1 + hbin((1.0 - std::sin(n * phi)) / 2.0);
}

namespace {

// Center angle of the G subinterval pair used by the bracketing arguments.
double center_angle(int n) {
    if (n % 2 == 0) return theta_star(n) < kPi ? kPi / 2 : 3 * kPi / 2;
    switch (n % 8) {
        case 3:
        case 5: return kPi / 2;
        default: return 3 * kPi / 2; // 7 and 1 (mod 8)
    }
}

} // namespace

double find_theta_for_mabk(int n, double s) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    const bool even = n % 2 == 0;
    const bool relabeled = !even && n % 4 == 1;
    auto value = [&](double th) {
        return relabeled ? mabk_relabeled_of_theta(n, th) : mabk_of_theta(n, th);
    };

    const double s_max = even ? m_star(n) : std::pow(2.0, (n - 1) / 2.0);
    if (!(s > 1.0) || s > s_max + 1e-9)
        throw std::out_of_range("MABK target outside the reachable range");

    if (even) {
        const double ts = theta_star(n);
        if (std::abs(value(ts) - s) < 1e-10) return ts;
    }

    const double c = center_angle(n);
    const double margin = 1e-9;
    const int grid = 20000;
    for (int side = 0; side < 2; ++side) {
        const double a = side == 0 ? c - kPi / 4 + margin : c + margin;
        const double b = side == 0 ? c - margin : c + kPi / 4 - margin;
        double prev_t = a, prev_f = value(a) - s;
        for (int i = 1; i <= grid; ++i) {
            const double t = a + (b - a) * i / grid;
            const double ft = value(t) - s;
            if (ft == 0.0) return t;
            if ((ft > 0) != (prev_f > 0)) {
                const double root =
                    bisect(prev_t, t, prev_f, [&](double th) { return value(th) - s; });
                if (in_G(root) && std::abs(value(root) - s) < 1e-10) return root;
            }
            prev_t = t;
            prev_f = ft;
        }
    }
    throw std::out_of_range("no theta with the requested MABK value found in G");
}

TradeoffPoint conjectured_tradeoff(int n, double s, TradeoffDiagnostics* diag) {
    require_even(n);
    const double q_max = std::pow(2.0, (n - 1) / 2.0);
    if (!(s > 1.0) || s > q_max + 1e-9) throw std::out_of_range("MABK value out of range");
    const double ms = m_star(n);
    if (s <= ms + 1e-12) {
        if (diag) *diag = TradeoffDiagnostics{0.0, {}};
        return {s, double(n)};
    }

    const double pstar = phi_star(n);
    auto g = [&](double phi) { return mabk_of_phitheta(n, phi, theta_of_phi(n, phi)) - s; };

    const int steps = std::max(2, int(std::ceil(std::abs(pstar) / 1e-4)));
    std::vector<double> roots;
    double prev_u = 0.0, prev_g = g(0.0);
    for (int i = 1; i <= steps; ++i) {
        const double u = pstar * double(i) / steps;
        const double gu = g(u);
        if (gu == 0.0) {
            roots.push_back(u);
        } else if ((gu > 0) != (prev_g > 0)) {
            // bisect on the magnitude parameterization to keep signs simple
            double root;
            if (pstar > 0) {
                root = bisect(prev_u, u, prev_g, g);
            } else {
                root = -bisect(-u, -prev_u, gu, [&](double m) { return g(-m); });
            }
            roots.push_back(root);
        }
        prev_u = u;
        prev_g = gu;
    }
    if (roots.empty() && std::abs(g(pstar)) <= 1e-9) roots.push_back(pstar);
    if (roots.empty()) throw std::out_of_range("no phi_s found for the requested MABK value");

    const double phi_s = roots.front(); // smallest |phi| by scan order
    if (diag) *diag = TradeoffDiagnostics{phi_s, roots};
    return {s, rate_r(n, phi_s)};
}

double s1_value(double theta) {
    return 3.0 * std::sin(theta / 2) * std::sin(theta) * std::sin(3 * theta / 2);
}

double s2_value(double theta) {
    return std::sin(theta) - std::sin(2 * theta) + std::sin(3 * theta);
}

} // namespace bellcert
