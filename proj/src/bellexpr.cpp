#include "bellcert/bellexpr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <thread>

#include "bellcert/analytic.hpp"

namespace bellcert {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

// cos(q*pi/4) for integer q, exact at the zeros.
double cos_quarter(long q) {
    switch (((q % 8) + 8) % 8) {
        case 0: return 1.0;
        case 1: return kSqrtHalf;
        case 2: return 0.0;
        case 3: return -kSqrtHalf;
        case 4: return -1.0;
        case 5: return -kSqrtHalf;
        case 6: return 0.0;
        default: return kSqrtHalf;
    }
}

int popcount32(uint32_t v) { return std::popcount(v); }

} // namespace

void SeedSpec::validate() const {
    constexpr double tol = 1e-12;
    if (family == SeedFamily::i_theta) {
        if (!in_G(theta))
            throw std::invalid_argument("I_theta seed requires theta in G "
                                        "(cos(2 theta) < 0 and cos(theta) != 0)");
    } else {
        if (!(std::cos(2.0 * theta) * std::cos(2.0 * phi) < -tol))
            throw std::invalid_argument("J_{phi,theta} seed requires cos(2 theta) cos(2 phi) < 0");
        if (!(std::abs(std::cos(theta - phi)) > tol))
            throw std::invalid_argument("J_{phi,theta} seed requires cos(theta - phi) != 0");
    }
}

CorrelatorExpression mabk(int n) {
    if (n < 2) throw std::invalid_argument("MABK needs at least 2 parties");
    CorrelatorExpression e;
    e.n_parties = n;
    const double scale = std::pow(2.0, (1.0 - n) / 2.0);
    for (uint32_t x = 0; x < (1u << n); ++x) {
        const long q = long(n) - 1 - 2 * popcount32(x); // angle q*pi/4
        const double c = cos_quarter(q);
        if (c != 0.0) e.coeffs[x] = scale * c;
    }
    e.known_local_bound = 1.0;
    e.known_quantum_bound = std::pow(2.0, (n - 1) / 2.0);
    return e;
}

CorrelatorExpression relabeled_mabk(int n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("relabeled MABK is defined for odd n >= 3");
    const CorrelatorExpression m = mabk(n);
    CorrelatorExpression e;
    e.n_parties = n;
    const uint32_t full = (1u << n) - 1;
    for (const auto& [x, c] : m.coeffs) e.coeffs[x ^ full] = -c;
    e.known_local_bound = 1.0;
    e.known_quantum_bound = m.known_quantum_bound;
    return e;
}

CorrelatorExpression seed(const SeedSpec& spec) {
    spec.validate();
    CorrelatorExpression e;
    e.n_parties = 2;
    const double th = spec.theta;
    if (spec.family == SeedFamily::i_theta) {
        const double c2 = std::cos(2.0 * th);
        const double c1 = std::cos(th);
        e.coeffs[0b00] = c1 * c2;
        e.coeffs[0b01] = -c2;
        e.coeffs[0b10] = -c2;
        e.coeffs[0b11] = c1;
        e.known_local_bound = std::max(std::abs(c1 * (1.0 - c2)),
                                       std::abs(c1 * (1.0 + c2)) + std::abs(2.0 * c2));
        const double s = std::sin(th);
        e.known_quantum_bound = 2.0 * s * s * s;
    } else {
        const double ph = spec.phi;
        const double c2t = std::cos(2.0 * th);
        const double c2p = std::cos(2.0 * ph);
        const double ctp = std::cos(th - ph);
        e.coeffs[0b00] = c2t * ctp;
        e.coeffs[0b01] = -c2t * c2p;
        e.coeffs[0b10] = -c2t * c2p;
        e.coeffs[0b11] = c2p * ctp;
        e.known_local_bound = std::max(std::abs(ctp * (c2t - c2p)),
                                       std::abs(ctp * (c2t + c2p)) + std::abs(2.0 * c2p * c2t));
        const double sp = std::sin(th + ph);
        e.known_quantum_bound = 2.0 * sp * sp * std::sin(th - ph);
    }
    return e;
}

BellFunctional expand(const SeedSpec& spec, int n, SignRule) {
    if (n < 3) throw std::invalid_argument("expansion needs at least 3 parties");
    const CorrelatorExpression sd = seed(spec);
    BellFunctional f;
    f.n_parties = n;
    const int last = n - 1;
    const uint32_t n_mu = 1u << (n - 2);
    for (int k = 0; k < last; ++k) {
        // spectator parties in ascending order, holding the bits of mu
        std::vector<int> spectators;
        for (int j = 0; j < n; ++j)
            if (j != k && j != last) spectators.push_back(j);
        for (uint32_t mu = 0; mu < n_mu; ++mu) {
            const double sign_mu = (popcount32(mu) % 2 == 0) ? 1.0 : -1.0;
            uint32_t a_mu = 0;
            for (size_t j = 0; j < spectators.size(); ++j)
                a_mu |= ((mu >> j) & 1u) << spectators[j];
            for (const auto& [sx, c] : sd.coeffs) {
                const uint32_t xk = sx & 1u, xl = (sx >> 1) & 1u;
                const uint32_t x = (xk << k) | (xl << last);
                for (uint32_t ak = 0; ak < 2; ++ak) {
                    for (uint32_t al = 0; al < 2; ++al) {
                        const double sign_a = ((ak + al) % 2 == 0) ? 1.0 : -1.0;
                        const uint32_t a = a_mu | (ak << k) | (al << last);
                        f.coeffs[BellFunctional::key(x, a)] += sign_mu * sign_a * c;
                    }
                }
            }
        }
    }
    f.known_quantum_bound = (n - 1) * *sd.known_quantum_bound;
    return f;
}

BellFunctional to_probability_level(const CorrelatorExpression& e) {
    BellFunctional f;
    f.n_parties = e.n_parties;
    f.known_local_bound = e.known_local_bound;
    f.known_quantum_bound = e.known_quantum_bound;
    const uint32_t dim = 1u << e.n_parties;
    for (const auto& [x, c] : e.coeffs)
        for (uint32_t a = 0; a < dim; ++a)
            f.coeffs[BellFunctional::key(x, a)] += (popcount32(a) % 2 == 0 ? c : -c);
    return f;
}

double evaluate(const CorrelatorExpression& e, const Behavior& b) {
    if (e.n_parties != b.n_parties) throw std::invalid_argument("party count mismatch");
    double acc = 0.0;
    const uint32_t dim = b.n_settings();
    for (const auto& [x, c] : e.coeffs) {
        double corr = 0.0;
        for (uint32_t a = 0; a < dim; ++a)
            corr += (popcount32(a) % 2 == 0 ? b.at(x, a) : -b.at(x, a));
        acc += c * corr;
    }
    return acc;
}

double evaluate(const BellFunctional& f, const Behavior& b) {
    if (f.n_parties != b.n_parties) throw std::invalid_argument("party count mismatch");
    double acc = 0.0;
    for (const auto& [k, c] : f.coeffs)
        acc += c * b.at(BellFunctional::key_x(k), BellFunctional::key_a(k));
    return acc;
}

namespace {

void check_enumeration_guard(int n) {
    if (n > 10) throw resource_limit_error("deterministic enumeration limited to 10 parties");
}

int enumeration_threads(uint64_t total) {
    if (total < (uint64_t(1) << 16)) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("BELLCERT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) hw = unsigned(v);
    }
    return int(std::clamp(hw, 1u, 16u));
}

// Runs fn(lambda) over all base-4 strategy ids, reducing to (max, smallest id).
template <typename ValueFn>
LocalBound enumerate_strategies(int n, ValueFn&& fn) {
    check_enumeration_guard(n);
    const uint64_t total = uint64_t(1) << (2 * n);
    const int nthreads = enumeration_threads(total);
    std::vector<LocalBound> partial(static_cast<size_t>(nthreads));
    auto worker = [&](int t) {
        const uint64_t lo = total * t / nthreads, hi = total * (t + 1) / nthreads;
        LocalBound best{-std::numeric_limits<double>::infinity(), lo};
        for (uint64_t lam = lo; lam < hi; ++lam) {
            const double v = fn(lam);
            if (v > best.max + 1e-15) {
                best.max = v;
                best.argmax = lam;
            }
        }
        partial[size_t(t)] = best;
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    LocalBound best = partial[0];
    for (const LocalBound& p : partial)
        if (p.max > best.max + 1e-15) best = p;
    return best;
}

struct StrategyMasks {
    uint32_t m1 = 0, m2 = 0, m3 = 0; // always-1 / copy-x / flip-x parties
};

StrategyMasks strategy_masks(int n, uint64_t lam) {
    StrategyMasks m;
    for (int k = 0; k < n; ++k) {
        switch ((lam >> (2 * k)) & 3u) {
            case 1: m.m1 |= 1u << k; break;
            case 2: m.m2 |= 1u << k; break;
            case 3: m.m3 |= 1u << k; break;
            default: break;
        }
    }
    return m;
}

} // namespace

LocalBound local_bound(const CorrelatorExpression& e) {
    const int n = e.n_parties;
    const uint32_t all = (1u << n) - 1;
    std::vector<std::pair<uint32_t, double>> entries(e.coeffs.begin(), e.coeffs.end());
    return enumerate_strategies(n, [&](uint64_t lam) {
        const StrategyMasks m = strategy_masks(n, lam);
        double v = 0.0;
        for (const auto& [x, c] : entries) {
            const uint32_t a = (m.m1 | (x & m.m2) | (~x & m.m3)) & all;
            v += (popcount32(a) % 2 == 0) ? c : -c;
        }
        return v;
    });
}

LocalBound local_bound(const BellFunctional& f) {
    const int n = f.n_parties;
    const uint32_t all = (1u << n) - 1;
    std::vector<std::pair<uint64_t, double>> entries(f.coeffs.begin(), f.coeffs.end());
    return enumerate_strategies(n, [&](uint64_t lam) {
        const StrategyMasks m = strategy_masks(n, lam);
        double v = 0.0;
        for (const auto& [key, c] : entries) {
            const uint32_t x = BellFunctional::key_x(key);
            if (((m.m1 | (x & m.m2) | (~x & m.m3)) & all) == BellFunctional::key_a(key)) v += c;
        }
        return v;
    });
}

CorrelatorExpression facet(Facet which) {
    CorrelatorExpression e;
    e.n_parties = 3;
    switch (which) {
        case Facet::m3:
            return mabk(3);
        case Facet::s1:
            for (uint32_t x = 0; x < 8; ++x) e.coeffs[x] = 0.25;
            e.coeffs[0b111] = 0.25 - 1.0;
            e.known_local_bound = 1.0;
            e.known_quantum_bound = 5.0 / 3.0;
            return e;
        case Facet::s2:
            e.coeffs[0b000] = 1.0;
            e.coeffs[0b100] = 1.0;  // A0 B0 C1
            e.coeffs[0b011] = -1.0; // A1 B1 C0
            e.coeffs[0b111] = 1.0;
            e.known_local_bound = 2.0;
            e.known_quantum_bound = 2.0 * std::sqrt(2.0);
            return e;
        case Facet::s3:
            e.coeffs[0b000] = 1.0;
            e.coeffs[0b100] = 1.0;
            e.coeffs[0b010] = 1.0;
            e.coeffs[0b110] = -1.0;
            e.known_local_bound = 2.0;
            e.known_quantum_bound = 2.0 * std::sqrt(2.0);
            return e;
        case Facet::s4:
            e.coeffs[0b000] = 1.0;
            e.known_local_bound = 1.0;
            e.known_quantum_bound = 1.0;
            return e;
    }
    throw std::invalid_argument("unknown facet");
}

namespace {

std::string bits_to_string(uint32_t v, int n) {
    std::string s(size_t(n), '0');
    for (int k = 0; k < n; ++k)
        if ((v >> k) & 1u) s[size_t(k)] = '1';
    return s;
}

uint32_t string_to_bits(std::string_view s) {
    uint32_t v = 0;
    for (size_t k = 0; k < s.size(); ++k) {
        if (s[k] == '1')
            v |= 1u << k;
        else if (s[k] != '0')
            throw std::invalid_argument("malformed bit string");
    }
    return v;
}

} // namespace

std::string to_text(const BellFunctional& f) {
    std::string out = "bellfunctional v1 N=" + std::to_string(f.n_parties) + "\n";
    char buf[64];
    for (const auto& [key, c] : f.coeffs) {
        std::snprintf(buf, sizeof buf, "%.17g", c);
        out += bits_to_string(BellFunctional::key_x(key), f.n_parties);
        out += ' ';
        out += bits_to_string(BellFunctional::key_a(key), f.n_parties);
        out += ' ';
        out += buf;
        out += '\n';
    }
    return out;
}

BellFunctional functional_from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word, v1, neq;
    if (!(in >> word >> v1 >> neq) || word != "bellfunctional" || v1 != "v1" ||
        neq.rfind("N=", 0) != 0)
        throw std::invalid_argument("bad bellfunctional header");
    BellFunctional f;
    f.n_parties = std::stoi(neq.substr(2));
    if (f.n_parties < 1 || f.n_parties > 20) throw std::invalid_argument("bad party count");
    std::string xs, as;
    double c = 0.0;
    while (in >> xs >> as >> c) {
        if (int(xs.size()) != f.n_parties || int(as.size()) != f.n_parties)
            throw std::invalid_argument("bit string length does not match N");
        f.coeffs[BellFunctional::key(string_to_bits(xs), string_to_bits(as))] = c;
    }
    return f;
}

} // namespace bellcert
