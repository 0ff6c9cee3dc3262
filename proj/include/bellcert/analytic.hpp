#pragma once

#include <optional>
#include <span>
#include <vector>

namespace bellcert {

// MABK value of the GHZ strategy with A0 = X, A1 at angle theta.
double mabk_of_theta(int n, double theta);
// Same value divided by the maximum quantum value 2^((n-1)/2).
double normalized_mabk_of_theta(int n, double theta);
// MABK value of the two-angle strategy (A0 at angle -phi, A1 at theta).
double mabk_of_phitheta(int n, double phi, double theta);
// Value of the relabeled MABK expression on the single-angle strategy.
double mabk_relabeled_of_theta(int n, double theta);

// The integer sequence 1,1,5,7,3,3,... and the special angle 2*pi*t_n/(n+1).
long t_seq(int n);
double theta_star(int n);
// Largest MABK value on the single-angle family, attained at theta_star.
double m_star(int n);

double phi_star(int n);
double theta_of_phi(int n, double phi);

struct ShiftedParams {
    double phi = 0.0;
    double theta = 0.0;
};
// (phi', theta') = (phi n/2, theta - (n-2) phi / 2)
ShiftedParams shifted_params(int n, double phi, double theta);

// Strict membership (1e-12 slack, boundaries excluded).
bool in_G(double theta);
bool in_F(double phi, double theta);

double hbin(double p);
double shannon(std::span<const double> dist);
// n - 1 + hbin((1 - sin(n phi))/2)
double rate_r(int n, double phi);

// Finds theta_s in G with the requested MABK value, bracketing inside the G
// subintervals around the relevant center angle and bisecting to 1e-12.
// Odd n uses the relabeled expression when n = 1 (mod 4).
double find_theta_for_mabk(int n, double s);

struct TradeoffPoint {
    double s = 0.0;
    double r = 0.0;
};

struct TradeoffDiagnostics {
    double phi_s = 0.0;
    std::vector<double> grid_roots; // every root found on the phi scan
};

// Conjectured maximum randomness at MABK value s for even n; grid step 1e-4
// rad plus local bisection for the phi_s root of smallest magnitude.
TradeoffPoint conjectured_tradeoff(int n, double s, TradeoffDiagnostics* diag = nullptr);

// Tripartite facet values on the single-angle strategy.
double s1_value(double theta);
double s2_value(double theta);

} // namespace bellcert
