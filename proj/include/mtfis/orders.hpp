#ifndef MTFIS_ORDERS_HPP
#define MTFIS_ORDERS_HPP

#include <complex>
#include <vector>

namespace mtfis {

// The orders rho_1 > ... > rho_M and weights q_j of the multi-term Caputo
// operator sum_j q_j d^{rho_j}/dt^{rho_j}. rho_1 may equal 1 so the library
// covers the classical reductions (E_{1,1} = exp); solver configurations
// restrict to rho_1 < 1.
struct FractionalOrders {
    std::vector<double> rho;  // strictly decreasing, in (0, 1]
    std::vector<double> q;    // positive, q[0] == 1

    FractionalOrders() = default;
    FractionalOrders(std::vector<double> rho_in, std::vector<double> q_in);

    int terms() const { return static_cast<int>(rho.size()); }
    double rho1() const { return rho.front(); }

    // (rho1, rho1-rho2, ..., rho1-rhoM): the first-parameter vector of the
    // multinomial Mittag-Leffler function in every solution formula.
    std::vector<double> rho_prime() const;

    void validate() const;  // throws std::invalid_argument
};

// Argument tuple of E_{rho',beta}(z_1, ..., z_M). z[0] may be complex; the
// contour and asymptotic regimes additionally require z_j in [-K, 0) real
// for j >= 2 and mu <= |arg z_1| <= pi.
struct MLArguments {
    double beta = 1.0;
    std::vector<std::complex<double>> z;

    MLArguments() = default;
    MLArguments(double beta_in, std::vector<std::complex<double>> z_in)
        : beta(beta_in), z(std::move(z_in)) {}

    std::complex<double> z1() const { return z.front(); }

    // max |z_j| over j >= 2 (the K of the sector hypotheses); 0 when M = 1.
    double tail_bound() const;

    // True when every z_j is real and the tail entries are <= 0.
    bool real_tail() const;
};

// The integration contour gamma(R, theta): circular arc |s| = R, |arg s| <= theta,
// plus two rays arg s = +-theta truncated at |s| = ray_cutoff.
struct ContourSpec {
    double R = 2.0;
    double theta = 0.0;       // radians, rho1*pi/2 < theta < mu < rho1*pi
    double mu = 0.0;          // sector bound
    int n_arc = 64;           // quadrature nodes on the arc (full contour)
    int n_ray = 256;          // quadrature nodes per ray
    double ray_cutoff = 0.0;  // |s| where the rays are truncated

    // Checks the angle ordering, the admissibility inequality
    // R > K + K*sum_j R^{rho_j/rho1}, the ray decay condition, and the cutoff.
    // Throws ContourViolation on failure.
    void validate(const FractionalOrders& orders, double K) const;

    // Default contour per the artifact's policy: theta = theta_factor*rho1*pi,
    // mu = mu_factor*rho1*pi, R the smallest power of two satisfying the
    // admissibility inequality for the given K, rays cut where the integrand's
    // exponential factor is below 1e-18 of its arc maximum.
    static ContourSpec make(const FractionalOrders& orders, double K,
                            double theta_factor = 0.7, double mu_factor = 0.9,
                            int n_arc = 64, int n_ray = 256, int poly_degree = 0);
};

}  // namespace mtfis

#endif
