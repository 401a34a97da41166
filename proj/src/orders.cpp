#include "mtfis/orders.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mtfis/errors.hpp"

namespace mtfis {

FractionalOrders::FractionalOrders(std::vector<double> rho_in, std::vector<double> q_in)
    : rho(std::move(rho_in)), q(std::move(q_in)) {
    validate();
}

void FractionalOrders::validate() const {
    if (rho.empty()) throw std::invalid_argument("FractionalOrders: need at least one order");
    if (q.size() != rho.size())
        throw std::invalid_argument("FractionalOrders: rho and q must have equal length");
    if (!(rho.front() > 0.0 && rho.front() <= 1.0))
        throw std::invalid_argument("FractionalOrders: rho1 must lie in (0, 1]");
    for (size_t j = 0; j < rho.size(); ++j) {
        if (!(rho[j] > 0.0 && rho[j] < 1.0) && !(j == 0 && rho[j] == 1.0))
            throw std::invalid_argument("FractionalOrders: orders must lie in (0, 1)");
        if (j > 0 && !(rho[j] < rho[j - 1]))
            throw std::invalid_argument("FractionalOrders: orders must be strictly decreasing");
        if (!(q[j] > 0.0)) throw std::invalid_argument("FractionalOrders: weights must be positive");
    }
    if (q.front() != 1.0) throw std::invalid_argument("FractionalOrders: q1 must equal 1");
}

std::vector<double> FractionalOrders::rho_prime() const {
    std::vector<double> rp(rho.size());
    rp[0] = rho[0];
    for (size_t j = 1; j < rho.size(); ++j) rp[j] = rho[0] - rho[j];
    return rp;
}

double MLArguments::tail_bound() const {
    double K = 0.0;
    for (size_t j = 1; j < z.size(); ++j) K = std::max(K, std::abs(z[j]));
    return K;
}

bool MLArguments::real_tail() const {
    for (size_t j = 1; j < z.size(); ++j)
        if (z[j].imag() != 0.0 || z[j].real() > 0.0) return false;
    return true;
}

namespace {

double admissibility_gap(const FractionalOrders& orders, double R, double K) {
    double rhs = K;
    for (size_t j = 1; j < orders.rho.size(); ++j)
        rhs += K * std::pow(R, orders.rho[j] / orders.rho1());
    return R - rhs;
}

}  // namespace

void ContourSpec::validate(const FractionalOrders& orders, double K) const {
    const double rho1 = orders.rho1();
    const double pi = std::numbers::pi;
    std::ostringstream msg;
    if (!(rho1 * pi / 2.0 < theta && theta < mu && mu < rho1 * pi)) {
        msg << "contour angles must satisfy rho1*pi/2 < theta < mu < rho1*pi, got theta=" << theta
            << " mu=" << mu << " rho1*pi=" << rho1 * pi;
        throw ContourViolation(msg.str());
    }
    if (!(std::cos(theta / rho1) < 0.0))
        throw ContourViolation("contour rays do not decay: cos(theta/rho1) >= 0");
    if (!(R > 0.0) || !(admissibility_gap(orders, R, K) > 0.0)) {
        msg << "contour radius R=" << R << " violates R > K + K*sum R^(rho_j/rho1) with K=" << K;
        throw ContourViolation(msg.str());
    }
    if (n_arc < 8 || n_ray < 16) throw ContourViolation("contour needs n_arc >= 8, n_ray >= 16");
    const double r0 = std::pow(R, 1.0 / rho1);
    const double rmax = std::pow(ray_cutoff, 1.0 / rho1);
    if (!(rmax > r0)) throw ContourViolation("ray_cutoff must exceed the contour radius");
    // Truncation tail must be negligible against the arc maximum exp(r0).
    if (rmax * std::cos(theta / rho1) - r0 > std::log(1e-12))
        throw ContourViolation("ray_cutoff leaves a non-negligible exponential tail");
}

ContourSpec ContourSpec::make(const FractionalOrders& orders, double K, double theta_factor,
                              double mu_factor, int n_arc, int n_ray, int poly_degree) {
    const double rho1 = orders.rho1();
    const double pi = std::numbers::pi;
    ContourSpec spec;
    spec.theta = theta_factor * rho1 * pi;
    spec.mu = mu_factor * rho1 * pi;
    spec.n_arc = n_arc;
    spec.n_ray = n_ray;

    double R = 2.0;
    while (!(admissibility_gap(orders, R, K) > 0.0)) {
        R *= 2.0;
        if (R > 1e12) throw ContourViolation("no admissible contour radius found (K too large)");
    }
    spec.R = R;

    const double r0 = std::pow(R, 1.0 / rho1);
    const double decay = -std::cos(spec.theta / rho1);
    // exp decay below 1e-18 of the arc maximum, with headroom for the
    // polynomial factors t^(rho1-beta) and Q^p.
    const double rmax = (r0 + 45.0 + 10.0 * poly_degree) / decay + r0;
    spec.ray_cutoff = std::pow(rmax, rho1);
    return spec;
}

}  // namespace mtfis
