#ifndef MTFIS_QUADRATURE_HPP
#define MTFIS_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace mtfis {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points; cached per n, thread-safe.
const GaussRule& gauss_legendre(int n);

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // refinement difference + rounding floor
    long evaluations = 0;
    double min_integrand = 0.0;   // smallest sampled integrand value
};

struct AdaptiveOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
    int points = 16;       // Gauss points per panel
    int max_depth = 28;
    int initial_panels = 8;
};

// Adaptive panel-bisection Gauss quadrature of f over [a, b].
// Throws QuadratureDivergence when the refinement budget is exhausted.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const AdaptiveOptions& opt = {});

}  // namespace mtfis

#endif
