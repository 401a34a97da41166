#ifndef MTFIS_MULTIML_HPP
#define MTFIS_MULTIML_HPP

#include <complex>
#include <optional>
#include <string>

#include "mtfis/orders.hpp"

namespace mtfis {

enum class MLRegime { series, contour, asymptotic };

const char* regime_name(MLRegime r);

struct MLResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;  // absolute
    MLRegime regime = MLRegime::series;
};

struct SeriesOptions {
    double tol = 1e-14;   // absolute level-sum cutoff (two consecutive levels)
    int max_level = 600;
};

// Truncated double sum of the defining series. Enumerates compositions of
// each total degree k with incrementally carried multinomial coefficients;
// error_estimate covers both the tail and the alternating-sum cancellation
// (4*eps*sum of |level sums|). Throws NonConvergence when levels are still
// growing at max_level or leave the representable range.
MLResult ml_series(const FractionalOrders& orders, const MLArguments& args,
                   const SeriesOptions& opt = {});

struct ContourOptions {
    bool convergence_check = true;  // re-evaluate at 2x nodes, compare
    double check_tol = 1e-8;        // relative; QuadratureDivergence beyond this
};

// Quadrature of the integral representation over gamma(R, theta), evaluated in
// the variable t = s^{1/rho1} (exact substitution; the contour maps to a
// Hankel-type path where the integrand is well scaled). Principal branch for
// all powers. Real tails with real negative z1 use conjugate symmetry, so the
// imaginary part is identically zero there.
MLResult ml_contour(const FractionalOrders& orders, const MLArguments& args,
                    const ContourSpec& contour, const ContourOptions& opt = {});

// Asymptotic expansion of Theorem-1 type:
//   E = -sum_{k=1}^{p} C_k / z1^k + O(|z1|^{-p-1}),
// with C_1 = 1/Gamma(beta-rho1), C_2 = 1/Gamma(beta-2rho1) - sum_j z_j/Gamma(beta-rho1-rho_j),
// and C_k (k >= 3) computed once per (orders, beta, z_2..z_M) by contour
// quadrature and cached. Requires beta > 2*rho1 (HypothesisViolation otherwise).
MLResult ml_asymptotic(const FractionalOrders& orders, const MLArguments& args, int p,
                       const ContourSpec& contour);

// The expansion's remainder term I_p, quadratured directly:
//   I_p = (1/(2 rho1 pi i)) \int w(s) Q^p(s) / (z1^p (Q(s) - z1)) ds.
// Under shared quadrature nodes, ml_asymptotic - ml_contour == -I_p exactly,
// so this is the numerically stable route to the tail magnitude.
std::complex<double> ml_asymptotic_remainder(const FractionalOrders& orders,
                                             const MLArguments& args, int p,
                                             const ContourSpec& contour);

// C_k coefficient by contour quadrature (k >= 1), bypassing the cache.
std::complex<double> ml_ck_contour(const FractionalOrders& orders, double beta,
                                   const std::vector<std::complex<double>>& z_tail, int k,
                                   const ContourSpec& contour);

struct EvalPolicy {
    double series_z1_cap = 30.0;      // never try the series beyond this |z1|
    double target_rel_tol = 1e-9;     // certification level for the chosen regime
    double asym_z1_threshold = 1e4;   // asymptotic regime allowed beyond this (diagnostics)
    SeriesOptions series;
    double contour_theta_factor = 0.7;
    double contour_mu_factor = 0.9;
    int n_arc = 64;
    int n_ray = 256;
    bool contour_convergence_check = false;  // embedded estimate by default in hot paths
    std::optional<MLRegime> force;
};

// Regime dispatcher: series when |z1| <= cap and the series' own error
// certificate meets the target, contour otherwise (asymptotic only by force).
// Throws AllRegimesFailed when no regime's preconditions hold.
MLResult ml_eval(const FractionalOrders& orders, const MLArguments& args,
                 const EvalPolicy& policy = {});

struct BoundReport {
    double abs_value = 0.0;   // |E|
    double z1_abs = 0.0;
    double scaled = 0.0;      // (1 + |z1|) * |E|, the Lemma-2 shape
};

// |E| against the C/(1+|z1|) envelope; test-suite instrumentation.
BoundReport ml_bound_check(const FractionalOrders& orders, const MLArguments& args,
                           const EvalPolicy& policy = {});

// Largest (1+|z1|)*|E| over a z1 grid at fixed tail/beta: the fitted Lemma-2
// constant C for that family.
double fit_lemma2_constant(const FractionalOrders& orders, double beta,
                           const std::vector<std::complex<double>>& z_tail,
                           const std::vector<double>& z1_grid,
                           const EvalPolicy& policy = {});

}  // namespace mtfis

#endif
