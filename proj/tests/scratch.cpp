// Development scratch harness; replaced by the doctest suites.
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mtfis/multiml.hpp"
#include "mtfis/quadrature.hpp"

using namespace mtfis;
using cplx = std::complex<double>;

int main() {
    // Gauss-Legendre sanity: integral of x^2 over [-1,1] = 2/3.
    {
        const GaussRule& r = gauss_legendre(16);
        double s = 0;
        for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * r.nodes[i] * r.nodes[i];
        std::printf("GL16 x^2: %.17g (expect %.17g)\n", s, 2.0 / 3.0);
    }

    // Series: E_{1,1}(-1) = exp(-1)
    {
        FractionalOrders ord({1.0}, {1.0});
        MLResult r = ml_series(ord, MLArguments(1.0, {cplx(-1.0, 0.0)}));
        std::printf("E_{1,1}(-1): %.17g err %.3g (expect %.17g)\n", r.value.real(),
                    r.error_estimate, std::exp(-1.0));
    }

    // Series: z = 0 -> 1/Gamma(beta)
    {
        FractionalOrders ord({0.8, 0.4}, {1.0, 1.0});
        MLResult r = ml_series(ord, MLArguments(0.8, {cplx(0, 0), cplx(0, 0)}));
        std::printf("E(0,0) beta=0.8: %.17g (expect %.17g)\n", r.value.real(),
                    1.0 / std::tgamma(0.8));
    }

    // Contour: Hankel Gamma sanity via C_1: C_1 = 1/Gamma(beta - rho1)
    {
        FractionalOrders ord({0.5}, {1.0});
        ContourSpec spec = ContourSpec::make(ord, 1.0);
        cplx c1 = ml_ck_contour(ord, 1.7, {}, 1, spec);
        std::printf("C1 quad: %.17g + %.3gi (expect %.17g)\n", c1.real(), c1.imag(),
                    1.0 / std::tgamma(1.7 - 0.5));
    }

    // Contour: E_{1/2,1}(-4) = e^{16} erfc(4)
    {
        FractionalOrders ord({0.5}, {1.0});
        ContourSpec spec = ContourSpec::make(ord, 1.0);
        MLResult r = ml_contour(ord, MLArguments(1.0, {cplx(-4.0, 0.0)}), spec);
        const double ref = std::exp(16.0) * std::erfc(4.0);
        std::printf("E_{1/2,1}(-4): %.17g err %.3g (expect %.17g, rel dev %.3g)\n", r.value.real(),
                    r.error_estimate, ref, std::abs(r.value.real() - ref) / ref);
    }

    // Overlap: series vs contour, M=2
    {
        FractionalOrders ord({0.8, 0.3}, {1.0, 0.5});
        MLArguments args(1.8, {cplx(-5.0, 0.0), cplx(-0.5, 0.0)});
        MLResult s = ml_series(ord, args);
        ContourSpec spec = ContourSpec::make(ord, args.tail_bound());
        MLResult c = ml_contour(ord, args, spec);
        std::printf("overlap M=2: series %.17g (err %.3g) contour %.17g (err %.3g) rel dev %.3g\n",
                    s.value.real(), s.error_estimate, c.value.real(), c.error_estimate,
                    std::abs(s.value.real() - c.value.real()) / std::abs(s.value.real()));
    }

    // Asymptotic leading term: M=1 rho=0.5 beta=1.5, z1=-1e6: ~1e-6/Gamma(1)=1e-6
    {
        FractionalOrders ord({0.5}, {1.0});
        ContourSpec spec = ContourSpec::make(ord, 1.0);
        MLArguments args(1.5, {cplx(-1e6, 0.0)});
        MLResult a = ml_asymptotic(ord, args, 1, spec);
        MLResult c = ml_contour(ord, args, spec);
        std::printf("asym p=1 z=-1e6: %.17g (expect 1e-6), contour %.17g\n", a.value.real(),
                    c.value.real());
    }

    // Remainder decay: p=2, z1 doubling shrinks |I_p| by ~2^3
    {
        FractionalOrders ord({0.8, 0.3}, {1.0, 0.5});
        ContourSpec spec = ContourSpec::make(ord, 0.5, 0.7, 0.9, 64, 256, 2);
        double prev = 0;
        for (double z1 : {-1e3, -2e3, -4e3}) {
            MLArguments args(1.8, {cplx(z1, 0.0), cplx(-0.5, 0.0)});
            const double rem = std::abs(ml_asymptotic_remainder(ord, args, 2, spec));
            std::printf("  |I_2|(z1=%g) = %.6g  ratio %.3f\n", z1, rem, prev > 0 ? prev / rem : 0.0);
            prev = rem;
        }
    }
    return 0;
}
