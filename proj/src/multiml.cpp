#include "mtfis/multiml.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

#include "mtfis/errors.hpp"
#include "mtfis/quadrature.hpp"
#include "mtfis/util.hpp"

namespace mtfis {

using cplx = std::complex<double>;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_args(const FractionalOrders& orders, const MLArguments& args) {
    orders.validate();
    if (args.z.size() != static_cast<size_t>(orders.terms()))
        throw std::invalid_argument("MLArguments: need one argument per order");
    if (!(args.beta > 0.0)) throw std::invalid_argument("MLArguments: beta must be positive");
}

// ---------------------------------------------------------------------------
// Series regime
// ---------------------------------------------------------------------------

struct LevelAccumulator {
    cplx sum{0.0, 0.0};
    double abs_sum = 0.0;
};

// Walks the compositions (k_2, ..., k_M) of one total degree k, k_1 taking the
// remainder. The multinomial coefficient is carried as a product of binomials
// updated incrementally inside each loop; beyond the double-precision comfort
// zone the leaf switches to an lgamma-based evaluation.
class SeriesLevel {
public:
    SeriesLevel(const FractionalOrders& orders, const MLArguments& args)
        : m_(orders.terms()), beta_(args.beta), z_(args.z), rho_prime_(orders.rho_prime()) {
        log_abs_z_.resize(m_);
        neg_real_.resize(m_);
        for (int j = 0; j < m_; ++j) {
            const double az = std::abs(z_[j]);
            log_abs_z_[j] = az > 0.0 ? std::log(az) : -std::numeric_limits<double>::infinity();
            neg_real_[j] = (z_[j].imag() == 0.0 && z_[j].real() <= 0.0);
        }
        arg_z1_ = std::arg(z_[0]);
        z1_pows_.push_back(cplx(1.0, 0.0));
    }

    LevelAccumulator evaluate(int k) {
        while (static_cast<int>(z1_pows_.size()) <= k) z1_pows_.push_back(z1_pows_.back() * z_[0]);
        LevelAccumulator acc;
        const bool log_path = k > 130;
        descend(1, k, k, 1.0, 0.0, cplx(1.0, 0.0), 0.0, beta_, acc, log_path);
        return acc;
    }

private:
    // j: current tail index (1-based into z_), rem: degree left to assign.
    void descend(int j, int k, int rem, double binom_prod, double log_binom, cplx tail_pow,
                 double log_tail_mag, double gamma_arg, LevelAccumulator& acc, bool log_path) {
        if (j == m_) {
            leaf(k, rem, binom_prod, log_binom, tail_pow, log_tail_mag, gamma_arg, acc, log_path);
            return;
        }
        const int limit = (std::abs(z_[j]) == 0.0) ? 0 : rem;
        double binom = 1.0;     // C(rem, kj), updated in the loop
        double log_bin = 0.0;
        cplx zp(1.0, 0.0);
        for (int kj = 0; kj <= limit; ++kj) {
            if (kj > 0) {
                binom *= double(rem - kj + 1) / double(kj);
                log_bin += std::log(double(rem - kj + 1) / double(kj));
                zp *= z_[j];
            }
            descend(j + 1, k, rem - kj, binom_prod * binom, log_binom + log_bin, tail_pow * zp,
                    log_tail_mag + kj * log_abs_z_[j], gamma_arg + kj * rho_prime_[j], acc,
                    log_path);
        }
    }

    void leaf(int k, int k1, double binom_prod, double log_binom, cplx tail_pow,
              double log_tail_mag, double gamma_arg, LevelAccumulator& acc, bool log_path) {
        if (k1 > 0 && std::abs(z_[0]) == 0.0) return;
        const double a = gamma_arg + rho_prime_[0] * k1;
        cplx term;
        if (!log_path && a < 170.0 && k < 140) {
            term = binom_prod * tail_pow * z1_pows_[k1] * rgamma(a);
        } else {
            const double log_mag =
                log_binom + log_tail_mag + (k1 > 0 ? k1 * std::log(std::abs(z_[0])) : 0.0) -
                std::lgamma(a);
            if (log_mag < -745.0) return;
            if (log_mag > 709.0) {
                acc.abs_sum = std::numeric_limits<double>::infinity();
                return;
            }
            const double mag = std::exp(log_mag);
            // Phase: tail entries are real (sign per parity when negative);
            // z1 contributes k1 * arg(z1).
            double sign = 1.0;
            cplx phase(1.0, 0.0);
            const int k_tail = k - k1;
            if (tail_real_negative()) {
                sign = (k_tail % 2 == 0) ? 1.0 : -1.0;
            } else {
                phase *= tail_pow / std::abs(tail_pow);  // generic fallback
            }
            if (k1 > 0) phase *= std::polar(1.0, k1 * arg_z1_);
            term = mag * sign * phase;
        }
        acc.sum += term;
        acc.abs_sum += std::abs(term);
    }

    bool tail_real_negative() const {
        for (int j = 1; j < m_; ++j)
            if (!neg_real_[j]) return false;
        return true;
    }

    int m_;
    double beta_;
    std::vector<cplx> z_;
    std::vector<double> rho_prime_;
    std::vector<double> log_abs_z_;
    std::vector<char> neg_real_;
    double arg_z1_ = 0.0;
    std::vector<cplx> z1_pows_;
};

// ---------------------------------------------------------------------------
// Contour regime, expressed in the variable t = s^(1/rho1).
//
// E = (1/(2 pi i)) \int_Gamma exp(t) t^(rho1-beta) / D(t) dt,
// D(t) = t^rho1 - z1 - sum_{j>=2} z_j t^rho_j,
// Gamma: arc |t| = R^(1/rho1), |arg t| <= theta/rho1, plus outgoing rays.
// For real arguments f(conj t) = conj f(t), so E = Im(upper half)/pi.
// ---------------------------------------------------------------------------

struct ContourNodes {
    std::vector<cplx> t;
    std::vector<cplx> w;  // includes the parametrization Jacobian
};

// Upper half when half=true (arc angles [0, theta_t] plus the upper ray).
ContourNodes build_nodes(double r0, double theta_t, double r_max, int arc_points, int ray_points,
                         bool half) {
    const int gl_n = 16;
    const GaussRule& rule = gauss_legendre(gl_n);
    ContourNodes nodes;

    auto add_panel = [&](auto&& position, auto&& jacobian, double a, double b) {
        const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
        for (int i = 0; i < gl_n; ++i) {
            const double u = mid + rad * rule.nodes[i];
            nodes.t.push_back(position(u));
            nodes.w.push_back(rad * rule.weights[i] * jacobian(u));
        }
    };

    const double lo = half ? 0.0 : -theta_t;
    const int arc_panels = std::max(1, (half ? arc_points / 2 : arc_points) / gl_n);
    for (int p = 0; p < arc_panels; ++p) {
        const double a = lo + (theta_t - lo) * p / double(arc_panels);
        const double b = lo + (theta_t - lo) * (p + 1) / double(arc_panels);
        add_panel([&](double psi) { return std::polar(r0, psi); },
                  [&](double psi) { return cplx(0.0, 1.0) * std::polar(r0, psi); }, a, b);
    }

    // Rays: geometric panels, dense near the arc where the integrand peaks.
    const double L = r_max - r0;
    const int ray_panels = std::max(2, ray_points / gl_n);
    const double growth = 1.7;
    std::vector<double> cuts{0.0};
    double width = L * (growth - 1.0) / (std::pow(growth, ray_panels) - 1.0);
    for (int p = 0; p < ray_panels; ++p) {
        cuts.push_back(std::min(L, cuts.back() + width));
        width *= growth;
    }
    cuts.back() = L;

    auto add_ray = [&](double sgn) {
        const cplx dir = std::polar(1.0, sgn * theta_t);
        for (int p = 0; p < ray_panels; ++p)
            add_panel([&](double x) { return (r0 + x) * dir; }, [&](double) { return dir; },
                      cuts[p], cuts[p + 1]);
    };
    add_ray(1.0);
    if (!half) add_ray(-1.0);
    return nodes;
}

struct ContourGeometry {
    double r0, theta_t, r_max;
};

ContourGeometry geometry(const FractionalOrders& orders, const ContourSpec& spec) {
    const double rho1 = orders.rho1();
    return {std::pow(spec.R, 1.0 / rho1), spec.theta / rho1, std::pow(spec.ray_cutoff, 1.0 / rho1)};
}

struct QuadOutcome {
    cplx integral{0.0, 0.0};  // sum w_i f(t_i)
    double abs_sum = 0.0;     // sum |w_i f(t_i)| (rounding floor scale)
};

template <class F>
QuadOutcome contour_sum(const ContourNodes& nodes, F&& f) {
    QuadOutcome out;
    for (size_t i = 0; i < nodes.t.size(); ++i) {
        const cplx contrib = nodes.w[i] * f(nodes.t[i]);
        out.integral += contrib;
        out.abs_sum += std::abs(contrib);
    }
    return out;
}

// Coarse companion: same path with half the nodes, for the embedded estimate.
template <class F>
cplx contour_sum_plain(const ContourNodes& nodes, F&& f) {
    cplx acc{0.0, 0.0};
    for (size_t i = 0; i < nodes.t.size(); ++i) acc += nodes.w[i] * f(nodes.t[i]);
    return acc;
}

struct Integrand {
    const FractionalOrders* orders;
    double beta;
    const std::vector<cplx>* z;

    cplx denominator(const cplx& log_t) const {
        return q_poly(log_t) - (*z)[0];
    }

    cplx q_poly(const cplx& log_t) const {
        const auto& rho = orders->rho;
        cplx d = std::exp(rho[0] * log_t);
        for (size_t j = 1; j < rho.size(); ++j) d -= (*z)[j] * std::exp(rho[j] * log_t);
        return d;
    }

    cplx weight(const cplx& t, const cplx& log_t) const {
        return std::exp(t + (orders->rho1() - beta) * log_t);
    }
};

struct ContourEvaluation {
    cplx value;
    double err;
};

template <class NodeF>
ContourEvaluation run_contour(const FractionalOrders& orders, const MLArguments& args,
                              const ContourSpec& spec, bool symmetric, NodeF&& node_value) {
    const ContourGeometry geo = geometry(orders, spec);
    const ContourNodes fine = build_nodes(geo.r0, geo.theta_t, geo.r_max, spec.n_arc, spec.n_ray,
                                          symmetric);
    const ContourNodes coarse = build_nodes(geo.r0, geo.theta_t, geo.r_max,
                                            std::max(8, spec.n_arc / 2),
                                            std::max(16, spec.n_ray / 2), symmetric);
    QuadOutcome fine_out = contour_sum(fine, node_value);
    const cplx coarse_val = contour_sum_plain(coarse, node_value);

    const double pi = std::numbers::pi;
    cplx value;
    double err;
    const double rounding = 8.0 * kEps * fine_out.abs_sum;
    if (symmetric) {
        value = cplx(fine_out.integral.imag() / pi, 0.0);
        err = std::abs(fine_out.integral.imag() - coarse_val.imag()) / pi + rounding;
    } else {
        value = fine_out.integral / (2.0 * pi * cplx(0.0, 1.0));
        err = std::abs(fine_out.integral - coarse_val) / (2.0 * pi) + rounding;
    }
    (void)args;
    return {value, err};
}

bool symmetric_case(const MLArguments& args) {
    return args.real_tail() && args.z1().imag() == 0.0;
}

std::string ck_cache_key(const FractionalOrders& orders, double beta,
                         const std::vector<cplx>& z_tail) {
    char buf[64];
    std::string key;
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12e;", v);
        key += buf;
    };
    for (double r : orders.rho) put(r);
    key += "|";
    for (double w : orders.q) put(w);
    key += "|";
    put(beta);
    key += "|";
    for (const cplx& zj : z_tail) {
        put(zj.real());
        put(zj.imag());
    }
    return key;
}

std::map<std::string, std::vector<cplx>> g_ck_cache;
std::shared_mutex g_ck_mutex;

}  // namespace

const char* regime_name(MLRegime r) {
    switch (r) {
        case MLRegime::series: return "series";
        case MLRegime::contour: return "contour";
        case MLRegime::asymptotic: return "asymptotic";
    }
    return "unknown";
}

MLResult ml_series(const FractionalOrders& orders, const MLArguments& args,
                   const SeriesOptions& opt) {
    check_args(orders, args);
    for (const cplx& zj : args.z)
        if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag()))
            throw std::invalid_argument("ml_series: arguments must be finite");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("ml_series: tol must be positive");

    SeriesLevel level(orders, args);
    cplx sum{0.0, 0.0};
    double abs_total = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    double last_mag = 0.0;
    bool decreased = false;
    int consecutive_small = 0;

    for (int k = 0; k <= opt.max_level; ++k) {
        const LevelAccumulator acc = level.evaluate(k);
        const double mag = std::abs(acc.sum);
        if (!std::isfinite(acc.abs_sum) || acc.abs_sum > 1e250)
            throw NonConvergence("ml_series: level sums exceed the double-precision range "
                                 "(arguments too large for the series regime)");
        sum += acc.sum;
        abs_total += acc.abs_sum;
        if (k > 0 && mag < prev_mag) decreased = true;
        last_mag = mag;
        if (mag < opt.tol) {
            if (++consecutive_small >= 2 && k >= 2) {
                MLResult out;
                out.value = sum;
                out.error_estimate = 2.0 * last_mag + 4.0 * kEps * abs_total + opt.tol;
                out.regime = MLRegime::series;
                return out;
            }
        } else {
            consecutive_small = 0;
        }
        prev_mag = (mag > 0.0) ? mag : prev_mag;
    }
    if (!decreased)
        throw NonConvergence("ml_series: term magnitudes have not begun decreasing within " +
                             std::to_string(opt.max_level) + " levels");
    throw NonConvergence("ml_series: tail not below tolerance within " +
                         std::to_string(opt.max_level) + " levels");
}

MLResult ml_contour(const FractionalOrders& orders, const MLArguments& args,
                    const ContourSpec& contour, const ContourOptions& opt) {
    check_args(orders, args);
    if (!args.real_tail())
        throw std::invalid_argument("ml_contour: z_j must be real and <= 0 for j >= 2");
    contour.validate(orders, args.tail_bound());
    const cplx z1 = args.z1();
    if (std::abs(z1) > 0.0 && std::abs(std::arg(z1)) < contour.mu - 1e-12)
        throw std::invalid_argument("ml_contour: z1 must satisfy mu <= |arg z1| <= pi");

    const Integrand f{&orders, args.beta, &args.z};
    auto node_value = [&](const cplx& t) {
        const cplx log_t = std::log(t);
        return f.weight(t, log_t) / f.denominator(log_t);
    };
    const bool sym = symmetric_case(args);
    ContourEvaluation base = run_contour(orders, args, contour, sym, node_value);

    MLResult out;
    out.regime = MLRegime::contour;
    if (opt.convergence_check) {
        ContourSpec dense = contour;
        dense.n_arc *= 2;
        dense.n_ray *= 2;
        ContourEvaluation ref = run_contour(orders, args, dense, sym, node_value);
        const double diff = std::abs(ref.value - base.value);
        const double scale = std::max(std::abs(ref.value), base.err + ref.err);
        if (diff > opt.check_tol * scale)
            throw QuadratureDivergence(
                "ml_contour: node doubling moved the result by a relative " +
                std::to_string(diff / scale));
        out.value = ref.value;
        out.error_estimate = diff + ref.err;
    } else {
        out.value = base.value;
        out.error_estimate = base.err;
    }
    return out;
}

std::complex<double> ml_ck_contour(const FractionalOrders& orders, double beta,
                                   const std::vector<std::complex<double>>& z_tail, int k,
                                   const ContourSpec& contour) {
    if (k < 1) throw std::invalid_argument("ml_ck_contour: k must be >= 1");
    std::vector<cplx> z(orders.terms(), cplx(0.0, 0.0));
    if (z_tail.size() + 1 != static_cast<size_t>(orders.terms()))
        throw std::invalid_argument("ml_ck_contour: z_tail must have M-1 entries");
    for (size_t j = 0; j < z_tail.size(); ++j) z[j + 1] = z_tail[j];
    MLArguments args(beta, z);
    contour.validate(orders, args.tail_bound());

    const Integrand f{&orders, beta, &args.z};
    auto node_value = [&](const cplx& t) {
        const cplx log_t = std::log(t);
        return f.weight(t, log_t) * std::pow(f.q_poly(log_t), k - 1);
    };
    ContourEvaluation ev = run_contour(orders, args, contour, symmetric_case(args), node_value);
    return ev.value;
}

namespace {

// C_1 and C_2 have closed forms straight from the expansion statement.
cplx ck_analytic_low(const FractionalOrders& orders, double beta,
                     const std::vector<cplx>& z_tail, int k) {
    const double rho1 = orders.rho1();
    if (k == 1) return cplx(rgamma(beta - rho1), 0.0);
    cplx c2(rgamma(beta - 2.0 * rho1), 0.0);
    for (size_t j = 0; j < z_tail.size(); ++j)
        c2 -= z_tail[j] * rgamma(beta - rho1 - orders.rho[j + 1]);
    return c2;
}

const std::vector<cplx>& ck_table(const FractionalOrders& orders, double beta,
                                  const std::vector<cplx>& z_tail, int p_max,
                                  const ContourSpec& contour) {
    const std::string key = ck_cache_key(orders, beta, z_tail);
    {
        std::shared_lock lock(g_ck_mutex);
        auto it = g_ck_cache.find(key);
        if (it != g_ck_cache.end() && static_cast<int>(it->second.size()) >= p_max)
            return it->second;
    }
    std::unique_lock lock(g_ck_mutex);
    auto& table = g_ck_cache[key];
    const int old = static_cast<int>(table.size());
    if (old < p_max) {
        table.resize(p_max);
        for (int k = old + 1; k <= p_max; ++k) {
            if (k <= 2)
                table[k - 1] = ck_analytic_low(orders, beta, z_tail, k);
            else {
                double K = 0.0;
                for (const cplx& zt : z_tail) K = std::max(K, std::abs(zt));
                const double pi_rho1 = orders.rho1() * std::numbers::pi;
                ContourSpec ck_spec =
                    ContourSpec::make(orders, K, contour.theta / pi_rho1, contour.mu / pi_rho1,
                                      contour.n_arc, contour.n_ray, k - 1);
                table[k - 1] = ml_ck_contour(orders, beta, z_tail, k, ck_spec);
            }
        }
    }
    return table;
}

}  // namespace

MLResult ml_asymptotic(const FractionalOrders& orders, const MLArguments& args, int p,
                       const ContourSpec& contour) {
    check_args(orders, args);
    if (p < 1) throw std::invalid_argument("ml_asymptotic: p must be a positive integer");
    if (!(args.beta > 2.0 * orders.rho1()))
        throw HypothesisViolation("ml_asymptotic requires beta > 2*rho1 (beta=" +
                                  std::to_string(args.beta) + ", rho1=" +
                                  std::to_string(orders.rho1()) + "); fall back to series/contour");
    if (!args.real_tail())
        throw std::invalid_argument("ml_asymptotic: z_j must be real and < 0 for j >= 2");

    std::vector<cplx> z_tail(args.z.begin() + 1, args.z.end());
    const std::vector<cplx>& ck = ck_table(orders, args.beta, z_tail, p + 1, contour);

    const cplx z1 = args.z1();
    cplx acc{0.0, 0.0};
    cplx inv_pow(1.0, 0.0);
    for (int k = 1; k <= p; ++k) {
        inv_pow /= z1;
        acc -= ck[k - 1] * inv_pow;
    }
    MLResult out;
    out.value = acc;
    out.error_estimate = std::abs(ck[p]) / std::pow(std::abs(z1), p + 1);
    out.regime = MLRegime::asymptotic;
    return out;
}

std::complex<double> ml_asymptotic_remainder(const FractionalOrders& orders,
                                             const MLArguments& args, int p,
                                             const ContourSpec& contour) {
    check_args(orders, args);
    if (p < 1) throw std::invalid_argument("ml_asymptotic_remainder: p must be >= 1");
    if (!args.real_tail())
        throw std::invalid_argument("ml_asymptotic_remainder: z_j must be real for j >= 2");
    contour.validate(orders, args.tail_bound());

    const Integrand f{&orders, args.beta, &args.z};
    const cplx z1 = args.z1();
    auto node_value = [&](const cplx& t) {
        const cplx log_t = std::log(t);
        const cplx q = f.q_poly(log_t);
        return f.weight(t, log_t) * std::pow(q / z1, p) / (q - z1);
    };
    ContourEvaluation ev = run_contour(orders, args, contour, symmetric_case(args), node_value);
    return ev.value;
}

MLResult ml_eval(const FractionalOrders& orders, const MLArguments& args,
                 const EvalPolicy& policy) {
    check_args(orders, args);
    const double az1 = std::abs(args.z1());

    auto contour_spec = [&](int poly) {
        return ContourSpec::make(orders, std::max(args.tail_bound(), 1e-6),
                                 policy.contour_theta_factor, policy.contour_mu_factor,
                                 policy.n_arc, policy.n_ray, poly);
    };
    const double mu = policy.contour_mu_factor * orders.rho1() * std::numbers::pi;
    const bool contour_admissible =
        args.real_tail() && az1 > 0.0 && std::abs(std::arg(args.z1())) >= mu;
    ContourOptions copt;
    copt.convergence_check = policy.contour_convergence_check;

    if (policy.force) {
        switch (*policy.force) {
            case MLRegime::series: return ml_series(orders, args, policy.series);
            case MLRegime::contour: return ml_contour(orders, args, contour_spec(0), copt);
            case MLRegime::asymptotic: return ml_asymptotic(orders, args, 3, contour_spec(2));
        }
    }

    std::optional<MLResult> series_result;
    if (az1 <= policy.series_z1_cap) {
        try {
            series_result = ml_series(orders, args, policy.series);
            const double scale =
                std::max(std::abs(series_result->value), 1.0 / (1.0 + az1));
            if (series_result->error_estimate <= policy.target_rel_tol * scale)
                return *series_result;
        } catch (const NonConvergence&) {
            // fall through to the contour
        }
    }
    if (contour_admissible) return ml_contour(orders, args, contour_spec(0), copt);
    if (series_result) return *series_result;  // uncertified but honest error estimate
    throw AllRegimesFailed("ml_eval: |z1|=" + std::to_string(az1) +
                           " exceeds the series range and the contour preconditions "
                           "(real tail, mu <= |arg z1| <= pi) do not hold");
}

BoundReport ml_bound_check(const FractionalOrders& orders, const MLArguments& args,
                           const EvalPolicy& policy) {
    const MLResult r = ml_eval(orders, args, policy);
    BoundReport rep;
    rep.abs_value = std::abs(r.value);
    rep.z1_abs = std::abs(args.z1());
    rep.scaled = (1.0 + rep.z1_abs) * rep.abs_value;
    return rep;
}

double fit_lemma2_constant(const FractionalOrders& orders, double beta,
                           const std::vector<std::complex<double>>& z_tail,
                           const std::vector<double>& z1_grid, const EvalPolicy& policy) {
    double c = 0.0;
    for (double z1 : z1_grid) {
        std::vector<cplx> z;
        z.reserve(z_tail.size() + 1);
        z.push_back(cplx(z1, 0.0));
        for (const cplx& zt : z_tail) z.push_back(zt);
        c = std::max(c, ml_bound_check(orders, MLArguments(beta, z), policy).scaled);
    }
    return c;
}

}  // namespace mtfis
