#include "mtfis/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>

#include "mtfis/errors.hpp"

namespace mtfis {

namespace {

GaussRule compute_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n, symmetric roots; standard Chebyshev-like seed.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 64; ++it) {
            const double pn = std::legendre(n, x);
            const double pnm1 = std::legendre(n - 1, x);
            pp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::map<int, GaussRule> g_rules;
std::shared_mutex g_rules_mutex;

struct PanelEval {
    double fine = 0.0;
    double coarse = 0.0;
    double abs_sum = 0.0;
    double min_value = std::numeric_limits<double>::infinity();
};

PanelEval eval_panel(const std::function<double(double)>& f, double a, double b,
                     const GaussRule& fine, const GaussRule& coarse) {
    PanelEval out;
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    for (size_t i = 0; i < fine.nodes.size(); ++i) {
        const double v = f(mid + rad * fine.nodes[i]);
        out.fine += fine.weights[i] * v;
        out.abs_sum += fine.weights[i] * std::abs(v);
        out.min_value = std::min(out.min_value, v);
    }
    for (size_t i = 0; i < coarse.nodes.size(); ++i)
        out.coarse += coarse.weights[i] * f(mid + rad * coarse.nodes[i]);
    out.fine *= rad;
    out.coarse *= rad;
    out.abs_sum *= rad;
    return out;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    {
        std::shared_lock lock(g_rules_mutex);
        auto it = g_rules.find(n);
        if (it != g_rules.end()) return it->second;
    }
    std::unique_lock lock(g_rules_mutex);
    return g_rules.try_emplace(n, compute_rule(n)).first->second;
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const AdaptiveOptions& opt) {
    if (!(b > a)) {
        QuadResult empty;
        empty.min_integrand = 0.0;
        return empty;
    }
    const GaussRule& fine = gauss_legendre(opt.points);
    const GaussRule& coarse = gauss_legendre(std::max(2, opt.points / 2));

    struct Panel {
        double a, b;
        int depth;
        PanelEval eval;
    };

    QuadResult result;
    result.min_integrand = std::numeric_limits<double>::infinity();

    std::vector<Panel> stack;
    const int n0 = std::max(1, opt.initial_panels);
    for (int i = n0 - 1; i >= 0; --i) {
        const double pa = a + (b - a) * i / double(n0);
        const double pb = a + (b - a) * (i + 1) / double(n0);
        stack.push_back({pa, pb, 0, eval_panel(f, pa, pb, fine, coarse)});
        result.evaluations += opt.points + opt.points / 2;
    }

    double total_abs = 0.0;
    for (const auto& p : stack) total_abs += p.eval.abs_sum;

    double value = 0.0, err = 0.0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double panel_err = std::abs(p.eval.fine - p.eval.coarse);
        const double budget =
            std::max(opt.abs_tol, opt.rel_tol * total_abs) * (p.b - p.a) / (b - a);
        result.min_integrand = std::min(result.min_integrand, p.eval.min_value);
        if (panel_err <= budget || p.depth >= opt.max_depth) {
            if (p.depth >= opt.max_depth && panel_err > 64.0 * budget)
                throw QuadratureDivergence("adaptive quadrature: panel refinement exhausted at depth " +
                                           std::to_string(p.depth));
            value += p.eval.fine;
            err += panel_err;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        Panel left{p.a, mid, p.depth + 1, eval_panel(f, p.a, mid, fine, coarse)};
        Panel right{mid, p.b, p.depth + 1, eval_panel(f, mid, p.b, fine, coarse)};
        result.evaluations += 3 * opt.points;
        total_abs += left.eval.abs_sum + right.eval.abs_sum - p.eval.abs_sum;
        stack.push_back(left);
        stack.push_back(right);
    }

    result.value = value;
    result.error_estimate = err + 8.0 * std::numeric_limits<double>::epsilon() * total_abs;
    return result;
}

}  // namespace mtfis
