#pragma once

// Gaussian quadrature machinery:
//
//  * Gauss rules for the weight (1+t)^B on [-1,1] (B > -1), built by the
//    Golub-Welsch procedure: eigen-decomposition of the Jacobi matrix of
//    the monic orthogonal-polynomial recurrence.  B = 0 gives plain
//    Gauss-Legendre.
//  * integrate_power_weighted: int_0^L u^(alpha-1) phi(u) du with the
//    endpoint singularity absorbed by the weight on the first panel,
//    interior breakpoints honoured, and per-panel node doubling until the
//    successive-refinement error estimate meets tolerance.
//  * integrate_adaptive: nonsingular adaptive integrator (Gauss 10/21
//    pair, recursive bisection) for the classical functionals.
//
// All routines are pure; rule tables are memoised per thread.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpfineq/errors.hpp"

namespace gpfineq {

// Tolerances and node budget for the integrators.  Defaults follow the
// operator accuracy contract: refine by doubling from 64 up to 4096 nodes
// per panel, accept when the successive estimate moves by less than
// rel_tol relative (abs_floor guards the all-but-impossible zero case).
struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_floor = 1e-300;
    int initial_nodes = 64;
    int max_nodes = 4096;

    void validate() const {
        if (!(rel_tol > 0.0) || !(rel_tol < 1.0))
            throw std::domain_error("QuadConfig: rel_tol must lie in (0, 1)");
        if (!(abs_floor > 0.0))
            throw std::domain_error("QuadConfig: abs_floor must be positive");
        if (initial_nodes < 2 || max_nodes < initial_nodes)
            throw std::domain_error("QuadConfig: need 2 <= initial_nodes <= max_nodes");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long nodes_used = 0;
};

namespace quad {

struct Rule {
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;  // positive
};

namespace detail {

// Implicit-QL eigensolver for a symmetric tridiagonal matrix, also
// rotating a vector z so that on exit z[i] is the first component of the
// i-th normalised eigenvector (classic IMTQLX).  d: diagonal, e:
// subdiagonal in e[0..n-2].  Eigenvalues come back sorted ascending in d.
inline void tridiag_eigen_first_components(std::vector<double>& d,
                                           std::vector<double>& e,
                                           std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    const double prec = std::numeric_limits<double>::epsilon();
    e.resize(n);
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            while (m < n - 1 &&
                   std::abs(e[m]) > prec * (std::abs(d[m]) + std::abs(d[m + 1])))
                ++m;
            if (m == l) break;
            if (++iter > 40)
                throw NonConvergence("gauss rule: QL iteration failed to converge");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;

            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    // rotation degenerated; drop the shift and restart
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort eigenvalues ascending, carrying the first components along.
    for (int i = 0; i < n - 1; ++i) {
        int k = i;
        for (int j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            std::swap(z[i], z[k]);
        }
    }
}

} // namespace detail

// n-point Gauss rule for the weight (1+t)^B on [-1, 1], B > -1.
// Golub-Welsch on the monic-Jacobi recurrence with parameters (A=0, B).
inline Rule gauss_weight_plus1_pow(int n, double B) {
    if (n < 1)
        throw std::domain_error("gauss rule: node count must be >= 1");
    if (!(B > -1.0))
        throw std::domain_error("gauss rule: weight exponent must exceed -1");

    // Zeroth moment: int_{-1}^{1} (1+t)^B dt = 2^(B+1) / (B+1).
    const double mu0 = std::pow(2.0, B + 1.0) / (B + 1.0);

    std::vector<double> diag(n), sub(n, 0.0);
    // Monic Jacobi recurrence with A = 0:
    //   alpha_0 = B/(B+2),  alpha_k = B^2 / ((2k+B)(2k+B+2))
    //   beta_1  = 4(B+1)/((B+2)^2 (B+3))
    //   beta_k  = 4 k^2 (k+B)^2 / ((2k+B)^2 (2k+B+1)(2k+B-1))
    diag[0] = B / (B + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + B;
        diag[k] = (B * B) / (t * (t + 2.0));
        const double beta =
            (k == 1) ? 4.0 * (B + 1.0) / ((B + 2.0) * (B + 2.0) * (B + 3.0))
                     : 4.0 * k * k * (k + B) * (k + B) /
                           (t * t * (t + 1.0) * (t - 1.0));
        sub[k - 1] = std::sqrt(beta);
    }

    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    detail::tridiag_eigen_first_components(diag, sub, z);

    Rule rule;
    rule.nodes = std::move(diag);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i)
        rule.weights[i] = mu0 * z[i] * z[i];
    return rule;
}

inline Rule gauss_legendre(int n) { return gauss_weight_plus1_pow(n, 0.0); }

// Per-thread rule memoisation.  Legendre rules (B = 0) are reused across
// every integral, so they live in an unbounded cache; weighted rules are
// keyed by a per-case exponent and get a bounded cache to keep long
// sweeps from accumulating tables.
inline const Rule& cached_rule(int n, double B) {
    thread_local std::map<int, Rule> legendre;
    thread_local std::map<std::pair<double, int>, Rule> weighted;
    if (B == 0.0) {
        auto it = legendre.find(n);
        if (it == legendre.end())
            it = legendre.emplace(n, gauss_legendre(n)).first;
        return it->second;
    }
    if (weighted.size() > 512) weighted.clear();
    auto key = std::make_pair(B, n);
    auto it = weighted.find(key);
    if (it == weighted.end())
        it = weighted.emplace(key, gauss_weight_plus1_pow(n, B)).first;
    return it->second;
}

// int_0^c u^(alpha-1) phi(u) du by the weighted rule: substituting
// u = c(1+t)/2 gives (c/2)^alpha * sum_i w_i phi(c(1+t_i)/2).
template <class F>
double weighted_panel(double alpha, F&& phi, double c, int n) {
    const Rule& r = cached_rule(n, alpha - 1.0);
    const double half = 0.5 * c;
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * phi(half * (1.0 + r.nodes[i]));
    return std::pow(half, alpha) * s;
}

// int_a^b u^(alpha-1) phi(u) du for 0 < a < b: the weight is smooth away
// from zero, so fold it into the integrand under Gauss-Legendre.
template <class F>
double away_panel(double alpha, F&& phi, double a, double b, int n) {
    const Rule& r = cached_rule(n, 0.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double u = mid + half * r.nodes[i];
        s += r.weights[i] * std::pow(u, alpha - 1.0) * phi(u);
    }
    return half * s;
}

} // namespace quad

// int_0^L u^(alpha-1) phi(u) du.
//
// Panels: [0, c_1], [c_1, c_2], ..., [c_k, L] where the c_j are the
// interior breakpoints (images of kinks/jumps of the integrand), sorted
// and deduplicated.  The first panel uses the (1+t)^(alpha-1) Gauss rule,
// the rest plain Gauss-Legendre.  Each panel doubles its node count until
// two successive estimates agree to rel_tol.
template <class F>
QuadratureResult integrate_power_weighted(double alpha, F&& phi, double L,
                                          std::vector<double> interior_breaks = {},
                                          const QuadConfig& cfg = {}) {
    cfg.validate();
    if (!(alpha > 0.0))
        throw std::domain_error("integrate_power_weighted: alpha must be positive");
    if (!(L > 0.0))
        throw std::domain_error("integrate_power_weighted: upper limit must be positive");

    std::vector<double> cuts{0.0};
    std::sort(interior_breaks.begin(), interior_breaks.end());
    for (double c : interior_breaks)
        if (c > 0.0 && c < L && c != cuts.back()) cuts.push_back(c);
    cuts.push_back(L);

    QuadratureResult total;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const bool first = (j == 0);
        const double a = cuts[j], b = cuts[j + 1];

        auto eval = [&](int n) {
            return first ? quad::weighted_panel(alpha, phi, b, n)
                         : quad::away_panel(alpha, phi, a, b, n);
        };

        int n = cfg.initial_nodes;
        double prev = eval(n);
        total.nodes_used += n;
        bool accepted = false;
        while (n * 2 <= cfg.max_nodes) {
            n *= 2;
            const double cur = eval(n);
            total.nodes_used += n;
            const double err = std::abs(cur - prev);
            if (err <= cfg.rel_tol * std::max(std::abs(cur), cfg.abs_floor)) {
                total.value += cur;
                total.abs_error_estimate += err;
                accepted = true;
                break;
            }
            prev = cur;
        }
        if (!accepted)
            throw NonConvergence(
                "integrate_power_weighted: panel [" + std::to_string(a) + ", " +
                std::to_string(b) + "] did not converge within " +
                std::to_string(cfg.max_nodes) + " nodes");
    }
    return total;
}

namespace quad {

template <class F>
double fixed_panel(F&& f, double a, double b, int n) {
    const Rule& r = cached_rule(n, 0.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * s;
}

template <class F>
void adapt_rec(F&& f, double a, double b, double tol_per_len,
               QuadratureResult& out, int depth) {
    const double coarse = fixed_panel(f, a, b, 10);
    const double fine = fixed_panel(f, a, b, 21);
    out.nodes_used += 31;
    const double err = std::abs(fine - coarse);
    if (err <= tol_per_len * (b - a) || depth >= 48) {
        if (depth >= 48 && err > tol_per_len * (b - a))
            throw NonConvergence("integrate_adaptive: bisection depth exhausted on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
        out.value += fine;
        out.abs_error_estimate += err;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt_rec(f, a, m, tol_per_len, out, depth + 1);
    adapt_rec(f, m, b, tol_per_len, out, depth + 1);
}

} // namespace quad

// Nonsingular adaptive integrator on [a, b] with optional pre-splits at
// interior breakpoints.  Error control: Gauss 10 vs 21 disagreement,
// bisecting until the local error fits a length-proportional share of the
// global budget rel_tol * max(|coarse estimate|, abs_floor).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    std::vector<double> interior_breaks = {},
                                    const QuadConfig& cfg = {}) {
    cfg.validate();
    if (!(a < b))
        throw std::domain_error("integrate_adaptive: need a < b");

    std::vector<double> cuts{a};
    std::sort(interior_breaks.begin(), interior_breaks.end());
    for (double c : interior_breaks)
        if (c > a && c < b && c != cuts.back()) cuts.push_back(c);
    cuts.push_back(b);

    // Global scale from a coarse pass, then a length-proportional budget.
    double scale = 0.0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
        scale += std::abs(quad::fixed_panel(f, cuts[j], cuts[j + 1], 21));
    scale = std::max(scale, cfg.abs_floor);
    const double tol_per_len = cfg.rel_tol * scale / (b - a);

    QuadratureResult out;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
        quad::adapt_rec(f, cuts[j], cuts[j + 1], tol_per_len, out, 0);
    return out;
}

} // namespace gpfineq
