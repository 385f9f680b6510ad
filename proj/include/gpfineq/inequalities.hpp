#pragma once

// Signed-margin evaluation of the Chebyshev / Gruss / Polya-Szego family
// of inequalities for the proportional fractional operator, plus their
// classical interval versions.
//
// Every check computes both sides numerically and reports
//   margin          = rhs - lhs,
//   relative_margin = margin / max(|lhs|, |rhs|, 1),
// classifying the result as Holds (relative_margin >= -tol),
// ViolatedWithinTolerance (a band of 100x tol flagging quadrature
// trouble), Violated, IllConditioned (a denominator below eps_den), or
// Skipped (degenerate domain, x = 0).
//
// CheckSettings.rhs_scale deliberately corrupts every right-hand side
// (default 1 = faithful); campaigns use it as a forced-violation sentinel
// proving the harness can actually fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpfineq/errors.hpp"
#include "gpfineq/function_spec.hpp"
#include "gpfineq/gpf_operator.hpp"
#include "gpfineq/quadrature.hpp"

namespace gpfineq {

enum class InequalityId {
    Chebyshev,
    Theorem1,
    PolyaSzego,
    AmGm,
    Lemma1,
    Corollary1,
    Lemma2,
    Corollary2,
    Lemma3,
    Theorem2,
    Theorem3,
    Corollary3,
};

inline const char* to_string(InequalityId id) {
    switch (id) {
        case InequalityId::Chebyshev:   return "chebyshev";
        case InequalityId::Theorem1:    return "theorem1";
        case InequalityId::PolyaSzego:  return "polya_szego";
        case InequalityId::AmGm:        return "amgm";
        case InequalityId::Lemma1:      return "lemma1";
        case InequalityId::Corollary1:  return "corollary1";
        case InequalityId::Lemma2:      return "lemma2";
        case InequalityId::Corollary2:  return "corollary2";
        case InequalityId::Lemma3:      return "lemma3";
        case InequalityId::Theorem2:    return "theorem2";
        case InequalityId::Theorem3:    return "theorem3";
        case InequalityId::Corollary3:  return "corollary3";
    }
    return "?";
}

inline InequalityId inequality_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(InequalityId::Corollary3); ++i) {
        const auto id = static_cast<InequalityId>(i);
        if (s == to_string(id)) return id;
    }
    throw std::domain_error("unknown inequality id '" + s + "'");
}

inline const std::vector<InequalityId>& all_inequalities() {
    static const std::vector<InequalityId> ids = {
        InequalityId::Chebyshev,  InequalityId::Theorem1,  InequalityId::PolyaSzego,
        InequalityId::AmGm,       InequalityId::Lemma1,    InequalityId::Corollary1,
        InequalityId::Lemma2,     InequalityId::Corollary2, InequalityId::Lemma3,
        InequalityId::Theorem2,   InequalityId::Theorem3,  InequalityId::Corollary3,
    };
    return ids;
}

enum class CheckStatus { Holds, ViolatedWithinTolerance, Violated, IllConditioned, Skipped };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Holds:                    return "Holds";
        case CheckStatus::ViolatedWithinTolerance:  return "ViolatedWithinTolerance";
        case CheckStatus::Violated:                 return "Violated";
        case CheckStatus::IllConditioned:           return "IllConditioned";
        case CheckStatus::Skipped:                  return "Skipped";
    }
    return "?";
}

struct CheckSettings {
    double tol = 1e-8;        // Holds iff relative_margin >= -tol
    double eps_den = 1e-12;   // denominators below this are ill-conditioned
    double rhs_scale = 1.0;   // forced-violation sentinel (1 = faithful)
    QuadConfig quad{};

    void validate() const {
        if (!(tol > 0.0) || !(tol < 1.0))
            throw std::domain_error("CheckSettings: tol must lie in (0, 1)");
        if (!(eps_den > 0.0))
            throw std::domain_error("CheckSettings: eps_den must be positive");
        if (!(rhs_scale > 0.0))
            throw std::domain_error("CheckSettings: rhs_scale must be positive");
        quad.validate();
    }
};

struct InequalityReport {
    InequalityId id = InequalityId::Chebyshev;
    // parameter record; NaN marks fields the check does not use
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double p2 = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    std::string f_desc, g_desc;
    std::uint64_t seed = 0;        // filled by campaigns
    std::uint64_t case_index = 0;  // filled by campaigns
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0, relative_margin = 0.0;
    CheckStatus status = CheckStatus::Skipped;
    std::string note;
};

// Four positive functions sandwiching f and g pointwise.
struct Envelope {
    FunctionSpec v1, v2, w1, w2;

    // grid audit of v1 <= f <= v2 and w1 <= g <= w2 on [0, hi]
    void validate_against(const FunctionSpec& f, const FunctionSpec& g, double hi,
                          int grid = 1024) const {
        const double slop = 1e-12;
        for (int i = 0; i <= grid; ++i) {
            const double t = hi * double(i) / double(grid);
            const double ft = f(t), gt = g(t);
            const double tol_f = slop * std::abs(ft), tol_g = slop * std::abs(gt);
            if (!(v1(t) > 0.0) || !(w1(t) > 0.0) ||
                v1(t) > ft + tol_f || v2(t) < ft - tol_f ||
                w1(t) > gt + tol_g || w2(t) < gt - tol_g)
                throw std::domain_error(
                    "Envelope: sandwich condition fails at tau = " + std::to_string(t));
        }
    }
};

// Constant two-sided bounds 0 < m <= f <= M, 0 < n <= g <= N.
struct ConstantBounds {
    double m = 1.0, M = 1.0, n = 1.0, N = 1.0;

    void validate() const {
        if (!(m > 0.0) || !(m <= M) || !std::isfinite(M))
            throw std::domain_error("ConstantBounds: need 0 < m <= M < inf");
        if (!(n > 0.0) || !(n <= N) || !std::isfinite(N))
            throw std::domain_error("ConstantBounds: need 0 < n <= N < inf");
    }

    void validate_against(const FunctionSpec& f, const FunctionSpec& g, double lo,
                          double hi, int grid = 1024) const {
        validate();
        const double slop = 1e-12;
        for (int i = 0; i <= grid; ++i) {
            const double t = lo + (hi - lo) * double(i) / double(grid);
            const double ft = f(t), gt = g(t);
            if (m > ft * (1.0 + slop) || M < ft * (1.0 - slop) ||
                n > gt * (1.0 + slop) || N < gt * (1.0 - slop))
                throw std::domain_error(
                    "ConstantBounds: bound fails at tau = " + std::to_string(t));
        }
    }
};

namespace detail {

inline CheckStatus classify_margin(double relative_margin, double tol) {
    if (relative_margin >= -tol) return CheckStatus::Holds;
    if (relative_margin >= -100.0 * tol) return CheckStatus::ViolatedWithinTolerance;
    return CheckStatus::Violated;
}

inline InequalityReport make_report(InequalityId id, double lhs, double rhs,
                                    const CheckSettings& s) {
    InequalityReport r;
    r.id = id;
    r.lhs = lhs;
    r.rhs = s.rhs_scale * rhs;
    r.margin = r.rhs - r.lhs;
    r.relative_margin =
        r.margin / std::max({std::abs(r.lhs), std::abs(r.rhs), 1.0});
    r.status = classify_margin(r.relative_margin, s.tol);
    return r;
}

inline InequalityReport off_scale(InequalityId id, CheckStatus st, std::string note) {
    InequalityReport r;
    r.id = id;
    r.lhs = r.rhs = r.margin = r.relative_margin =
        std::numeric_limits<double>::quiet_NaN();
    r.status = st;
    r.note = std::move(note);
    return r;
}

inline std::vector<double> merge_breaks(
    std::initializer_list<const FunctionSpec*> specs) {
    std::vector<double> out;
    for (const FunctionSpec* s : specs) {
        const auto b = s->breakpoints();
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

// GPF of a pointwise product/combination given as a callable.
template <class Fn>
double gpf(const FractionalParams& fp, Fn&& fn, double x,
           std::vector<double> breaks, const QuadConfig& cfg) {
    return gpf_left_kernel(fp, std::forward<Fn>(fn), x, std::move(breaks), cfg).value;
}

} // namespace detail

// ---------------------------------------------------------------------
// Classical interval functionals
// ---------------------------------------------------------------------

// T(f,g) = (1/(b-a)) int fg - ((1/(b-a)) int f)((1/(b-a)) int g),
// core form on arbitrary callables (positivity not required here).
template <class F, class G>
double chebyshev_functional_kernel(F f, G g, double a, double b,
                                   std::vector<double> breaks = {},
                                   const QuadConfig& cfg = {}) {
    if (!(a < b))
        throw std::domain_error("chebyshev_functional: need a < b");
    const double len = b - a;
    const double mean_fg =
        integrate_adaptive([&](double t) { return f(t) * g(t); }, a, b, breaks, cfg)
            .value / len;
    const double mean_f =
        integrate_adaptive([&](double t) { return f(t); }, a, b, breaks, cfg).value /
        len;
    const double mean_g =
        integrate_adaptive([&](double t) { return g(t); }, a, b, breaks, cfg).value /
        len;
    return mean_fg - mean_f * mean_g;
}

inline double chebyshev_functional(const FunctionSpec& f, const FunctionSpec& g,
                                   double a, double b, const QuadConfig& cfg = {}) {
    return chebyshev_functional_kernel([&](double t) { return f(t); },
                                       [&](double t) { return g(t); }, a, b,
                                       detail::merge_breaks({&f, &g}), cfg);
}

// Chebyshev sign property packaged as a report: for synchronous pairs
// T(f,g) >= 0, i.e. lhs = 0, rhs = T(f,g).
inline InequalityReport chebyshev_check(const FunctionSpec& f, const FunctionSpec& g,
                                        double a, double b,
                                        const CheckSettings& s = {}) {
    s.validate();
    constexpr auto id = InequalityId::Chebyshev;
    InequalityReport r = (a == b)
        ? detail::off_scale(id, CheckStatus::Skipped, "degenerate interval")
        : detail::make_report(id, 0.0, chebyshev_functional(f, g, a, b, s.quad), s);
    r.x = b;
    r.f_desc = f.descriptor();
    r.g_desc = g.descriptor();
    return r;
}

// Gruss-type bound: |T(f,g)| <= (1/4) ((M-m)(N-n)/sqrt(mnMN)) mean(f) mean(g).
inline InequalityReport theorem1_check(const FunctionSpec& f, const FunctionSpec& g,
                                       const ConstantBounds& bounds, double a, double b,
                                       const CheckSettings& s = {}) {
    s.validate();
    constexpr auto id = InequalityId::Theorem1;
    InequalityReport r = [&] {
        if (a == b)
            return detail::off_scale(id, CheckStatus::Skipped, "degenerate interval");
        bounds.validate_against(f, g, a, b);
        const double den = bounds.m * bounds.n * bounds.M * bounds.N;
        if (std::abs(den) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "m*n*M*N below eps_den");
        const double len = b - a;
        const double mean_f =
            integrate_adaptive([&](double t) { return f(t); }, a, b, f.breakpoints(),
                               s.quad).value / len;
        const double mean_g =
            integrate_adaptive([&](double t) { return g(t); }, a, b, g.breakpoints(),
                               s.quad).value / len;
        const double lhs = std::abs(chebyshev_functional(f, g, a, b, s.quad));
        const double rhs = 0.25 * (bounds.M - bounds.m) * (bounds.N - bounds.n) /
                           std::sqrt(den) * mean_f * mean_g;
        return detail::make_report(id, lhs, rhs, s);
    }();
    r.x = b;
    r.f_desc = f.descriptor();
    r.g_desc = g.descriptor();
    return r;
}

// Classical Polya-Szego: (int f^2)(int g^2) / (int fg)^2
//   <= (1/4) (sqrt(MN/mn) + sqrt(mn/MN))^2.
inline InequalityReport polya_szego_classic_check(const FunctionSpec& f,
                                                  const FunctionSpec& g,
                                                  const ConstantBounds& bounds,
                                                  double a, double b,
                                                  const CheckSettings& s = {}) {
    s.validate();
    constexpr auto id = InequalityId::PolyaSzego;
    InequalityReport r = [&] {
        if (a == b)
            return detail::off_scale(id, CheckStatus::Skipped, "degenerate interval");
        bounds.validate_against(f, g, a, b);
        const auto breaks = detail::merge_breaks({&f, &g});
        const double int_fg =
            integrate_adaptive([&](double t) { return f(t) * g(t); }, a, b, breaks,
                               s.quad).value;
        if (std::abs(int_fg) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "int(fg) below eps_den");
        const double int_f2 =
            integrate_adaptive([&](double t) { return f(t) * f(t); }, a, b,
                               f.breakpoints(), s.quad).value;
        const double int_g2 =
            integrate_adaptive([&](double t) { return g(t) * g(t); }, a, b,
                               g.breakpoints(), s.quad).value;
        const double lhs = int_f2 * int_g2 / (int_fg * int_fg);
        const double q = std::sqrt(bounds.M * bounds.N / (bounds.m * bounds.n));
        const double rhs = 0.25 * (q + 1.0 / q) * (q + 1.0 / q);
        return detail::make_report(id, lhs, rhs, s);
    }();
    r.x = b;
    r.f_desc = f.descriptor();
    r.g_desc = g.descriptor();
    return r;
}

// ---------------------------------------------------------------------
// Fractional-operator checks
// ---------------------------------------------------------------------

namespace detail {

inline void stamp_single(InequalityReport& r, const FractionalParams& fp, double x,
                         const FunctionSpec& f, const FunctionSpec& g) {
    r.alpha = fp.alpha;
    r.p1 = fp.p;
    r.x = x;
    r.f_desc = f.descriptor();
    r.g_desc = g.descriptor();
}

inline void stamp_pair(InequalityReport& r, const FractionalParams& pa,
                       const FractionalParams& pb, double x, const FunctionSpec& f,
                       const FunctionSpec& g) {
    stamp_single(r, pa, x, f, g);
    r.beta = pb.alpha;
    r.p2 = pb.p;
}

} // namespace detail

// Integrated AM-GM intermediate step:
//   I[w1 w2 f^2] + I[v1 v2 g^2] <= I[(v1 w1 + v2 w2) f g].
inline InequalityReport amgm_intermediate_check(const FractionalParams& fp,
                                                const FunctionSpec& f,
                                                const FunctionSpec& g,
                                                const Envelope& env, double x,
                                                const CheckSettings& s = {}) {
    s.validate();
    fp.validate();
    constexpr auto id = InequalityId::AmGm;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);
        const auto all =
            detail::merge_breaks({&f, &g, &env.v1, &env.v2, &env.w1, &env.w2});
        const double lhs =
            detail::gpf(fp, [&](double t) { return env.w1(t) * env.w2(t) * f(t) * f(t); },
                        x, all, s.quad) +
            detail::gpf(fp, [&](double t) { return env.v1(t) * env.v2(t) * g(t) * g(t); },
                        x, all, s.quad);
        const double rhs = detail::gpf(
            fp,
            [&](double t) {
                return (env.v1(t) * env.w1(t) + env.v2(t) * env.w2(t)) * f(t) * g(t);
            },
            x, all, s.quad);
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_single(r, fp, x, f, g);
    return r;
}

// Ratio form of the envelope AM-GM bound:
//   I[w1 w2 f^2] I[v1 v2 g^2] / (I[(v1 w1 + v2 w2) f g])^2 <= 1/4.
inline InequalityReport lemma1_check(const FractionalParams& fp, const FunctionSpec& f,
                                     const FunctionSpec& g, const Envelope& env,
                                     double x, const CheckSettings& s = {}) {
    s.validate();
    fp.validate();
    constexpr auto id = InequalityId::Lemma1;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);
        const auto all =
            detail::merge_breaks({&f, &g, &env.v1, &env.v2, &env.w1, &env.w2});
        const double cross = detail::gpf(
            fp,
            [&](double t) {
                return (env.v1(t) * env.w1(t) + env.v2(t) * env.w2(t)) * f(t) * g(t);
            },
            x, all, s.quad);
        const double den = cross * cross;
        if (std::abs(den) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "I[(v1w1+v2w2)fg]^2 below eps_den");
        const double lhs =
            detail::gpf(fp, [&](double t) { return env.w1(t) * env.w2(t) * f(t) * f(t); },
                        x, all, s.quad) *
            detail::gpf(fp, [&](double t) { return env.v1(t) * env.v2(t) * g(t) * g(t); },
                        x, all, s.quad) / den;
        return detail::make_report(id, lhs, 0.25, s);
    }();
    detail::stamp_single(r, fp, x, f, g);
    return r;
}

// Constant-bounds Polya-Szego for the fractional operator:
//   I[f^2] I[g^2] / (I[fg])^2 <= (1/4)(sqrt(mn/MN) + sqrt(MN/mn))^2.
inline InequalityReport corollary1_check(const FractionalParams& fp,
                                         const FunctionSpec& f, const FunctionSpec& g,
                                         const ConstantBounds& bounds, double x,
                                         const CheckSettings& s = {}) {
    s.validate();
    fp.validate();
    constexpr auto id = InequalityId::Corollary1;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        bounds.validate_against(f, g, 0.0, x);
        const auto fg_breaks = detail::merge_breaks({&f, &g});
        const double cross =
            detail::gpf(fp, [&](double t) { return f(t) * g(t); }, x, fg_breaks, s.quad);
        const double den = cross * cross;
        if (std::abs(den) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "I[fg]^2 below eps_den");
        const double lhs =
            detail::gpf(fp, [&](double t) { return f(t) * f(t); }, x, f.breakpoints(),
                        s.quad) *
            detail::gpf(fp, [&](double t) { return g(t) * g(t); }, x, g.breakpoints(),
                        s.quad) / den;
        const double q = std::sqrt(bounds.M * bounds.N / (bounds.m * bounds.n));
        const double rhs = 0.25 * (q + 1.0 / q) * (q + 1.0 / q);
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_single(r, fp, x, f, g);
    return r;
}

// Two-parameter envelope bound:
//   Ia[v1v2] Ib[w1w2] Ia[f^2] Ib[g^2]
//     <= (1/4)(Ia[v1 f] Ib[w1 g] + Ia[v2 f] Ib[w2 g])^2.
inline InequalityReport lemma2_check(const FractionalParams& pa,
                                     const FractionalParams& pb, const FunctionSpec& f,
                                     const FunctionSpec& g, const Envelope& env,
                                     double x, const CheckSettings& s = {}) {
    s.validate();
    pa.validate();
    pb.validate();
    constexpr auto id = InequalityId::Lemma2;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);
        const auto all =
            detail::merge_breaks({&f, &g, &env.v1, &env.v2, &env.w1, &env.w2});
        const double lhs =
            detail::gpf(pa, [&](double t) { return env.v1(t) * env.v2(t); }, x, all,
                        s.quad) *
            detail::gpf(pb, [&](double t) { return env.w1(t) * env.w2(t); }, x, all,
                        s.quad) *
            detail::gpf(pa, [&](double t) { return f(t) * f(t); }, x, all, s.quad) *
            detail::gpf(pb, [&](double t) { return g(t) * g(t); }, x, all, s.quad);
        const double sum =
            detail::gpf(pa, [&](double t) { return env.v1(t) * f(t); }, x, all, s.quad) *
                detail::gpf(pb, [&](double t) { return env.w1(t) * g(t); }, x, all,
                            s.quad) +
            detail::gpf(pa, [&](double t) { return env.v2(t) * f(t); }, x, all, s.quad) *
                detail::gpf(pb, [&](double t) { return env.w2(t) * g(t); }, x, all,
                            s.quad);
        return detail::make_report(id, lhs, 0.25 * sum * sum, s);
    }();
    detail::stamp_pair(r, pa, pb, x, f, g);
    return r;
}

// Constant-bounds specialization of the two-parameter bound:
//   G_a G_b Ia[f^2] Ib[g^2] / (Ia[f] Ib[g])^2
//     <= (1/4)(sqrt(mn/MN) + sqrt(MN/mn))^2.
inline InequalityReport corollary2_check(const FractionalParams& pa,
                                         const FractionalParams& pb,
                                         const FunctionSpec& f, const FunctionSpec& g,
                                         const ConstantBounds& bounds, double x,
                                         const CheckSettings& s = {}) {
    s.validate();
    pa.validate();
    pb.validate();
    constexpr auto id = InequalityId::Corollary2;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        bounds.validate_against(f, g, 0.0, x);
        const double If = detail::gpf(pa, [&](double t) { return f(t); }, x,
                                      f.breakpoints(), s.quad);
        const double Ig = detail::gpf(pb, [&](double t) { return g(t); }, x,
                                      g.breakpoints(), s.quad);
        const double den = If * Ig * If * Ig;
        if (std::abs(den) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "(Ia[f] Ib[g])^2 below eps_den");
        const double lhs =
            gpf_of_one(pa, x) * gpf_of_one(pb, x) *
            detail::gpf(pa, [&](double t) { return f(t) * f(t); }, x, f.breakpoints(),
                        s.quad) *
            detail::gpf(pb, [&](double t) { return g(t) * g(t); }, x, g.breakpoints(),
                        s.quad) / den;
        const double q = std::sqrt(bounds.M * bounds.N / (bounds.m * bounds.n));
        const double rhs = 0.25 * (q + 1.0 / q) * (q + 1.0 / q);
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_pair(r, pa, pb, x, f, g);
    return r;
}

// Cross-ratio envelope bound:
//   Ia[f^2] Ib[g^2] <= Ia[v2 f g / w1] Ib[w2 f g / v1].
inline InequalityReport lemma3_check(const FractionalParams& pa,
                                     const FractionalParams& pb, const FunctionSpec& f,
                                     const FunctionSpec& g, const Envelope& env,
                                     double x, const CheckSettings& s = {}) {
    s.validate();
    pa.validate();
    pb.validate();
    constexpr auto id = InequalityId::Lemma3;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);
        if (env.w1.grid_min(x) < s.eps_den || env.v1.grid_min(x) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "min(v1) or min(w1) below eps_den");
        const auto all =
            detail::merge_breaks({&f, &g, &env.v1, &env.v2, &env.w1, &env.w2});
        const double lhs =
            detail::gpf(pa, [&](double t) { return f(t) * f(t); }, x, all, s.quad) *
            detail::gpf(pb, [&](double t) { return g(t) * g(t); }, x, all, s.quad);
        const double rhs =
            detail::gpf(pa,
                        [&](double t) { return env.v2(t) * f(t) * g(t) / env.w1(t); },
                        x, all, s.quad) *
            detail::gpf(pb,
                        [&](double t) { return env.w2(t) * f(t) * g(t) / env.v1(t); },
                        x, all, s.quad);
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_pair(r, pa, pb, x, f, g);
    return r;
}

namespace detail {

// A-terms of the covariance-style bounds.  With G_a = I^{alpha,p1}[1],
// G_b = I^{beta,p2}[1] evaluated in closed form:
//   A1(u,v,w) = G_b (Ia[(v+w)u])^2 / (4 Ia[vw]) - Ia[u] Ib[u]
//   A2(u,v,w) = G_a (Ib[(v+w)u])^2 / (4 Ib[vw]) - Ia[u] Ib[u]
struct ATermEval {
    const FractionalParams& pa;
    const FractionalParams& pb;
    double x;
    const CheckSettings& s;
    double Ga, Gb;

    ATermEval(const FractionalParams& pa_, const FractionalParams& pb_, double x_,
              const CheckSettings& s_)
        : pa(pa_), pb(pb_), x(x_), s(s_),
          Ga(gpf_of_one(pa_, x_)), Gb(gpf_of_one(pb_, x_)) {}

    // returns {A1 + A2, smallest |denominator| encountered}
    std::pair<double, double> sum(const FunctionSpec& u, const FunctionSpec& v,
                                  const FunctionSpec& w) const {
        const auto breaks = merge_breaks({&u, &v, &w});
        const double Iu_a = gpf(pa, [&](double t) { return u(t); }, x, breaks, s.quad);
        const double Iu_b = gpf(pb, [&](double t) { return u(t); }, x, breaks, s.quad);
        const double cross = Iu_a * Iu_b;

        const double vw_a =
            gpf(pa, [&](double t) { return v(t) * w(t); }, x, breaks, s.quad);
        const double vw_b =
            gpf(pb, [&](double t) { return v(t) * w(t); }, x, breaks, s.quad);
        const double vwu_a = gpf(
            pa, [&](double t) { return (v(t) + w(t)) * u(t); }, x, breaks, s.quad);
        const double vwu_b = gpf(
            pb, [&](double t) { return (v(t) + w(t)) * u(t); }, x, breaks, s.quad);

        const double a1 = Gb * vwu_a * vwu_a / (4.0 * vw_a) - cross;
        const double a2 = Ga * vwu_b * vwu_b / (4.0 * vw_b) - cross;
        return {a1 + a2, std::min(std::abs(4.0 * vw_a), std::abs(4.0 * vw_b))};
    }
};

} // namespace detail

// Covariance-style two-parameter bound:
//   G_a Ib[fg] + G_b Ia[fg] - Ia[f] Ib[g] - Ib[f] Ia[g]
//     <= |A1(f,v1,v2)+A2(f,v1,v2)|^(1/2) |A1(g,w1,w2)+A2(g,w1,w2)|^(1/2).
inline InequalityReport theorem2_check(const FractionalParams& pa,
                                       const FractionalParams& pb,
                                       const FunctionSpec& f, const FunctionSpec& g,
                                       const Envelope& env, double x,
                                       const CheckSettings& s = {}) {
    s.validate();
    pa.validate();
    pb.validate();
    constexpr auto id = InequalityId::Theorem2;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);

        const detail::ATermEval at(pa, pb, x, s);
        const auto [af, den_f] = at.sum(f, env.v1, env.v2);
        const auto [ag, den_g] = at.sum(g, env.w1, env.w2);
        if (den_f < s.eps_den || den_g < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "4 I[vw] below eps_den");

        const auto fg_breaks = detail::merge_breaks({&f, &g});
        const double Ifg_a =
            detail::gpf(pa, [&](double t) { return f(t) * g(t); }, x, fg_breaks, s.quad);
        const double Ifg_b =
            detail::gpf(pb, [&](double t) { return f(t) * g(t); }, x, fg_breaks, s.quad);
        const double If_a =
            detail::gpf(pa, [&](double t) { return f(t); }, x, f.breakpoints(), s.quad);
        const double If_b =
            detail::gpf(pb, [&](double t) { return f(t); }, x, f.breakpoints(), s.quad);
        const double Ig_a =
            detail::gpf(pa, [&](double t) { return g(t); }, x, g.breakpoints(), s.quad);
        const double Ig_b =
            detail::gpf(pb, [&](double t) { return g(t); }, x, g.breakpoints(), s.quad);

        const double lhs =
            at.Ga * Ifg_b + at.Gb * Ifg_a - If_a * Ig_b - If_b * Ig_a;
        const double rhs = std::sqrt(std::abs(af)) * std::sqrt(std::abs(ag));
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_pair(r, pa, pb, x, f, g);
    return r;
}

// Single-parameter specialization (beta = alpha, p2 = p1):
//   |G_a Ia[fg] - Ia[f] Ia[g]| <= |A(f,v1,v2) A(g,w1,w2)|^(1/2)
// with A(u,v,w) = G_a (Ia[(v+w)u])^2 / (4 Ia[vw]) - (Ia[u])^2.
inline InequalityReport theorem3_check(const FractionalParams& fp,
                                       const FunctionSpec& f, const FunctionSpec& g,
                                       const Envelope& env, double x,
                                       const CheckSettings& s = {}) {
    s.validate();
    fp.validate();
    constexpr auto id = InequalityId::Theorem3;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        env.validate_against(f, g, x);

        const double Ga = gpf_of_one(fp, x);
        auto a_term = [&](const FunctionSpec& u, const FunctionSpec& v,
                          const FunctionSpec& w, double& den_out) {
            const auto breaks = detail::merge_breaks({&u, &v, &w});
            const double Iu =
                detail::gpf(fp, [&](double t) { return u(t); }, x, breaks, s.quad);
            const double vw =
                detail::gpf(fp, [&](double t) { return v(t) * w(t); }, x, breaks, s.quad);
            const double vwu = detail::gpf(
                fp, [&](double t) { return (v(t) + w(t)) * u(t); }, x, breaks, s.quad);
            den_out = std::abs(4.0 * vw);
            return Ga * vwu * vwu / (4.0 * vw) - Iu * Iu;
        };

        double den_f = 0.0, den_g = 0.0;
        const double af = a_term(f, env.v1, env.v2, den_f);
        const double ag = a_term(g, env.w1, env.w2, den_g);
        if (den_f < s.eps_den || den_g < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "4 I[vw] below eps_den");

        const auto fg_breaks = detail::merge_breaks({&f, &g});
        const double Ifg =
            detail::gpf(fp, [&](double t) { return f(t) * g(t); }, x, fg_breaks, s.quad);
        const double If =
            detail::gpf(fp, [&](double t) { return f(t); }, x, f.breakpoints(), s.quad);
        const double Ig =
            detail::gpf(fp, [&](double t) { return g(t); }, x, g.breakpoints(), s.quad);

        const double lhs = std::abs(Ga * Ifg - If * Ig);
        const double rhs = std::sqrt(std::abs(af * ag));
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_single(r, fp, x, f, g);
    return r;
}

// Constant-bounds Gruss form for the fractional operator:
//   |G_a Ia[fg] - Ia[f] Ia[g]| <= ((M-m)(N-n)/(4 sqrt(MmNn))) Ia[f] Ia[g].
// The rhs is the constant-envelope specialization of the A-term bound:
// substituting v=m, w=M there cancels the G_a prefactor against the
// Ia[vw] = mM G_a denominator, so no G_a survives on this side.  (Keeping
// one would understate the bound whenever G_a < 1, and sampled cases at
// alpha = 2.5, x = 0.5 do exceed it.)
inline InequalityReport corollary3_check(const FractionalParams& fp,
                                         const FunctionSpec& f, const FunctionSpec& g,
                                         const ConstantBounds& bounds, double x,
                                         const CheckSettings& s = {}) {
    s.validate();
    fp.validate();
    constexpr auto id = InequalityId::Corollary3;
    InequalityReport r = [&] {
        if (x == 0.0) return detail::off_scale(id, CheckStatus::Skipped, "x = 0");
        bounds.validate_against(f, g, 0.0, x);
        const double den = bounds.M * bounds.m * bounds.N * bounds.n;
        if (std::abs(den) < s.eps_den)
            return detail::off_scale(id, CheckStatus::IllConditioned,
                                     "M*m*N*n below eps_den");

        const double Ga = gpf_of_one(fp, x);
        const auto fg_breaks = detail::merge_breaks({&f, &g});
        const double Ifg =
            detail::gpf(fp, [&](double t) { return f(t) * g(t); }, x, fg_breaks, s.quad);
        const double If =
            detail::gpf(fp, [&](double t) { return f(t); }, x, f.breakpoints(), s.quad);
        const double Ig =
            detail::gpf(fp, [&](double t) { return g(t); }, x, g.breakpoints(), s.quad);

        const double lhs = std::abs(Ga * Ifg - If * Ig);
        const double rhs = (bounds.M - bounds.m) * (bounds.N - bounds.n) /
                           (4.0 * std::sqrt(den)) * If * Ig;
        return detail::make_report(id, lhs, rhs, s);
    }();
    detail::stamp_single(r, fp, x, f, g);
    return r;
}

// ---------------------------------------------------------------------
// Sharpness scan for the classical Gruss constant
// ---------------------------------------------------------------------

// For each eps, build the half-interval step function f = g on [0, 1]
// with levels m = 1-eps, M = 1+eps and return
//   ratio = |T(f,f)| / (((M-m)^2/(4 m M)) mean(f)^2),
// which analytically equals 1 - eps^2: as eps -> 0 the ratio approaches
// 1, so no constant smaller than 1/4 works in the Gruss bound.
inline std::vector<std::pair<double, double>> sharpness_scan(
    const std::vector<double>& eps_grid, const CheckSettings& s = {}) {
    s.validate();
    std::vector<std::pair<double, double>> out;
    out.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        if (!(eps > 0.0) || !(eps < 1.0))
            throw std::domain_error("sharpness_scan: eps must lie in (0, 1)");
        const double m = 1.0 - eps, M = 1.0 + eps;
        const FunctionSpec f(1.0, FunctionSpec::Step{{0.5}, {m, M}});
        const double t_ff = std::abs(chebyshev_functional(f, f, 0.0, 1.0, s.quad));
        const double mean_f =
            integrate_adaptive([&](double t) { return f(t); }, 0.0, 1.0,
                               f.breakpoints(), s.quad).value;
        const double bound_core = (M - m) * (M - m) / (4.0 * m * M);
        out.emplace_back(eps, t_ff / (bound_core * mean_f * mean_f));
    }
    return out;
}

} // namespace gpfineq
