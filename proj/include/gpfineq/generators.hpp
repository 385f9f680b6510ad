#pragma once

// Seeded construction of positive function pairs, sandwich envelopes,
// and constant bounds for verification campaigns.
//
// Everything here is a pure function of its GeneratorConfig, so a
// campaign can derive one config per case (derive_seed) and evaluate
// cases in any order or thread count with identical results.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpfineq/errors.hpp"
#include "gpfineq/function_spec.hpp"
#include "gpfineq/inequalities.hpp"

namespace gpfineq {

struct FamilyMix {
    double polynomial = 1.0;
    double exponential_affine = 1.0;
    double trig_affine = 1.0;
    double step = 1.0;
};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    FamilyMix family_mix{};
    double delta = 0.25;            // envelope proportionality factor
    double x_min = 0.5, x_max = 2.5;  // range of domain ends
    double positivity_floor = 0.05;

    void validate() const {
        if (!(delta > 0.0) || !(delta < 1.0))
            throw std::domain_error("GeneratorConfig: delta must lie in (0, 1)");
        if (!(positivity_floor > 0.0))
            throw std::domain_error("GeneratorConfig: positivity_floor must be > 0");
        if (!(x_min > 0.0) || !(x_max >= x_min) || !std::isfinite(x_max))
            throw std::domain_error("GeneratorConfig: need 0 < x_min <= x_max < inf");
        const double w[] = {family_mix.polynomial, family_mix.exponential_affine,
                            family_mix.trig_affine, family_mix.step};
        double total = 0.0;
        for (double v : w) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::domain_error("GeneratorConfig: weights must be >= 0");
            total += v;
        }
        if (!(total > 0.0))
            throw std::domain_error("GeneratorConfig: at least one family weight > 0");
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// uniform in [0, 1) built from the top 53 bits, identical on every platform
inline double u01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

} // namespace detail

// Stable per-case seed: campaigns key generation off (base seed, case index)
// so that reports are identical for any worker count or execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return detail::splitmix64(seed ^ detail::splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace detail {

enum class FamilyKind { Polynomial, ExponentialAffine, TrigAffine, Step };

inline FamilyKind pick_family(std::mt19937_64& rng, const FamilyMix& mix) {
    const double w[] = {mix.polynomial, mix.exponential_affine, mix.trig_affine,
                        mix.step};
    const double total = w[0] + w[1] + w[2] + w[3];
    double u = u01(rng) * total;
    for (int i = 0; i < 3; ++i) {
        if (u < w[i]) return static_cast<FamilyKind>(i);
        u -= w[i];
    }
    return FamilyKind::Step;
}

inline FunctionSpec::Family draw_family(std::mt19937_64& rng, FamilyKind kind,
                                        double X, double floor) {
    const double scale = std::max(1.0, X);
    switch (kind) {
        case FamilyKind::Polynomial: {
            const int degree = 1 + int(u01(rng) * 3.0);
            std::vector<double> coeffs{uniform(rng, 0.5, 2.5)};
            double k_scale = 1.0;
            for (int k = 1; k <= degree; ++k) {
                k_scale *= scale;
                coeffs.push_back(uniform(rng, -0.6, 0.6) / k_scale);
            }
            return FunctionSpec::Polynomial{std::move(coeffs)};
        }
        case FamilyKind::ExponentialAffine: {
            const double c0 = uniform(rng, 0.2, 1.5);
            const double c1 = uniform(rng, 0.2, 1.5);
            const double c2 = uniform(rng, -2.0, 2.0) / scale;
            return FunctionSpec::ExponentialAffine{c0, c1, c2};
        }
        case FamilyKind::TrigAffine: {
            const double c0 = uniform(rng, std::max(0.8, floor + 0.2), 2.2);
            const double c1 = uniform(rng, 0.0, 0.9 * (c0 - floor));
            const double c2 = uniform(rng, 0.25, 8.0) / X;  // low-frequency cap
            const double c3 = uniform(rng, 0.0, 6.283185307179586);
            return FunctionSpec::TrigAffine{c0, c1, c2, c3};
        }
        case FamilyKind::Step: {
            const int jumps = 1 + int(u01(rng) * 3.0);
            std::vector<double> breaks;
            for (int k = 0; k < jumps; ++k)
                breaks.push_back(uniform(rng, 0.05 * X, 0.95 * X));
            std::sort(breaks.begin(), breaks.end());
            std::vector<double> levels;
            for (int k = 0; k <= jumps; ++k)
                levels.push_back(uniform(rng, floor + 0.05, 2.5));
            return FunctionSpec::Step{std::move(breaks), std::move(levels)};
        }
    }
    throw std::logic_error("draw_family: unreachable");
}

// Same families restricted to nondecreasing shapes: affine with
// nonnegative slope, growing exponentials, a rising sine arc, and
// steps with sorted levels.  Used where synchronicity is required
// (the plain sign property has no envelope to save it).
inline FunctionSpec::Family draw_nondecreasing_family(std::mt19937_64& rng,
                                                      FamilyKind kind, double X,
                                                      double floor) {
    const double scale = std::max(1.0, X);
    switch (kind) {
        case FamilyKind::Polynomial: {
            const double c0 = uniform(rng, floor + 0.1, 2.5);
            const double c1 = uniform(rng, 0.0, 1.5 / scale);
            return FunctionSpec::Polynomial{{c0, c1}};
        }
        case FamilyKind::ExponentialAffine: {
            const double c0 = uniform(rng, floor, 1.2);
            const double c1 = uniform(rng, 0.2, 1.2);
            const double c2 = uniform(rng, 0.1, 2.0) / scale;
            return FunctionSpec::ExponentialAffine{c0, c1, c2};
        }
        case FamilyKind::TrigAffine: {
            const double half_pi = 1.5707963267948966;
            const double c0 = uniform(rng, std::max(0.8, floor + 0.2), 2.2);
            const double c1 = uniform(rng, 0.0, 0.9 * (c0 - floor));
            const double c3 = uniform(rng, -half_pi, 0.0);
            // keep the argument inside the rising half-wave [-pi/2, pi/2]
            const double c2 = uniform(rng, 0.15, 1.0) * (half_pi - c3) / X;
            return FunctionSpec::TrigAffine{c0, c1, c2, c3};
        }
        case FamilyKind::Step: {
            const int jumps = 1 + int(u01(rng) * 3.0);
            std::vector<double> breaks;
            for (int k = 0; k < jumps; ++k)
                breaks.push_back(uniform(rng, 0.05 * X, 0.95 * X));
            std::sort(breaks.begin(), breaks.end());
            std::vector<double> levels;
            for (int k = 0; k <= jumps; ++k)
                levels.push_back(uniform(rng, floor + 0.05, 2.5));
            std::sort(levels.begin(), levels.end());
            return FunctionSpec::Step{std::move(breaks), std::move(levels)};
        }
    }
    throw std::logic_error("draw_nondecreasing_family: unreachable");
}

template <class DrawFn>
FunctionSpec generate_with(std::mt19937_64& rng, const GeneratorConfig& cfg, double X,
                           DrawFn&& draw) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const FamilyKind kind = pick_family(rng, cfg.family_mix);
        try {
            FunctionSpec candidate(X, draw(rng, kind, X, cfg.positivity_floor));
            if (candidate.grid_min(X) >= cfg.positivity_floor) return candidate;
        } catch (const std::domain_error&) {
            // negative dip or a collided breakpoint: resample
        }
    }
    throw GenerationExhausted(
        "generate_pair: no candidate cleared the positivity floor after 1000 draws");
}

} // namespace detail

// Deterministic pair of positive functions on a shared domain [0, X],
// X drawn from the configured range.
inline std::pair<FunctionSpec, FunctionSpec> generate_pair(const GeneratorConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const double X = detail::uniform(rng, cfg.x_min, cfg.x_max);
    auto draw = [](std::mt19937_64& r, detail::FamilyKind k, double domain,
                   double floor) { return detail::draw_family(r, k, domain, floor); };
    FunctionSpec f = detail::generate_with(rng, cfg, X, draw);
    FunctionSpec g = detail::generate_with(rng, cfg, X, draw);
    return {std::move(f), std::move(g)};
}

// Deterministic pair of positive nondecreasing functions (synchronous,
// so the plain sign property applies to them).
inline std::pair<FunctionSpec, FunctionSpec> generate_nondecreasing_pair(
    const GeneratorConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    const double X = detail::uniform(rng, cfg.x_min, cfg.x_max);
    auto draw = [](std::mt19937_64& r, detail::FamilyKind k, double domain,
                   double floor) {
        return detail::draw_nondecreasing_family(r, k, domain, floor);
    };
    FunctionSpec f = detail::generate_with(rng, cfg, X, draw);
    FunctionSpec g = detail::generate_with(rng, cfg, X, draw);
    return {std::move(f), std::move(g)};
}

// v1 = (1-delta) f, v2 = (1+delta) f, w1 = (1-delta) g, w2 = (1+delta) g:
// the sandwich condition holds by construction for positive f, g.
inline Envelope proportional_envelope(const FunctionSpec& f, const FunctionSpec& g,
                                      double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::domain_error("proportional_envelope: delta must lie in (0, 1)");
    return Envelope{f.scaled(1.0 - delta), f.scaled(1.0 + delta),
                    g.scaled(1.0 - delta), g.scaled(1.0 + delta)};
}

// Constant bounds from grid extrema over [0, x] (4096 points refined at
// breakpoints), widened by the relative slack.
inline ConstantBounds constant_bounds(const FunctionSpec& f, const FunctionSpec& g,
                                      double x, double slack = 0.0) {
    if (!(slack >= 0.0))
        throw std::domain_error("constant_bounds: slack must be >= 0");
    const auto [fmin, fmax] = f.grid_extrema(x);
    const auto [gmin, gmax] = g.grid_extrema(x);
    return ConstantBounds{(1.0 - slack) * fmin, (1.0 + slack) * fmax,
                          (1.0 - slack) * gmin, (1.0 + slack) * gmax};
}

// Half-interval step function on [0, 1] with levels 1-eps and 1+eps,
// paired with its exact bounds; drives the sharpness scan.
inline std::pair<FunctionSpec, ConstantBounds> remark_step_pair(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::domain_error("remark_step_pair: eps must lie in (0, 1)");
    const double m = 1.0 - eps, M = 1.0 + eps;
    return {FunctionSpec(1.0, FunctionSpec::Step{{0.5}, {m, M}}),
            ConstantBounds{m, M, m, M}};
}

} // namespace gpfineq
