#pragma once

// Verification campaigns: enumerate (inequality, parameter cell, case)
// combinations, evaluate each check on a seeded random function pair,
// and serialize the reports.
//
// Determinism contract: every case is keyed by its global index through
// derive_seed, so serial and multi-worker runs of the same config write
// byte-identical reports.  Workers share nothing mutable; results land
// in a pre-sized vector slot per case.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gpfineq/errors.hpp"
#include "gpfineq/generators.hpp"
#include "gpfineq/inequalities.hpp"

namespace gpfineq {

namespace detail {

// GPF_INEQ_LOG=off|info|debug; anything else counts as off
inline int log_level() {
    static const int level = [] {
        const char* e = std::getenv("GPF_INEQ_LOG");
        if (!e) return 0;
        const std::string s(e);
        if (s == "debug") return 2;
        if (s == "info") return 1;
        return 0;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[gpfineq] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[gpfineq] %s\n", msg.c_str());
}

} // namespace detail

enum class ReportFormat { Jsonl, Csv };

inline const char* to_string(ReportFormat f) {
    return f == ReportFormat::Jsonl ? "jsonl" : "csv";
}

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "jsonl") return ReportFormat::Jsonl;
    if (s == "csv") return ReportFormat::Csv;
    throw std::domain_error("unknown report format '" + s + "' (expected jsonl|csv)");
}

struct CampaignConfig {
    std::vector<InequalityId> inequalities = all_inequalities();
    std::vector<double> alpha_grid{1.0};
    std::vector<double> beta_grid{1.0};
    std::vector<double> p1_grid{1.0};
    std::vector<double> p2_grid{1.0};
    std::vector<double> x_grid{1.0};
    int cases_per_cell = 1;
    GeneratorConfig generator{};
    CheckSettings settings{};
    int workers = 1;
    std::string out_path;  // empty: no report file
    ReportFormat format = ReportFormat::Jsonl;

    void validate() const {
        if (inequalities.empty())
            throw std::domain_error("CampaignConfig: inequality set is empty");
        for (std::size_t i = 0; i < inequalities.size(); ++i)
            for (std::size_t j = i + 1; j < inequalities.size(); ++j)
                if (inequalities[i] == inequalities[j])
                    throw std::domain_error(
                        std::string("CampaignConfig: duplicate inequality '") +
                        to_string(inequalities[i]) + "'");
        auto check_grid = [](const std::vector<double>& g, const char* name,
                             double lo, double hi, bool lo_open) {
            if (g.empty())
                throw std::domain_error(std::string("CampaignConfig: ") + name +
                                        " is empty");
            for (double v : g) {
                const bool lo_ok = lo_open ? v > lo : v >= lo;
                if (!std::isfinite(v) || !lo_ok || v > hi)
                    throw std::domain_error(std::string("CampaignConfig: ") + name +
                                            " value out of range");
            }
        };
        // alpha capped by the gamma evaluator's domain
        check_grid(alpha_grid, "alpha_grid", 0.0, 170.0, true);
        check_grid(beta_grid, "beta_grid", 0.0, 170.0, true);
        check_grid(p1_grid, "p1_grid", 0.0, 1.0, true);
        check_grid(p2_grid, "p2_grid", 0.0, 1.0, true);
        check_grid(x_grid, "x_grid", 0.0, std::numeric_limits<double>::max(), true);
        if (cases_per_cell < 1)
            throw std::domain_error("CampaignConfig: cases_per_cell must be >= 1");
        if (workers < 1)
            throw std::domain_error("CampaignConfig: workers must be >= 1");
        generator.validate();
        settings.validate();
    }
};

// which grid dimensions an inequality actually consumes
inline bool uses_fractional_params(InequalityId id) {
    return id != InequalityId::Chebyshev && id != InequalityId::Theorem1 &&
           id != InequalityId::PolyaSzego;
}

inline bool uses_second_params(InequalityId id) {
    return id == InequalityId::Lemma2 || id == InequalityId::Corollary2 ||
           id == InequalityId::Lemma3 || id == InequalityId::Theorem2;
}

struct StatusCounts {
    std::uint64_t holds = 0;
    std::uint64_t violated_within_tolerance = 0;
    std::uint64_t violated = 0;
    std::uint64_t ill_conditioned = 0;
    std::uint64_t skipped = 0;

    std::uint64_t total() const {
        return holds + violated_within_tolerance + violated + ill_conditioned +
               skipped;
    }
};

struct CampaignSummary {
    std::uint64_t total_cases = 0;
    StatusCounts counts{};
    // report with the smallest relative margin (tightest or most violated)
    InequalityReport worst{};
    bool has_worst = false;
    double wall_seconds = 0.0;

    bool any_violated() const { return counts.violated > 0; }
};

struct CampaignResult {
    CampaignSummary summary;
    std::vector<InequalityReport> reports;
};

// ---------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_number_or_null(double v) {
    if (std::isnan(v)) return "null";
    return fmt_double(v);
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline std::string report_to_jsonl(const InequalityReport& r) {
    std::string line = "{";
    line += "\"inequality\":\"";
    line += to_string(r.id);
    line += "\",\"alpha\":" + detail::json_number_or_null(r.alpha);
    line += ",\"beta\":" + detail::json_number_or_null(r.beta);
    line += ",\"p1\":" + detail::json_number_or_null(r.p1);
    line += ",\"p2\":" + detail::json_number_or_null(r.p2);
    line += ",\"x\":" + detail::json_number_or_null(r.x);
    line += ",\"f\":\"" + detail::json_escape(r.f_desc) + "\"";
    line += ",\"g\":\"" + detail::json_escape(r.g_desc) + "\"";
    line += ",\"seed\":" + std::to_string(r.seed);
    line += ",\"case_index\":" + std::to_string(r.case_index);
    line += ",\"lhs\":" + detail::json_number_or_null(r.lhs);
    line += ",\"rhs\":" + detail::json_number_or_null(r.rhs);
    line += ",\"margin\":" + detail::json_number_or_null(r.margin);
    line += ",\"relative_margin\":" + detail::json_number_or_null(r.relative_margin);
    line += ",\"status\":\"";
    line += to_string(r.status);
    line += "\",\"note\":\"" + detail::json_escape(r.note) + "\"";
    line += "}";
    return line;
}

inline InequalityReport report_from_jsonl(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    auto num = [&](const char* key) {
        const auto& v = j.at(key);
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                           : v.get<double>();
    };
    InequalityReport r;
    r.id = inequality_from_string(j.at("inequality").get<std::string>());
    r.alpha = num("alpha");
    r.beta = num("beta");
    r.p1 = num("p1");
    r.p2 = num("p2");
    r.x = num("x");
    r.f_desc = j.at("f").get<std::string>();
    r.g_desc = j.at("g").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.case_index = j.at("case_index").get<std::uint64_t>();
    r.lhs = num("lhs");
    r.rhs = num("rhs");
    r.margin = num("margin");
    r.relative_margin = num("relative_margin");
    const std::string status = j.at("status").get<std::string>();
    bool matched = false;
    for (auto s : {CheckStatus::Holds, CheckStatus::ViolatedWithinTolerance,
                   CheckStatus::Violated, CheckStatus::IllConditioned,
                   CheckStatus::Skipped}) {
        if (status == to_string(s)) {
            r.status = s;
            matched = true;
        }
    }
    if (!matched) throw std::domain_error("unknown status '" + status + "'");
    r.note = j.at("note").get<std::string>();
    return r;
}

inline void write_reports_jsonl(const std::vector<InequalityReport>& reports,
                                std::ostream& os) {
    for (const auto& r : reports) os << report_to_jsonl(r) << '\n';
}

inline void write_reports_csv(const std::vector<InequalityReport>& reports,
                              std::ostream& os) {
    os << "inequality,alpha,beta,p1,p2,x,f,g,seed,case_index,lhs,rhs,margin,"
          "relative_margin,status,note\n";
    for (const auto& r : reports) {
        os << to_string(r.id) << ',' << detail::fmt_double(r.alpha) << ','
           << detail::fmt_double(r.beta) << ',' << detail::fmt_double(r.p1) << ','
           << detail::fmt_double(r.p2) << ',' << detail::fmt_double(r.x) << ','
           << detail::csv_quote(r.f_desc) << ',' << detail::csv_quote(r.g_desc)
           << ',' << r.seed << ',' << r.case_index << ','
           << detail::fmt_double(r.lhs) << ',' << detail::fmt_double(r.rhs) << ','
           << detail::fmt_double(r.margin) << ','
           << detail::fmt_double(r.relative_margin) << ',' << to_string(r.status)
           << ',' << detail::csv_quote(r.note) << '\n';
    }
}

// ---------------------------------------------------------------------
// Config file loading
// ---------------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                const std::vector<std::string>& allowed,
                                const char* where) {
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw std::domain_error(std::string("config: unknown key '") +
                                    item.key() + "' in " + where);
    }
}

inline std::vector<double> load_grid(const nlohmann::json& j, const char* key,
                                     std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_array())
        throw std::domain_error(std::string("config: ") + key +
                                " must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number())
            throw std::domain_error(std::string("config: ") + key +
                                    " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace detail

inline CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::domain_error("config: top level must be an object");
    detail::reject_unknown_keys(
        j,
        {"inequalities", "alpha_grid", "beta_grid", "p1_grid", "p2_grid", "x_grid",
         "cases_per_cell", "generator", "tol", "eps_den", "rhs_scale", "workers",
         "out", "format"},
        "top level");

    CampaignConfig cfg;
    if (j.contains("inequalities")) {
        if (!j.at("inequalities").is_array())
            throw std::domain_error("config: inequalities must be an array of names");
        cfg.inequalities.clear();
        for (const auto& v : j.at("inequalities"))
            cfg.inequalities.push_back(inequality_from_string(v.get<std::string>()));
    }
    cfg.alpha_grid = detail::load_grid(j, "alpha_grid", cfg.alpha_grid);
    cfg.beta_grid = detail::load_grid(j, "beta_grid", cfg.beta_grid);
    cfg.p1_grid = detail::load_grid(j, "p1_grid", cfg.p1_grid);
    cfg.p2_grid = detail::load_grid(j, "p2_grid", cfg.p2_grid);
    cfg.x_grid = detail::load_grid(j, "x_grid", cfg.x_grid);
    if (j.contains("cases_per_cell")) cfg.cases_per_cell = j.at("cases_per_cell").get<int>();
    if (j.contains("tol")) cfg.settings.tol = j.at("tol").get<double>();
    if (j.contains("eps_den")) cfg.settings.eps_den = j.at("eps_den").get<double>();
    if (j.contains("rhs_scale")) cfg.settings.rhs_scale = j.at("rhs_scale").get<double>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
    if (j.contains("format"))
        cfg.format = report_format_from_string(j.at("format").get<std::string>());

    if (j.contains("generator")) {
        const auto& g = j.at("generator");
        if (!g.is_object()) throw std::domain_error("config: generator must be an object");
        detail::reject_unknown_keys(
            g, {"seed", "delta", "positivity_floor", "x_range", "family_mix"},
            "generator");
        if (g.contains("seed")) cfg.generator.seed = g.at("seed").get<std::uint64_t>();
        if (g.contains("delta")) cfg.generator.delta = g.at("delta").get<double>();
        if (g.contains("positivity_floor"))
            cfg.generator.positivity_floor = g.at("positivity_floor").get<double>();
        if (g.contains("x_range")) {
            const auto& r = g.at("x_range");
            if (!r.is_array() || r.size() != 2)
                throw std::domain_error("config: generator.x_range must be [lo, hi]");
            cfg.generator.x_min = r.at(0).get<double>();
            cfg.generator.x_max = r.at(1).get<double>();
        }
        if (g.contains("family_mix")) {
            const auto& m = g.at("family_mix");
            if (!m.is_object())
                throw std::domain_error("config: generator.family_mix must be an object");
            detail::reject_unknown_keys(
                m, {"polynomial", "exponential_affine", "trig_affine", "step"},
                "generator.family_mix");
            auto& mix = cfg.generator.family_mix;
            if (m.contains("polynomial")) mix.polynomial = m.at("polynomial").get<double>();
            if (m.contains("exponential_affine"))
                mix.exponential_affine = m.at("exponential_affine").get<double>();
            if (m.contains("trig_affine")) mix.trig_affine = m.at("trig_affine").get<double>();
            if (m.contains("step")) mix.step = m.at("step").get<double>();
        }
    }
    cfg.validate();
    return cfg;
}

inline CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config: JSON parse failure in '" + path +
                                 "': " + e.what());
    }
    return campaign_config_from_json(j);
}

// ---------------------------------------------------------------------
// Campaign execution
// ---------------------------------------------------------------------

namespace detail {

struct CaseSpec {
    InequalityId id;
    double alpha, beta, p1, p2, x;
    std::uint64_t index;
};

inline std::vector<CaseSpec> enumerate_cases(const CampaignConfig& cfg) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> none{nan};
    std::vector<CaseSpec> cases;
    std::uint64_t index = 0;
    for (InequalityId id : cfg.inequalities) {
        const bool frac = uses_fractional_params(id);
        const bool second = uses_second_params(id);
        const auto& alphas = frac ? cfg.alpha_grid : none;
        const auto& betas = second ? cfg.beta_grid : none;
        const auto& p1s = frac ? cfg.p1_grid : none;
        const auto& p2s = second ? cfg.p2_grid : none;
        for (double alpha : alphas)
            for (double beta : betas)
                for (double p1 : p1s)
                    for (double p2 : p2s)
                        for (double x : cfg.x_grid)
                            for (int c = 0; c < cfg.cases_per_cell; ++c)
                                cases.push_back(
                                    {id, alpha, beta, p1, p2, x, index++});
    }
    return cases;
}

inline InequalityReport evaluate_case(const CampaignConfig& cfg, const CaseSpec& cs,
                                      double domain_end) {
    GeneratorConfig gen = cfg.generator;
    gen.seed = derive_seed(cfg.generator.seed, cs.index);
    gen.x_min = gen.x_max = domain_end;

    InequalityReport r;
    try {
        // the sign property has no envelope, so it draws synchronous pairs
        const auto [f, g] = cs.id == InequalityId::Chebyshev
                                ? generate_nondecreasing_pair(gen)
                                : generate_pair(gen);
        const FractionalParams pa{cs.alpha, cs.p1};
        const FractionalParams pb{cs.beta, cs.p2};
        const auto& s = cfg.settings;
        switch (cs.id) {
            case InequalityId::Chebyshev:
                r = chebyshev_check(f, g, 0.0, cs.x, s);
                break;
            case InequalityId::Theorem1:
                r = theorem1_check(f, g, constant_bounds(f, g, cs.x, 0.01), 0.0,
                                   cs.x, s);
                break;
            case InequalityId::PolyaSzego:
                r = polya_szego_classic_check(f, g, constant_bounds(f, g, cs.x, 0.01),
                                              0.0, cs.x, s);
                break;
            case InequalityId::AmGm:
                r = amgm_intermediate_check(
                    pa, f, g, proportional_envelope(f, g, gen.delta), cs.x, s);
                break;
            case InequalityId::Lemma1:
                r = lemma1_check(pa, f, g, proportional_envelope(f, g, gen.delta),
                                 cs.x, s);
                break;
            case InequalityId::Corollary1:
                r = corollary1_check(pa, f, g, constant_bounds(f, g, cs.x, 0.01),
                                     cs.x, s);
                break;
            case InequalityId::Lemma2:
                r = lemma2_check(pa, pb, f, g, proportional_envelope(f, g, gen.delta),
                                 cs.x, s);
                break;
            case InequalityId::Corollary2:
                r = corollary2_check(pa, pb, f, g, constant_bounds(f, g, cs.x, 0.01),
                                     cs.x, s);
                break;
            case InequalityId::Lemma3:
                r = lemma3_check(pa, pb, f, g, proportional_envelope(f, g, gen.delta),
                                 cs.x, s);
                break;
            case InequalityId::Theorem2:
                r = theorem2_check(pa, pb, f, g,
                                   proportional_envelope(f, g, gen.delta), cs.x, s);
                break;
            case InequalityId::Theorem3:
                r = theorem3_check(pa, f, g, proportional_envelope(f, g, gen.delta),
                                   cs.x, s);
                break;
            case InequalityId::Corollary3:
                r = corollary3_check(pa, f, g, constant_bounds(f, g, cs.x, 0.01),
                                     cs.x, s);
                break;
        }
    } catch (const NonConvergence& e) {
        r.id = cs.id;
        r.alpha = cs.alpha;
        r.beta = cs.beta;
        r.p1 = cs.p1;
        r.p2 = cs.p2;
        r.x = cs.x;
        r.lhs = r.rhs = r.margin = r.relative_margin =
            std::numeric_limits<double>::quiet_NaN();
        r.status = CheckStatus::Skipped;
        r.note = std::string("quadrature did not converge: ") + e.what();
    } catch (const GenerationExhausted& e) {
        r.id = cs.id;
        r.alpha = cs.alpha;
        r.beta = cs.beta;
        r.p1 = cs.p1;
        r.p2 = cs.p2;
        r.x = cs.x;
        r.lhs = r.rhs = r.margin = r.relative_margin =
            std::numeric_limits<double>::quiet_NaN();
        r.status = CheckStatus::Skipped;
        r.note = std::string("generation exhausted: ") + e.what();
    }
    r.seed = gen.seed;
    r.case_index = cs.index;
    return r;
}

} // namespace detail

inline CampaignResult run_campaign(const CampaignConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const auto cases = detail::enumerate_cases(cfg);
    // all pairs live on [0, max x] so every grid point can be evaluated
    const double domain_end =
        *std::max_element(cfg.x_grid.begin(), cfg.x_grid.end());

    detail::log_info("campaign: " + std::to_string(cases.size()) + " cases, " +
                     std::to_string(cfg.workers) + " worker(s)");

    std::vector<InequalityReport> reports(cases.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= cases.size()) break;
            try {
                reports[i] = detail::evaluate_case(cfg, cases[i], domain_end);
                if (detail::log_level() >= 2)
                    detail::log_debug("case " + std::to_string(i) + " " +
                                      to_string(reports[i].id) + " -> " +
                                      to_string(reports[i].status));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    if (cfg.workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers),
                                                    std::max<std::size_t>(cases.size(), 1));
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CampaignResult result;
    result.reports = std::move(reports);
    auto& summary = result.summary;
    summary.total_cases = result.reports.size();
    for (const auto& r : result.reports) {
        switch (r.status) {
            case CheckStatus::Holds: ++summary.counts.holds; break;
            case CheckStatus::ViolatedWithinTolerance:
                ++summary.counts.violated_within_tolerance;
                break;
            case CheckStatus::Violated: ++summary.counts.violated; break;
            case CheckStatus::IllConditioned: ++summary.counts.ill_conditioned; break;
            case CheckStatus::Skipped: ++summary.counts.skipped; break;
        }
        if (!std::isnan(r.relative_margin) &&
            (!summary.has_worst ||
             r.relative_margin < summary.worst.relative_margin)) {
            summary.worst = r;
            summary.has_worst = true;
        }
    }

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open report file '" + cfg.out_path + "'");
        if (cfg.format == ReportFormat::Jsonl)
            write_reports_jsonl(result.reports, out);
        else
            write_reports_csv(result.reports, out);
        if (!out)
            throw std::runtime_error("failed writing report file '" + cfg.out_path +
                                     "'");
    }

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail::log_info(
        "campaign done: holds=" + std::to_string(summary.counts.holds) +
        " vwt=" + std::to_string(summary.counts.violated_within_tolerance) +
        " violated=" + std::to_string(summary.counts.violated) +
        " ill=" + std::to_string(summary.counts.ill_conditioned) +
        " skipped=" + std::to_string(summary.counts.skipped));
    return result;
}

} // namespace gpfineq
