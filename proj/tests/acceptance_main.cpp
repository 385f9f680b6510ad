// Acceptance gate: one pass/fail line per criterion, exit code = number
// of failed criteria.  Each criterion runs independently so a failure or
// exception in one never masks the others.
//
// Criterion 8 exercises the installed CLI binary; its path comes from the
// GPFINEQ_CLI environment variable (set by the test harness), with a
// fallback to the conventional build layout.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gpfineq/gpfineq.hpp"
#include "support/reference.hpp"

namespace {

int failures = 0;

void report(int n, const std::string& what, bool ok,
            const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": "
              << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++failures;
}

void run(int n, const std::string& what,
         const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(n, what, ok, detail);
    } catch (const std::exception& e) {
        report(n, what, false, std::string("exception: ") + e.what());
    }
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

int campaign_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

// ---------------------------------------------------------------------

std::pair<bool, std::string> oracle_agreement() {
    const gpfineq::FunctionSpec one(4.0, gpfineq::FunctionSpec::Polynomial{{1.0}});
    double worst = 0.0;
    int points = 0;
    for (double alpha : {0.5, 1.0, 1.5, 2.5, 3.7}) {
        for (double p : {0.1, 0.5, 0.9, 1.0}) {
            for (double x : {0.5, 1.0, 4.0}) {
                const gpfineq::FractionalParams fp{alpha, p};
                const double quad = gpfineq::gpf_left(fp, one, x).value;
                const double series = gpfineq::gpf_of_one_series(fp, x);
                const double closed = gpfineq::gpf_of_one_closed(fp, x);
                worst = std::max({worst, rel_diff(quad, series),
                                  rel_diff(series, closed),
                                  rel_diff(quad, closed)});
                ++points;
            }
        }
    }
    return {points == 60 && worst <= 1e-9,
            std::to_string(points) + " grid points, worst pairwise rel diff " +
                fmt(worst)};
}

std::pair<bool, std::string> classical_reduction() {
    const gpfineq::FractionalParams fp{1.0, 1.0};
    gpfineq::GeneratorConfig gen;
    double worst = 0.0;
    int specs = 0;
    for (std::uint64_t seed = 1; specs < 50; ++seed) {
        gen.seed = seed;
        const auto [f, g] = gpfineq::generate_pair(gen);
        for (const gpfineq::FunctionSpec& h : {f, g}) {
            if (specs == 50) break;
            const double x = h.domain_end();
            const double lib = gpfineq::gpf_left(fp, h, x).value;
            const double ref = testsupport::integrate_with_breaks(
                [&](double t) { return h(t); }, 0.0, x, h.breakpoints());
            worst = std::max(worst, rel_diff(lib, ref));
            ++specs;
        }
    }
    return {worst <= 1e-9, std::to_string(specs) +
                               " random functions, worst rel diff " + fmt(worst)};
}

std::pair<bool, std::string> full_campaign() {
    gpfineq::CampaignConfig cfg;
    cfg.alpha_grid = {0.5, 1.0, 1.5, 2.5};
    cfg.beta_grid = {0.5, 1.0, 1.5, 2.5};
    cfg.p1_grid = {0.3, 0.7, 1.0};
    cfg.p2_grid = {0.3, 0.7, 1.0};
    cfg.x_grid = {0.5, 2.0};
    cfg.cases_per_cell = 25;
    cfg.generator.seed = 42;
    cfg.settings.tol = 1e-8;
    cfg.workers = campaign_workers();
    const auto result = gpfineq::run_campaign(cfg);
    const auto& c = result.summary.counts;
    std::ostringstream detail;
    detail << result.summary.total_cases << " cases: holds=" << c.holds
           << " vwt=" << c.violated_within_tolerance << " violated=" << c.violated
           << " ill=" << c.ill_conditioned << " skipped=" << c.skipped << ", "
           << fmt(result.summary.wall_seconds) << "s";
    if (result.summary.has_worst)
        detail << ", worst rel margin " << fmt(result.summary.worst.relative_margin);
    return {c.violated == 0 && c.violated_within_tolerance == 0, detail.str()};
}

std::pair<bool, std::string> equality_cases() {
    const gpfineq::FunctionSpec one(2.0, gpfineq::FunctionSpec::Polynomial{{1.0}});
    const gpfineq::Envelope env{one, one, one, one};
    const gpfineq::FractionalParams pa{0.7, 0.4};
    const gpfineq::FractionalParams pb{1.9, 1.0};
    const double x = 2.0;
    const gpfineq::CheckSettings s{};

    std::vector<std::pair<std::string, gpfineq::InequalityReport>> checks;
    checks.emplace_back("lemma1", gpfineq::lemma1_check(pa, one, one, env, x, s));
    checks.emplace_back("lemma2",
                        gpfineq::lemma2_check(pa, pb, one, one, env, x, s));
    checks.emplace_back("lemma3",
                        gpfineq::lemma3_check(pa, pb, one, one, env, x, s));
    checks.emplace_back("theorem2",
                        gpfineq::theorem2_check(pa, pb, one, one, env, x, s));
    checks.emplace_back("theorem3",
                        gpfineq::theorem3_check(pa, one, one, env, x, s));

    bool ok = true;
    double worst = 0.0;
    std::string bad;
    for (const auto& [name, r] : checks) {
        worst = std::max(worst, std::abs(r.relative_margin));
        if (!(std::abs(r.relative_margin) <= 1e-10)) {
            ok = false;
            bad += (bad.empty() ? "" : ", ") + name;
        }
    }
    // the first ratio must sit exactly on the saturating constant 1/4
    const double lemma1_lhs = checks.front().second.lhs;
    if (rel_diff(lemma1_lhs, 0.25) > 1e-10) {
        ok = false;
        bad += (bad.empty() ? "" : ", ") + std::string("lemma1 lhs != 1/4");
    }
    return {ok, ok ? "five equality checks, worst |rel margin| " + fmt(worst)
                   : "failing: " + bad};
}

std::pair<bool, std::string> sharpness() {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    const auto rows = gpfineq::sharpness_scan(grid);
    bool ok = rows.size() == 9;
    double worst = 0.0;
    for (const auto& [eps, ratio] : rows) {
        worst = std::max(worst, std::abs(ratio - (1.0 - eps * eps)));
        if (std::abs(ratio - (1.0 - eps * eps)) > 1e-10) ok = false;
    }
    if (!(rows.front().second > 0.98)) ok = false;
    return {ok, "worst |ratio - (1-eps^2)| " + fmt(worst) + ", ratio(0.1) = " +
                    fmt(rows.front().second)};
}

std::pair<bool, std::string> chebyshev_sign() {
    gpfineq::GeneratorConfig gen;
    double min_t = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        gen.seed = seed;
        const auto [f, g] = gpfineq::generate_nondecreasing_pair(gen);
        const double t =
            gpfineq::chebyshev_functional(f, g, 0.0, f.domain_end());
        min_t = std::min(min_t, t);
    }
    const bool sign_ok = min_t >= -1e-12;

    // closed-form anchor: f = g = tau on [0, 1]
    const gpfineq::FunctionSpec ramp(1.0,
                                     gpfineq::FunctionSpec::Polynomial{{0.0, 1.0}});
    const double t_ramp = gpfineq::chebyshev_functional(ramp, ramp, 0.0, 1.0);
    const bool anchor_ok = std::abs(t_ramp - 1.0 / 12.0) <= 1e-12;

    return {sign_ok && anchor_ok,
            "100 nondecreasing pairs, min T = " + fmt(min_t) +
                "; |T(tau,tau) - 1/12| = " + fmt(std::abs(t_ramp - 1.0 / 12.0))};
}

std::pair<bool, std::string> determinism() {
    gpfineq::CampaignConfig cfg;
    cfg.alpha_grid = {0.5, 1.5};
    cfg.beta_grid = {1.0};
    cfg.p1_grid = {0.7, 1.0};
    cfg.p2_grid = {0.3};
    cfg.x_grid = {0.5, 2.0};
    cfg.cases_per_cell = 5;
    cfg.generator.seed = 7;

    auto render = [](const gpfineq::CampaignResult& r) {
        std::ostringstream os;
        gpfineq::write_reports_jsonl(r.reports, os);
        return os.str();
    };
    cfg.workers = 1;
    const std::string serial_a = render(gpfineq::run_campaign(cfg));
    const std::string serial_b = render(gpfineq::run_campaign(cfg));
    cfg.workers = 8;
    const std::string parallel = render(gpfineq::run_campaign(cfg));

    const bool ok = !serial_a.empty() && serial_a == serial_b &&
                    serial_a == parallel;
    return {ok, std::to_string(serial_a.size()) +
                    " report bytes, serial x2 and 8-worker runs compared"};
}

std::pair<bool, std::string> violation_sentinel() {
    std::string cli;
    if (const char* env = std::getenv("GPFINEQ_CLI")) cli = env;
    if (cli.empty() || !std::ifstream(cli).good()) {
        for (const char* candidate : {"../gpfineq_cli", "./gpfineq_cli"}) {
            if (std::ifstream(candidate).good()) {
                cli = candidate;
                break;
            }
        }
    }
    if (cli.empty() || !std::ifstream(cli).good())
        return {false, "CLI binary not found (set GPFINEQ_CLI)"};

    const std::string config_path = "acceptance_sentinel.json";
    const std::string report_path = "acceptance_sentinel.jsonl";
    auto write_config = [&](double rhs_scale) {
        std::ofstream out(config_path);
        out << "{\"inequalities\":[\"lemma1\"],\"alpha_grid\":[0.5,1.0],"
               "\"x_grid\":[1.0],\"cases_per_cell\":5,\"rhs_scale\":"
            << rhs_scale << ",\"generator\":{\"delta\":0.05}}";
    };
    auto run_cli = [&]() -> int {
        const std::string cmd = "\"" + cli + "\" verify --config " + config_path +
                                " --out " + report_path + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (status == -1 || !WIFEXITED(status)) return -1;
        return WEXITSTATUS(status);
    };

    write_config(1.0);
    const int clean_exit = run_cli();

    write_config(0.9);
    const int corrupted_exit = run_cli();
    std::size_t violated_rows = 0;
    {
        std::ifstream in(report_path);
        std::string line;
        while (std::getline(in, line))
            if (gpfineq::report_from_jsonl(line).status ==
                gpfineq::CheckStatus::Violated)
                ++violated_rows;
    }
    std::remove(config_path.c_str());
    std::remove(report_path.c_str());

    const bool ok = clean_exit == 0 && corrupted_exit == 2 && violated_rows > 0;
    return {ok, "clean exit " + std::to_string(clean_exit) + ", corrupted exit " +
                    std::to_string(corrupted_exit) + ", " +
                    std::to_string(violated_rows) + " Violated rows"};
}

} // namespace

int main() {
    run(1, "operator value agrees across quadrature, series, and closed form",
        oracle_agreement);
    run(2, "alpha=1, p=1 reduces to the classical integral", classical_reduction);
    run(3, "full twelve-check campaign has no violations", full_campaign);
    run(4, "constant-1 inputs land on the equality cases", equality_cases);
    run(5, "step-family scan saturates the 1/4 constant as 1-eps^2", sharpness);
    run(6, "nondecreasing pairs keep the functional nonnegative", chebyshev_sign);
    run(7, "reports are byte-identical across reruns and worker counts",
        determinism);
    run(8, "corrupted bound is flagged Violated with exit code 2",
        violation_sentinel);

    if (failures != 0)
        std::cout << failures << " criterion(s) failed" << std::endl;
    return failures;
}
