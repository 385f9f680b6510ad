// Command-line front end: campaign verification, single operator
// evaluations, and sharpness scans.
//
// Exit codes: 0 success, 2 campaign found a Violated case, 3 bad
// configuration / unparsable input / unwritable output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gpfineq/gpfineq.hpp"

namespace {

constexpr int kExitViolated = 2;
constexpr int kExitBadInput = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string summary_json(const gpfineq::CampaignSummary& s) {
    std::string out = "{";
    out += "\"total_cases\":" + std::to_string(s.total_cases);
    out += ",\"holds\":" + std::to_string(s.counts.holds);
    out += ",\"violated_within_tolerance\":" +
           std::to_string(s.counts.violated_within_tolerance);
    out += ",\"violated\":" + std::to_string(s.counts.violated);
    out += ",\"ill_conditioned\":" + std::to_string(s.counts.ill_conditioned);
    out += ",\"skipped\":" + std::to_string(s.counts.skipped);
    out += ",\"wall_seconds\":" + fmt(s.wall_seconds);
    out += ",\"worst\":";
    out += s.has_worst ? gpfineq::report_to_jsonl(s.worst) : "null";
    out += "}";
    return out;
}

int run_verify(const std::string& config_path, const CLI::App& cmd,
               const std::string& out_path, const std::string& format,
               int workers, std::uint64_t seed, double tol) {
    gpfineq::CampaignConfig cfg = gpfineq::load_campaign_config(config_path);
    if (cmd.count("--out")) cfg.out_path = out_path;
    if (cmd.count("--format"))
        cfg.format = gpfineq::report_format_from_string(format);
    if (cmd.count("--workers")) cfg.workers = workers;
    if (cmd.count("--seed")) cfg.generator.seed = seed;
    if (cmd.count("--tol")) cfg.settings.tol = tol;
    cfg.validate();

    const gpfineq::CampaignResult result = gpfineq::run_campaign(cfg);
    std::cout << summary_json(result.summary) << '\n';
    return result.summary.any_violated() ? kExitViolated : 0;
}

int run_eval(double alpha, double p, double x, const std::string& descriptor,
             double domain_end) {
    const gpfineq::FractionalParams fp{alpha, p};
    const gpfineq::FunctionSpec f =
        gpfineq::FunctionSpec::parse(descriptor, domain_end);
    const gpfineq::QuadratureResult r = gpfineq::gpf_left(fp, f, x);
    std::cout << "{\"value\":" << fmt(r.value)
              << ",\"abs_error_estimate\":" << fmt(r.abs_error_estimate)
              << ",\"nodes_used\":" << r.nodes_used << "}\n";
    return 0;
}

int run_sharpness(int count, const std::string& out_path) {
    std::vector<double> grid;
    grid.reserve(count);
    for (int i = 1; i <= count; ++i)
        grid.push_back(static_cast<double>(i) / (count + 1));
    const auto rows = gpfineq::sharpness_scan(grid);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot open output file '" + out_path + "'");
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    os << "epsilon,ratio,one_minus_eps_sq\n";
    for (const auto& [eps, ratio] : rows)
        os << fmt(eps) << ',' << fmt(ratio) << ',' << fmt(1.0 - eps * eps) << '\n';
    if (!os) throw std::runtime_error("failed writing '" + out_path + "'");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Fractional-integral inequality verifier: evaluates proportional "
        "fractional operators and checks Chebyshev / Polya-Szego / Gruss-type "
        "bounds on generated function families."};
    app.require_subcommand(1);

    // verify -------------------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify", "Run an inequality campaign from a JSON config file");
    std::string config_path;
    std::string out_path;
    std::string format = "jsonl";
    int workers = 1;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    verify->add_option("--config", config_path, "campaign config (JSON)")
        ->required();
    verify->add_option("--out", out_path, "report file path (overrides config)");
    verify->add_option("--format", format, "report format: jsonl|csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    verify->add_option("--workers", workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "base RNG seed (overrides config)");
    verify->add_option("--tol", tol, "relative margin tolerance")
        ->check(CLI::PositiveNumber);

    // eval ---------------------------------------------------------------
    auto* eval = app.add_subcommand(
        "eval", "Evaluate the left fractional operator of one function");
    double alpha = 1.0, p = 1.0, x = 1.0;
    double domain_end = 0.0;
    std::string descriptor;
    eval->add_option("--alpha", alpha, "fractional order (> 0)")->required();
    eval->add_option("--p", p, "proportionality index in (0, 1]")
        ->default_val(1.0);
    eval->add_option("--x", x, "evaluation point (> 0)")->required();
    eval->add_option("fn", descriptor,
                     "function descriptor, e.g. poly:1,0.5 or step:0.5@0.5,1.5")
        ->required();
    eval->add_option("--domain-end", domain_end,
                     "function domain endpoint (default: x)");

    // sharpness ----------------------------------------------------------
    auto* sharp = app.add_subcommand(
        "sharpness",
        "Scan the step-function family that saturates the Gruss-type constant");
    int count = 9;
    std::string sharp_out;
    sharp->add_option("--count", count, "grid size (>= 2)")
        ->check(CLI::Range(2, 1000000));
    sharp->add_option("--out", sharp_out, "CSV output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (verify->parsed())
            return run_verify(config_path, *verify, out_path, format, workers,
                              seed, tol);
        if (eval->parsed())
            return run_eval(alpha, p, x, descriptor,
                            eval->count("--domain-end") ? domain_end : x);
        if (sharp->parsed()) return run_sharpness(count, sharp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitBadInput;  // unreachable with require_subcommand(1)
}
