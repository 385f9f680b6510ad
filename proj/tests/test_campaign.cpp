#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gpfineq/campaign.hpp"

using gpfineq::CampaignConfig;
using gpfineq::CheckStatus;
using gpfineq::InequalityId;
using gpfineq::InequalityReport;
using gpfineq::ReportFormat;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// equal, treating NaN == NaN
bool same(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return a == b;
}

bool same_report(const InequalityReport& a, const InequalityReport& b) {
    return a.id == b.id && same(a.alpha, b.alpha) && same(a.beta, b.beta) &&
           same(a.p1, b.p1) && same(a.p2, b.p2) && same(a.x, b.x) &&
           a.f_desc == b.f_desc && a.g_desc == b.g_desc && a.seed == b.seed &&
           a.case_index == b.case_index && same(a.lhs, b.lhs) &&
           same(a.rhs, b.rhs) && same(a.margin, b.margin) &&
           same(a.relative_margin, b.relative_margin) && a.status == b.status &&
           a.note == b.note;
}

std::string to_jsonl(const std::vector<InequalityReport>& reports) {
    std::ostringstream os;
    gpfineq::write_reports_jsonl(reports, os);
    return os.str();
}

// small single-inequality campaign used by several tests
CampaignConfig small_config(InequalityId id) {
    CampaignConfig cfg;
    cfg.inequalities = {id};
    cfg.alpha_grid = {0.5, 1.0};
    cfg.beta_grid = {1.5};
    cfg.p1_grid = {1.0};
    cfg.p2_grid = {0.7};
    cfg.x_grid = {1.0};
    cfg.cases_per_cell = 3;
    cfg.generator.seed = 2024;
    return cfg;
}

std::string temp_path(const char* stem) {
    return std::string("campaign_test_") + stem;
}

} // namespace

TEST_CASE("campaign config validation rejects bad inputs", "[campaign]") {
    CampaignConfig good;
    CHECK_NOTHROW(good.validate());

    CampaignConfig cfg = good;
    cfg.inequalities.clear();
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.inequalities = {InequalityId::Lemma1, InequalityId::Lemma1};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.alpha_grid.clear();
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.alpha_grid = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.alpha_grid = {200.0};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.p1_grid = {1.2};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.p2_grid = {-0.1};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.x_grid = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.cases_per_cell = 0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.generator.delta = 1.0;  // invalid nested generator config
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);

    cfg = good;
    cfg.settings.tol = 0.0;  // invalid nested check settings
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("report format names round-trip", "[campaign]") {
    CHECK(gpfineq::report_format_from_string("jsonl") == ReportFormat::Jsonl);
    CHECK(gpfineq::report_format_from_string("csv") == ReportFormat::Csv);
    CHECK(std::string(gpfineq::to_string(ReportFormat::Jsonl)) == "jsonl");
    CHECK(std::string(gpfineq::to_string(ReportFormat::Csv)) == "csv");
    CHECK_THROWS_AS(gpfineq::report_format_from_string("xml"), std::domain_error);
}

TEST_CASE("jsonl report round-trips every field", "[campaign]") {
    InequalityReport r;
    r.id = InequalityId::Lemma2;
    r.alpha = 0.5;
    r.beta = kNaN;  // null in transit
    r.p1 = 0.3;
    r.p2 = kNaN;
    r.x = 2.0;
    r.f_desc = "poly:1.25,0.5";
    r.g_desc = "step:0.5@1,2";  // commas survive quoting
    r.seed = 0xdeadbeefcafeULL;
    r.case_index = 17;
    r.lhs = 0.123456789012345678;
    r.rhs = 0.25;
    r.margin = r.rhs - r.lhs;
    r.relative_margin = r.margin / r.rhs;
    r.status = CheckStatus::Holds;
    r.note = "line with \"quotes\" and\nnewline";

    const std::string line = gpfineq::report_to_jsonl(r);
    // null encodes the unused parameters
    CHECK(line.find("\"beta\":null") != std::string::npos);
    CHECK(line.find("\"p2\":null") != std::string::npos);

    const InequalityReport back = gpfineq::report_from_jsonl(line);
    CHECK(same_report(r, back));
}

TEST_CASE("jsonl parsing rejects an unknown status", "[campaign]") {
    InequalityReport r;
    std::string line = gpfineq::report_to_jsonl(r);
    const std::string from = "\"status\":\"Skipped\"";
    const auto pos = line.find(from);
    REQUIRE(pos != std::string::npos);
    line.replace(pos, from.size(), "\"status\":\"unheard_of\"");
    CHECK_THROWS_AS(gpfineq::report_from_jsonl(line), std::domain_error);
}

TEST_CASE("csv output has a header and quotes text fields", "[campaign]") {
    InequalityReport r;
    r.id = InequalityId::Chebyshev;
    r.x = 1.0;
    r.f_desc = "step:0.25,0.75@1,2,0.5";
    r.g_desc = "poly:1,0.2";
    r.lhs = 0.0;
    r.rhs = 0.125;
    r.margin = 0.125;
    r.relative_margin = 0.125;
    r.status = CheckStatus::Holds;
    r.note = "said \"ok\"";

    std::ostringstream os;
    gpfineq::write_reports_csv({r}, os);
    std::istringstream in(os.str());
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(header ==
          "inequality,alpha,beta,p1,p2,x,f,g,seed,case_index,lhs,rhs,margin,"
          "relative_margin,status,note");
    CHECK(row.find("\"step:0.25,0.75@1,2,0.5\"") != std::string::npos);
    CHECK(row.find("\"said \"\"ok\"\"\"") != std::string::npos);
    // NaN parameters serialize as nan, not as empty cells
    CHECK(row.find("chebyshev,nan,nan,nan,nan,1,") == 0);
}

TEST_CASE("campaign config loads from json", "[campaign]") {
    const auto j = nlohmann::json::parse(R"({
        "inequalities": ["lemma1", "theorem2"],
        "alpha_grid": [0.5, 1.5],
        "beta_grid": [2.5],
        "p1_grid": [0.3, 1.0],
        "p2_grid": [0.7],
        "x_grid": [0.5, 2.0],
        "cases_per_cell": 4,
        "tol": 1e-7,
        "eps_den": 1e-11,
        "rhs_scale": 0.9,
        "workers": 3,
        "out": "reports.jsonl",
        "format": "csv",
        "generator": {
            "seed": 99,
            "delta": 0.15,
            "positivity_floor": 0.1,
            "x_range": [0.5, 2.0],
            "family_mix": {"polynomial": 2, "step": 0}
        }
    })");
    const CampaignConfig cfg = gpfineq::campaign_config_from_json(j);
    REQUIRE(cfg.inequalities.size() == 2);
    CHECK(cfg.inequalities[0] == InequalityId::Lemma1);
    CHECK(cfg.inequalities[1] == InequalityId::Theorem2);
    CHECK(cfg.alpha_grid == std::vector<double>{0.5, 1.5});
    CHECK(cfg.beta_grid == std::vector<double>{2.5});
    CHECK(cfg.p1_grid == std::vector<double>{0.3, 1.0});
    CHECK(cfg.p2_grid == std::vector<double>{0.7});
    CHECK(cfg.x_grid == std::vector<double>{0.5, 2.0});
    CHECK(cfg.cases_per_cell == 4);
    CHECK(cfg.settings.tol == 1e-7);
    CHECK(cfg.settings.eps_den == 1e-11);
    CHECK(cfg.settings.rhs_scale == 0.9);
    CHECK(cfg.workers == 3);
    CHECK(cfg.out_path == "reports.jsonl");
    CHECK(cfg.format == ReportFormat::Csv);
    CHECK(cfg.generator.seed == 99);
    CHECK(cfg.generator.delta == 0.15);
    CHECK(cfg.generator.positivity_floor == 0.1);
    CHECK(cfg.generator.x_min == 0.5);
    CHECK(cfg.generator.x_max == 2.0);
    CHECK(cfg.generator.family_mix.polynomial == 2);
    CHECK(cfg.generator.family_mix.step == 0);
    // untouched keys keep their defaults
    CHECK(cfg.generator.family_mix.trig_affine == 1);
}

TEST_CASE("campaign config rejects malformed json", "[campaign]") {
    using nlohmann::json;
    // unknown keys at both levels
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"alpha": [1]})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"generator": {"sigma": 1}})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(json::parse(
                        R"({"generator": {"family_mix": {"spline": 1}}})")),
                    std::domain_error);
    // shape errors
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(json::parse(R"([1, 2])")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"alpha_grid": 1.0})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"alpha_grid": ["a"]})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"inequalities": "lemma1"})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"inequalities": ["lemma9"]})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"format": "yaml"})")),
                    std::domain_error);
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"generator": {"x_range": [1]}})")),
                    std::domain_error);
    // values that fail semantic validation
    CHECK_THROWS_AS(gpfineq::campaign_config_from_json(
                        json::parse(R"({"p1_grid": [1.5]})")),
                    std::domain_error);
}

TEST_CASE("campaign config loads from a file and reports i/o errors",
          "[campaign]") {
    const std::string path = temp_path("config.json");
    {
        std::ofstream out(path);
        out << R"({"inequalities": ["lemma1"], "alpha_grid": [1.0]})";
    }
    const CampaignConfig cfg = gpfineq::load_campaign_config(path);
    CHECK(cfg.inequalities == std::vector<InequalityId>{InequalityId::Lemma1});
    CHECK(cfg.alpha_grid == std::vector<double>{1.0});
    std::remove(path.c_str());

    CHECK_THROWS_AS(gpfineq::load_campaign_config("no_such_config.json"),
                    std::runtime_error);

    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_WITH(gpfineq::load_campaign_config(path),
                      Catch::Matchers::ContainsSubstring("parse failure"));
    std::remove(path.c_str());
}

TEST_CASE("campaign enumerates only the applicable dimensions", "[campaign]") {
    CampaignConfig cfg;
    cfg.inequalities = {InequalityId::Chebyshev, InequalityId::Lemma1,
                        InequalityId::Lemma2};
    cfg.alpha_grid = {0.5, 1.0};
    cfg.beta_grid = {1.0, 2.5};
    cfg.p1_grid = {0.7};
    cfg.p2_grid = {0.3};
    cfg.x_grid = {0.5, 1.5};
    cfg.cases_per_cell = 1;
    const auto result = gpfineq::run_campaign(cfg);

    // chebyshev: x only (2); lemma1: alpha x p1 x x (4); lemma2: + beta (8)
    REQUIRE(result.summary.total_cases == 2 + 4 + 8);
    REQUIRE(result.reports.size() == 14);

    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const auto& r = result.reports[i];
        CHECK(r.case_index == i);
        CHECK(r.seed == gpfineq::derive_seed(cfg.generator.seed, i));
    }
    // classical rows leave the fractional parameters unset
    CHECK(result.reports[0].id == InequalityId::Chebyshev);
    CHECK(std::isnan(result.reports[0].alpha));
    CHECK(result.reports[0].x == 0.5);
    CHECK(result.reports[1].x == 1.5);
    // single-parameter rows stamp alpha/p1 but not beta/p2
    CHECK(result.reports[2].id == InequalityId::Lemma1);
    CHECK(result.reports[2].alpha == 0.5);
    CHECK(result.reports[2].p1 == 0.7);
    CHECK(std::isnan(result.reports[2].beta));
    CHECK(std::isnan(result.reports[2].p2));
    // two-parameter rows stamp everything
    const auto& last = result.reports.back();
    CHECK(last.id == InequalityId::Lemma2);
    CHECK(last.alpha == 1.0);
    CHECK(last.beta == 2.5);
    CHECK(last.p1 == 0.7);
    CHECK(last.p2 == 0.3);
    CHECK(last.x == 1.5);
}

TEST_CASE("small campaign holds everywhere and tracks the worst margin",
          "[campaign]") {
    const CampaignConfig cfg = small_config(InequalityId::Lemma1);
    const auto result = gpfineq::run_campaign(cfg);

    REQUIRE(result.summary.total_cases == 6);  // 2 alpha x 1 p x 1 x x 3 cases
    CHECK(result.summary.counts.holds == 6);
    CHECK(result.summary.counts.total() == result.summary.total_cases);
    CHECK_FALSE(result.summary.any_violated());
    CHECK(result.summary.wall_seconds > 0.0);

    REQUIRE(result.summary.has_worst);
    double min_rel = std::numeric_limits<double>::infinity();
    for (const auto& r : result.reports)
        min_rel = std::min(min_rel, r.relative_margin);
    CHECK(result.summary.worst.relative_margin == min_rel);

    // every case drew a distinct function pair
    CHECK(result.reports[0].f_desc != result.reports[1].f_desc);
}

TEST_CASE("campaign reports are deterministic and worker-count independent",
          "[campaign]") {
    CampaignConfig cfg = small_config(InequalityId::Theorem2);
    cfg.alpha_grid = {0.5};
    cfg.cases_per_cell = 4;

    const auto serial_a = gpfineq::run_campaign(cfg);
    const auto serial_b = gpfineq::run_campaign(cfg);
    REQUIRE(serial_a.reports.size() == serial_b.reports.size());
    CHECK(to_jsonl(serial_a.reports) == to_jsonl(serial_b.reports));

    cfg.workers = 4;
    const auto parallel = gpfineq::run_campaign(cfg);
    CHECK(to_jsonl(serial_a.reports) == to_jsonl(parallel.reports));

    // more workers than cases is fine
    cfg.workers = 64;
    const auto oversubscribed = gpfineq::run_campaign(cfg);
    CHECK(to_jsonl(serial_a.reports) == to_jsonl(oversubscribed.reports));
}

TEST_CASE("rhs corruption flips a clean campaign to violated", "[campaign]") {
    CampaignConfig cfg = small_config(InequalityId::Lemma1);
    // a tight envelope puts the lhs within 1% of the bound, so scaling the
    // rhs down by 10% must flip every case
    cfg.generator.delta = 0.05;
    const auto clean = gpfineq::run_campaign(cfg);
    CHECK_FALSE(clean.summary.any_violated());
    CHECK(clean.summary.counts.holds == clean.summary.total_cases);

    cfg.settings.rhs_scale = 0.9;
    const auto corrupted = gpfineq::run_campaign(cfg);
    CHECK(corrupted.summary.any_violated());
    CHECK(corrupted.summary.counts.violated == corrupted.summary.total_cases);
    CHECK(corrupted.summary.worst.relative_margin < -1e-6);
}

TEST_CASE("campaign writes its report file", "[campaign]") {
    const std::string path = temp_path("out.jsonl");
    CampaignConfig cfg = small_config(InequalityId::Corollary1);
    cfg.out_path = path;
    const auto result = gpfineq::run_campaign(cfg);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        REQUIRE(n < result.reports.size());
        const InequalityReport back = gpfineq::report_from_jsonl(line);
        CHECK(same_report(result.reports[n], back));
        ++n;
    }
    CHECK(n == result.reports.size());
    in.close();
    std::remove(path.c_str());

    // csv variant writes header + one row per case
    const std::string csv_path = temp_path("out.csv");
    cfg.out_path = csv_path;
    cfg.format = ReportFormat::Csv;
    const auto csv_result = gpfineq::run_campaign(cfg);
    std::ifstream csv_in(csv_path);
    REQUIRE(csv_in.good());
    std::size_t lines = 0;
    while (std::getline(csv_in, line)) ++lines;
    CHECK(lines == csv_result.reports.size() + 1);
    csv_in.close();
    std::remove(csv_path.c_str());

    cfg.out_path = "no_such_dir_gpfineq/out.jsonl";
    CHECK_THROWS_AS(gpfineq::run_campaign(cfg), std::runtime_error);
}

TEST_CASE("unsatisfiable generator exhausts into skipped cases", "[campaign]") {
    CampaignConfig cfg = small_config(InequalityId::Lemma1);
    cfg.generator.positivity_floor = 10.0;  // poly values top out near 2.5
    cfg.generator.family_mix = {1.0, 0.0, 0.0, 0.0};
    const auto result = gpfineq::run_campaign(cfg);
    CHECK(result.summary.counts.skipped == result.summary.total_cases);
    CHECK_FALSE(result.summary.has_worst);
    for (const auto& r : result.reports) {
        CHECK(r.status == CheckStatus::Skipped);
        CHECK(r.note.find("generation exhausted") != std::string::npos);
        CHECK(std::isnan(r.lhs));
        CHECK_FALSE(std::isnan(r.alpha));  // params still stamped
        CHECK(r.x == 1.0);
    }
}

TEST_CASE("full default campaign over every inequality stays clean",
          "[campaign]") {
    CampaignConfig cfg;  // all twelve checks
    cfg.alpha_grid = {0.8};
    cfg.beta_grid = {1.6};
    cfg.p1_grid = {0.6};
    cfg.p2_grid = {1.0};
    cfg.x_grid = {1.25};
    cfg.cases_per_cell = 2;
    cfg.generator.seed = 7;
    cfg.workers = 4;
    const auto result = gpfineq::run_campaign(cfg);
    CHECK(result.summary.total_cases == 24);
    CHECK(result.summary.counts.violated == 0);
    CHECK(result.summary.counts.violated_within_tolerance == 0);
    // nothing in this tame cell should be skipped or ill-conditioned
    CHECK(result.summary.counts.holds == result.summary.total_cases);
}
