#include <doctest.h>

#include <string>

#include "permafinetti/campaigns.hpp"

using namespace permafinetti;

namespace {
CampaignOptions small_options(long long trials, std::uint64_t seed) {
    CampaignOptions options;
    options.trials = trials;
    options.seed = seed;
    options.nmax = 6;
    return options;
}
}  // namespace

TEST_CASE("every campaign runs clean on a small budget") {
    for (const std::string& name : campaign_names()) {
        CAPTURE(name);
        const VerificationReport report = run_campaign(name, small_options(150, 20240607));
        CHECK(report.campaign == name);
        CHECK(report.trials == 150);
        CHECK(report.violations == 0);
        CHECK(report.max_relative_slack <= 1e-12);
        CHECK_FALSE(report.worst_case.empty());
    }
}

TEST_CASE("reports are bit-identical for identical seed and flags") {
    for (const std::string& name : campaign_names()) {
        CAPTURE(name);
        const std::string first = report_to_json(run_campaign(name, small_options(60, 99)));
        const std::string second = report_to_json(run_campaign(name, small_options(60, 99)));
        CHECK(first == second);
    }
    // a different seed explores different inputs
    const std::string a = report_to_json(run_campaign("bounds", small_options(60, 1)));
    const std::string b = report_to_json(run_campaign("bounds", small_options(60, 2)));
    CHECK(a != b);
}

TEST_CASE("report serialization is machine readable and omits timing") {
    VerificationReport report;
    report.campaign = "bounds";
    report.trials = 10;
    report.violations = 0;
    report.max_relative_slack = -0.125;
    report.worst_case = R"({"assertion":"demo","lhs":0,"rhs":1,"input":null})";
    report.seed = 7;
    report.elapsed_ms = 1234;  // diagnostic only; never serialized

    const std::string json = report_to_json(report);
    CHECK(json.find("\"campaign\":\"bounds\"") != std::string::npos);
    CHECK(json.find("\"trials\":10") != std::string::npos);
    CHECK(json.find("\"violations\":0") != std::string::npos);
    CHECK(json.find("\"max_relative_slack\":-0.125") != std::string::npos);
    CHECK(json.find("\"seed\":7") != std::string::npos);
    CHECK(json.find("elapsed") == std::string::npos);
    CHECK(json.find("1234") == std::string::npos);
}

TEST_CASE("unknown suite is rejected") {
    CHECK_THROWS_AS(run_campaign("nonsense", small_options(1, 1)), std::invalid_argument);
}
