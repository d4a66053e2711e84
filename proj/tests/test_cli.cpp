#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"

using permafinetti::cli::Command;
using permafinetti::cli::ConstantsCmd;
using permafinetti::cli::DefinettiCmd;
using permafinetti::cli::ExpandCmd;
using permafinetti::cli::parse_args;
using permafinetti::cli::PermanentCmd;
using permafinetti::cli::usage_error;
using permafinetti::cli::VerifyCmd;

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "permafinetti_cli_tests";
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const fs::path out_path = scratch_dir() / "stdout.txt";
    const std::string command = (env.empty() ? "" : env + " ") +
                                std::string(PERMAFINETTI_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2>/dev/null";
    const int status = std::system(command.c_str());
    std::ifstream in(out_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, buffer.str()};
}

std::string write_fixture(const std::string& name, const std::string& text) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path);
    out << text;
    return path.string();
}

const char* kMatrix4x2 =
    R"({"N":4,"n":2,"entries":[[{"re":1,"im":0},{"re":0,"im":1}],)"
    R"([{"re":-1,"im":0},{"re":0,"im":-1}],[{"re":1,"im":0},{"re":0,"im":1}],)"
    R"([{"re":-1,"im":0},{"re":0,"im":-1}]]})";

const char* kUrn11 = R"({"d":2,"N":2,"components":[{"weight":1.0,"urn":[1,1]}]})";

}  // namespace

TEST_CASE("parse_args recognizes the documented subcommands") {
    const Command constants = parse_args({"constants", "--lmax", "3"});
    REQUIRE(std::holds_alternative<ConstantsCmd>(constants));
    CHECK(std::get<ConstantsCmd>(constants).lmax == 3);
    CHECK(std::get<ConstantsCmd>(constants).format == "json");

    const Command verify =
        parse_args({"verify", "bounds", "--trials", "100", "--seed", "7"});
    REQUIRE(std::holds_alternative<VerifyCmd>(verify));
    CHECK(std::get<VerifyCmd>(verify).suite == "bounds");
    CHECK(std::get<VerifyCmd>(verify).trials == 100);
    CHECK(std::get<VerifyCmd>(verify).seed == 7);

    const Command permanent =
        parse_args({"permanent", "--input", "m.json", "--method", "naive", "--normalized"});
    REQUIRE(std::holds_alternative<PermanentCmd>(permanent));
    CHECK(std::get<PermanentCmd>(permanent).method == "naive");
    CHECK(std::get<PermanentCmd>(permanent).normalized);

    const Command expand = parse_args({"expand", "--input", "m.json", "--order", "2"});
    REQUIRE(std::holds_alternative<ExpandCmd>(expand));
    CHECK(std::get<ExpandCmd>(expand).order == 2);

    const Command definetti = parse_args({"definetti", "--model", "u.json", "--n", "2"});
    REQUIRE(std::holds_alternative<DefinettiCmd>(definetti));
    CHECK(std::get<DefinettiCmd>(definetti).n == 2);
}

TEST_CASE("parse_args rejects unknown flags and suites") {
    CHECK_THROWS_AS(parse_args({"expand", "--bogus"}), usage_error);
    CHECK_THROWS_AS(parse_args({}), usage_error);
    CHECK_THROWS_AS(parse_args({"frobnicate"}), usage_error);
    CHECK_THROWS_AS(parse_args({"verify", "nonsense"}), usage_error);
    CHECK_THROWS_AS(parse_args({"verify", "bounds", "--trials", "-3"}), usage_error);
}

TEST_CASE("constants subcommand prints the table and exits 0") {
    const RunResult result = run_cli("constants --lmax 3");
    REQUIRE(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    REQUIRE(doc.at("rows").size() == 3);
    CHECK(doc["rows"][0]["kappa_upper"].get<double>() <= 3.57);
    CHECK(doc["rows"][1]["kappa_upper"].get<double>() <= 5.53);
    CHECK(doc["rows"][2]["kappa_upper"].get<double>() <= 7.08);

    const RunResult csv = run_cli("constants --lmax 2 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.output.find("l,C_l,x_l,kappa_upper_l") != std::string::npos);
}

TEST_CASE("permanent subcommand reports value, method and timing") {
    const std::string path = write_fixture("m4x2.json", kMatrix4x2);
    const RunResult result = run_cli("permanent --input " + path + " --normalized");
    REQUIRE(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    CHECK(doc["method"] == "genfunc");
    CHECK(doc["permanent"]["im"].get<double>() == doctest::Approx(-4.0));
    CHECK(doc["normalized"]["im"].get<double>() == doctest::Approx(-1.0 / 3));
    CHECK(doc.contains("elapsed_ms"));

    // CSV input through the same subcommand
    const std::string csv_path = write_fixture("m.csv", "1, 1i\n-1, -1i\n1, 1i\n-1, -1i\n");
    const RunResult from_csv = run_cli("permanent --input " + csv_path);
    REQUIRE(from_csv.exit_code == 0);
    CHECK(nlohmann::json::parse(from_csv.output)["permanent"]["im"].get<double>() ==
          doctest::Approx(-4.0));
}

TEST_CASE("expand subcommand reports terms, gamma and bounds") {
    const std::string path = write_fixture("m4x2b.json", kMatrix4x2);
    const RunResult result = run_cli("expand --input " + path + " --order 2");
    REQUIRE(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    CHECK(doc["gamma"].get<double>() == doctest::Approx(0.5));
    CHECK(doc["G"].size() == 3);
    CHECK(doc["H"]["im"].get<double>() == doctest::Approx(-1.0 / 3));
    CHECK(doc["actual_error"].get<double>() == doctest::Approx(0.0));
    CHECK(doc["bounds"]["h2"].get<double>() == doctest::Approx(1.1179001027331576));

    const RunResult bad_order = run_cli("expand --input " + path + " --order 9");
    CHECK(bad_order.exit_code == 1);
}

TEST_CASE("definetti subcommand reports distances against every bound") {
    const std::string path = write_fixture("urn11.json", kUrn11);
    const fs::path report = scratch_dir() / "definetti_report.json";
    const RunResult result = run_cli("definetti --model " + path + " --n 2 --report " +
                                     report.string());
    REQUIRE(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    CHECK(doc["tv_p_q1"].get<double>() == doctest::Approx(0.5));
    CHECK(doc["pv_p_q1"].get<double>() == doctest::Approx(0.25));
    CHECK(doc["tv_p_q2"].get<double>() == doctest::Approx(0.0));
    CHECK(doc["sup_is_lower_bound"].get<bool>());
    CHECK(doc["bounds"]["dm_exact"].get<double>() == doctest::Approx(0.5));
    CHECK(doc["bounds"]["bobkov"].get<double>() == doctest::Approx(16.0));

    std::ifstream in(report);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(nlohmann::json::parse(buffer.str()) == doc);
}

TEST_CASE("definetti measures dump matches the documented schema") {
    const std::string path = write_fixture("urn11b.json", kUrn11);
    const fs::path measures = scratch_dir() / "measures.json";
    const RunResult result =
        run_cli("definetti --model " + path + " --n 2 --measures " + measures.string());
    REQUIRE(result.exit_code == 0);
    std::ifstream in(measures);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto doc = nlohmann::json::parse(buffer.str());
    REQUIRE(doc.contains("P"));
    REQUIRE(doc.contains("Q1"));
    REQUIRE(doc.contains("Q2"));
    CHECK(doc["P"]["d"] == 2);
    CHECK(doc["P"]["values"].size() == 4);
    CHECK(doc["P"]["index_legend"].is_string());
    // Q2 equals P exactly for this model
    for (int i = 0; i < 4; ++i) {
        CHECK(doc["Q2"]["values"][i].get<double>() ==
              doctest::Approx(doc["P"]["values"][i].get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("verify subcommand writes byte-identical reports for equal seeds") {
    const fs::path first = scratch_dir() / "verify1.json";
    const fs::path second = scratch_dir() / "verify2.json";
    const RunResult a =
        run_cli("verify lemmas --trials 120 --seed 11 --report " + first.string());
    const RunResult b =
        run_cli("verify lemmas --trials 120 --seed 11 --report " + second.string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.output == b.output);

    std::ifstream in1(first);
    std::ifstream in2(second);
    std::stringstream s1;
    std::stringstream s2;
    s1 << in1.rdbuf();
    s2 << in2.rdbuf();
    REQUIRE_FALSE(s1.str().empty());
    CHECK(s1.str() == s2.str());

    const auto doc = nlohmann::json::parse(a.output);
    CHECK(doc["violations"].get<long long>() == 0);
    CHECK_FALSE(doc.contains("elapsed_ms"));
}

TEST_CASE("definetti with n = 1 omits the second-order fields") {
    const std::string path = write_fixture("urn11c.json", kUrn11);
    const RunResult result = run_cli("definetti --model " + path + " --n 1");
    REQUIRE(result.exit_code == 0);
    const auto doc = nlohmann::json::parse(result.output);
    CHECK(doc.contains("tv_p_q1"));
    CHECK_FALSE(doc.contains("tv_p_q2"));
    CHECK_FALSE(doc.contains("pv_p_q2"));
}

TEST_CASE("PERMAFINETTI_CAPS overrides the enumeration caps") {
    const std::string path = write_fixture("m4x2c.json", kMatrix4x2);
    // 4x2 has 12 injections; a cap of 5 must refuse the naive route.
    const RunResult refused = run_cli("permanent --input " + path + " --method naive",
                                      "PERMAFINETTI_CAPS=naive=5");
    CHECK(refused.exit_code == 1);
    const RunResult allowed = run_cli("permanent --input " + path + " --method naive",
                                      "PERMAFINETTI_CAPS=naive=100");
    CHECK(allowed.exit_code == 0);
    const RunResult malformed = run_cli("constants --lmax 1",
                                        "PERMAFINETTI_CAPS=frobs=1");
    CHECK(malformed.exit_code == 1);
}

TEST_CASE("exit codes: usage 1, resource limit 1 with cap guidance") {
    CHECK(run_cli("expand --bogus").exit_code == 1);
    CHECK(run_cli("permanent --input /nonexistent/file.json").exit_code == 1);

    // 30 x 20 forces the injection cap on the naive route
    std::ostringstream matrix;
    matrix << R"({"N":30,"n":20,"entries":[)";
    for (int j = 0; j < 30; ++j) {
        matrix << (j ? "," : "") << "[";
        for (int k = 0; k < 20; ++k) {
            matrix << (k ? "," : "") << R"({"re":0.1,"im":0.0})";
        }
        matrix << "]";
    }
    matrix << "]}";
    const std::string path = write_fixture("m30x20.json", matrix.str());
    const RunResult refused = run_cli("permanent --input " + path + " --method naive");
    CHECK(refused.exit_code == 1);
}

TEST_CASE("violations map to exit code 2 through the report") {
    // A genuine mathematical violation cannot be staged, so the mapping is
    // exercised directly on the report type.
    permafinetti::VerificationReport report;
    report.violations = 0;
    CHECK(permafinetti::cli::verify_exit_code(report) == 0);
    report.violations = 3;
    CHECK(permafinetti::cli::verify_exit_code(report) == 2);
}
