#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "permafinetti/campaigns.hpp"
#include "permafinetti/caps.hpp"

namespace permafinetti::cli {

struct ConstantsCmd {
    int lmax = 10;
    std::string format = "json";  // json | csv
};

struct PermanentCmd {
    std::string input;
    std::string method = "auto";  // naive | genfunc | auto
    bool normalized = false;
};

struct ExpandCmd {
    std::string input;
    int order = 1;
};

struct DefinettiCmd {
    std::string model;
    int n = 1;
    long long sup_trials = 1000;
    std::uint64_t seed = 1;
    std::string report;    // optional output file
    std::string measures;  // optional measure dump file
};

struct VerifyCmd {
    std::string suite;
    long long trials = 10000;
    std::uint64_t seed = 1;
    int nmax = 8;
    std::string report;  // optional output file
};

using Command = std::variant<ConstantsCmd, PermanentCmd, ExpandCmd, DefinettiCmd, VerifyCmd>;

// Bad flags, missing subcommand, out-of-range values.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// --help anywhere; carries the text to print on stdout.
class help_requested : public std::runtime_error {
public:
    explicit help_requested(const std::string& text) : std::runtime_error(text) {}
};

// argv without the program name.
Command parse_args(const std::vector<std::string>& args);

// Exit code: 0 clean, 2 if a verification campaign found violations.
// Resource and I/O failures surface as exceptions; run() maps them to 1.
int execute(const Command& command, const Caps& caps);

// 0 for a clean campaign, 2 when violations were recorded.
int verify_exit_code(const VerificationReport& report);

int run(int argc, char** argv);

}  // namespace permafinetti::cli
