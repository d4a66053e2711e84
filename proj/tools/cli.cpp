#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "permafinetti/bounds.hpp"
#include "permafinetti/campaigns.hpp"
#include "permafinetti/complex_matrix.hpp"
#include "permafinetti/definetti.hpp"
#include "permafinetti/errors.hpp"
#include "permafinetti/expansion.hpp"
#include "permafinetti/permanent.hpp"
#include "permafinetti/signed_measure.hpp"

namespace permafinetti::cli {

namespace {

std::string format12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string complex_json(Complex z) {
    return "{\"re\":" + format12(z.real()) + ",\"im\":" + format12(z.imag()) + "}";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

int run_constants(const ConstantsCmd& cmd) {
    const auto rows = constants_table(cmd.lmax);
    std::cout << (cmd.format == "csv" ? constants_to_csv(rows) : constants_to_json(rows) + "\n");
    return 0;
}

int run_permanent(const PermanentCmd& cmd, const Caps& caps) {
    const ComplexMatrix z = load_matrix_file(cmd.input);
    PermanentMethod method = PermanentMethod::Auto;
    if (cmd.method == "naive") method = PermanentMethod::Naive;
    else if (cmd.method == "genfunc") method = PermanentMethod::Genfunc;
    else if (cmd.method != "auto") throw usage_error("unknown method: " + cmd.method);

    PermanentMethod used = method;
    const auto start = std::chrono::steady_clock::now();
    const Complex value = permanent(z, method, caps, &used);
    std::optional<Complex> normalized;
    if (cmd.normalized) normalized = per_normalized(z, caps);
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    std::ostringstream out;
    out << "{\"N\":" << z.rows() << ",\"n\":" << z.cols() << ",\"method\":\""
        << (used == PermanentMethod::Genfunc ? "genfunc" : "naive")
        << "\",\"permanent\":" << complex_json(value);
    if (normalized) out << ",\"normalized\":" << complex_json(*normalized);
    out << ",\"elapsed_ms\":" << format12(elapsed) << "}";
    std::cout << out.str() << "\n";
    return 0;
}

int run_expand(const ExpandCmd& cmd, const Caps& caps) {
    const ComplexMatrix z = load_matrix_file(cmd.input);
    const std::size_t n = z.cols();
    if (cmd.order < 1 || static_cast<std::size_t>(cmd.order) > n) {
        throw usage_error("--order must lie in [1, n]");
    }
    const std::size_t order = static_cast<std::size_t>(cmd.order);
    const ExpansionParams params = analyze(z);

    std::ostringstream out;
    out << "{\"N\":" << z.rows() << ",\"n\":" << n
        << ",\"unit_bounded\":" << (params.unit_bounded() ? "true" : "false")
        << ",\"alpha\":" << format12(params.alpha()) << ",\"beta\":" << format12(params.beta())
        << ",\"gamma\":" << format12(params.gamma())
        << ",\"gamma_half\":" << format12(gamma_d(params, 0.5)) << ",\"G\":[";
    Complex h{};
    for (std::size_t m = 0; m <= order; ++m) {
        const Complex g = g_term(z, m, caps);
        h += g;
        if (m > 0) out << ",";
        out << complex_json(g);
    }
    const Complex normalized = per_normalized(z, caps);
    const double actual = std::abs(normalized - h);
    out << "],\"H\":" << complex_json(h) << ",\"per_normalized\":" << complex_json(normalized)
        << ",\"actual_error\":" << format12(actual) << ",\"bounds\":{";

    std::vector<std::string> bounds;
    if (params.unit_bounded()) {
        if (params.gamma() < 1.0) {
            bounds.push_back("\"main\":" +
                             format12(err_bound_main(params, static_cast<int>(order))));
            bounds.push_back("\"h1\":" + format12(err_bound_h1(params)));
            if (n >= 2) bounds.push_back("\"h2\":" + format12(err_bound_h2(z)));
        }
        bounds.push_back("\"kappa\":" +
                         format12(err_bound_kappa(params, static_cast<int>(order))));
        if (n >= 2) {
            const G2Bound g2b = bound_g2(params);
            bounds.push_back("\"g2_refined\":" + format12(g2b.refined));
            bounds.push_back("\"g2_coarse\":" + format12(g2b.coarse));
        }
        bounds.push_back("\"g3\":" + format12(bound_g3(z)));
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) out << (i ? "," : "") << bounds[i];
    out << "}}";
    std::cout << out.str() << "\n";
    if (!params.unit_bounded()) {
        std::cerr << "note: matrix is not unit-bounded; certified bounds unavailable\n";
    }
    return 0;
}

int run_definetti(const DefinettiCmd& cmd, const Caps& caps) {
    const ExchangeableModel model = load_model_file(cmd.model);
    const int n = cmd.n;
    if (n < 1 || n > model.length()) throw usage_error("--n must lie in [1, N]");

    const DenseSignedMeasure law = exact_law(model, n, caps);
    const DenseSignedMeasure first = q1(model, n, caps);
    const DfBounds bound = df_bounds(static_cast<std::size_t>(n),
                                     static_cast<std::size_t>(model.length()),
                                     static_cast<std::size_t>(model.alphabet()));

    std::optional<DenseSignedMeasure> second;
    if (n >= 2 && model.length() >= 2) second = q2(model, n, caps);

    double rect_tuples = 1.0;
    for (int k = 0; k < n; ++k) rect_tuples *= std::ldexp(1.0, model.alphabet());
    const bool rectangles_ok = rect_tuples <= caps.rect_tuples;

    std::ostringstream out;
    out << "{\"d\":" << model.alphabet() << ",\"N\":" << model.length() << ",\"n\":" << n
        << ",\"tv_p_q1\":" << format12(tv(law, first));
    if (rectangles_ok) out << ",\"pv_p_q1\":" << format12(pv(law, first, caps));
    out << ",\"sup_lower_q1\":"
        << format12(sup_fn_lower(law, first, cmd.sup_trials, cmd.seed, caps));
    if (second) {
        out << ",\"tv_p_q2\":" << format12(tv(law, *second));
        if (rectangles_ok) out << ",\"pv_p_q2\":" << format12(pv(law, *second, caps));
        out << ",\"sup_lower_q2\":"
            << format12(sup_fn_lower(law, *second, cmd.sup_trials, cmd.seed + 1, caps));
    }
    // The sup over product functions is reported as a randomized lower bound,
    // never as the supremum itself.
    out << ",\"sup_is_lower_bound\":true,\"bounds\":{\"dm_exact\":" << format12(bound.dm_exact)
        << ",\"dm_quad\":" << format12(bound.dm_quad)
        << ",\"finite_s\":" << format12(bound.finite_s)
        << ",\"bobkov\":" << format12(bound.bobkov);
    if (bound.first_order) out << ",\"first_order\":" << format12(*bound.first_order);
    if (bound.second_order) out << ",\"second_order\":" << format12(*bound.second_order);
    out << "}}";

    const std::string text = out.str();
    std::cout << text << "\n";
    if (!cmd.report.empty()) write_file(cmd.report, text + "\n");
    if (!cmd.measures.empty()) {
        std::ostringstream dump;
        dump << "{\"P\":" << measure_to_json(law) << ",\"Q1\":" << measure_to_json(first);
        if (second) dump << ",\"Q2\":" << measure_to_json(*second);
        dump << "}";
        write_file(cmd.measures, dump.str() + "\n");
    }
    return 0;
}

int run_verify(const VerifyCmd& cmd, const Caps& caps) {
    CampaignOptions options;
    options.trials = cmd.trials;
    options.seed = cmd.seed;
    options.nmax = cmd.nmax;
    options.caps = caps;

    const VerificationReport report = run_campaign(cmd.suite, options);
    const std::string text = report_to_json(report);
    std::cout << text << "\n";
    if (!cmd.report.empty()) write_file(cmd.report, text + "\n");
    std::cerr << "campaign " << report.campaign << ": " << report.trials << " trials, "
              << report.violations << " violations, " << report.elapsed_ms << " ms\n";
    return verify_exit_code(report);
}

}  // namespace

int verify_exit_code(const VerificationReport& report) {
    return report.violations > 0 ? 2 : 0;
}

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"exact permanents, certified expansion bounds, and finite de Finetti "
                 "approximations"};
    app.require_subcommand(1);

    ConstantsCmd constants;
    auto* constants_app = app.add_subcommand("constants", "print the certified constant table");
    constants_app->add_option("--lmax", constants.lmax, "largest order")
        ->check(CLI::Range(1, 10000));
    constants_app->add_option("--format", constants.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    PermanentCmd permanent;
    auto* permanent_app = app.add_subcommand("permanent", "exact permanent of a matrix file");
    permanent_app->add_option("--input", permanent.input, "matrix file (JSON or CSV)")
        ->required();
    permanent_app->add_option("--method", permanent.method, "naive, genfunc or auto")
        ->check(CLI::IsMember({"naive", "genfunc", "auto"}));
    permanent_app->add_flag("--normalized", permanent.normalized,
                            "also print (N-n)!/N! times the permanent");

    ExpandCmd expand;
    auto* expand_app =
        app.add_subcommand("expand", "expansion terms, partial sums and error bounds");
    expand_app->add_option("--input", expand.input, "matrix file (JSON or CSV)")->required();
    expand_app->add_option("--order", expand.order, "partial-sum order L")->required();

    DefinettiCmd definetti;
    auto* definetti_app =
        app.add_subcommand("definetti", "distances and bounds for an exchangeable model");
    definetti_app->add_option("--model", definetti.model, "model JSON file")->required();
    definetti_app->add_option("--n", definetti.n, "marginal length")->required();
    definetti_app->add_option("--sup-trials", definetti.sup_trials,
                              "random product functions for the sup lower bound");
    definetti_app->add_option("--seed", definetti.seed, "seed for the sup lower bound");
    definetti_app->add_option("--report", definetti.report, "write the report to a file");
    definetti_app->add_option("--measures", definetti.measures,
                              "dump P, Q1, Q2 as dense JSON arrays");

    VerifyCmd verify;
    auto* verify_app = app.add_subcommand("verify", "run a randomized verification campaign");
    verify_app->add_option("suite", verify.suite, "campaign name")
        ->required()
        ->check(CLI::IsMember(campaign_names()));
    verify_app->add_option("--trials", verify.trials, "number of trials")
        ->check(CLI::PositiveNumber);
    verify_app->add_option("--seed", verify.seed, "base seed");
    verify_app->add_option("--nmax", verify.nmax, "largest random instance size")
        ->check(CLI::Range(2, 8));
    verify_app->add_option("--report", verify.report, "write the report to a file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw help_requested(app.help());
    } catch (const CLI::ParseError& err) {
        throw usage_error(std::string(err.what()) + "\n\n" + app.help());
    }

    if (constants_app->parsed()) return constants;
    if (permanent_app->parsed()) return permanent;
    if (expand_app->parsed()) return expand;
    if (definetti_app->parsed()) return definetti;
    return verify;
}

int execute(const Command& command, const Caps& caps) {
    return std::visit(
        [&caps](const auto& cmd) -> int {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, ConstantsCmd>) {
                return run_constants(cmd);
            } else if constexpr (std::is_same_v<T, PermanentCmd>) {
                return run_permanent(cmd, caps);
            } else if constexpr (std::is_same_v<T, ExpandCmd>) {
                return run_expand(cmd, caps);
            } else if constexpr (std::is_same_v<T, DefinettiCmd>) {
                return run_definetti(cmd, caps);
            } else {
                return run_verify(cmd, caps);
            }
        },
        command);
}

int run(int argc, char** argv) {
    Caps caps;
    try {
        caps = caps_from_env();
    } catch (const std::exception& err) {
        std::cerr << "PERMAFINETTI_CAPS: " << err.what() << "\n";
        return 1;
    }
    try {
        const Command command = parse_args({argv + 1, argv + argc});
        return execute(command, caps);
    } catch (const help_requested& help) {
        std::cout << help.what();
        return 0;
    } catch (const usage_error& err) {
        std::cerr << err.what() << "\n";
        return 1;
    } catch (const resource_limit_error& err) {
        std::cerr << "resource limit: " << err.what()
                  << "\nhint: raise the caps via PERMAFINETTI_CAPS="
                     "\"bitmask=..,naive=..,measure=..,rect=..\"\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}

}  // namespace permafinetti::cli
