// ncpi: operator-coefficient free probability calculus on matrix models.
//
// Exit codes: 0 success, 1 usage error, 2 file/parse error, 3 check failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncpi/config_io.hpp"
#include "ncpi/derivation.hpp"
#include "ncpi/errors.hpp"
#include "ncpi/expr.hpp"
#include "ncpi/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitCheckFail = 3;

struct Options {
    std::string model_path;
    std::string poly_text;
    double radius = 0.0;  // 0: default 2||X||
    std::string variant = "l2";
    int trials = -1;
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::string report_path;
    double tolerance = 0.0;  // 0: from config
};

ncpi::LoadedModel load(const Options& opt) {
    const std::uint64_t seed = opt.seed_given ? opt.seed : 0;
    if (opt.model_path.empty()) return ncpi::default_model(seed);
    return ncpi::instantiate(ncpi::load_model_config(opt.model_path), seed);
}

double tolerance_or(const Options& opt, double fallback) {
    return opt.tolerance != 0.0 ? opt.tolerance : fallback;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ncpi::parse_error("cannot write file: " + path);
    out << text;
}

void print_check(const ncpi::CheckReport& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.check_name << ": lhs=" << r.lhs << " rhs=" << r.rhs
              << " margin=" << r.margin << " residual=" << r.residual << " rep=" << r.representation_used;
    if (!r.note.empty()) std::cout << " note=" << r.note;
    std::cout << "\n";
}

int finish_checks(const std::vector<ncpi::CheckReport>& reports, const Options& opt) {
    for (const auto& r : reports) print_check(r);
    if (!opt.report_path.empty()) write_file(opt.report_path, ncpi::reports_to_json(reports, "cli"));
    for (const auto& r : reports)
        if (!r.pass) return kExitCheckFail;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-commutative polynomial calculus over matrix models"};
    app.require_subcommand(1);

    Options opt;

    auto add_common = [&](CLI::App* cmd, bool with_poly) {
        cmd->add_option("--model", opt.model_path, "model/suite config JSON");
        if (with_poly) cmd->add_option("--poly", opt.poly_text, "polynomial expression")->required();
        cmd->add_option("--seed", opt.seed, "seed for generated data")->each([&](const std::string&) {
            opt.seed_given = true;
        });
        cmd->add_option("--tolerance", opt.tolerance, "check tolerance (margin >= -tolerance passes)");
        cmd->add_option("--report", opt.report_path, "write a JSON report here");
    };

    CLI::App* cmd_fdq = app.add_subcommand("fdq", "print the free difference quotient of a polynomial");
    add_common(cmd_fdq, true);

    CLI::App* cmd_canon = app.add_subcommand("print-canonical", "print the canonical word-basis form");
    add_common(cmd_canon, true);

    CLI::App* cmd_ident = app.add_subcommand("check-identity", "verify the telescoping identity");
    add_common(cmd_ident, true);

    CLI::App* cmd_poinc = app.add_subcommand("check-poincare", "verify the Poincare-type inequality");
    add_common(cmd_poinc, true);
    cmd_poinc->add_option("--variant", opt.variant, "l2 or op")->check(CLI::IsMember({"l2", "op"}));

    CLI::App* cmd_lemma = app.add_subcommand("check-lemma4", "verify the functional-calculus norm bounds");
    add_common(cmd_lemma, true);
    cmd_lemma->add_option("--R", opt.radius, "radius R (> ||X||); default 2||X||");

    CLI::App* cmd_suite = app.add_subcommand("suite", "run the full seeded verification suite");
    add_common(cmd_suite, false);
    cmd_suite->add_option("--trials", opt.trials, "number of trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help/usage message
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(cmd_suite)) {
            ncpi::SuiteConfig cfg;
            if (!opt.model_path.empty()) cfg = ncpi::load_suite_config(opt.model_path);
            if (opt.trials >= 0) cfg.trials = opt.trials;
            if (opt.seed_given) cfg.seed = opt.seed;
            if (opt.tolerance != 0.0) cfg.tolerance = opt.tolerance;
            cfg.validate();

            const ncpi::SuiteResult result = ncpi::run_suite(cfg);
            const std::string json = ncpi::report_to_json(result);
            if (!opt.report_path.empty())
                write_file(opt.report_path, json);
            else
                std::cout << json;

            std::cerr << "suite: " << result.summary.checks << " checks over " << result.summary.trials
                      << " trials, " << result.summary.failures << " failures, min margin "
                      << result.summary.min_margin << ", max residual " << result.summary.max_residual
                      << "\n";
            return result.summary.failures == 0 ? kExitOk : kExitCheckFail;
        }

        ncpi::LoadedModel lm = load(opt);
        const double tol = tolerance_or(opt, lm.model.algebra->tolerance());

        if (app.got_subcommand(cmd_fdq)) {
            const ncpi::NCPoly p = ncpi::parse_poly(opt.poly_text, lm.context);
            std::cout << ncpi::print_stored(ncpi::fdq(p)) << "\n";
            return kExitOk;
        }
        if (app.got_subcommand(cmd_canon)) {
            const ncpi::NCPoly p = ncpi::parse_poly(opt.poly_text, lm.context);
            std::cout << ncpi::print_canonical(p) << "\n";
            return kExitOk;
        }
        if (app.got_subcommand(cmd_ident)) {
            const ncpi::NCPoly p = ncpi::parse_poly(opt.poly_text, lm.context);
            return finish_checks({ncpi::check_telescoping(p, lm.model, tol, "cli")}, opt);
        }
        if (app.got_subcommand(cmd_poinc)) {
            const ncpi::NCPoly p = ncpi::parse_poly(opt.poly_text, lm.context);
            const auto variant = opt.variant == "op" ? ncpi::NormVariant::Op : ncpi::NormVariant::L2;
            return finish_checks({ncpi::check_poincare(p, lm.model, variant, tol, "cli")}, opt);
        }
        if (app.got_subcommand(cmd_lemma)) {
            const ncpi::NCPoly p = ncpi::parse_poly(opt.poly_text, lm.context);
            const double norm_x = ncpi::operator_norm(lm.model.X);
            const double radius = opt.radius > 0.0 ? opt.radius : 2.0 * norm_x;
            return finish_checks(ncpi::check_lemma4_bounds(p, radius, lm.model, tol, "cli"), opt);
        }
        std::cerr << "error: no command\n";
        return kExitUsage;
    } catch (const ncpi::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ncpi::cap_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
