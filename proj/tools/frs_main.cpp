#include "frs/checker.hpp"
#include "frs/desugar.hpp"
#include "frs/driver.hpp"
#include "frs/interp.hpp"
#include "frs/lexer.hpp"
#include "frs/macro.hpp"
#include "frs/parser.hpp"
#include "frs/printer.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string input;
    std::string format = "text";
    int macro_depth = 128;
    bool deny_warnings = false;
    bool unchecked = false;
};

bool read_input(const std::string& path, std::string& out) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        out = ss.str();
        return true;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

std::string display_name(const std::string& path) {
    return path == "-" ? "<stdin>" : path;
}

int report(const std::vector<frs::Diagnostic>& diags, const std::string& source,
           const std::string& filename, const std::string& format) {
    if (diags.empty()) return kExitOk;
    if (format == "json")
        std::cerr << frs::render_diagnostics_json(diags);
    else
        std::cerr << frs::render_diagnostics_text(diags, source, filename);
    return frs::has_errors(diags) ? kExitDiagnostics : kExitOk;
}

bool format_one_of(const Options& opts, std::initializer_list<std::string_view> allowed) {
    for (auto a : allowed)
        if (opts.format == a) return true;
    std::cerr << "frs: format '" << opts.format << "' is not valid for this subcommand\n";
    return false;
}

int cmd_lex(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text", "tokens"})) return kExitUsage;
    auto lexed = frs::tokenize(source);
    if (!lexed.ok())
        return report(lexed.diags, source, display_name(opts.input), "text");
    std::cout << frs::dump_tokens(lexed.tokens);
    return kExitOk;
}

int cmd_parse(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text", "tree"})) return kExitUsage;
    auto compiled = frs::parse_source(source);
    if (!compiled.ok())
        return report(compiled.diags, source, display_name(opts.input), "text");
    std::cout << (opts.format == "tree" ? frs::dump_tree(compiled.program)
                                        : frs::pretty_print(compiled.program));
    return kExitOk;
}

int cmd_expand(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text", "tree", "tokens"})) return kExitUsage;
    auto compiled = frs::expand_source(source, {opts.macro_depth});
    if (!compiled.ok())
        return report(compiled.diags, source, display_name(opts.input), "text");
    if (opts.format == "tree") {
        std::cout << frs::dump_tree(compiled.program);
    } else if (opts.format == "tokens") {
        auto relexed = frs::tokenize(frs::pretty_print(compiled.program));
        std::cout << frs::dump_tokens(relexed.tokens);
    } else {
        std::cout << frs::pretty_print(compiled.program);
    }
    return kExitOk;
}

int cmd_desugar(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text", "tree"})) return kExitUsage;
    auto compiled = frs::desugar_source(source, {opts.macro_depth});
    if (!compiled.ok())
        return report(compiled.diags, source, display_name(opts.input), "text");
    std::cout << (opts.format == "tree" ? frs::dump_tree(compiled.program)
                                        : frs::pretty_print(compiled.program));
    return kExitOk;
}

int cmd_check(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text", "json"})) return kExitUsage;
    auto compiled = frs::expand_source(source, {opts.macro_depth});
    std::vector<frs::Diagnostic> diags = std::move(compiled.diags);
    if (!frs::has_errors(diags)) {
        auto found = frs::check_program(compiled.program);
        diags.insert(diags.end(), std::make_move_iterator(found.begin()),
                     std::make_move_iterator(found.end()));
    }
    size_t errors = 0;
    size_t warnings = 0;
    for (const auto& d : diags)
        (d.severity == frs::Severity::Error ? errors : warnings) += 1;
    report(diags, source, display_name(opts.input), opts.format);
    std::cout << errors << (errors == 1 ? " error" : " errors") << "\n";
    if (errors > 0) return kExitDiagnostics;
    if (opts.deny_warnings && warnings > 0) return kExitDiagnostics;
    return kExitOk;
}

int cmd_run(const Options& opts, const std::string& source) {
    if (!format_one_of(opts, {"text"})) return kExitUsage;
    auto compiled = frs::expand_source(source, {opts.macro_depth});
    if (!compiled.ok())
        return report(compiled.diags, source, display_name(opts.input), "text");
    if (!opts.unchecked) {
        auto diags = frs::check_program(compiled.program);
        if (frs::has_errors(diags) ||
            (opts.deny_warnings && !diags.empty())) {
            report(diags, source, display_name(opts.input), "text");
            std::cerr << "frs: refusing to run; checks failed (use --unchecked to override)\n";
            return kExitDiagnostics;
        }
    }
    frs::desugar_program(compiled.program);
    frs::RunOutcome outcome = frs::run_program(compiled.program, std::cout);
    if (outcome.error) {
        std::vector<frs::Diagnostic> diags{*outcome.error};
        report(diags, source, display_name(opts.input), "text");
    }
    return outcome.exit_status == 0 ? kExitOk : kExitDiagnostics;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FRS frontend: lex, parse, expand, desugar, check, and run .frs programs"};
    app.require_subcommand(1);

    Options opts;
    if (const char* env = std::getenv("FRS_MACRO_DEPTH")) {
        int depth = std::atoi(env);
        if (depth >= 1) opts.macro_depth = depth;
    }

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", opts.input, "input .frs file, or - for stdin")->required();
        cmd->add_option("--format", opts.format, "output format");
        cmd->add_option("--macro-depth", opts.macro_depth, "macro expansion depth limit")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--deny-warnings", opts.deny_warnings, "treat warnings as errors");
        return cmd;
    };

    auto* lex = add_common(app.add_subcommand("lex", "dump the token stream"));
    auto* parse = add_common(app.add_subcommand("parse", "parse and print the program"));
    auto* expand = add_common(app.add_subcommand("expand", "expand macros"));
    auto* desugar = add_common(app.add_subcommand("desugar", "expand and desugar"));
    auto* check = add_common(app.add_subcommand("check", "run the ownership checker"));
    auto* run = add_common(app.add_subcommand("run", "check and run the program"));
    run->add_flag("--unchecked", opts.unchecked, "run even when checks fail");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help and friends
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "usage: frs {lex|parse|expand|desugar|check|run} <input> "
                     "[--format F] [--macro-depth N] [--deny-warnings]\n";
        return kExitUsage;
    }

    std::string source;
    if (!read_input(opts.input, source)) {
        std::cerr << "frs: cannot read '" << opts.input << "'\n";
        return kExitUsage;
    }

    if (lex->parsed()) return cmd_lex(opts, source);
    if (parse->parsed()) return cmd_parse(opts, source);
    if (expand->parsed()) return cmd_expand(opts, source);
    if (desugar->parsed()) return cmd_desugar(opts, source);
    if (check->parsed()) return cmd_check(opts, source);
    if (run->parsed()) return cmd_run(opts, source);
    return kExitUsage;
}
