#pragma once

#include "frs/checker.hpp"
#include "frs/desugar.hpp"
#include "frs/driver.hpp"
#include "frs/interp.hpp"
#include "frs/lexer.hpp"
#include "frs/macro.hpp"
#include "frs/parser.hpp"
#include "frs/printer.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace frs::test {

inline std::string corpus_path(const std::string& name) {
    return std::string(FRS_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_corpus(const std::string& name) {
    return read_file(corpus_path(name));
}

/// Full pipeline (expand + desugar + run); empty diagnostics expected.
inline SourceRun run_text(const std::string& source) { return run_source(source); }

/// Expand but skip desugaring: evaluates surface operators natively.
inline SourceRun run_text_sugared(const std::string& source) {
    SourceRun run;
    CompiledProgram compiled = expand_source(source);
    run.diags = std::move(compiled.diags);
    if (has_errors(run.diags)) {
        run.exit_status = 1;
        return run;
    }
    std::ostringstream out;
    RunOutcome outcome = run_program(compiled.program, out);
    run.output = out.str();
    run.exit_status = outcome.exit_status;
    if (outcome.error) run.diags.push_back(*outcome.error);
    return run;
}

inline std::vector<Diagnostic> check_text(const std::string& source) {
    CompiledProgram compiled = expand_source(source);
    if (has_errors(compiled.diags)) return compiled.diags;
    return check_program(compiled.program);
}

inline ast::ExprPtr parse_expr_text(const std::string& source) {
    auto lexed = tokenize(source);
    auto parsed = parse_expression_tokens(lexed.tokens);
    return std::move(parsed.expr);
}

inline std::vector<Token> lex_text(const std::string& source) {
    return tokenize(source).tokens;
}

/// Structural fingerprint; spans excluded, so equal dumps mean equal trees.
inline std::string program_shape(const std::string& source) {
    CompiledProgram compiled = parse_source(source);
    return dump_tree(compiled.program);
}

/// Lines (1-based) whose text contains the marker.
inline std::vector<uint32_t> marked_lines(const std::string& source,
                                          const std::string& marker) {
    std::vector<uint32_t> out;
    uint32_t line = 1;
    size_t pos = 0;
    while (pos <= source.size()) {
        size_t nl = source.find('\n', pos);
        size_t end = nl == std::string::npos ? source.size() : nl;
        if (source.substr(pos, end - pos).find(marker) != std::string::npos)
            out.push_back(line);
        if (nl == std::string::npos) break;
        pos = nl + 1;
        ++line;
    }
    return out;
}

} // namespace frs::test
