#pragma once

#include "frs/ast.hpp"
#include "frs/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace frs {

struct PipelineOptions {
    int macro_depth = 128;
};

struct CompiledProgram {
    ast::Program program;
    std::vector<Diagnostic> diags;
    bool ok() const { return !has_errors(diags); }
};

/// lex + parse
CompiledProgram parse_source(std::string_view source);
/// lex + parse + expand_all (builtin normalization, pattern resolution)
CompiledProgram expand_source(std::string_view source, const PipelineOptions& opts = {});
/// lex + parse + expand_all + desugar_program
CompiledProgram desugar_source(std::string_view source, const PipelineOptions& opts = {});

struct SourceRun {
    std::string output;
    int exit_status = 0;
    std::vector<Diagnostic> diags;
    bool ok() const { return exit_status == 0 && !has_errors(diags); }
};

/// Full pipeline and evaluation, without the checker gate. Used by tests
/// and by `run --unchecked`; the CLI's `run` composes check_program in
/// front of this.
SourceRun run_source(std::string_view source, const PipelineOptions& opts = {});

} // namespace frs
