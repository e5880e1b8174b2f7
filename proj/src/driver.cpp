#include "frs/driver.hpp"

#include "frs/desugar.hpp"
#include "frs/interp.hpp"
#include "frs/lexer.hpp"
#include "frs/macro.hpp"
#include "frs/parser.hpp"

#include <sstream>

namespace frs {

CompiledProgram parse_source(std::string_view source) {
    CompiledProgram out;
    auto lexed = tokenize(source);
    if (!lexed.ok()) {
        out.diags = std::move(lexed.diags);
        return out;
    }
    auto parsed = parse_program(std::move(lexed.tokens));
    out.program = std::move(parsed.program);
    out.diags = std::move(parsed.diags);
    return out;
}

CompiledProgram expand_source(std::string_view source, const PipelineOptions& opts) {
    CompiledProgram out = parse_source(source);
    if (!out.ok()) return out;
    auto diags = expand_all(out.program, opts.macro_depth);
    out.diags.insert(out.diags.end(), std::make_move_iterator(diags.begin()),
                     std::make_move_iterator(diags.end()));
    return out;
}

CompiledProgram desugar_source(std::string_view source, const PipelineOptions& opts) {
    CompiledProgram out = expand_source(source, opts);
    if (!out.ok()) return out;
    desugar_program(out.program);
    return out;
}

SourceRun run_source(std::string_view source, const PipelineOptions& opts) {
    SourceRun run;
    CompiledProgram compiled = desugar_source(source, opts);
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

} // namespace frs
