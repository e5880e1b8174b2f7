#pragma once

#include "frs/ast.hpp"
#include "frs/diagnostic.hpp"
#include "frs/value.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace frs {

struct RunOutcome {
    int exit_status = 0;
    std::optional<Diagnostic> error;
    bool ok() const { return exit_status == 0; }
};

/// Evaluate `entry` (a no-parameter function) of a fully expanded,
/// desugared program, streaming program output to `out`. Runtime errors
/// (RT-* codes) abort with a diagnostic and nonzero status. Runs the
/// evaluator on a dedicated large-stack thread so the interpreter's own
/// 10_000-activation-frame limit fires before native stack exhaustion.
RunOutcome run_program(const ast::Program& p, std::ostream& out,
                       const std::string& entry = "main");

} // namespace frs
