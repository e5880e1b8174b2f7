#pragma once

#include "frs/span.hpp"

#include <string>
#include <vector>

namespace frs {

enum class Severity { Error, Warning };

/// One finding from any pipeline stage. `code` is a stable short
/// identifier (E-IMMUT-ASSIGN, UnterminatedString, RT-DIV-ZERO, ...).
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;
    std::string note;
    SourceSpan note_span;
    bool has_note = false;

    static Diagnostic error(std::string code, std::string message, SourceSpan span) {
        Diagnostic d;
        d.code = std::move(code);
        d.message = std::move(message);
        d.span = span;
        return d;
    }
};

/// Stable order: by (start_line, start_col, code).
void sort_diagnostics(std::vector<Diagnostic>& diags);

bool has_errors(const std::vector<Diagnostic>& diags);

/// `file:line:col: error[CODE]: message` followed by the offending source
/// line with a caret underline. `source` is the full text the spans refer to.
std::string render_diagnostics_text(const std::vector<Diagnostic>& diags,
                                    const std::string& source,
                                    const std::string& filename);

/// One JSON object per line with fields
/// {code, severity, line, col, end_line, end_col, message}.
std::string render_diagnostics_json(const std::vector<Diagnostic>& diags);

} // namespace frs
