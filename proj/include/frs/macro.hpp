#pragma once

#include "frs/ast.hpp"
#include "frs/diagnostic.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace frs {

/// One captured fragment: a token run for a plain capture, or a list of
/// per-iteration captures for a repetition group.
struct Capture {
    bool is_list = false;
    std::vector<Token> tokens;
    std::vector<Capture> items;
};

using MatchBindings = std::map<std::string, Capture>;

/// Match one rule pattern against invocation tokens. Literal tokens must
/// match exactly (including bare words like `to` and `step`); `$n:ident`
/// captures one identifier; `$n:expr` captures the longest token run
/// that parses as an expression and still lets the rest of the pattern
/// match; `$(...)sep*` captures zero or more separated repetitions.
/// Returns nullopt on no-match.
std::optional<MatchBindings> match_rule(std::span<const Token> pattern,
                                        std::span<const Token> input);

struct TranscribeResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diags;
    bool ok() const { return diags.empty(); }
};

/// Substitute bindings into a rule template: `$name` splices captured
/// tokens, `$(TEXT)sep*` emits one TEXT instance per captured repetition.
TranscribeResult transcribe(std::span<const Token> tmpl, const MatchBindings& bindings);

/// Definition-time validation: fragment specifiers other than
/// ident/expr, repetition operators other than `*`, and template
/// fragments not bound by the pattern are diagnostics.
std::vector<Diagnostic> validate_macro_def(const ast::MacroDef& def);

/// Expand every macro invocation (outermost first, re-parsing each
/// expansion, recursion counted per original invocation site), then
/// normalize the builtin println!/print!/vec! forms and resolve name
/// patterns against the program's enum variants. Mutates the program.
std::vector<Diagnostic> expand_all(ast::Program& program, int depth_limit = 128);

/// Resolve NamePat identifiers: nullary enum variant names become
/// variant patterns, everything else becomes a binding.
void resolve_patterns(ast::Program& program);

} // namespace frs
