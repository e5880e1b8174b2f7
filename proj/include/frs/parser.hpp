#pragma once

#include "frs/ast.hpp"
#include "frs/diagnostic.hpp"
#include "frs/token.hpp"

#include <span>
#include <vector>

namespace frs {

struct ParseResult {
    ast::Program program;
    std::vector<Diagnostic> diags;
    bool ok() const { return diags.empty(); }
};

/// Parse a whole token stream into a program. The first error aborts the
/// enclosing item; recovery continues at the next top-level item.
ParseResult parse_program(std::vector<Token> tokens);

/// Trial-parse one expression from the front of `tokens`; returns the
/// number of tokens consumed, or 0 if no expression parses. Never emits
/// diagnostics. Used by the macro matcher's `$name:expr` capture.
size_t trial_parse_expression(std::span<const Token> tokens);

/// Parse a token slice as a single expression consuming the whole slice.
struct ExprParse {
    ast::ExprPtr expr; // null on error
    std::vector<Diagnostic> diags;
};
ExprParse parse_expression_tokens(std::span<const Token> tokens);

/// Parse a token slice the way a block interior is parsed (statements
/// plus optional tail expression). A slice that is one plain expression
/// comes back as that expression; otherwise the result is a block.
ExprParse parse_snippet_tokens(std::span<const Token> tokens);

/// Parse a comma-separated expression list (builtin macro arguments).
struct ExprListParse {
    std::vector<ast::ExprPtr> exprs;
    std::vector<Diagnostic> diags;
};
ExprListParse parse_expression_list(std::span<const Token> tokens);

/// Deep copies; spans are preserved.
ast::ExprPtr clone_expr(const ast::Expr& e);
ast::PatternPtr clone_pattern(const ast::Pattern& p);
ast::Type clone_type(const ast::Type& t);

} // namespace frs
