#pragma once

#include "frs/ast.hpp"

#include <string>

namespace frs {

/// Source-form printer. Output re-parses to a structurally identical
/// tree; formatting is stable for golden tests.
std::string pretty_print(const ast::Program& p);
std::string pretty_print(const ast::Expr& e);
std::string pretty_print(const ast::Pattern& p);
std::string pretty_print(const ast::Type& t);

/// Stable indented s-expression dump (`--format tree`). Spans are
/// omitted, so two dumps compare equal exactly when the trees are
/// structurally equal.
std::string dump_tree(const ast::Program& p);
std::string dump_tree(const ast::Expr& e);

/// Re-encode a decoded string as a quoted literal with escapes.
std::string escape_string_literal(const std::string& s);

} // namespace frs
