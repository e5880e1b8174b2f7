#pragma once

#include "frs/ast.hpp"

#include <optional>
#include <string_view>

namespace frs {

struct OperatorMethod {
    std::string_view method;
    std::string_view trait_name;
};

/// Operator-to-trait-method table. `&&`/`||` and reference creation
/// return nullopt: they stay primitive.
std::optional<OperatorMethod> operator_method(ast::BinOp op);
std::optional<OperatorMethod> operator_method(ast::UnOp op);

/// Rewrite table operators into method calls, bottom-up. Assignment
/// targets keep their place shape (`*x = e` stays a deref place).
void desugar_operators(ast::ExprPtr& e);

/// Rewrite every for loop into the loop/next() match form, with a fresh
/// iterator binding that does not collide with names in the body.
void desugar_for(ast::ExprPtr& e);

/// desugar_for then desugar_operators over every function body.
void desugar_program(ast::Program& p);

} // namespace frs
