#pragma once

#include "frs/ast.hpp"
#include "frs/diagnostic.hpp"

#include <vector>

namespace frs {

/// Static ownership/mutability analysis over the surface tree (run after
/// macro expansion, before desugaring). Diagnostics are data, not
/// failures: an empty list means the program passes.
///
/// Codes: E-IMMUT-ASSIGN, E-BORROWED-USE, E-MOVED-USE, E-MUTREF-IMMUT,
/// E-ALIAS, E-REF-MISMATCH, E-REF-ARITH.
std::vector<Diagnostic> check_program(const ast::Program& p);

} // namespace frs
