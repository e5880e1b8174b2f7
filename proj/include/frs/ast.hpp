#pragma once

#include "frs/span.hpp"
#include "frs/token.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace frs::ast {

struct Expr;
struct Pattern;
using ExprPtr = std::unique_ptr<Expr>;
using PatternPtr = std::unique_ptr<Pattern>;

// ---------------------------------------------------------------- types

/// Uninterpreted type term. Annotations are parsed and carried along for
/// the checker's `&`/`&mut`/`Box` distinctions; nothing else reads them.
struct Type {
    enum class Kind { Named, Ref, RefMut, Tuple, Fn, Unit };
    Kind kind = Kind::Named;
    std::string name;                 // Named
    std::vector<Type> args;           // Named args / Tuple elems / Fn params / Ref target at [0]
    std::unique_ptr<Type> result;     // Fn return type

    Type() = default;
    Type(Type&&) = default;
    Type& operator=(Type&&) = default;

    bool is_ref() const { return kind == Kind::Ref; }
    bool is_ref_mut() const { return kind == Kind::RefMut; }
    bool is_box() const { return kind == Kind::Named && name == "Box"; }
};

// ------------------------------------------------------------- patterns

struct WildcardPat {};
struct LiteralPat {
    Token lit; // IntLit/FloatLit/CharLit/ByteLit/StrLit or Keyword true/false
};
/// Identifier in pattern position before resolution: either a fresh
/// binding or a nullary enum variant, decided once enum items are known.
struct NamePat {
    std::string name;
};
struct BindingPat {
    std::string name;
    bool is_mut = false;
    bool by_ref = false;
};
struct AtPat {
    std::string name;
    bool is_mut = false;
    PatternPtr sub;
};
struct TuplePat {
    std::vector<PatternPtr> elems;
};
struct VariantPat {
    std::string name;
    std::vector<PatternPtr> args;
    bool has_parens = false;
};
struct RecordPat {
    std::string name;
    std::vector<std::pair<std::string, PatternPtr>> fields;
    bool has_rest = false;
};
struct RefPat {
    bool is_mut = false;
    PatternPtr sub;
};

struct Pattern {
    SourceSpan span;
    std::variant<WildcardPat, LiteralPat, NamePat, BindingPat, AtPat, TuplePat,
                 VariantPat, RecordPat, RefPat>
        node;
};

// ---------------------------------------------------------- expressions

enum class BinOp {
    Add, Sub, Mul, Div, Rem,
    Shl, Shr, BitAnd, BitXor, BitOr,
    Eq, Ne, Lt, Gt, Le, Ge,
    And, Or,
};
enum class UnOp { Neg, Not, Deref, Ref, RefMut };

std::string_view binop_symbol(BinOp op);
std::string_view unop_symbol(UnOp op);

struct Stmt;

struct LiteralExpr {
    Token lit;
};
struct UnitExpr {};
struct PathExpr {
    std::vector<std::string> segments;
    const std::string& name() const { return segments.front(); }
    bool is_single() const { return segments.size() == 1; }
    std::string joined() const;
};
struct RecordExpr {
    std::string name;
    std::vector<std::pair<std::string, ExprPtr>> fields;
    ExprPtr base; // functional update `..base`, may be null
};
struct TupleExpr {
    std::vector<ExprPtr> elems;
};
struct FieldExpr {
    ExprPtr base;
    std::string field;
};
struct ArrayExpr {
    std::vector<ExprPtr> elems;
};
struct ArrayRepeatExpr {
    ExprPtr value;
    ExprPtr count;
};
struct IndexExpr {
    ExprPtr base;
    ExprPtr index;
};
struct BlockExpr {
    std::vector<Stmt> stmts;
    ExprPtr tail; // null when the block ends with a semicolon
};
struct IfExpr {
    ExprPtr cond;
    ExprPtr then_block;
    ExprPtr else_block; // null, a BlockExpr, or a chained IfExpr
};
struct MatchArm {
    std::vector<PatternPtr> alternatives; // `p1 | p2 | ...`
    ExprPtr guard;                        // may be null
    ExprPtr body;
};
struct MatchExpr {
    ExprPtr scrutinee;
    std::vector<MatchArm> arms;
};
struct CallExpr {
    ExprPtr callee;
    std::vector<ExprPtr> args;
};
struct MethodCallExpr {
    ExprPtr receiver;
    std::string method;
    std::vector<ExprPtr> args;
};
struct LambdaParam {
    std::string name;
    std::optional<Type> ty;
};
struct LambdaExpr {
    std::vector<LambdaParam> params;
    ExprPtr body;
};
struct BinaryExpr {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct UnaryExpr {
    UnOp op;
    ExprPtr operand;
};
struct AssignExpr {
    ExprPtr place;
    ExprPtr value;
};
struct ForExpr {
    PatternPtr pat;
    ExprPtr iter;
    ExprPtr body;
};
struct LoopExpr {
    ExprPtr body;
};
struct WhileExpr {
    ExprPtr cond;
    ExprPtr body;
};
struct BreakExpr {};
struct ReturnExpr {
    ExprPtr value; // may be null
};
struct BoxExpr {
    std::string allocator; // empty = default heap; "GC" parses and behaves the same
    ExprPtr operand;
};
/// Unexpanded macro invocation `name!(tokens)`; the interior is kept as
/// a raw delimiter-balanced token stream until the expansion pass.
struct MacroExpr {
    std::string name;
    char delim = '(';
    std::vector<Token> tokens;
};
/// `vec!(...)` after builtin-macro normalization.
struct VecExpr {
    std::vector<ExprPtr> elems;
};
/// `println!`/`print!` after builtin-macro normalization.
struct PrintExpr {
    bool newline = true;
    std::string format;
    SourceSpan format_span;
    std::vector<ExprPtr> args;
};

struct Expr {
    SourceSpan span;
    std::variant<LiteralExpr, UnitExpr, PathExpr, RecordExpr, TupleExpr, FieldExpr,
                 ArrayExpr, ArrayRepeatExpr, IndexExpr, BlockExpr, IfExpr, MatchExpr,
                 CallExpr, MethodCallExpr, LambdaExpr, BinaryExpr, UnaryExpr,
                 AssignExpr, ForExpr, LoopExpr, WhileExpr, BreakExpr, ReturnExpr,
                 BoxExpr, MacroExpr, VecExpr, PrintExpr>
        node;
};

template <class T>
bool is(const Expr& e) {
    return std::holds_alternative<T>(e.node);
}
template <class T>
const T* as(const Expr& e) {
    return std::get_if<T>(&e.node);
}
template <class T>
T* as(Expr& e) {
    return std::get_if<T>(&e.node);
}
template <class T>
bool is(const Pattern& p) {
    return std::holds_alternative<T>(p.node);
}
template <class T>
const T* as(const Pattern& p) {
    return std::get_if<T>(&p.node);
}
template <class T>
T* as(Pattern& p) {
    return std::get_if<T>(&p.node);
}

ExprPtr make_expr(SourceSpan span, auto&& node) {
    auto e = std::make_unique<Expr>();
    e->span = span;
    e->node = std::forward<decltype(node)>(node);
    return e;
}
PatternPtr make_pattern(SourceSpan span, auto&& node) {
    auto p = std::make_unique<Pattern>();
    p->span = span;
    p->node = std::forward<decltype(node)>(node);
    return p;
}

/// True for expressions that stand alone as statements without `;`.
bool is_block_like(const Expr& e);

// ----------------------------------------------------------- statements

struct LetStmt {
    PatternPtr pat;
    std::optional<Type> ty;
    ExprPtr init;
    SourceSpan span;
};
struct ExprStmt {
    ExprPtr expr;
    bool has_semi = false;
};
struct Stmt {
    std::variant<LetStmt, ExprStmt> node;
};

// ---------------------------------------------------------------- items

struct Param {
    PatternPtr pat;
    std::optional<Type> ty;
};
enum class SelfKind { None, Value, Ref, RefMut };

struct FunctionDef {
    std::string name;
    std::vector<std::string> type_params;
    SelfKind self_kind = SelfKind::None;
    std::vector<Param> params;
    std::optional<Type> return_type;
    ExprPtr body; // null for trait method signatures without a default
    SourceSpan span;
};
struct StructDef {
    std::string name;
    std::vector<std::string> type_params;
    std::vector<std::pair<std::string, Type>> fields;
    SourceSpan span;
};
struct EnumVariant {
    std::string name;
    std::vector<Type> payload;
};
struct EnumDef {
    std::string name;
    std::vector<std::string> type_params;
    std::vector<EnumVariant> variants;
    SourceSpan span;
};
struct TraitDef {
    std::string name;
    std::vector<FunctionDef> methods;
    SourceSpan span;
};
struct ImplBlock {
    std::string trait_name; // empty for inherent impls
    std::string type_name;
    std::vector<FunctionDef> methods;
    SourceSpan span;
};
/// One `(pattern) => (template)` rule; both sides are raw token streams.
struct MacroRule {
    std::vector<Token> pattern;
    std::vector<Token> body;
};
struct MacroDef {
    std::string name;
    std::vector<MacroRule> rules;
    SourceSpan span;
};
struct TypeAlias {
    std::string name;
    std::vector<std::string> type_params;
    Type target;
    SourceSpan span;
};

struct Item {
    std::variant<FunctionDef, StructDef, EnumDef, TraitDef, ImplBlock, MacroDef,
                 TypeAlias>
        node;
};

struct Program {
    std::vector<Item> items;
};

} // namespace frs::ast
