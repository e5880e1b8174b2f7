#include "frs/parser.hpp"

namespace frs {

using namespace ast;

namespace {

ExprPtr clone_opt(const ExprPtr& e) { return e ? clone_expr(*e) : nullptr; }
PatternPtr clone_opt(const PatternPtr& p) { return p ? clone_pattern(*p) : nullptr; }

std::vector<ExprPtr> clone_exprs(const std::vector<ExprPtr>& v) {
    std::vector<ExprPtr> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(clone_expr(*e));
    return out;
}

std::optional<Type> clone_opt_type(const std::optional<Type>& t) {
    if (!t) return std::nullopt;
    return clone_type(*t);
}

Stmt clone_stmt(const Stmt& s) {
    Stmt out;
    if (const auto* let = std::get_if<LetStmt>(&s.node)) {
        LetStmt l;
        l.pat = clone_pattern(*let->pat);
        l.ty = clone_opt_type(let->ty);
        l.init = clone_opt(let->init);
        l.span = let->span;
        out.node = std::move(l);
    } else {
        const auto& es = std::get<ExprStmt>(s.node);
        out.node = ExprStmt{clone_expr(*es.expr), es.has_semi};
    }
    return out;
}

} // namespace

Type clone_type(const Type& t) {
    Type out;
    out.kind = t.kind;
    out.name = t.name;
    for (const auto& a : t.args) out.args.push_back(clone_type(a));
    if (t.result) out.result = std::make_unique<Type>(clone_type(*t.result));
    return out;
}

PatternPtr clone_pattern(const Pattern& p) {
    PatternPtr out = std::visit(
        [&](const auto& n) -> PatternPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, WildcardPat>) {
                return make_pattern(p.span, WildcardPat{});
            } else if constexpr (std::is_same_v<T, LiteralPat>) {
                return make_pattern(p.span, LiteralPat{n.lit});
            } else if constexpr (std::is_same_v<T, NamePat>) {
                return make_pattern(p.span, NamePat{n.name});
            } else if constexpr (std::is_same_v<T, BindingPat>) {
                return make_pattern(p.span, BindingPat{n.name, n.is_mut, n.by_ref});
            } else if constexpr (std::is_same_v<T, AtPat>) {
                return make_pattern(p.span, AtPat{n.name, n.is_mut, clone_opt(n.sub)});
            } else if constexpr (std::is_same_v<T, TuplePat>) {
                TuplePat t;
                for (const auto& e : n.elems) t.elems.push_back(clone_pattern(*e));
                return make_pattern(p.span, std::move(t));
            } else if constexpr (std::is_same_v<T, VariantPat>) {
                VariantPat v;
                v.name = n.name;
                v.has_parens = n.has_parens;
                for (const auto& a : n.args) v.args.push_back(clone_pattern(*a));
                return make_pattern(p.span, std::move(v));
            } else if constexpr (std::is_same_v<T, RecordPat>) {
                RecordPat r;
                r.name = n.name;
                r.has_rest = n.has_rest;
                for (const auto& [f, sub] : n.fields)
                    r.fields.emplace_back(f, clone_pattern(*sub));
                return make_pattern(p.span, std::move(r));
            } else {
                static_assert(std::is_same_v<T, RefPat>);
                return make_pattern(p.span, RefPat{n.is_mut, clone_opt(n.sub)});
            }
        },
        p.node);
    return out;
}

ExprPtr clone_expr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, LiteralExpr>) {
                return make_expr(e.span, LiteralExpr{n.lit});
            } else if constexpr (std::is_same_v<T, UnitExpr>) {
                return make_expr(e.span, UnitExpr{});
            } else if constexpr (std::is_same_v<T, PathExpr>) {
                return make_expr(e.span, PathExpr{n.segments});
            } else if constexpr (std::is_same_v<T, RecordExpr>) {
                RecordExpr r;
                r.name = n.name;
                for (const auto& [f, v] : n.fields) r.fields.emplace_back(f, clone_expr(*v));
                r.base = clone_opt(n.base);
                return make_expr(e.span, std::move(r));
            } else if constexpr (std::is_same_v<T, TupleExpr>) {
                return make_expr(e.span, TupleExpr{clone_exprs(n.elems)});
            } else if constexpr (std::is_same_v<T, FieldExpr>) {
                return make_expr(e.span, FieldExpr{clone_expr(*n.base), n.field});
            } else if constexpr (std::is_same_v<T, ArrayExpr>) {
                return make_expr(e.span, ArrayExpr{clone_exprs(n.elems)});
            } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                return make_expr(e.span,
                                 ArrayRepeatExpr{clone_expr(*n.value), clone_expr(*n.count)});
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                return make_expr(e.span, IndexExpr{clone_expr(*n.base), clone_expr(*n.index)});
            } else if constexpr (std::is_same_v<T, BlockExpr>) {
                BlockExpr b;
                for (const auto& s : n.stmts) b.stmts.push_back(clone_stmt(s));
                b.tail = clone_opt(n.tail);
                return make_expr(e.span, std::move(b));
            } else if constexpr (std::is_same_v<T, IfExpr>) {
                return make_expr(e.span, IfExpr{clone_expr(*n.cond), clone_expr(*n.then_block),
                                                clone_opt(n.else_block)});
            } else if constexpr (std::is_same_v<T, MatchExpr>) {
                MatchExpr m;
                m.scrutinee = clone_expr(*n.scrutinee);
                for (const auto& arm : n.arms) {
                    MatchArm a;
                    for (const auto& p : arm.alternatives)
                        a.alternatives.push_back(clone_pattern(*p));
                    a.guard = clone_opt(arm.guard);
                    a.body = clone_expr(*arm.body);
                    m.arms.push_back(std::move(a));
                }
                return make_expr(e.span, std::move(m));
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                return make_expr(e.span, CallExpr{clone_expr(*n.callee), clone_exprs(n.args)});
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                return make_expr(e.span, MethodCallExpr{clone_expr(*n.receiver), n.method,
                                                        clone_exprs(n.args)});
            } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                LambdaExpr l;
                for (const auto& p : n.params)
                    l.params.push_back(LambdaParam{p.name, clone_opt_type(p.ty)});
                l.body = clone_expr(*n.body);
                return make_expr(e.span, std::move(l));
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                return make_expr(e.span,
                                 BinaryExpr{n.op, clone_expr(*n.lhs), clone_expr(*n.rhs)});
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                return make_expr(e.span, UnaryExpr{n.op, clone_expr(*n.operand)});
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                return make_expr(e.span,
                                 AssignExpr{clone_expr(*n.place), clone_expr(*n.value)});
            } else if constexpr (std::is_same_v<T, ForExpr>) {
                return make_expr(e.span, ForExpr{clone_pattern(*n.pat), clone_expr(*n.iter),
                                                 clone_expr(*n.body)});
            } else if constexpr (std::is_same_v<T, LoopExpr>) {
                return make_expr(e.span, LoopExpr{clone_expr(*n.body)});
            } else if constexpr (std::is_same_v<T, WhileExpr>) {
                return make_expr(e.span, WhileExpr{clone_expr(*n.cond), clone_expr(*n.body)});
            } else if constexpr (std::is_same_v<T, BreakExpr>) {
                return make_expr(e.span, BreakExpr{});
            } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                return make_expr(e.span, ReturnExpr{clone_opt(n.value)});
            } else if constexpr (std::is_same_v<T, BoxExpr>) {
                return make_expr(e.span, BoxExpr{n.allocator, clone_expr(*n.operand)});
            } else if constexpr (std::is_same_v<T, MacroExpr>) {
                return make_expr(e.span, MacroExpr{n.name, n.delim, n.tokens});
            } else if constexpr (std::is_same_v<T, VecExpr>) {
                return make_expr(e.span, VecExpr{clone_exprs(n.elems)});
            } else {
                static_assert(std::is_same_v<T, PrintExpr>);
                PrintExpr p;
                p.newline = n.newline;
                p.format = n.format;
                p.format_span = n.format_span;
                p.args = clone_exprs(n.args);
                return make_expr(e.span, std::move(p));
            }
        },
        e.node);
}

} // namespace frs
