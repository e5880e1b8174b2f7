#include "frs/desugar.hpp"

#include <set>
#include <string>

namespace frs {

using namespace ast;

std::optional<OperatorMethod> operator_method(BinOp op) {
    switch (op) {
        case BinOp::Eq: return OperatorMethod{"eq", "PartialEq"};
        case BinOp::Ne: return OperatorMethod{"ne", "PartialEq"};
        case BinOp::Lt: return OperatorMethod{"lt", "PartialOrd"};
        case BinOp::Gt: return OperatorMethod{"gt", "PartialOrd"};
        case BinOp::Le: return OperatorMethod{"le", "PartialOrd"};
        case BinOp::Ge: return OperatorMethod{"ge", "PartialOrd"};
        case BinOp::Add: return OperatorMethod{"add", "Add"};
        case BinOp::Sub: return OperatorMethod{"sub", "Sub"};
        case BinOp::Mul: return OperatorMethod{"mul", "Mul"};
        case BinOp::Div: return OperatorMethod{"div", "Div"};
        case BinOp::Rem: return OperatorMethod{"rem", "Rem"};
        case BinOp::BitAnd: return OperatorMethod{"bitand", "BitAnd"};
        case BinOp::BitOr: return OperatorMethod{"bitor", "BitOr"};
        case BinOp::BitXor: return OperatorMethod{"bitxor", "BitXor"};
        case BinOp::Shl: return OperatorMethod{"shl", "Shl"};
        case BinOp::Shr: return OperatorMethod{"shr", "Shr"};
        case BinOp::And:
        case BinOp::Or: return std::nullopt; // short-circuit control flow
    }
    return std::nullopt;
}

std::optional<OperatorMethod> operator_method(UnOp op) {
    switch (op) {
        case UnOp::Neg: return OperatorMethod{"neg", "Neg"};
        case UnOp::Not: return OperatorMethod{"not", "Not"};
        case UnOp::Deref: return OperatorMethod{"deref", "Deref"};
        case UnOp::Ref:
        case UnOp::RefMut: return std::nullopt; // reference creation
    }
    return std::nullopt;
}

namespace {

void ds_value(ExprPtr& slot);

// Assignment targets keep their place spine (derefs, fields, indexes);
// everything hanging off the spine desugars as a value.
void ds_place(ExprPtr& slot) {
    if (is<PathExpr>(*slot)) return;
    if (auto* un = as<UnaryExpr>(*slot)) {
        if (un->op == UnOp::Deref) {
            ds_place(un->operand);
            return;
        }
        ds_value(slot);
        return;
    }
    if (auto* field = as<FieldExpr>(*slot)) {
        ds_place(field->base);
        return;
    }
    if (auto* index = as<IndexExpr>(*slot)) {
        ds_place(index->base);
        ds_value(index->index);
        return;
    }
    ds_value(slot);
}

void ds_stmts(std::vector<Stmt>& stmts) {
    for (auto& s : stmts) {
        if (auto* let = std::get_if<LetStmt>(&s.node)) {
            if (let->init) ds_value(let->init);
        } else {
            ds_value(std::get<ExprStmt>(s.node).expr);
        }
    }
}

void ds_value(ExprPtr& slot) {
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RecordExpr>) {
                for (auto& [f, v] : n.fields) ds_value(v);
                if (n.base) ds_value(n.base);
            } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                 std::is_same_v<T, ArrayExpr> ||
                                 std::is_same_v<T, VecExpr>) {
                for (auto& el : n.elems) ds_value(el);
            } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                ds_value(n.value);
                ds_value(n.count);
            } else if constexpr (std::is_same_v<T, FieldExpr>) {
                ds_value(n.base);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                ds_value(n.base);
                ds_value(n.index);
            } else if constexpr (std::is_same_v<T, BlockExpr>) {
                ds_stmts(n.stmts);
                if (n.tail) ds_value(n.tail);
            } else if constexpr (std::is_same_v<T, IfExpr>) {
                ds_value(n.cond);
                ds_value(n.then_block);
                if (n.else_block) ds_value(n.else_block);
            } else if constexpr (std::is_same_v<T, MatchExpr>) {
                ds_value(n.scrutinee);
                for (auto& arm : n.arms) {
                    if (arm.guard) ds_value(arm.guard);
                    ds_value(arm.body);
                }
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                ds_value(n.callee);
                for (auto& a : n.args) ds_value(a);
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                ds_value(n.receiver);
                for (auto& a : n.args) ds_value(a);
            } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                ds_value(n.body);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                ds_value(n.lhs);
                ds_value(n.rhs);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                ds_value(n.operand);
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                ds_place(n.place);
                ds_value(n.value);
            } else if constexpr (std::is_same_v<T, ForExpr>) {
                ds_value(n.iter);
                ds_value(n.body);
            } else if constexpr (std::is_same_v<T, LoopExpr>) {
                ds_value(n.body);
            } else if constexpr (std::is_same_v<T, WhileExpr>) {
                ds_value(n.cond);
                ds_value(n.body);
            } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                if (n.value) ds_value(n.value);
            } else if constexpr (std::is_same_v<T, BoxExpr>) {
                ds_value(n.operand);
            } else if constexpr (std::is_same_v<T, PrintExpr>) {
                for (auto& a : n.args) ds_value(a);
            }
        },
        slot->node);

    if (auto* bin = as<BinaryExpr>(*slot)) {
        if (auto method = operator_method(bin->op)) {
            MethodCallExpr call;
            call.receiver = std::move(bin->lhs);
            call.method = std::string(method->method);
            call.args.push_back(std::move(bin->rhs));
            slot->node = std::move(call);
        }
        return;
    }
    if (auto* un = as<UnaryExpr>(*slot)) {
        if (auto method = operator_method(un->op)) {
            MethodCallExpr call;
            call.receiver = std::move(un->operand);
            call.method = std::string(method->method);
            slot->node = std::move(call);
        }
    }
}

// ------------------------------------------------------------- for loops

void collect_idents_pattern(const Pattern& p, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NamePat>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, BindingPat>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, AtPat>) {
                out.insert(n.name);
                collect_idents_pattern(*n.sub, out);
            } else if constexpr (std::is_same_v<T, TuplePat>) {
                for (const auto& el : n.elems) collect_idents_pattern(*el, out);
            } else if constexpr (std::is_same_v<T, VariantPat>) {
                for (const auto& a : n.args) collect_idents_pattern(*a, out);
            } else if constexpr (std::is_same_v<T, RecordPat>) {
                for (const auto& [f, sub] : n.fields) collect_idents_pattern(*sub, out);
            } else if constexpr (std::is_same_v<T, RefPat>) {
                collect_idents_pattern(*n.sub, out);
            }
        },
        p.node);
}

void collect_idents(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, PathExpr>) {
                for (const auto& seg : n.segments) out.insert(seg);
            } else if constexpr (std::is_same_v<T, RecordExpr>) {
                for (const auto& [f, v] : n.fields) collect_idents(*v, out);
                if (n.base) collect_idents(*n.base, out);
            } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                 std::is_same_v<T, ArrayExpr> ||
                                 std::is_same_v<T, VecExpr>) {
                for (const auto& el : n.elems) collect_idents(*el, out);
            } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                collect_idents(*n.value, out);
                collect_idents(*n.count, out);
            } else if constexpr (std::is_same_v<T, FieldExpr>) {
                collect_idents(*n.base, out);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                collect_idents(*n.base, out);
                collect_idents(*n.index, out);
            } else if constexpr (std::is_same_v<T, BlockExpr>) {
                for (const auto& s : n.stmts) {
                    if (const auto* let = std::get_if<LetStmt>(&s.node)) {
                        collect_idents_pattern(*let->pat, out);
                        if (let->init) collect_idents(*let->init, out);
                    } else {
                        collect_idents(*std::get<ExprStmt>(s.node).expr, out);
                    }
                }
                if (n.tail) collect_idents(*n.tail, out);
            } else if constexpr (std::is_same_v<T, IfExpr>) {
                collect_idents(*n.cond, out);
                collect_idents(*n.then_block, out);
                if (n.else_block) collect_idents(*n.else_block, out);
            } else if constexpr (std::is_same_v<T, MatchExpr>) {
                collect_idents(*n.scrutinee, out);
                for (const auto& arm : n.arms) {
                    for (const auto& p : arm.alternatives) collect_idents_pattern(*p, out);
                    if (arm.guard) collect_idents(*arm.guard, out);
                    collect_idents(*arm.body, out);
                }
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                collect_idents(*n.callee, out);
                for (const auto& a : n.args) collect_idents(*a, out);
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                collect_idents(*n.receiver, out);
                for (const auto& a : n.args) collect_idents(*a, out);
            } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                for (const auto& p : n.params) out.insert(p.name);
                collect_idents(*n.body, out);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                collect_idents(*n.lhs, out);
                collect_idents(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                collect_idents(*n.operand, out);
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                collect_idents(*n.place, out);
                collect_idents(*n.value, out);
            } else if constexpr (std::is_same_v<T, ForExpr>) {
                collect_idents_pattern(*n.pat, out);
                collect_idents(*n.iter, out);
                collect_idents(*n.body, out);
            } else if constexpr (std::is_same_v<T, LoopExpr>) {
                collect_idents(*n.body, out);
            } else if constexpr (std::is_same_v<T, WhileExpr>) {
                collect_idents(*n.cond, out);
                collect_idents(*n.body, out);
            } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                if (n.value) collect_idents(*n.value, out);
            } else if constexpr (std::is_same_v<T, BoxExpr>) {
                collect_idents(*n.operand, out);
            } else if constexpr (std::is_same_v<T, PrintExpr>) {
                for (const auto& a : n.args) collect_idents(*a, out);
            }
        },
        e.node);
}

std::string fresh_iterator_name(const Pattern& pat, const Expr& body) {
    std::set<std::string> used;
    collect_idents_pattern(pat, used);
    collect_idents(body, used);
    if (!used.count("_v")) return "_v";
    for (int i = 1;; ++i) {
        std::string candidate = "_v" + std::to_string(i);
        if (!used.count(candidate)) return candidate;
    }
}

void df_stmts(std::vector<Stmt>& stmts);

void df(ExprPtr& slot) {
    std::visit(
        [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RecordExpr>) {
                for (auto& [f, v] : n.fields) df(v);
                if (n.base) df(n.base);
            } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                 std::is_same_v<T, ArrayExpr> ||
                                 std::is_same_v<T, VecExpr>) {
                for (auto& el : n.elems) df(el);
            } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                df(n.value);
                df(n.count);
            } else if constexpr (std::is_same_v<T, FieldExpr>) {
                df(n.base);
            } else if constexpr (std::is_same_v<T, IndexExpr>) {
                df(n.base);
                df(n.index);
            } else if constexpr (std::is_same_v<T, BlockExpr>) {
                df_stmts(n.stmts);
                if (n.tail) df(n.tail);
            } else if constexpr (std::is_same_v<T, IfExpr>) {
                df(n.cond);
                df(n.then_block);
                if (n.else_block) df(n.else_block);
            } else if constexpr (std::is_same_v<T, MatchExpr>) {
                df(n.scrutinee);
                for (auto& arm : n.arms) {
                    if (arm.guard) df(arm.guard);
                    df(arm.body);
                }
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                df(n.callee);
                for (auto& a : n.args) df(a);
            } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                df(n.receiver);
                for (auto& a : n.args) df(a);
            } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                df(n.body);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                df(n.lhs);
                df(n.rhs);
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                df(n.operand);
            } else if constexpr (std::is_same_v<T, AssignExpr>) {
                df(n.place);
                df(n.value);
            } else if constexpr (std::is_same_v<T, ForExpr>) {
                df(n.iter);
                df(n.body);
            } else if constexpr (std::is_same_v<T, LoopExpr>) {
                df(n.body);
            } else if constexpr (std::is_same_v<T, WhileExpr>) {
                df(n.cond);
                df(n.body);
            } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                if (n.value) df(n.value);
            } else if constexpr (std::is_same_v<T, BoxExpr>) {
                df(n.operand);
            } else if constexpr (std::is_same_v<T, PrintExpr>) {
                for (auto& a : n.args) df(a);
            }
        },
        slot->node);

    auto* loop = as<ForExpr>(*slot);
    if (!loop) return;

    //   match &mut <iter> {
    //       _v => loop {
    //           match _v.next() {
    //               None => break,
    //               Some(<pat>) => { body }
    //           }
    //       }
    //   }
    SourceSpan span = slot->span;
    std::string fresh = fresh_iterator_name(*loop->pat, *loop->body);

    MethodCallExpr next_call;
    next_call.receiver = make_expr(span, PathExpr{{fresh}});
    next_call.method = "next";

    MatchExpr inner;
    inner.scrutinee = make_expr(span, std::move(next_call));
    {
        MatchArm none_arm;
        none_arm.alternatives.push_back(make_pattern(span, VariantPat{"None", {}, false}));
        none_arm.body = make_expr(span, BreakExpr{});
        inner.arms.push_back(std::move(none_arm));

        MatchArm some_arm;
        VariantPat some;
        some.name = "Some";
        some.has_parens = true;
        some.args.push_back(std::move(loop->pat));
        some_arm.alternatives.push_back(make_pattern(span, std::move(some)));
        some_arm.body = std::move(loop->body);
        inner.arms.push_back(std::move(some_arm));
    }

    BlockExpr loop_body;
    loop_body.tail = make_expr(span, std::move(inner));
    LoopExpr loop_expr;
    loop_expr.body = make_expr(span, std::move(loop_body));

    MatchExpr outer;
    outer.scrutinee = make_expr(span, UnaryExpr{UnOp::RefMut, std::move(loop->iter)});
    MatchArm bind_arm;
    bind_arm.alternatives.push_back(make_pattern(span, BindingPat{fresh, false, false}));
    bind_arm.body = make_expr(span, std::move(loop_expr));
    outer.arms.push_back(std::move(bind_arm));

    slot->node = std::move(outer);
}

void df_stmts(std::vector<Stmt>& stmts) {
    for (auto& s : stmts) {
        if (auto* let = std::get_if<LetStmt>(&s.node)) {
            if (let->init) df(let->init);
        } else {
            df(std::get<ExprStmt>(s.node).expr);
        }
    }
}

} // namespace

void desugar_operators(ExprPtr& e) { ds_value(e); }

void desugar_for(ExprPtr& e) { df(e); }

void desugar_program(Program& p) {
    auto desugar_fn = [](FunctionDef& fn) {
        if (!fn.body) return;
        desugar_for(fn.body);
        desugar_operators(fn.body);
    };
    for (auto& item : p.items) {
        if (auto* fn = std::get_if<FunctionDef>(&item.node)) {
            desugar_fn(*fn);
        } else if (auto* impl = std::get_if<ImplBlock>(&item.node)) {
            for (auto& m : impl->methods) desugar_fn(m);
        } else if (auto* trait = std::get_if<TraitDef>(&item.node)) {
            for (auto& m : trait->methods) desugar_fn(m);
        }
    }
}

} // namespace frs
