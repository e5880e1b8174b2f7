#include "frs/checker.hpp"

#include <map>
#include <string>

namespace frs {

using namespace ast;

namespace {

enum class RefKind { None, Shared, Mut };

struct Binding {
    bool declared_mut = false;
    bool is_box = false;
    RefKind ref_kind = RefKind::None;
    enum class State { Live, Moved, MutBorrowed } state = State::Live;
    int shared_borrows = 0;
    std::string borrowed_by;
    SourceSpan event_span; // where the move or borrow happened
};

// Undo record for a lexical borrow released at scope exit.
struct BorrowUndo {
    std::string target;
    bool is_mut = false;
};

struct Scope {
    std::vector<std::string> names;
    std::vector<BorrowUndo> borrows;
};

struct PlaceRoot {
    const std::string* name = nullptr;
    bool via_deref = false;
};

bool is_arith(BinOp op) {
    switch (op) {
        case BinOp::Add:
        case BinOp::Sub:
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Rem:
        case BinOp::Shl:
        case BinOp::Shr:
        case BinOp::BitAnd:
        case BinOp::BitOr:
        case BinOp::BitXor:
            return true;
        default:
            return false;
    }
}

const std::string* single_path_name(const Expr& e) {
    const auto* path = as<PathExpr>(e);
    if (path && path->is_single()) return &path->name();
    return nullptr;
}

class Checker {
public:
    Checker(const Program& program, std::vector<Diagnostic>& diags) : diags_(diags) {
        for (const auto& item : program.items) {
            if (const auto* fn = std::get_if<FunctionDef>(&item.node))
                functions_[fn->name] = fn;
        }
    }

    void check(const Program& program) {
        for (const auto& item : program.items) {
            if (const auto* fn = std::get_if<FunctionDef>(&item.node)) {
                check_fn(*fn);
            } else if (const auto* impl = std::get_if<ImplBlock>(&item.node)) {
                for (const auto& m : impl->methods) check_fn(m);
            } else if (const auto* trait = std::get_if<TraitDef>(&item.node)) {
                for (const auto& m : trait->methods) check_fn(m);
            }
        }
    }

private:
    std::vector<Diagnostic>& diags_;
    std::map<std::string, const FunctionDef*> functions_;
    std::map<std::string, std::vector<Binding>> bindings_;
    std::vector<Scope> scopes_;

    void error(std::string code, std::string msg, SourceSpan span) {
        diags_.push_back(Diagnostic::error(std::move(code), std::move(msg), span));
    }
    void error_with_note(std::string code, std::string msg, SourceSpan span,
                         std::string note, SourceSpan note_span) {
        Diagnostic d = Diagnostic::error(std::move(code), std::move(msg), span);
        d.note = std::move(note);
        d.note_span = note_span;
        d.has_note = true;
        diags_.push_back(std::move(d));
    }

    Binding* lookup(const std::string& name) {
        auto it = bindings_.find(name);
        if (it == bindings_.end() || it->second.empty()) return nullptr;
        return &it->second.back();
    }

    void push_scope() { scopes_.emplace_back(); }

    void pop_scope() {
        Scope scope = std::move(scopes_.back());
        scopes_.pop_back();
        for (auto it = scope.borrows.rbegin(); it != scope.borrows.rend(); ++it) {
            if (Binding* b = lookup(it->target)) {
                if (it->is_mut) {
                    if (b->state == Binding::State::MutBorrowed)
                        b->state = Binding::State::Live;
                    b->borrowed_by.clear();
                } else if (b->shared_borrows > 0) {
                    --b->shared_borrows;
                }
            }
        }
        for (auto it = scope.names.rbegin(); it != scope.names.rend(); ++it) {
            auto found = bindings_.find(*it);
            if (found != bindings_.end() && !found->second.empty())
                found->second.pop_back();
        }
    }

    void declare(const std::string& name, Binding binding) {
        bindings_[name].push_back(std::move(binding));
        scopes_.back().names.push_back(name);
    }

    // ------------------------------------------------------------- uses

    void use_binding(const std::string& name, SourceSpan span) {
        Binding* b = lookup(name);
        if (!b) return;
        if (b->state == Binding::State::Moved) {
            error_with_note("E-MOVED-USE", "use of moved value '" + name + "'", span,
                            "value moved here", b->event_span);
        } else if (b->state == Binding::State::MutBorrowed) {
            error_with_note("E-BORROWED-USE",
                            "'" + name + "' cannot be used while mutably borrowed by '" +
                                b->borrowed_by + "'",
                            span, "borrow begins here", b->event_span);
        }
    }

    // A by-value sink (let init, assignment RHS, call argument): a bare
    // path to a live box moves it; everything else copies.
    void consume_value(const Expr& e, SourceSpan span) {
        if (const std::string* name = single_path_name(e)) {
            Binding* b = lookup(*name);
            if (b) {
                use_binding(*name, span);
                if (b->is_box && b->state == Binding::State::Live &&
                    b->shared_borrows == 0) {
                    b->state = Binding::State::Moved;
                    b->event_span = span;
                }
                return;
            }
        }
        visit(e);
    }

    // ------------------------------------------------------ place roots

    // Walks to the root binding of a place, visiting side expressions
    // (indexes, method arguments) for reads along the way.
    PlaceRoot place_root(const Expr& e) {
        if (const std::string* name = single_path_name(e)) return PlaceRoot{name, false};
        if (const auto* un = as<UnaryExpr>(e)) {
            if (un->op == UnOp::Deref) {
                PlaceRoot r = place_root(*un->operand);
                r.via_deref = true;
                return r;
            }
            visit(e);
            return {};
        }
        if (const auto* field = as<FieldExpr>(e)) return place_root(*field->base);
        if (const auto* index = as<IndexExpr>(e)) {
            PlaceRoot r = place_root(*index->base);
            visit(*index->index);
            return r;
        }
        if (const auto* call = as<MethodCallExpr>(e)) {
            PlaceRoot r = place_root(*call->receiver);
            for (const auto& a : call->args) visit(*a);
            return r;
        }
        visit(e);
        return {};
    }

    // ------------------------------------------------------ assignments

    void check_assignment(const AssignExpr& assign, SourceSpan span) {
        consume_value(*assign.value, assign.value->span);
        PlaceRoot root = place_root(*assign.place);
        if (!root.name) return;
        Binding* b = lookup(*root.name);
        if (!b) return;
        if (root.via_deref) {
            if (b->state == Binding::State::Moved) {
                use_binding(*root.name, assign.place->span);
                return;
            }
            switch (b->ref_kind) {
                case RefKind::Mut:
                    return; // write through &mut
                case RefKind::Shared:
                    error("E-IMMUT-ASSIGN",
                          "cannot assign through '" + *root.name +
                              "', which is a shared reference",
                          span);
                    return;
                case RefKind::None:
                    if (!b->declared_mut) {
                        error("E-IMMUT-ASSIGN",
                              "cannot assign through '" + *root.name +
                                  "', which is not declared mutable",
                              span);
                    }
                    return;
            }
            return;
        }
        if (!b->declared_mut) {
            error("E-IMMUT-ASSIGN",
                  "cannot assign to '" + *root.name + "', which is not declared mutable",
                  span);
            return;
        }
        if (b->state == Binding::State::MutBorrowed) {
            error_with_note("E-BORROWED-USE",
                            "cannot assign to '" + *root.name +
                                "' while it is mutably borrowed by '" + b->borrowed_by + "'",
                            span, "borrow begins here", b->event_span);
            return;
        }
        if (b->shared_borrows > 0) {
            error("E-BORROWED-USE",
                  "cannot assign to '" + *root.name + "' while it is borrowed", span);
            return;
        }
        b->state = Binding::State::Live; // a store revives a moved box
    }

    // --------------------------------------------------------- borrows

    // Transient legality check for `&e`/`&mut e`. Returns the root
    // binding name when the operand is a place rooted in one.
    const std::string* check_borrow(const UnaryExpr& borrow, SourceSpan span) {
        const Expr& operand = *borrow.operand;
        bool place_shaped = is<PathExpr>(operand) || is<FieldExpr>(operand) ||
                            is<IndexExpr>(operand) ||
                            (is<UnaryExpr>(operand) &&
                             as<UnaryExpr>(operand)->op == UnOp::Deref);
        if (!place_shaped) {
            visit(operand); // temporary; evaluate for reads
            return nullptr;
        }
        PlaceRoot root = place_root(operand);
        if (!root.name) return nullptr;
        Binding* b = lookup(*root.name);
        if (!b) return nullptr;
        if (b->state == Binding::State::Moved) {
            use_binding(*root.name, span);
            return nullptr;
        }
        if (b->state == Binding::State::MutBorrowed) {
            use_binding(*root.name, span);
            return nullptr;
        }
        if (borrow.op == UnOp::RefMut) {
            if (b->shared_borrows > 0) {
                error("E-ALIAS",
                      "cannot mutably borrow '" + *root.name +
                          "' while it is also shared",
                      span);
                return nullptr;
            }
            if (!b->declared_mut && b->ref_kind == RefKind::None) {
                error("E-MUTREF-IMMUT",
                      "cannot mutably borrow '" + *root.name +
                          "', which is not declared mutable",
                      span);
                return nullptr;
            }
        }
        return root.name;
    }

    // `let r = &x;` / `let r = &mut x;` make the borrow last until the
    // end of the scope that declares `r`.
    void record_lasting_borrow(const std::string& target, bool is_mut,
                               const std::string& borrower, SourceSpan span) {
        Binding* b = lookup(target);
        if (!b) return;
        if (is_mut) {
            b->state = Binding::State::MutBorrowed;
            b->borrowed_by = borrower;
            b->event_span = span;
        } else {
            ++b->shared_borrows;
        }
        scopes_.back().borrows.push_back(BorrowUndo{target, is_mut});
    }

    // ------------------------------------------------------------ calls

    void check_call(const CallExpr& call) {
        const FunctionDef* callee = nullptr;
        if (const auto* path = as<PathExpr>(*call.callee)) {
            if (path->is_single()) {
                auto it = functions_.find(path->name());
                if (it != functions_.end()) callee = it->second;
            }
            if (!callee && path->is_single()) use_binding(path->name(), call.callee->span);
        } else {
            visit(*call.callee);
        }
        for (size_t i = 0; i < call.args.size(); ++i) {
            const Expr& arg = *call.args[i];
            bool wants_mut_ref = false;
            if (callee && i < callee->params.size() && callee->params[i].ty)
                wants_mut_ref = callee->params[i].ty->is_ref_mut();
            if (const auto* un = as<UnaryExpr>(arg);
                un && (un->op == UnOp::Ref || un->op == UnOp::RefMut)) {
                const std::string* target = check_borrow(*un, arg.span);
                (void)target;
                if (wants_mut_ref && un->op != UnOp::RefMut) {
                    error("E-REF-MISMATCH",
                          "argument passes a shared reference where '" + callee->name +
                              "' expects a mutable reference",
                          arg.span);
                }
                continue;
            }
            if (wants_mut_ref) {
                const std::string* name = single_path_name(arg);
                Binding* b = name ? lookup(*name) : nullptr;
                if (!b || b->ref_kind != RefKind::Mut) {
                    error("E-REF-MISMATCH",
                          "argument is not a mutable reference but '" + callee->name +
                              "' expects one",
                          arg.span);
                    if (b) use_binding(*name, arg.span);
                    continue;
                }
                use_binding(*name, arg.span);
                continue;
            }
            consume_value(arg, arg.span);
        }
    }

    // ------------------------------------------------------------- walk

    void visit(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, PathExpr>) {
                    if (n.is_single()) use_binding(n.name(), e.span);
                } else if constexpr (std::is_same_v<T, RecordExpr>) {
                    for (const auto& [f, v] : n.fields) visit(*v);
                    if (n.base) visit(*n.base);
                } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                     std::is_same_v<T, ArrayExpr> ||
                                     std::is_same_v<T, VecExpr>) {
                    for (const auto& el : n.elems) visit(*el);
                } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                    visit(*n.value);
                    visit(*n.count);
                } else if constexpr (std::is_same_v<T, FieldExpr>) {
                    visit(*n.base);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    visit(*n.base);
                    visit(*n.index);
                } else if constexpr (std::is_same_v<T, BlockExpr>) {
                    push_scope();
                    for (const auto& s : n.stmts) visit_stmt(s);
                    if (n.tail) visit(*n.tail);
                    pop_scope();
                } else if constexpr (std::is_same_v<T, IfExpr>) {
                    visit(*n.cond);
                    visit(*n.then_block);
                    if (n.else_block) visit(*n.else_block);
                } else if constexpr (std::is_same_v<T, MatchExpr>) {
                    visit(*n.scrutinee);
                    for (const auto& arm : n.arms) {
                        push_scope();
                        for (const auto& p : arm.alternatives) bind_pattern(*p, {});
                        if (arm.guard) visit(*arm.guard);
                        visit(*arm.body);
                        pop_scope();
                    }
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    check_call(n);
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    visit(*n.receiver);
                    for (const auto& a : n.args) consume_value(*a, a->span);
                } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                    push_scope();
                    for (const auto& p : n.params) {
                        Binding b;
                        if (p.ty && p.ty->is_ref()) b.ref_kind = RefKind::Shared;
                        if (p.ty && p.ty->is_ref_mut()) b.ref_kind = RefKind::Mut;
                        declare(p.name, b);
                    }
                    visit(*n.body);
                    pop_scope();
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    if (is_arith(n.op)) {
                        check_ref_arith(*n.lhs, e.span);
                        check_ref_arith(*n.rhs, e.span);
                    }
                    visit(*n.lhs);
                    visit(*n.rhs);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    if (n.op == UnOp::Ref || n.op == UnOp::RefMut) {
                        check_borrow(n, e.span);
                    } else {
                        visit(*n.operand);
                    }
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    check_assignment(n, e.span);
                } else if constexpr (std::is_same_v<T, ForExpr>) {
                    visit(*n.iter);
                    push_scope();
                    bind_pattern(*n.pat, {});
                    visit(*n.body);
                    pop_scope();
                } else if constexpr (std::is_same_v<T, LoopExpr>) {
                    visit(*n.body);
                } else if constexpr (std::is_same_v<T, WhileExpr>) {
                    visit(*n.cond);
                    visit(*n.body);
                } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                    if (n.value) consume_value(*n.value, n.value->span);
                } else if constexpr (std::is_same_v<T, BoxExpr>) {
                    consume_value(*n.operand, n.operand->span);
                } else if constexpr (std::is_same_v<T, PrintExpr>) {
                    for (const auto& a : n.args) visit(*a);
                }
                // literals, unit, break, macro leftovers: nothing
            },
            e.node);
    }

    void check_ref_arith(const Expr& operand, SourceSpan span) {
        const std::string* name = single_path_name(operand);
        if (!name) return;
        Binding* b = lookup(*name);
        if (b && b->ref_kind != RefKind::None) {
            error("E-REF-ARITH",
                  "arithmetic operator cannot apply to '" + *name +
                      "', which is a reference; dereference it first",
                  span);
        }
    }

    void visit_stmt(const Stmt& s) {
        if (const auto* let = std::get_if<LetStmt>(&s.node)) {
            visit_let(*let);
        } else {
            visit(*std::get<ExprStmt>(s.node).expr);
        }
    }

    void visit_let(const LetStmt& let) {
        Binding info;
        const Expr& init = *let.init;

        if (const auto* un = as<UnaryExpr>(init);
            un && (un->op == UnOp::Ref || un->op == UnOp::RefMut)) {
            info.ref_kind = un->op == UnOp::RefMut ? RefKind::Mut : RefKind::Shared;
            const std::string* target = check_borrow(*un, init.span);
            const auto* bind = as<BindingPat>(*let.pat);
            std::string borrower = bind ? bind->name : std::string("<binding>");
            bind_pattern(*let.pat, info);
            if (target)
                record_lasting_borrow(*target, un->op == UnOp::RefMut, borrower, init.span);
            return;
        }

        if (is<BoxExpr>(init)) {
            info.is_box = true;
            visit(init);
        } else if (const std::string* name = single_path_name(init)) {
            Binding* src = lookup(*name);
            if (src && src->is_box) info.is_box = true;
            consume_value(init, init.span);
        } else {
            visit(init);
        }
        if (let.ty) {
            if (let.ty->is_box()) info.is_box = true;
            if (let.ty->is_ref()) info.ref_kind = RefKind::Shared;
            if (let.ty->is_ref_mut()) info.ref_kind = RefKind::Mut;
        }
        bind_pattern(*let.pat, info);
    }

    // Introduce bindings for a pattern. `primary` carries box/ref facts
    // for the single-binding case; destructured bindings are plain.
    void bind_pattern(const Pattern& p, Binding primary) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, BindingPat>) {
                    Binding b = primary;
                    b.declared_mut = n.is_mut;
                    if (n.by_ref) b.ref_kind = RefKind::Shared;
                    b.state = Binding::State::Live;
                    declare(n.name, b);
                } else if constexpr (std::is_same_v<T, NamePat>) {
                    Binding b = primary;
                    b.state = Binding::State::Live;
                    declare(n.name, b);
                } else if constexpr (std::is_same_v<T, AtPat>) {
                    Binding b;
                    b.declared_mut = n.is_mut;
                    declare(n.name, b);
                    bind_pattern(*n.sub, {});
                } else if constexpr (std::is_same_v<T, TuplePat>) {
                    for (const auto& el : n.elems) bind_pattern(*el, {});
                } else if constexpr (std::is_same_v<T, VariantPat>) {
                    for (const auto& a : n.args) bind_pattern(*a, {});
                } else if constexpr (std::is_same_v<T, RecordPat>) {
                    for (const auto& [f, sub] : n.fields) bind_pattern(*sub, {});
                } else if constexpr (std::is_same_v<T, RefPat>) {
                    bind_pattern(*n.sub, {});
                }
                // wildcard, literal: no bindings
            },
            p.node);
    }

    void check_fn(const FunctionDef& fn) {
        if (!fn.body) return;
        push_scope();
        if (fn.self_kind != SelfKind::None) {
            Binding self;
            if (fn.self_kind == SelfKind::Ref) self.ref_kind = RefKind::Shared;
            if (fn.self_kind == SelfKind::RefMut) self.ref_kind = RefKind::Mut;
            declare("self", self);
        }
        for (const auto& p : fn.params) {
            Binding info;
            if (p.ty) {
                if (p.ty->is_ref()) info.ref_kind = RefKind::Shared;
                if (p.ty->is_ref_mut()) info.ref_kind = RefKind::Mut;
                if (p.ty->is_box()) info.is_box = true;
            }
            bind_pattern(*p.pat, info);
        }
        visit(*fn.body);
        pop_scope();
    }
};

} // namespace

std::vector<Diagnostic> check_program(const Program& p) {
    std::vector<Diagnostic> diags;
    Checker checker(p, diags);
    checker.check(p);
    sort_diagnostics(diags);
    return diags;
}

} // namespace frs
