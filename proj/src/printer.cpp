#include "frs/printer.hpp"

#include "frs/lexer.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace frs {

using namespace ast;

std::string escape_string_literal(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\0': out += "\\0"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\x%02x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
    return out;
}

namespace {

// Binding powers matching the parser; used to decide parenthesization.
int binop_lbp(BinOp op) {
    switch (op) {
        case BinOp::Or: return 4;
        case BinOp::And: return 6;
        case BinOp::Eq:
        case BinOp::Ne:
        case BinOp::Lt:
        case BinOp::Gt:
        case BinOp::Le:
        case BinOp::Ge: return 8;
        case BinOp::BitOr: return 10;
        case BinOp::BitXor: return 12;
        case BinOp::BitAnd: return 14;
        case BinOp::Shl:
        case BinOp::Shr: return 16;
        case BinOp::Add:
        case BinOp::Sub: return 18;
        default: return 20;
    }
}

bool binop_is_cmp(BinOp op) {
    switch (op) {
        case BinOp::Eq:
        case BinOp::Ne:
        case BinOp::Lt:
        case BinOp::Gt:
        case BinOp::Le:
        case BinOp::Ge: return true;
        default: return false;
    }
}

int expr_bp(const Expr& e) {
    if (const auto* bin = as<BinaryExpr>(e)) return binop_lbp(bin->op);
    if (is<AssignExpr>(e)) return 2;
    if (is<UnaryExpr>(e) || is<BoxExpr>(e) || is<LambdaExpr>(e) || is<ReturnExpr>(e))
        return 22;
    return 24;
}

class Printer {
public:
    std::string print(const Program& p) {
        for (size_t i = 0; i < p.items.size(); ++i) {
            if (i) out_ << "\n";
            print_item(p.items[i]);
        }
        return out_.str();
    }

    std::string print(const Expr& e) {
        expr(e, 0);
        return out_.str();
    }

    std::string print(const Pattern& p) {
        pattern(p);
        return out_.str();
    }

    std::string print(const Type& t) {
        type(t);
        return out_.str();
    }

private:
    std::ostringstream out_;
    int indent_ = 0;

    void nl() {
        out_ << '\n';
        for (int i = 0; i < indent_; ++i) out_ << "    ";
    }

    void print_item(const Item& item) {
        std::visit([this](const auto& n) { item_node(n); }, item.node);
        out_ << '\n';
    }

    void fn_header(const FunctionDef& fn) {
        out_ << "fn " << fn.name;
        type_params(fn.type_params);
        out_ << '(';
        bool first = true;
        auto sep = [&] {
            if (!first) out_ << ", ";
            first = false;
        };
        if (fn.self_kind != SelfKind::None) {
            sep();
            if (fn.self_kind == SelfKind::Ref) out_ << "&self";
            else if (fn.self_kind == SelfKind::RefMut) out_ << "&mut self";
            else out_ << "self";
        }
        for (const auto& p : fn.params) {
            sep();
            pattern(*p.pat);
            if (p.ty) {
                out_ << ": ";
                type(*p.ty);
            }
        }
        out_ << ')';
        if (fn.return_type) {
            out_ << " -> ";
            type(*fn.return_type);
        }
    }

    void fn_def(const FunctionDef& fn) {
        fn_header(fn);
        if (fn.body) {
            out_ << ' ';
            block(*fn.body);
        } else {
            out_ << ';';
        }
    }

    void item_node(const FunctionDef& fn) { fn_def(fn); }

    void item_node(const StructDef& s) {
        out_ << "struct " << s.name;
        type_params(s.type_params);
        out_ << " {";
        ++indent_;
        for (size_t i = 0; i < s.fields.size(); ++i) {
            nl();
            out_ << s.fields[i].first << ": ";
            type(s.fields[i].second);
            if (i + 1 < s.fields.size()) out_ << ',';
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void item_node(const EnumDef& e) {
        out_ << "enum " << e.name;
        type_params(e.type_params);
        out_ << " {";
        ++indent_;
        for (size_t i = 0; i < e.variants.size(); ++i) {
            nl();
            out_ << e.variants[i].name;
            if (!e.variants[i].payload.empty()) {
                out_ << '(';
                for (size_t k = 0; k < e.variants[i].payload.size(); ++k) {
                    if (k) out_ << ", ";
                    type(e.variants[i].payload[k]);
                }
                out_ << ')';
            }
            if (i + 1 < e.variants.size()) out_ << ',';
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void item_node(const TraitDef& t) {
        out_ << "trait " << t.name << " {";
        ++indent_;
        for (const auto& m : t.methods) {
            nl();
            fn_def(m);
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void item_node(const ImplBlock& block) {
        out_ << "impl ";
        if (!block.trait_name.empty()) out_ << block.trait_name << " for ";
        out_ << block.type_name << " {";
        ++indent_;
        for (const auto& m : block.methods) {
            nl();
            fn_def(m);
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void item_node(const MacroDef& def) {
        out_ << "macro_rules! " << def.name << " (";
        ++indent_;
        for (const auto& rule : def.rules) {
            nl();
            out_ << '(';
            raw_tokens(rule.pattern);
            out_ << ") => (";
            raw_tokens(rule.body);
            out_ << ");";
        }
        --indent_;
        nl();
        out_ << ");";
    }

    void item_node(const TypeAlias& alias) {
        out_ << "type " << alias.name;
        type_params(alias.type_params);
        out_ << " = ";
        type(alias.target);
        out_ << ';';
    }

    void type_params(const std::vector<std::string>& tps) {
        if (tps.empty()) return;
        out_ << '<';
        for (size_t i = 0; i < tps.size(); ++i) {
            if (i) out_ << ", ";
            out_ << tps[i];
        }
        out_ << '>';
    }

    void raw_tokens(const std::vector<Token>& tokens) {
        for (size_t i = 0; i < tokens.size(); ++i) {
            if (i) out_ << ' ';
            out_ << tokens[i].text;
        }
    }

    void type(const Type& t) {
        switch (t.kind) {
            case Type::Kind::Unit:
                out_ << "()";
                return;
            case Type::Kind::Named:
                out_ << t.name;
                if (!t.args.empty()) {
                    out_ << '<';
                    for (size_t i = 0; i < t.args.size(); ++i) {
                        if (i) out_ << ", ";
                        type(t.args[i]);
                    }
                    out_ << '>';
                }
                return;
            case Type::Kind::Ref:
            case Type::Kind::RefMut:
                out_ << (t.kind == Type::Kind::Ref ? "&" : "&mut ");
                type(t.args[0]);
                return;
            case Type::Kind::Tuple:
                out_ << '(';
                for (size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out_ << ", ";
                    type(t.args[i]);
                }
                out_ << ')';
                return;
            case Type::Kind::Fn:
                out_ << '|';
                for (size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out_ << ", ";
                    type(t.args[i]);
                }
                out_ << '|';
                out_ << " -> ";
                type(*t.result);
                return;
        }
    }

    void pattern(const Pattern& p) {
        std::visit(
            [this](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, WildcardPat>) {
                    out_ << '_';
                } else if constexpr (std::is_same_v<T, LiteralPat>) {
                    out_ << n.lit.text;
                } else if constexpr (std::is_same_v<T, NamePat>) {
                    out_ << n.name;
                } else if constexpr (std::is_same_v<T, BindingPat>) {
                    if (n.by_ref) out_ << "ref ";
                    if (n.is_mut) out_ << "mut ";
                    out_ << n.name;
                } else if constexpr (std::is_same_v<T, AtPat>) {
                    if (n.is_mut) out_ << "mut ";
                    out_ << n.name << " @ ";
                    pattern(*n.sub);
                } else if constexpr (std::is_same_v<T, TuplePat>) {
                    out_ << '(';
                    for (size_t i = 0; i < n.elems.size(); ++i) {
                        if (i) out_ << ", ";
                        pattern(*n.elems[i]);
                    }
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, VariantPat>) {
                    out_ << n.name;
                    if (n.has_parens || !n.args.empty()) {
                        out_ << '(';
                        for (size_t i = 0; i < n.args.size(); ++i) {
                            if (i) out_ << ", ";
                            pattern(*n.args[i]);
                        }
                        out_ << ')';
                    }
                } else if constexpr (std::is_same_v<T, RecordPat>) {
                    out_ << n.name << " { ";
                    for (size_t i = 0; i < n.fields.size(); ++i) {
                        if (i) out_ << ", ";
                        out_ << n.fields[i].first << ": ";
                        pattern(*n.fields[i].second);
                    }
                    if (n.has_rest) {
                        if (!n.fields.empty()) out_ << ", ";
                        out_ << "..";
                    }
                    out_ << " }";
                } else {
                    static_assert(std::is_same_v<T, RefPat>);
                    out_ << (n.is_mut ? "&mut " : "&");
                    pattern(*n.sub);
                }
            },
            p.node);
    }

    void block(const Expr& e) {
        if (const auto* b = as<BlockExpr>(e)) {
            block_body(*b);
            return;
        }
        // Non-block body (from a synthesized tree); print as one.
        out_ << "{ ";
        expr(e, 0);
        out_ << " }";
    }

    void block_body(const BlockExpr& b) {
        if (b.stmts.empty() && !b.tail) {
            out_ << "{}";
            return;
        }
        out_ << '{';
        ++indent_;
        for (const auto& s : b.stmts) {
            nl();
            stmt(s);
        }
        if (b.tail) {
            nl();
            expr(*b.tail, 0);
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void stmt(const Stmt& s) {
        if (const auto* let = std::get_if<LetStmt>(&s.node)) {
            out_ << "let ";
            pattern(*let->pat);
            if (let->ty) {
                out_ << ": ";
                type(*let->ty);
            }
            out_ << " = ";
            expr(*let->init, 0);
            out_ << ';';
            return;
        }
        const auto& es = std::get<ExprStmt>(s.node);
        expr(*es.expr, 0);
        if (es.has_semi) out_ << ';';
    }

    void expr(const Expr& e, int min_bp) {
        bool parens = expr_bp(e) < min_bp;
        if (parens) out_ << '(';
        std::visit([this](const auto& n) { expr_node(n); }, e.node);
        if (parens) out_ << ')';
    }

    void expr_node(const LiteralExpr& n) { out_ << n.lit.text; }
    void expr_node(const UnitExpr&) { out_ << "()"; }
    void expr_node(const PathExpr& n) { out_ << n.joined(); }

    void expr_node(const RecordExpr& n) {
        out_ << n.name << " { ";
        bool first = true;
        for (const auto& [f, v] : n.fields) {
            if (!first) out_ << ", ";
            first = false;
            out_ << f << ": ";
            expr(*v, 0);
        }
        if (n.base) {
            if (!first) out_ << ", ";
            out_ << "..";
            expr(*n.base, 0);
        }
        out_ << " }";
    }

    void expr_node(const TupleExpr& n) {
        out_ << '(';
        for (size_t i = 0; i < n.elems.size(); ++i) {
            if (i) out_ << ", ";
            expr(*n.elems[i], 0);
        }
        if (n.elems.size() == 1) out_ << ',';
        out_ << ')';
    }

    void expr_node(const FieldExpr& n) {
        expr(*n.base, 24);
        out_ << '.' << n.field;
    }

    void expr_node(const ArrayExpr& n) {
        out_ << '[';
        for (size_t i = 0; i < n.elems.size(); ++i) {
            if (i) out_ << ", ";
            expr(*n.elems[i], 0);
        }
        out_ << ']';
    }

    void expr_node(const ArrayRepeatExpr& n) {
        out_ << '[';
        expr(*n.value, 0);
        out_ << ", ..";
        expr(*n.count, 0);
        out_ << ']';
    }

    void expr_node(const IndexExpr& n) {
        expr(*n.base, 24);
        out_ << '[';
        expr(*n.index, 0);
        out_ << ']';
    }

    void expr_node(const BlockExpr& n) { block_body(n); }

    void expr_node(const IfExpr& n) {
        out_ << "if ";
        expr(*n.cond, 0);
        out_ << ' ';
        block(*n.then_block);
        if (n.else_block) {
            out_ << " else ";
            if (is<IfExpr>(*n.else_block))
                expr(*n.else_block, 0);
            else
                block(*n.else_block);
        }
    }

    void expr_node(const MatchExpr& n) {
        out_ << "match ";
        expr(*n.scrutinee, 0);
        out_ << " {";
        ++indent_;
        for (const auto& arm : n.arms) {
            nl();
            for (size_t i = 0; i < arm.alternatives.size(); ++i) {
                if (i) out_ << " | ";
                pattern(*arm.alternatives[i]);
            }
            if (arm.guard) {
                out_ << " if ";
                expr(*arm.guard, 0);
            }
            out_ << " => ";
            expr(*arm.body, 0);
            out_ << ',';
        }
        --indent_;
        nl();
        out_ << '}';
    }

    void expr_node(const CallExpr& n) {
        expr(*n.callee, 24);
        out_ << '(';
        for (size_t i = 0; i < n.args.size(); ++i) {
            if (i) out_ << ", ";
            expr(*n.args[i], 0);
        }
        out_ << ')';
    }

    void expr_node(const MethodCallExpr& n) {
        expr(*n.receiver, 24);
        out_ << '.' << n.method << '(';
        for (size_t i = 0; i < n.args.size(); ++i) {
            if (i) out_ << ", ";
            expr(*n.args[i], 0);
        }
        out_ << ')';
    }

    void expr_node(const LambdaExpr& n) {
        out_ << '|';
        for (size_t i = 0; i < n.params.size(); ++i) {
            if (i) out_ << ", ";
            out_ << n.params[i].name;
            if (n.params[i].ty) {
                out_ << ": ";
                type(*n.params[i].ty);
            }
        }
        out_ << "| ";
        expr(*n.body, 0);
    }

    void expr_node(const BinaryExpr& n) {
        int lbp = binop_lbp(n.op);
        bool cmp = binop_is_cmp(n.op);
        expr(*n.lhs, cmp ? lbp + 1 : lbp);
        out_ << ' ' << binop_symbol(n.op) << ' ';
        expr(*n.rhs, lbp + 1);
    }

    void expr_node(const UnaryExpr& n) {
        out_ << unop_symbol(n.op);
        expr(*n.operand, 22);
    }

    void expr_node(const AssignExpr& n) {
        expr(*n.place, 3);
        out_ << " = ";
        expr(*n.value, 1);
    }

    void expr_node(const ForExpr& n) {
        out_ << "for ";
        pattern(*n.pat);
        out_ << " in ";
        expr(*n.iter, 0);
        out_ << ' ';
        block(*n.body);
    }

    void expr_node(const LoopExpr& n) {
        out_ << "loop ";
        block(*n.body);
    }

    void expr_node(const WhileExpr& n) {
        out_ << "while ";
        expr(*n.cond, 0);
        out_ << ' ';
        block(*n.body);
    }

    void expr_node(const BreakExpr&) { out_ << "break"; }

    void expr_node(const ReturnExpr& n) {
        out_ << "return";
        if (n.value) {
            out_ << ' ';
            expr(*n.value, 0);
        }
    }

    void expr_node(const BoxExpr& n) {
        out_ << "box";
        if (!n.allocator.empty()) out_ << '(' << n.allocator << ')';
        out_ << ' ';
        expr(*n.operand, 22);
    }

    void expr_node(const MacroExpr& n) {
        char close = n.delim == '(' ? ')' : n.delim == '[' ? ']' : '}';
        out_ << n.name << '!' << n.delim;
        raw_tokens(n.tokens);
        out_ << close;
    }

    void expr_node(const VecExpr& n) {
        out_ << "vec!(";
        for (size_t i = 0; i < n.elems.size(); ++i) {
            if (i) out_ << ", ";
            expr(*n.elems[i], 0);
        }
        out_ << ')';
    }

    void expr_node(const PrintExpr& n) {
        out_ << (n.newline ? "println!(" : "print!(");
        out_ << escape_string_literal(n.format);
        for (const auto& a : n.args) {
            out_ << ", ";
            expr(*a, 0);
        }
        out_ << ')';
    }
};

} // namespace

std::string pretty_print(const ast::Program& p) {
    Printer pr;
    return pr.print(p);
}
std::string pretty_print(const ast::Expr& e) {
    Printer pr;
    return pr.print(e);
}
std::string pretty_print(const ast::Pattern& p) {
    Printer pr;
    return pr.print(p);
}
std::string pretty_print(const ast::Type& t) {
    Printer pr;
    return pr.print(t);
}

} // namespace frs
