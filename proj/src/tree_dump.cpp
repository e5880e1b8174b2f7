#include "frs/printer.hpp"

#include "frs/lexer.hpp"

#include <charconv>
#include <sstream>

namespace frs {

using namespace ast;

namespace {

std::string float_repr(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class TreeDumper {
public:
    std::string dump(const Program& p) {
        open("program");
        for (const auto& item : p.items) {
            nl();
            std::visit([this](const auto& n) { item_node(n); }, item.node);
        }
        close();
        out_ << '\n';
        return out_.str();
    }

    std::string dump(const Expr& e) {
        expr(e);
        out_ << '\n';
        return out_.str();
    }

private:
    std::ostringstream out_;
    int indent_ = 0;

    void nl() {
        out_ << '\n';
        for (int i = 0; i < indent_; ++i) out_ << "  ";
    }
    void open(std::string_view tag) {
        out_ << '(' << tag;
        ++indent_;
    }
    void close() {
        --indent_;
        out_ << ')';
    }
    void atom(std::string_view s) { out_ << ' ' << s; }

    void literal(const Token& lit) {
        switch (lit.kind) {
            case TokenKind::IntLit:
                out_ << "(int " << lit.int_value << ' ' << suffix_name(lit.suffix) << ')';
                break;
            case TokenKind::FloatLit:
                out_ << "(float " << float_repr(lit.float_value) << ' '
                     << suffix_name(lit.suffix) << ')';
                break;
            case TokenKind::CharLit:
                out_ << "(char " << lit.int_value << ')';
                break;
            case TokenKind::ByteLit:
                out_ << "(byte " << lit.int_value << ')';
                break;
            case TokenKind::StrLit:
                out_ << "(str " << escape_string_literal(lit.str_value) << ')';
                break;
            case TokenKind::ByteStrLit:
                out_ << "(bytestr " << escape_string_literal(lit.str_value) << ')';
                break;
            default:
                out_ << "(bool " << lit.text << ')';
        }
    }

    void type(const Type& t) {
        switch (t.kind) {
            case Type::Kind::Unit:
                out_ << "(unit-type)";
                return;
            case Type::Kind::Named:
                out_ << "(type " << t.name;
                for (const auto& a : t.args) {
                    out_ << ' ';
                    type(a);
                }
                out_ << ')';
                return;
            case Type::Kind::Ref:
            case Type::Kind::RefMut:
                out_ << (t.kind == Type::Kind::Ref ? "(ref-type " : "(refmut-type ");
                type(t.args[0]);
                out_ << ')';
                return;
            case Type::Kind::Tuple:
                out_ << "(tuple-type";
                for (const auto& a : t.args) {
                    out_ << ' ';
                    type(a);
                }
                out_ << ')';
                return;
            case Type::Kind::Fn:
                out_ << "(fn-type (";
                for (size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out_ << ' ';
                    type(t.args[i]);
                }
                out_ << ") ";
                type(*t.result);
                out_ << ')';
                return;
        }
    }

    void pattern(const Pattern& p) {
        std::visit(
            [this](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, WildcardPat>) {
                    out_ << "(wild)";
                } else if constexpr (std::is_same_v<T, LiteralPat>) {
                    out_ << "(lit-pat ";
                    literal(n.lit);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, NamePat>) {
                    out_ << "(name-pat " << n.name << ')';
                } else if constexpr (std::is_same_v<T, BindingPat>) {
                    out_ << "(bind";
                    if (n.is_mut) out_ << " mut";
                    if (n.by_ref) out_ << " ref";
                    out_ << ' ' << n.name << ')';
                } else if constexpr (std::is_same_v<T, AtPat>) {
                    out_ << "(at " << n.name << ' ';
                    pattern(*n.sub);
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, TuplePat>) {
                    out_ << "(tuple-pat";
                    for (const auto& e : n.elems) {
                        out_ << ' ';
                        pattern(*e);
                    }
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, VariantPat>) {
                    out_ << "(variant-pat " << n.name;
                    for (const auto& a : n.args) {
                        out_ << ' ';
                        pattern(*a);
                    }
                    out_ << ')';
                } else if constexpr (std::is_same_v<T, RecordPat>) {
                    out_ << "(record-pat " << n.name;
                    for (const auto& [f, sub] : n.fields) {
                        out_ << " (" << f << ' ';
                        pattern(*sub);
                        out_ << ')';
                    }
                    if (n.has_rest) out_ << " ..";
                    out_ << ')';
                } else {
                    static_assert(std::is_same_v<T, RefPat>);
                    out_ << (n.is_mut ? "(refmut-pat " : "(ref-pat ");
                    pattern(*n.sub);
                    out_ << ')';
                }
            },
            p.node);
    }

    void opt_type(const std::optional<Type>& t) {
        if (!t) return;
        out_ << ' ';
        type(*t);
    }

    void fn_def(const FunctionDef& fn) {
        open("fn");
        atom(fn.name);
        if (!fn.type_params.empty()) {
            out_ << " (tparams";
            for (const auto& tp : fn.type_params) out_ << ' ' << tp;
            out_ << ')';
        }
        switch (fn.self_kind) {
            case SelfKind::None: break;
            case SelfKind::Value: atom("(self value)"); break;
            case SelfKind::Ref: atom("(self ref)"); break;
            case SelfKind::RefMut: atom("(self refmut)"); break;
        }
        for (const auto& p : fn.params) {
            out_ << " (param ";
            pattern(*p.pat);
            opt_type(p.ty);
            out_ << ')';
        }
        if (fn.return_type) {
            out_ << " (ret ";
            type(*fn.return_type);
            out_ << ')';
        }
        if (fn.body) {
            nl();
            expr(*fn.body);
        }
        close();
    }

    void item_node(const FunctionDef& fn) { fn_def(fn); }

    void item_node(const StructDef& s) {
        open("struct");
        atom(s.name);
        for (const auto& [f, t] : s.fields) {
            out_ << " (" << f << ' ';
            type(t);
            out_ << ')';
        }
        close();
    }

    void item_node(const EnumDef& e) {
        open("enum");
        atom(e.name);
        for (const auto& v : e.variants) {
            out_ << " (" << v.name;
            for (const auto& t : v.payload) {
                out_ << ' ';
                type(t);
            }
            out_ << ')';
        }
        close();
    }

    void item_node(const TraitDef& t) {
        open("trait");
        atom(t.name);
        for (const auto& m : t.methods) {
            nl();
            fn_def(m);
        }
        close();
    }

    void item_node(const ImplBlock& b) {
        open("impl");
        if (!b.trait_name.empty()) atom(b.trait_name);
        atom(b.type_name);
        for (const auto& m : b.methods) {
            nl();
            fn_def(m);
        }
        close();
    }

    void item_node(const MacroDef& def) {
        open("macro");
        atom(def.name);
        for (const auto& rule : def.rules) {
            nl();
            out_ << "(rule (";
            tokens(rule.pattern);
            out_ << ") (";
            tokens(rule.body);
            out_ << "))";
        }
        close();
    }

    void item_node(const TypeAlias& alias) {
        open("type-alias");
        atom(alias.name);
        out_ << ' ';
        type(alias.target);
        close();
    }

    void tokens(const std::vector<Token>& toks) {
        for (size_t i = 0; i < toks.size(); ++i) {
            if (i) out_ << ' ';
            out_ << toks[i].text;
        }
    }

    void stmt(const Stmt& s) {
        if (const auto* let = std::get_if<LetStmt>(&s.node)) {
            out_ << "(let ";
            pattern(*let->pat);
            opt_type(let->ty);
            out_ << ' ';
            expr(*let->init);
            out_ << ')';
            return;
        }
        const auto& es = std::get<ExprStmt>(s.node);
        out_ << (es.has_semi ? "(stmt " : "(stmt-nosemi ");
        expr(*es.expr);
        out_ << ')';
    }

    void expr(const Expr& e) {
        std::visit([this](const auto& n) { expr_node(n); }, e.node);
    }

    void expr_node(const LiteralExpr& n) { literal(n.lit); }
    void expr_node(const UnitExpr&) { out_ << "(unit)"; }
    void expr_node(const PathExpr& n) { out_ << "(path " << n.joined() << ')'; }

    void expr_node(const RecordExpr& n) {
        open("record");
        atom(n.name);
        for (const auto& [f, v] : n.fields) {
            out_ << " (" << f << ' ';
            expr(*v);
            out_ << ')';
        }
        if (n.base) {
            out_ << " (base ";
            expr(*n.base);
            out_ << ')';
        }
        close();
    }

    void expr_node(const TupleExpr& n) {
        open("tuple");
        for (const auto& e : n.elems) {
            out_ << ' ';
            expr(*e);
        }
        close();
    }

    void expr_node(const FieldExpr& n) {
        out_ << "(field ";
        expr(*n.base);
        out_ << ' ' << n.field << ')';
    }

    void expr_node(const ArrayExpr& n) {
        open("array");
        for (const auto& e : n.elems) {
            out_ << ' ';
            expr(*e);
        }
        close();
    }

    void expr_node(const ArrayRepeatExpr& n) {
        out_ << "(array-repeat ";
        expr(*n.value);
        out_ << ' ';
        expr(*n.count);
        out_ << ')';
    }

    void expr_node(const IndexExpr& n) {
        out_ << "(index ";
        expr(*n.base);
        out_ << ' ';
        expr(*n.index);
        out_ << ')';
    }

    void expr_node(const BlockExpr& n) {
        open("block");
        for (const auto& s : n.stmts) {
            nl();
            stmt(s);
        }
        if (n.tail) {
            nl();
            out_ << "(tail ";
            expr(*n.tail);
            out_ << ')';
        }
        close();
    }

    void expr_node(const IfExpr& n) {
        open("if");
        out_ << ' ';
        expr(*n.cond);
        nl();
        expr(*n.then_block);
        if (n.else_block) {
            nl();
            expr(*n.else_block);
        }
        close();
    }

    void expr_node(const MatchExpr& n) {
        open("match");
        out_ << ' ';
        expr(*n.scrutinee);
        for (const auto& arm : n.arms) {
            nl();
            out_ << "(arm (";
            for (size_t i = 0; i < arm.alternatives.size(); ++i) {
                if (i) out_ << ' ';
                pattern(*arm.alternatives[i]);
            }
            out_ << ')';
            if (arm.guard) {
                out_ << " (guard ";
                expr(*arm.guard);
                out_ << ')';
            }
            out_ << ' ';
            expr(*arm.body);
            out_ << ')';
        }
        close();
    }

    void expr_node(const CallExpr& n) {
        open("call");
        out_ << ' ';
        expr(*n.callee);
        for (const auto& a : n.args) {
            out_ << ' ';
            expr(*a);
        }
        close();
    }

    void expr_node(const MethodCallExpr& n) {
        open("method-call");
        out_ << ' ';
        expr(*n.receiver);
        atom(n.method);
        for (const auto& a : n.args) {
            out_ << ' ';
            expr(*a);
        }
        close();
    }

    void expr_node(const LambdaExpr& n) {
        open("lambda");
        out_ << " (";
        for (size_t i = 0; i < n.params.size(); ++i) {
            if (i) out_ << ' ';
            out_ << n.params[i].name;
        }
        out_ << ") ";
        expr(*n.body);
        close();
    }

    void expr_node(const BinaryExpr& n) {
        out_ << "(binop " << binop_symbol(n.op) << ' ';
        expr(*n.lhs);
        out_ << ' ';
        expr(*n.rhs);
        out_ << ')';
    }

    void expr_node(const UnaryExpr& n) {
        out_ << "(unop ";
        switch (n.op) {
            case UnOp::Neg: out_ << "neg"; break;
            case UnOp::Not: out_ << "not"; break;
            case UnOp::Deref: out_ << "deref"; break;
            case UnOp::Ref: out_ << "ref"; break;
            case UnOp::RefMut: out_ << "refmut"; break;
        }
        out_ << ' ';
        expr(*n.operand);
        out_ << ')';
    }

    void expr_node(const AssignExpr& n) {
        out_ << "(assign ";
        expr(*n.place);
        out_ << ' ';
        expr(*n.value);
        out_ << ')';
    }

    void expr_node(const ForExpr& n) {
        open("for");
        out_ << ' ';
        pattern(*n.pat);
        out_ << ' ';
        expr(*n.iter);
        nl();
        expr(*n.body);
        close();
    }

    void expr_node(const LoopExpr& n) {
        open("loop");
        nl();
        expr(*n.body);
        close();
    }

    void expr_node(const WhileExpr& n) {
        open("while");
        out_ << ' ';
        expr(*n.cond);
        nl();
        expr(*n.body);
        close();
    }

    void expr_node(const BreakExpr&) { out_ << "(break)"; }

    void expr_node(const ReturnExpr& n) {
        out_ << "(return";
        if (n.value) {
            out_ << ' ';
            expr(*n.value);
        }
        out_ << ')';
    }

    void expr_node(const BoxExpr& n) {
        out_ << "(box ";
        if (!n.allocator.empty()) out_ << n.allocator << ' ';
        expr(*n.operand);
        out_ << ')';
    }

    void expr_node(const MacroExpr& n) {
        out_ << "(macro-call " << n.name << " (";
        tokens(n.tokens);
        out_ << "))";
    }

    void expr_node(const VecExpr& n) {
        open("vec");
        for (const auto& e : n.elems) {
            out_ << ' ';
            expr(*e);
        }
        close();
    }

    void expr_node(const PrintExpr& n) {
        open(n.newline ? "println" : "print");
        atom(escape_string_literal(n.format));
        for (const auto& a : n.args) {
            out_ << ' ';
            expr(*a);
        }
        close();
    }
};

} // namespace

std::string dump_tree(const Program& p) {
    TreeDumper d;
    return d.dump(p);
}

std::string dump_tree(const Expr& e) {
    TreeDumper d;
    return d.dump(e);
}

} // namespace frs
