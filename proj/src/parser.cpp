#include "frs/parser.hpp"

#include <cassert>

namespace frs {

using namespace ast;

namespace {

// Binding powers, tighter binds higher. Comparison operators are
// non-associative; everything else here is left-associative except
// assignment, which is right-associative.
struct OpInfo {
    BinOp op;
    int lbp;
    int rbp;
    bool is_cmp;
};

std::optional<OpInfo> binary_op_info(const Token& t) {
    if (t.kind != TokenKind::Punct) return std::nullopt;
    const std::string& s = t.text;
    if (s == "||") return OpInfo{BinOp::Or, 4, 5, false};
    if (s == "&&") return OpInfo{BinOp::And, 6, 7, false};
    if (s == "==") return OpInfo{BinOp::Eq, 8, 9, true};
    if (s == "!=") return OpInfo{BinOp::Ne, 8, 9, true};
    if (s == "<") return OpInfo{BinOp::Lt, 8, 9, true};
    if (s == ">") return OpInfo{BinOp::Gt, 8, 9, true};
    if (s == "<=") return OpInfo{BinOp::Le, 8, 9, true};
    if (s == ">=") return OpInfo{BinOp::Ge, 8, 9, true};
    if (s == "|") return OpInfo{BinOp::BitOr, 10, 11, false};
    if (s == "^") return OpInfo{BinOp::BitXor, 12, 13, false};
    if (s == "&") return OpInfo{BinOp::BitAnd, 14, 15, false};
    if (s == "<<") return OpInfo{BinOp::Shl, 16, 17, false};
    if (s == ">>") return OpInfo{BinOp::Shr, 16, 17, false};
    if (s == "+") return OpInfo{BinOp::Add, 18, 19, false};
    if (s == "-") return OpInfo{BinOp::Sub, 18, 19, false};
    if (s == "*") return OpInfo{BinOp::Mul, 20, 21, false};
    if (s == "/") return OpInfo{BinOp::Div, 20, 21, false};
    if (s == "%") return OpInfo{BinOp::Rem, 20, 21, false};
    return std::nullopt;
}

constexpr int kAssignLbp = 2;
constexpr int kAssignRbp = 1;
constexpr int kUnaryRbp = 22;

std::optional<BinOp> compound_assign_op(const Token& t) {
    if (t.kind != TokenKind::Punct) return std::nullopt;
    const std::string& s = t.text;
    if (s == "+=") return BinOp::Add;
    if (s == "-=") return BinOp::Sub;
    if (s == "*=") return BinOp::Mul;
    if (s == "/=") return BinOp::Div;
    if (s == "%=") return BinOp::Rem;
    if (s == "&=") return BinOp::BitAnd;
    if (s == "|=") return BinOp::BitOr;
    if (s == "^=") return BinOp::BitXor;
    if (s == "<<=") return BinOp::Shl;
    if (s == ">>=") return BinOp::Shr;
    return std::nullopt;
}

bool is_literal_token(const Token& t) {
    switch (t.kind) {
        case TokenKind::IntLit:
        case TokenKind::FloatLit:
        case TokenKind::CharLit:
        case TokenKind::ByteLit:
        case TokenKind::StrLit:
        case TokenKind::ByteStrLit:
            return true;
        default:
            return t.is_keyword("true") || t.is_keyword("false");
    }
}

struct ItemAbort {};

class Parser {
public:
    Parser(std::vector<Token> tokens, bool silent = false)
        : tokens_(std::move(tokens)), silent_(silent) {}

    ParseResult run_program() {
        ParseResult result;
        while (!at_end()) {
            if (cur().is_punct(";")) {
                advance();
                continue;
            }
            if (cur().is_ident("use")) {
                skip_use_item();
                continue;
            }
            try {
                parse_item(result.program);
            } catch (ItemAbort&) {
                recover_to_item();
            }
        }
        result.diags = std::move(diags_);
        return result;
    }

    ExprPtr run_expression() {
        ExprPtr e = parse_expr(0);
        if (!at_end()) error_here("expected end of expression");
        return e;
    }

    ExprPtr run_snippet() {
        BlockExpr block;
        SourceSpan span = at_end() ? SourceSpan{} : cur().span;
        parse_block_interior(block, /*until_brace=*/false);
        if (block.stmts.empty() && block.tail) return std::move(block.tail);
        if (block.tail) span = SourceSpan::join(span, block.tail->span);
        return make_expr(span, std::move(block));
    }

    std::vector<ExprPtr> run_expression_list() {
        std::vector<ExprPtr> out;
        if (at_end()) return out;
        out.push_back(parse_expr(0));
        while (!at_end() && cur().is_punct(",")) {
            advance();
            if (at_end()) break; // tolerate a trailing comma
            out.push_back(parse_expr(0));
        }
        if (!at_end()) error_here("expected ',' or end of arguments");
        return out;
    }

    size_t run_trial_expression() {
        try {
            parse_expr(0);
        } catch (ItemAbort&) {
            return 0;
        }
        return pos_;
    }

    std::vector<Diagnostic> take_diags() { return std::move(diags_); }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    bool silent_ = false;
    bool no_struct_literal_ = false;
    std::vector<Diagnostic> diags_;

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& cur() const {
        static Token eof;
        return at_end() ? eof : tokens_[pos_];
    }
    const Token& peek(size_t k = 1) const {
        static Token eof;
        return pos_ + k < tokens_.size() ? tokens_[pos_ + k] : eof;
    }
    Token advance() {
        Token t = cur();
        if (!at_end()) ++pos_;
        return t;
    }
    SourceSpan here() const {
        if (!at_end()) return cur().span;
        if (!tokens_.empty()) return tokens_.back().span;
        return SourceSpan{};
    }

    [[noreturn]] void error_here(std::string msg) {
        if (!silent_) {
            std::string found = at_end() ? "end of input" : "'" + cur().text + "'";
            diags_.push_back(Diagnostic::error("ParseError", msg + ", found " + found, here()));
        }
        throw ItemAbort{};
    }

    Token expect_punct(std::string_view p) {
        if (!cur().is_punct(p)) error_here("expected '" + std::string(p) + "'");
        return advance();
    }
    Token expect_delim(char d) {
        if (!cur().is_delim(d)) error_here("expected '" + std::string(1, d) + "'");
        return advance();
    }
    Token expect_keyword(std::string_view k) {
        if (!cur().is_keyword(k)) error_here("expected '" + std::string(k) + "'");
        return advance();
    }
    std::string expect_ident(std::string_view what) {
        if (cur().kind != TokenKind::Ident) error_here("expected " + std::string(what));
        return advance().text;
    }

    // `>>` closing two generic argument lists: split the token in place.
    void expect_generic_close() {
        if (cur().is_punct(">")) {
            advance();
            return;
        }
        if (cur().is_punct(">>")) {
            Token& t = tokens_[pos_];
            t.text = ">";
            t.span.begin += 1;
            t.span.start_col += 1;
            return;
        }
        error_here("expected '>'");
    }

    void recover_to_item() {
        int depth = 0;
        while (!at_end()) {
            const Token& t = cur();
            if (t.is_open_delim()) ++depth;
            if (t.is_close_delim() && depth > 0) --depth;
            if (depth == 0 && t.kind == TokenKind::Keyword &&
                (t.text == "fn" || t.text == "struct" || t.text == "enum" ||
                 t.text == "trait" || t.text == "impl" || t.text == "macro_rules"))
                return;
            advance();
        }
    }

    void skip_use_item() {
        while (!at_end() && !cur().is_punct(";")) advance();
        if (!at_end()) advance();
    }

    // ------------------------------------------------------------ items

    void parse_item(Program& program) {
        const Token& t = cur();
        if (t.is_keyword("fn")) {
            program.items.push_back(Item{parse_function(/*allow_signature=*/false)});
        } else if (t.is_keyword("struct")) {
            program.items.push_back(Item{parse_struct()});
        } else if (t.is_keyword("enum")) {
            program.items.push_back(Item{parse_enum()});
        } else if (t.is_keyword("trait")) {
            program.items.push_back(Item{parse_trait()});
        } else if (t.is_keyword("impl")) {
            program.items.push_back(Item{parse_impl()});
        } else if (t.is_keyword("macro_rules")) {
            program.items.push_back(Item{parse_macro_def()});
        } else if (t.is_ident("type")) {
            program.items.push_back(Item{parse_type_alias()});
        } else {
            error_here("expected an item (fn, struct, enum, trait, impl, macro_rules!, type)");
        }
    }

    std::vector<std::string> parse_type_params() {
        std::vector<std::string> out;
        if (!cur().is_punct("<")) return out;
        advance();
        while (!cur().is_punct(">")) {
            out.push_back(expect_ident("type parameter"));
            if (cur().is_punct(","))
                advance();
            else
                break;
        }
        expect_punct(">");
        return out;
    }

    FunctionDef parse_function(bool allow_signature) {
        FunctionDef fn;
        fn.span = cur().span;
        expect_keyword("fn");
        fn.name = expect_ident("function name");
        fn.type_params = parse_type_params();
        expect_delim('(');
        bool first = true;
        while (!cur().is_delim(')')) {
            if (!first) expect_punct(",");
            first = false;
            if (cur().is_delim(')')) break; // trailing comma
            if (parse_self_param(fn)) continue;
            Param p;
            p.pat = parse_pattern();
            if (cur().is_punct(":")) {
                advance();
                p.ty = parse_type();
            }
            fn.params.push_back(std::move(p));
        }
        expect_delim(')');
        if (cur().is_punct("->")) {
            advance();
            fn.return_type = parse_type();
        }
        if (cur().is_delim('{')) {
            fn.body = parse_block();
        } else if (allow_signature) {
            if (cur().is_punct(";")) advance();
        } else {
            error_here("expected function body");
        }
        return fn;
    }

    bool parse_self_param(FunctionDef& fn) {
        if (cur().is_keyword("self")) {
            advance();
            fn.self_kind = SelfKind::Value;
            return true;
        }
        if (cur().is_punct("&") &&
            (peek().is_keyword("self") ||
             (peek().is_keyword("mut") && peek(2).is_keyword("self")))) {
            advance();
            if (cur().is_keyword("mut")) {
                advance();
                fn.self_kind = SelfKind::RefMut;
            } else {
                fn.self_kind = SelfKind::Ref;
            }
            expect_keyword("self");
            return true;
        }
        return false;
    }

    StructDef parse_struct() {
        StructDef s;
        s.span = cur().span;
        expect_keyword("struct");
        s.name = expect_ident("struct name");
        s.type_params = parse_type_params();
        expect_delim('{');
        while (!cur().is_delim('}')) {
            std::string field = expect_ident("field name");
            expect_punct(":");
            s.fields.emplace_back(std::move(field), parse_type());
            if (cur().is_punct(","))
                advance();
            else
                break;
        }
        expect_delim('}');
        return s;
    }

    EnumDef parse_enum() {
        EnumDef e;
        e.span = cur().span;
        expect_keyword("enum");
        e.name = expect_ident("enum name");
        e.type_params = parse_type_params();
        expect_delim('{');
        while (!cur().is_delim('}')) {
            EnumVariant v;
            v.name = expect_ident("variant name");
            if (cur().is_delim('(')) {
                advance();
                while (!cur().is_delim(')')) {
                    v.payload.push_back(parse_type());
                    if (cur().is_punct(","))
                        advance();
                    else
                        break;
                }
                expect_delim(')');
            }
            e.variants.push_back(std::move(v));
            if (cur().is_punct(","))
                advance();
            else
                break;
        }
        expect_delim('}');
        return e;
    }

    TraitDef parse_trait() {
        TraitDef t;
        t.span = cur().span;
        expect_keyword("trait");
        t.name = expect_ident("trait name");
        parse_type_params(); // parsed, unused
        expect_delim('{');
        while (!cur().is_delim('}')) {
            if (cur().is_punct(";")) {
                advance();
                continue;
            }
            t.methods.push_back(parse_function(/*allow_signature=*/true));
        }
        expect_delim('}');
        return t;
    }

    ImplBlock parse_impl() {
        ImplBlock block;
        block.span = cur().span;
        expect_keyword("impl");
        std::string first = expect_ident("type or trait name");
        if (cur().is_keyword("for")) {
            advance();
            block.trait_name = std::move(first);
            block.type_name = expect_ident("type name");
        } else {
            block.type_name = std::move(first);
        }
        expect_delim('{');
        while (!cur().is_delim('}')) {
            if (cur().is_punct(";")) {
                advance();
                continue;
            }
            block.methods.push_back(parse_function(/*allow_signature=*/false));
        }
        expect_delim('}');
        return block;
    }

    // Collect the interior of a balanced delimiter group as raw tokens.
    std::vector<Token> collect_group() {
        if (!cur().is_open_delim()) error_here("expected '(' , '[' or '{'");
        char open = advance().text[0];
        char close = open == '(' ? ')' : open == '[' ? ']' : '}';
        std::vector<Token> out;
        int depth = 0;
        while (!at_end()) {
            const Token& t = cur();
            if (t.is_open_delim()) ++depth;
            if (t.is_close_delim()) {
                if (depth == 0) {
                    if (!t.is_delim(close)) error_here("mismatched delimiter");
                    advance();
                    return out;
                }
                --depth;
            }
            out.push_back(advance());
        }
        error_here("unclosed delimiter");
    }

    MacroDef parse_macro_def() {
        MacroDef def;
        def.span = cur().span;
        expect_keyword("macro_rules");
        expect_punct("!");
        def.name = expect_ident("macro name");
        if (!cur().is_open_delim()) error_here("expected macro rule list");
        char open = cur().text[0];
        char close = open == '(' ? ')' : open == '[' ? ']' : '}';
        advance();
        while (!cur().is_delim(close)) {
            if (cur().is_punct(";")) {
                advance();
                continue;
            }
            MacroRule rule;
            rule.pattern = collect_group();
            expect_punct("=>");
            rule.body = collect_group();
            def.rules.push_back(std::move(rule));
            if (cur().is_punct(";")) advance();
        }
        expect_delim(close);
        return def;
    }

    TypeAlias parse_type_alias() {
        TypeAlias alias;
        alias.span = cur().span;
        advance(); // `type` (contextual)
        alias.name = expect_ident("type alias name");
        alias.type_params = parse_type_params();
        expect_punct("=");
        alias.target = parse_type();
        if (cur().is_punct(";")) advance();
        return alias;
    }

    // ------------------------------------------------------------ types

    Type parse_type() {
        Type t;
        if (cur().is_delim('(')) {
            advance();
            if (cur().is_delim(')')) {
                advance();
                t.kind = Type::Kind::Unit;
                return t;
            }
            std::vector<Type> elems;
            elems.push_back(parse_type());
            bool tuple = false;
            while (cur().is_punct(",")) {
                tuple = true;
                advance();
                if (cur().is_delim(')')) break;
                elems.push_back(parse_type());
            }
            expect_delim(')');
            if (!tuple) return std::move(elems[0]);
            t.kind = Type::Kind::Tuple;
            t.args = std::move(elems);
            return t;
        }
        if (cur().is_punct("&")) {
            advance();
            t.kind = Type::Kind::Ref;
            if (cur().is_keyword("mut")) {
                advance();
                t.kind = Type::Kind::RefMut;
            }
            t.args.push_back(parse_type());
            return t;
        }
        if (cur().is_punct("|") || cur().is_punct("||")) {
            t.kind = Type::Kind::Fn;
            if (cur().is_punct("||")) {
                advance();
            } else {
                advance();
                while (!cur().is_punct("|")) {
                    t.args.push_back(parse_type());
                    if (cur().is_punct(","))
                        advance();
                    else
                        break;
                }
                expect_punct("|");
            }
            expect_punct("->");
            t.result = std::make_unique<Type>(parse_type());
            return t;
        }
        if (cur().kind == TokenKind::Ident || cur().is_keyword("self")) {
            t.kind = Type::Kind::Named;
            t.name = advance().text;
            if (cur().is_punct("<")) {
                advance();
                while (!cur().is_punct(">") && !cur().is_punct(">>")) {
                    t.args.push_back(parse_type());
                    if (cur().is_punct(","))
                        advance();
                    else
                        break;
                }
                expect_generic_close();
            }
            return t;
        }
        error_here("expected a type");
    }

    // --------------------------------------------------------- patterns

    PatternPtr parse_pattern() {
        SourceSpan span = here();
        const Token& t = cur();
        if (t.is_ident("_")) {
            advance();
            return make_pattern(span, WildcardPat{});
        }
        if (is_literal_token(t)) {
            Token lit = advance();
            return make_pattern(span, LiteralPat{std::move(lit)});
        }
        if (t.is_punct("&") || t.is_punct("&&")) {
            bool doubled = t.is_punct("&&");
            advance();
            RefPat ref;
            if (cur().is_keyword("mut")) {
                advance();
                ref.is_mut = true;
            }
            ref.sub = parse_pattern();
            if (doubled) {
                auto inner = make_pattern(span, std::move(ref));
                return make_pattern(span, RefPat{false, std::move(inner)});
            }
            return make_pattern(span, std::move(ref));
        }
        if (t.is_delim('(')) {
            advance();
            TuplePat tuple;
            bool comma = false;
            while (!cur().is_delim(')')) {
                tuple.elems.push_back(parse_pattern());
                if (cur().is_punct(",")) {
                    comma = true;
                    advance();
                } else {
                    break;
                }
            }
            expect_delim(')');
            if (tuple.elems.size() == 1 && !comma) return std::move(tuple.elems[0]);
            return make_pattern(span, std::move(tuple));
        }
        if (t.is_keyword("ref")) {
            advance();
            bool is_mut = false;
            if (cur().is_keyword("mut")) {
                advance();
                is_mut = true;
            }
            std::string name = expect_ident("binding name");
            return make_pattern(span, BindingPat{std::move(name), is_mut, /*by_ref=*/true});
        }
        if (t.is_keyword("mut")) {
            advance();
            std::string name = expect_ident("binding name");
            return make_pattern(span, BindingPat{std::move(name), /*is_mut=*/true, false});
        }
        if (t.kind == TokenKind::Ident) {
            std::string name = advance().text;
            if (cur().is_punct("@")) {
                advance();
                return make_pattern(span, AtPat{std::move(name), false, parse_pattern()});
            }
            if (cur().is_delim('(')) {
                advance();
                VariantPat v;
                v.name = std::move(name);
                v.has_parens = true;
                while (!cur().is_delim(')')) {
                    v.args.push_back(parse_pattern());
                    if (cur().is_punct(","))
                        advance();
                    else
                        break;
                }
                expect_delim(')');
                return make_pattern(span, std::move(v));
            }
            if (cur().is_delim('{')) {
                advance();
                RecordPat r;
                r.name = std::move(name);
                while (!cur().is_delim('}')) {
                    if (cur().is_punct("..")) {
                        advance();
                        r.has_rest = true;
                        break;
                    }
                    std::string field = expect_ident("field name");
                    if (cur().is_punct(":")) {
                        advance();
                        r.fields.emplace_back(field, parse_pattern());
                    } else {
                        // shorthand: bind the field under its own name
                        r.fields.emplace_back(
                            field, make_pattern(span, NamePat{field}));
                    }
                    if (cur().is_punct(","))
                        advance();
                    else
                        break;
                }
                expect_delim('}');
                return make_pattern(span, std::move(r));
            }
            return make_pattern(span, NamePat{std::move(name)});
        }
        error_here("expected a pattern");
    }

    // ------------------------------------------------------ expressions

    ExprPtr parse_block() {
        SourceSpan span = here();
        expect_delim('{');
        BlockExpr block;
        parse_block_interior(block, /*until_brace=*/true);
        SourceSpan end = here();
        expect_delim('}');
        return make_expr(SourceSpan::join(span, end), std::move(block));
    }

    void parse_block_interior(BlockExpr& block, bool until_brace) {
        auto done = [&] {
            return until_brace ? cur().is_delim('}') : at_end();
        };
        while (!done()) {
            if (cur().is_punct(";")) {
                advance();
                continue;
            }
            if (cur().is_keyword("let")) {
                LetStmt let;
                let.span = cur().span;
                advance();
                let.pat = parse_pattern();
                if (cur().is_punct(":")) {
                    advance();
                    let.ty = parse_type();
                }
                expect_punct("=");
                let.init = parse_expr(0);
                expect_punct(";");
                block.stmts.push_back(Stmt{std::move(let)});
                continue;
            }
            ExprPtr e = parse_expr(0);
            if (cur().is_punct(";")) {
                advance();
                block.stmts.push_back(Stmt{ExprStmt{std::move(e), true}});
            } else if (done()) {
                block.tail = std::move(e);
                break;
            } else if (is_block_like(*e)) {
                block.stmts.push_back(Stmt{ExprStmt{std::move(e), false}});
            } else {
                error_here("expected ';'");
            }
        }
    }

    ExprPtr parse_expr(int min_bp) {
        ExprPtr lhs = parse_prefix();
        bool prev_was_cmp = false;
        while (!at_end()) {
            const Token& t = cur();
            if ((t.is_punct("=") || compound_assign_op(t)) && kAssignLbp >= min_bp) {
                auto compound = compound_assign_op(t);
                SourceSpan op_span = t.span;
                advance();
                ExprPtr rhs = parse_expr(kAssignRbp);
                SourceSpan span = SourceSpan::join(lhs->span, rhs->span);
                if (compound) {
                    // `a += b` is the same statement as `a = a + b`.
                    ExprPtr lhs_copy = clone_expr(*lhs);
                    ExprPtr sum = make_expr(
                        span, BinaryExpr{*compound, std::move(lhs_copy), std::move(rhs)});
                    lhs = make_expr(span, AssignExpr{std::move(lhs), std::move(sum)});
                } else {
                    lhs = make_expr(span, AssignExpr{std::move(lhs), std::move(rhs)});
                }
                (void)op_span;
                prev_was_cmp = false;
                continue;
            }
            auto info = binary_op_info(t);
            if (!info || info->lbp < min_bp) break;
            if (info->is_cmp && prev_was_cmp)
                error_here("comparison operators cannot be chained");
            advance();
            ExprPtr rhs = parse_expr(info->rbp);
            SourceSpan span = SourceSpan::join(lhs->span, rhs->span);
            lhs = make_expr(span, BinaryExpr{info->op, std::move(lhs), std::move(rhs)});
            prev_was_cmp = info->is_cmp;
        }
        return lhs;
    }

    bool at_expr_start() const {
        const Token& t = cur();
        if (is_literal_token(t)) return true;
        switch (t.kind) {
            case TokenKind::Ident:
                return true;
            case TokenKind::Keyword:
                return t.text == "self" || t.text == "box" || t.text == "if" ||
                       t.text == "match" || t.text == "loop" || t.text == "while" ||
                       t.text == "for" || t.text == "break" || t.text == "return";
            case TokenKind::Punct:
                return t.text == "-" || t.text == "!" || t.text == "*" ||
                       t.text == "&" || t.text == "&&" || t.text == "|" ||
                       t.text == "||";
            case TokenKind::Delimiter:
                return t.is_open_delim();
            default:
                return false;
        }
    }

    ExprPtr parse_prefix() {
        SourceSpan span = here();
        const Token& t = cur();

        if (t.is_punct("-") || t.is_punct("!") || t.is_punct("*")) {
            UnOp op = t.is_punct("-") ? UnOp::Neg : t.is_punct("!") ? UnOp::Not : UnOp::Deref;
            advance();
            ExprPtr operand = parse_expr(kUnaryRbp);
            SourceSpan full = SourceSpan::join(span, operand->span);
            return make_expr(full, UnaryExpr{op, std::move(operand)});
        }
        if (t.is_punct("&") || t.is_punct("&&")) {
            bool doubled = t.is_punct("&&");
            advance();
            UnOp op = UnOp::Ref;
            if (cur().is_keyword("mut")) {
                advance();
                op = UnOp::RefMut;
            }
            ExprPtr operand = parse_expr(kUnaryRbp);
            SourceSpan full = SourceSpan::join(span, operand->span);
            ExprPtr e = make_expr(full, UnaryExpr{op, std::move(operand)});
            if (doubled) e = make_expr(full, UnaryExpr{UnOp::Ref, std::move(e)});
            return e;
        }
        if (t.is_keyword("box")) {
            advance();
            BoxExpr box;
            if (cur().is_delim('(') && peek().kind == TokenKind::Ident &&
                peek(2).is_delim(')')) {
                // `box(A) e` allocator form, only when an expression follows.
                size_t save = pos_;
                advance();
                std::string alloc = advance().text;
                advance();
                if (at_expr_start()) {
                    box.allocator = std::move(alloc);
                } else {
                    pos_ = save;
                }
            }
            box.operand = parse_expr(kUnaryRbp);
            SourceSpan full = SourceSpan::join(span, box.operand->span);
            return make_expr(full, std::move(box));
        }
        return parse_postfix(parse_primary());
    }

    ExprPtr parse_postfix(ExprPtr e) {
        while (!at_end()) {
            if (cur().is_punct(".")) {
                advance();
                std::string name = expect_ident("field or method name");
                if (cur().is_delim('(')) {
                    advance();
                    MethodCallExpr call;
                    call.receiver = std::move(e);
                    call.method = std::move(name);
                    parse_call_args(call.args);
                    SourceSpan end = here();
                    expect_delim(')');
                    SourceSpan full = SourceSpan::join(call.receiver->span, end);
                    e = make_expr(full, std::move(call));
                } else {
                    SourceSpan span = SourceSpan::join(e->span, here());
                    e = make_expr(span, FieldExpr{std::move(e), std::move(name)});
                }
                continue;
            }
            if (cur().is_delim('(')) {
                advance();
                CallExpr call;
                call.callee = std::move(e);
                parse_call_args(call.args);
                SourceSpan end = here();
                expect_delim(')');
                SourceSpan full = SourceSpan::join(call.callee->span, end);
                e = make_expr(full, std::move(call));
                continue;
            }
            if (cur().is_delim('[')) {
                advance();
                bool saved = std::exchange(no_struct_literal_, false);
                ExprPtr index = parse_expr(0);
                no_struct_literal_ = saved;
                SourceSpan end = here();
                expect_delim(']');
                SourceSpan full = SourceSpan::join(e->span, end);
                e = make_expr(full, IndexExpr{std::move(e), std::move(index)});
                continue;
            }
            break;
        }
        return e;
    }

    void parse_call_args(std::vector<ExprPtr>& args) {
        bool saved = std::exchange(no_struct_literal_, false);
        while (!cur().is_delim(')')) {
            args.push_back(parse_expr(0));
            if (cur().is_punct(","))
                advance();
            else
                break;
        }
        no_struct_literal_ = saved;
    }

    ExprPtr parse_primary() {
        SourceSpan span = here();
        const Token& t = cur();

        if (is_literal_token(t)) {
            Token lit = advance();
            return make_expr(span, LiteralExpr{std::move(lit)});
        }
        if (t.is_delim('(')) {
            advance();
            bool saved = std::exchange(no_struct_literal_, false);
            if (cur().is_delim(')')) {
                no_struct_literal_ = saved;
                SourceSpan end = here();
                advance();
                return make_expr(SourceSpan::join(span, end), UnitExpr{});
            }
            TupleExpr tuple;
            bool comma = false;
            tuple.elems.push_back(parse_expr(0));
            while (cur().is_punct(",")) {
                comma = true;
                advance();
                if (cur().is_delim(')')) break;
                tuple.elems.push_back(parse_expr(0));
            }
            no_struct_literal_ = saved;
            SourceSpan end = here();
            expect_delim(')');
            if (!comma) return std::move(tuple.elems[0]);
            return make_expr(SourceSpan::join(span, end), std::move(tuple));
        }
        if (t.is_delim('[')) {
            advance();
            bool saved = std::exchange(no_struct_literal_, false);
            ArrayExpr array;
            if (!cur().is_delim(']')) {
                array.elems.push_back(parse_expr(0));
                if (cur().is_punct(",") && peek().is_punct("..")) {
                    advance();
                    advance();
                    ExprPtr count = parse_expr(0);
                    no_struct_literal_ = saved;
                    SourceSpan end = here();
                    expect_delim(']');
                    return make_expr(
                        SourceSpan::join(span, end),
                        ArrayRepeatExpr{std::move(array.elems[0]), std::move(count)});
                }
                while (cur().is_punct(",")) {
                    advance();
                    if (cur().is_delim(']')) break;
                    array.elems.push_back(parse_expr(0));
                }
            }
            no_struct_literal_ = saved;
            SourceSpan end = here();
            expect_delim(']');
            return make_expr(SourceSpan::join(span, end), std::move(array));
        }
        if (t.is_delim('{')) {
            bool saved = std::exchange(no_struct_literal_, false);
            ExprPtr block = parse_block();
            no_struct_literal_ = saved;
            return block;
        }
        if (t.is_keyword("if")) return parse_if();
        if (t.is_keyword("match")) return parse_match();
        if (t.is_keyword("loop")) {
            advance();
            ExprPtr body = parse_block();
            SourceSpan full = SourceSpan::join(span, body->span);
            return make_expr(full, LoopExpr{std::move(body)});
        }
        if (t.is_keyword("while")) {
            advance();
            ExprPtr cond = parse_no_struct_expr();
            ExprPtr body = parse_block();
            SourceSpan full = SourceSpan::join(span, body->span);
            return make_expr(full, WhileExpr{std::move(cond), std::move(body)});
        }
        if (t.is_keyword("for")) {
            advance();
            ForExpr f;
            f.pat = parse_pattern();
            expect_keyword("in");
            f.iter = parse_no_struct_expr();
            f.body = parse_block();
            SourceSpan full = SourceSpan::join(span, f.body->span);
            return make_expr(full, std::move(f));
        }
        if (t.is_keyword("break")) {
            advance();
            return make_expr(span, BreakExpr{});
        }
        if (t.is_keyword("return")) {
            advance();
            ReturnExpr ret;
            if (at_expr_start()) ret.value = parse_expr(0);
            SourceSpan full = ret.value ? SourceSpan::join(span, ret.value->span) : span;
            return make_expr(full, std::move(ret));
        }
        if (t.is_punct("|") || t.is_punct("||")) return parse_lambda();
        if (t.is_keyword("self")) {
            advance();
            return make_expr(span, PathExpr{{"self"}});
        }
        if (t.kind == TokenKind::Ident) {
            PathExpr path;
            path.segments.push_back(advance().text);
            while (cur().is_punct("::")) {
                advance();
                path.segments.push_back(expect_ident("path segment"));
            }
            if (cur().is_punct("!") && path.segments.size() == 1)
                return parse_macro_invocation(span, path.segments[0]);
            if (cur().is_delim('{') && path.segments.size() == 1 && !no_struct_literal_)
                return parse_record_expr(span, path.segments[0]);
            SourceSpan full = SourceSpan::join(span, tokens_[pos_ - 1].span);
            return make_expr(full, std::move(path));
        }
        error_here("expected an expression");
    }

    ExprPtr parse_no_struct_expr() {
        bool saved = std::exchange(no_struct_literal_, true);
        ExprPtr e = parse_expr(0);
        no_struct_literal_ = saved;
        return e;
    }

    ExprPtr parse_if() {
        SourceSpan span = here();
        expect_keyword("if");
        IfExpr node;
        node.cond = parse_no_struct_expr();
        node.then_block = parse_block();
        SourceSpan full = SourceSpan::join(span, node.then_block->span);
        if (cur().is_keyword("else")) {
            advance();
            if (cur().is_keyword("if"))
                node.else_block = parse_if();
            else
                node.else_block = parse_block();
            full = SourceSpan::join(span, node.else_block->span);
        }
        return make_expr(full, std::move(node));
    }

    ExprPtr parse_match() {
        SourceSpan span = here();
        expect_keyword("match");
        MatchExpr m;
        m.scrutinee = parse_no_struct_expr();
        // Comma-separated scrutinees form a tuple; arms then use
        // comma-separated patterns of the same arity.
        if (cur().is_punct(",")) {
            TupleExpr tuple;
            tuple.elems.push_back(std::move(m.scrutinee));
            while (cur().is_punct(",")) {
                advance();
                tuple.elems.push_back(parse_no_struct_expr());
            }
            SourceSpan tspan =
                SourceSpan::join(tuple.elems.front()->span, tuple.elems.back()->span);
            m.scrutinee = make_expr(tspan, std::move(tuple));
        }
        expect_delim('{');
        while (!cur().is_delim('}')) {
            MatchArm arm;
            arm.alternatives.push_back(parse_arm_pattern());
            while (cur().is_punct("|")) {
                advance();
                arm.alternatives.push_back(parse_arm_pattern());
            }
            if (cur().is_keyword("if")) {
                advance();
                arm.guard = parse_expr(0);
            }
            expect_punct("=>");
            arm.body = parse_expr(0);
            m.arms.push_back(std::move(arm));
            if (cur().is_punct(",")) advance();
        }
        SourceSpan end = here();
        expect_delim('}');
        return make_expr(SourceSpan::join(span, end), std::move(m));
    }

    // One arm alternative; `p1, p2` (no parentheses) groups into a tuple
    // pattern to mirror the tuple formed by multi-scrutinee match.
    PatternPtr parse_arm_pattern() {
        PatternPtr first = parse_pattern();
        if (!cur().is_punct(",")) return first;
        // A comma before `=>` continues a pattern list; a comma after a
        // completed arm never reaches this point.
        TuplePat tuple;
        SourceSpan span = first->span;
        tuple.elems.push_back(std::move(first));
        while (cur().is_punct(",")) {
            advance();
            tuple.elems.push_back(parse_pattern());
        }
        span = SourceSpan::join(span, tuple.elems.back()->span);
        return make_pattern(span, std::move(tuple));
    }

    ExprPtr parse_lambda() {
        SourceSpan span = here();
        LambdaExpr lambda;
        if (cur().is_punct("||")) {
            advance();
        } else {
            expect_punct("|");
            while (!cur().is_punct("|")) {
                LambdaParam p;
                p.name = expect_ident("closure parameter");
                if (cur().is_punct(":")) {
                    advance();
                    p.ty = parse_type();
                }
                lambda.params.push_back(std::move(p));
                if (cur().is_punct(","))
                    advance();
                else
                    break;
            }
            expect_punct("|");
        }
        lambda.body = parse_expr(0);
        SourceSpan full = SourceSpan::join(span, lambda.body->span);
        return make_expr(full, std::move(lambda));
    }

    ExprPtr parse_macro_invocation(SourceSpan span, std::string name) {
        expect_punct("!");
        MacroExpr mac;
        mac.name = std::move(name);
        if (!cur().is_open_delim()) error_here("expected macro arguments");
        mac.delim = cur().text[0];
        SourceSpan end = here();
        mac.tokens = collect_group();
        if (!mac.tokens.empty()) end = mac.tokens.back().span;
        if (pos_ > 0) end = tokens_[pos_ - 1].span;
        return make_expr(SourceSpan::join(span, end), std::move(mac));
    }

    ExprPtr parse_record_expr(SourceSpan span, std::string name) {
        expect_delim('{');
        bool saved = std::exchange(no_struct_literal_, false);
        RecordExpr rec;
        rec.name = std::move(name);
        while (!cur().is_delim('}')) {
            if (cur().is_punct("..")) {
                advance();
                rec.base = parse_expr(0);
                break;
            }
            std::string field = expect_ident("field name");
            expect_punct(":");
            rec.fields.emplace_back(std::move(field), parse_expr(0));
            if (cur().is_punct(","))
                advance();
            else
                break;
        }
        no_struct_literal_ = saved;
        SourceSpan end = here();
        expect_delim('}');
        return make_expr(SourceSpan::join(span, end), std::move(rec));
    }
};

} // namespace

ParseResult parse_program(std::vector<Token> tokens) {
    Parser parser(std::move(tokens));
    return parser.run_program();
}

size_t trial_parse_expression(std::span<const Token> tokens) {
    Parser parser(std::vector<Token>(tokens.begin(), tokens.end()), /*silent=*/true);
    return parser.run_trial_expression();
}

ExprParse parse_expression_tokens(std::span<const Token> tokens) {
    Parser parser(std::vector<Token>(tokens.begin(), tokens.end()));
    ExprParse out;
    try {
        out.expr = parser.run_expression();
    } catch (ItemAbort&) {
        out.expr = nullptr;
    }
    out.diags = parser.take_diags();
    return out;
}

ExprParse parse_snippet_tokens(std::span<const Token> tokens) {
    Parser parser(std::vector<Token>(tokens.begin(), tokens.end()));
    ExprParse out;
    try {
        out.expr = parser.run_snippet();
    } catch (ItemAbort&) {
        out.expr = nullptr;
    }
    out.diags = parser.take_diags();
    return out;
}

ExprListParse parse_expression_list(std::span<const Token> tokens) {
    Parser parser(std::vector<Token>(tokens.begin(), tokens.end()));
    ExprListParse out;
    try {
        out.exprs = parser.run_expression_list();
    } catch (ItemAbort&) {
        out.exprs.clear();
    }
    out.diags = parser.take_diags();
    return out;
}

} // namespace frs
