#include "frs/macro.hpp"

#include "frs/parser.hpp"

#include <functional>
#include <set>

namespace frs {

using namespace ast;

namespace {

bool token_eq(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text;
}

bool is_dollar(const Token& t) { return t.is_punct("$"); }

size_t find_matching_close(std::span<const Token> toks, size_t open) {
    int depth = 0;
    for (size_t i = open; i < toks.size(); ++i) {
        if (toks[i].is_open_delim()) ++depth;
        if (toks[i].is_close_delim()) {
            --depth;
            if (depth == 0) return i;
        }
    }
    return toks.size();
}

/// Fragment names captured anywhere in a pattern slice (incl. nested reps).
void collect_fragment_names(std::span<const Token> pat, std::set<std::string>& out) {
    for (size_t i = 0; i + 1 < pat.size(); ++i) {
        if (is_dollar(pat[i]) && pat[i + 1].kind == TokenKind::Ident)
            out.insert(pat[i + 1].text);
    }
}

/// Top-level (depth-0) positions of a token equal to `needle` in `toks`.
std::vector<size_t> top_level_occurrences(std::span<const Token> toks, const Token& needle) {
    std::vector<size_t> out;
    int depth = 0;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].is_close_delim()) --depth;
        if (depth == 0 && token_eq(toks[i], needle)) out.push_back(i);
        if (toks[i].is_open_delim()) ++depth;
    }
    return out;
}

class RuleMatcher {
public:
    RuleMatcher(std::span<const Token> pattern, std::span<const Token> input)
        : input_(input), pattern_(pattern) {}

    std::optional<MatchBindings> run() {
        std::optional<MatchBindings> result;
        match(pattern_, 0, MatchBindings{}, [&](size_t ii, MatchBindings b) {
            if (ii != input_.size()) return false;
            result = std::move(b);
            return true;
        });
        return result;
    }

private:
    std::span<const Token> input_;
    std::span<const Token> pattern_;

    using Cont = std::function<bool(size_t, MatchBindings)>;

    // Match the whole pattern slice against input starting at `ii`;
    // calls `k` with the input position after the pattern. Backtracking
    // happens by trying alternatives until `k` reports success.
    bool match(std::span<const Token> pat, size_t ii, MatchBindings b, const Cont& k) {
        if (pat.empty()) return k(ii, std::move(b));
        const Token& t = pat[0];

        if (is_dollar(t) && pat.size() >= 2 && pat[1].is_open_delim())
            return match_repetition(pat, ii, std::move(b), k);

        if (is_dollar(t) && pat.size() >= 4 && pat[1].kind == TokenKind::Ident &&
            pat[2].is_punct(":") && pat[3].kind == TokenKind::Ident)
            return match_fragment(pat, ii, std::move(b), k);

        if (t.is_open_delim()) {
            size_t pclose = find_matching_close(pat, 0);
            if (pclose >= pat.size()) return false;
            if (ii >= input_.size() || !token_eq(input_[ii], t)) return false;
            size_t iclose = find_matching_close(input_.subspan(ii), 0);
            if (iclose >= input_.subspan(ii).size()) return false;
            iclose += ii;
            auto sub_pat = pat.subspan(1, pclose - 1);
            auto rest = pat.subspan(pclose + 1);
            return match(sub_pat, ii + 1, std::move(b),
                         [&](size_t after, MatchBindings b2) {
                             if (after != iclose) return false;
                             return match(rest, iclose + 1, std::move(b2), k);
                         });
        }

        if (ii >= input_.size() || !token_eq(input_[ii], t)) return false;
        return match(pat.subspan(1), ii + 1, std::move(b), k);
    }

    bool match_fragment(std::span<const Token> pat, size_t ii, MatchBindings b,
                        const Cont& k) {
        const std::string& name = pat[1].text;
        const std::string& spec = pat[3].text;
        auto rest = pat.subspan(4);

        if (spec == "ident") {
            if (ii >= input_.size() || input_[ii].kind != TokenKind::Ident) return false;
            b[name] = Capture{false, {input_[ii]}, {}};
            return match(rest, ii + 1, std::move(b), k);
        }
        // expr: longest parse first, then backtrack to earlier cuts at
        // the pattern's next literal token.
        auto remaining = input_.subspan(ii);
        size_t greedy = trial_parse_expression(remaining);
        if (greedy == 0) return false;
        std::vector<size_t> candidates{greedy};
        if (!rest.empty() && !is_dollar(rest[0])) {
            auto occurrences = top_level_occurrences(remaining.first(greedy), rest[0]);
            for (auto it = occurrences.rbegin(); it != occurrences.rend(); ++it) {
                size_t len = *it;
                if (len == 0 || len == greedy) continue;
                if (trial_parse_expression(remaining.first(len)) == len)
                    candidates.push_back(len);
            }
        }
        for (size_t len : candidates) {
            MatchBindings b2 = b;
            b2[name] = Capture{false,
                               std::vector<Token>(remaining.begin(), remaining.begin() + len),
                               {}};
            if (match(rest, ii + len, std::move(b2), k)) return true;
        }
        return false;
    }

    bool match_repetition(std::span<const Token> pat, size_t ii, MatchBindings b,
                          const Cont& k) {
        auto group = pat.subspan(1);
        size_t pclose = find_matching_close(group, 0);
        if (pclose >= group.size()) return false;
        auto sub = group.subspan(1, pclose - 1);
        size_t after_group = 1 + pclose + 1; // within pat
        std::optional<Token> sep;
        size_t star = after_group;
        if (star < pat.size() && !pat[star].is_punct("*")) {
            sep = pat[star];
            ++star;
        }
        if (star >= pat.size() || !pat[star].is_punct("*")) return false;
        auto rest = pat.subspan(star + 1);

        std::set<std::string> names;
        collect_fragment_names(sub, names);

        // Greedy: try one more iteration first, stopping as fallback.
        std::function<bool(size_t, std::vector<MatchBindings>)> attempt =
            [&](size_t pos, std::vector<MatchBindings> iters) -> bool {
            size_t next_pos = pos;
            bool can_iterate = true;
            if (!iters.empty() && sep) {
                if (next_pos < input_.size() && token_eq(input_[next_pos], *sep))
                    ++next_pos;
                else
                    can_iterate = false;
            }
            if (can_iterate) {
                size_t iter_start = next_pos;
                bool matched = match(
                    sub, next_pos, MatchBindings{},
                    [&](size_t after, MatchBindings bi) {
                        if (after == iter_start) return false; // no progress
                        auto iters2 = iters;
                        iters2.push_back(std::move(bi));
                        return attempt(after, std::move(iters2));
                    });
                if (matched) return true;
            }
            // Stop here: fold iteration captures into list bindings.
            MatchBindings b2 = b;
            for (const auto& name : names) {
                Capture list;
                list.is_list = true;
                for (const auto& iter : iters) {
                    auto it = iter.find(name);
                    if (it != iter.end()) list.items.push_back(it->second);
                }
                b2[name] = std::move(list);
            }
            return match(rest, pos, std::move(b2), k);
        };
        return attempt(ii, {});
    }
};

// ------------------------------------------------------------ transcribe

struct Transcriber {
    const MatchBindings& bindings;
    std::vector<Diagnostic>& diags;

    void run(std::span<const Token> tmpl, std::vector<Token>& out) {
        size_t i = 0;
        while (i < tmpl.size()) {
            const Token& t = tmpl[i];
            if (is_dollar(t) && i + 1 < tmpl.size() &&
                tmpl[i + 1].kind == TokenKind::Ident) {
                const std::string& name = tmpl[i + 1].text;
                auto it = bindings.find(name);
                if (it == bindings.end()) {
                    diags.push_back(Diagnostic::error(
                        "UnboundFragment", "macro fragment '$" + name + "' is not bound",
                        tmpl[i + 1].span));
                    i += 2;
                    continue;
                }
                if (it->second.is_list) {
                    diags.push_back(Diagnostic::error(
                        "RepetitionCountMismatch",
                        "macro fragment '$" + name + "' is still repeating here",
                        tmpl[i + 1].span));
                    i += 2;
                    continue;
                }
                out.insert(out.end(), it->second.tokens.begin(), it->second.tokens.end());
                i += 2;
                continue;
            }
            if (is_dollar(t) && i + 1 < tmpl.size() && tmpl[i + 1].is_open_delim()) {
                auto group = tmpl.subspan(i + 1);
                size_t close = find_matching_close(group, 0);
                auto sub = group.subspan(1, close - 1);
                size_t after = i + 1 + close + 1;
                std::optional<Token> sep;
                if (after < tmpl.size() && !tmpl[after].is_punct("*")) {
                    sep = tmpl[after];
                    ++after;
                }
                if (after < tmpl.size() && tmpl[after].is_punct("*")) ++after;

                std::set<std::string> names;
                collect_fragment_names(sub, names);
                size_t count = 0;
                bool have_count = false;
                bool mismatch = false;
                for (const auto& name : names) {
                    auto it = bindings.find(name);
                    if (it == bindings.end() || !it->second.is_list) continue;
                    if (!have_count) {
                        count = it->second.items.size();
                        have_count = true;
                    } else if (count != it->second.items.size()) {
                        mismatch = true;
                    }
                }
                if (!have_count || mismatch) {
                    diags.push_back(Diagnostic::error(
                        "RepetitionCountMismatch",
                        mismatch ? "fragments in one repetition have different counts"
                                 : "repetition has no repeating fragment to size it",
                        t.span));
                    i = after;
                    continue;
                }
                for (size_t rep = 0; rep < count; ++rep) {
                    if (rep && sep) out.push_back(*sep);
                    MatchBindings inner = bindings;
                    for (const auto& name : names) {
                        auto it = bindings.find(name);
                        if (it != bindings.end() && it->second.is_list)
                            inner[name] = it->second.items[rep];
                    }
                    Transcriber sub_tr{inner, diags};
                    sub_tr.run(sub, out);
                }
                i = after;
                continue;
            }
            out.push_back(t);
            ++i;
        }
    }
};

// ----------------------------------------------------- expansion walker

struct Expander {
    std::map<std::string, const MacroDef*> macros;
    std::vector<Diagnostic> diags;
    int depth_limit;

    bool is_builtin(const std::string& name) const {
        return name == "println" || name == "print" || name == "vec";
    }

    void expand_program(Program& program) {
        for (auto& item : program.items) {
            if (auto* fn = std::get_if<FunctionDef>(&item.node)) {
                expand_fn(*fn);
            } else if (auto* impl = std::get_if<ImplBlock>(&item.node)) {
                for (auto& m : impl->methods) expand_fn(m);
            } else if (auto* trait = std::get_if<TraitDef>(&item.node)) {
                for (auto& m : trait->methods) expand_fn(m);
            }
        }
    }

    void expand_fn(FunctionDef& fn) {
        if (fn.body) expand_slot(fn.body, 0);
    }

    void expand_slot(ExprPtr& slot, int depth) {
        if (auto* mac = as<MacroExpr>(*slot)) {
            auto user = macros.find(mac->name);
            if (user != macros.end()) {
                expand_user(slot, *user->second, depth);
                return;
            }
            if (is_builtin(mac->name)) {
                normalize_builtin(slot, depth);
                return;
            }
            diags.push_back(Diagnostic::error(
                "UnknownMacro", "no macro named '" + mac->name + "!'", slot->span));
            slot = make_expr(slot->span, UnitExpr{});
            return;
        }
        walk_children(*slot, depth);
    }

    void expand_user(ExprPtr& slot, const MacroDef& def, int depth) {
        auto* mac = as<MacroExpr>(*slot);
        SourceSpan span = slot->span;
        if (depth >= depth_limit) {
            diags.push_back(Diagnostic::error(
                "RecursionLimitExceeded",
                "macro '" + def.name + "!' exceeded the expansion depth limit of " +
                    std::to_string(depth_limit),
                span));
            slot = make_expr(span, UnitExpr{});
            return;
        }
        for (const auto& rule : def.rules) {
            auto bindings = match_rule(rule.pattern, mac->tokens);
            if (!bindings) continue;
            auto out = transcribe(rule.body, *bindings);
            if (!out.ok()) {
                for (auto& d : out.diags) diags.push_back(std::move(d));
                slot = make_expr(span, UnitExpr{});
                return;
            }
            auto parsed = parse_snippet_tokens(out.tokens);
            if (!parsed.expr) {
                for (auto& d : parsed.diags) diags.push_back(std::move(d));
                diags.push_back(Diagnostic::error(
                    "ParseError", "expansion of '" + def.name + "!' did not parse", span));
                slot = make_expr(span, UnitExpr{});
                return;
            }
            slot = std::move(parsed.expr);
            expand_slot(slot, depth + 1);
            return;
        }
        diags.push_back(Diagnostic::error(
            "NoRuleMatched", "no rule of macro '" + def.name + "!' matches this invocation",
            span));
        slot = make_expr(span, UnitExpr{});
    }

    void normalize_builtin(ExprPtr& slot, int depth) {
        auto* mac = as<MacroExpr>(*slot);
        SourceSpan span = slot->span;
        std::string name = mac->name;
        auto args = parse_expression_list(mac->tokens);
        if (!args.diags.empty()) {
            for (auto& d : args.diags) diags.push_back(std::move(d));
            slot = make_expr(span, UnitExpr{});
            return;
        }
        if (name == "vec") {
            VecExpr vec;
            vec.elems = std::move(args.exprs);
            slot = make_expr(span, std::move(vec));
            walk_children(*slot, depth);
            return;
        }
        PrintExpr print;
        print.newline = name == "println";
        if (args.exprs.empty()) {
            diags.push_back(Diagnostic::error(
                "E-FORMAT", name + "! expects a format string", span));
            slot = make_expr(span, UnitExpr{});
            return;
        }
        const auto* lit = as<LiteralExpr>(*args.exprs[0]);
        if (!lit || lit->lit.kind != TokenKind::StrLit) {
            diags.push_back(Diagnostic::error(
                "E-FORMAT", name + "! format template must be a string literal",
                args.exprs[0]->span));
            slot = make_expr(span, UnitExpr{});
            return;
        }
        print.format = lit->lit.str_value;
        print.format_span = args.exprs[0]->span;
        for (size_t i = 1; i < args.exprs.size(); ++i)
            print.args.push_back(std::move(args.exprs[i]));
        slot = make_expr(span, std::move(print));
        walk_children(*slot, depth);
    }

    void walk_stmts(std::vector<Stmt>& stmts, int depth) {
        for (auto& s : stmts) {
            if (auto* let = std::get_if<LetStmt>(&s.node)) {
                if (let->init) expand_slot(let->init, depth);
            } else {
                expand_slot(std::get<ExprStmt>(s.node).expr, depth);
            }
        }
    }

    void walk_children(Expr& e, int depth) {
        auto walk = [&](ExprPtr& child) { expand_slot(child, depth); };
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, RecordExpr>) {
                    for (auto& [f, v] : n.fields) walk(v);
                    if (n.base) walk(n.base);
                } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                     std::is_same_v<T, ArrayExpr> ||
                                     std::is_same_v<T, VecExpr>) {
                    for (auto& el : n.elems) walk(el);
                } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                    walk(n.value);
                    walk(n.count);
                } else if constexpr (std::is_same_v<T, FieldExpr>) {
                    walk(n.base);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    walk(n.base);
                    walk(n.index);
                } else if constexpr (std::is_same_v<T, BlockExpr>) {
                    walk_stmts(n.stmts, depth);
                    if (n.tail) walk(n.tail);
                } else if constexpr (std::is_same_v<T, IfExpr>) {
                    walk(n.cond);
                    walk(n.then_block);
                    if (n.else_block) walk(n.else_block);
                } else if constexpr (std::is_same_v<T, MatchExpr>) {
                    walk(n.scrutinee);
                    for (auto& arm : n.arms) {
                        if (arm.guard) walk(arm.guard);
                        walk(arm.body);
                    }
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    walk(n.callee);
                    for (auto& a : n.args) walk(a);
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    walk(n.receiver);
                    for (auto& a : n.args) walk(a);
                } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                    walk(n.body);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    walk(n.lhs);
                    walk(n.rhs);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    walk(n.operand);
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    walk(n.place);
                    walk(n.value);
                } else if constexpr (std::is_same_v<T, ForExpr>) {
                    walk(n.iter);
                    walk(n.body);
                } else if constexpr (std::is_same_v<T, LoopExpr>) {
                    walk(n.body);
                } else if constexpr (std::is_same_v<T, WhileExpr>) {
                    walk(n.cond);
                    walk(n.body);
                } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                    if (n.value) walk(n.value);
                } else if constexpr (std::is_same_v<T, BoxExpr>) {
                    walk(n.operand);
                } else if constexpr (std::is_same_v<T, PrintExpr>) {
                    for (auto& a : n.args) walk(a);
                }
                // literals, paths, unit, break: no children
            },
            e.node);
    }
};

// ------------------------------------------------- pattern resolution

struct PatternResolver {
    std::set<std::string> nullary_variants;

    void resolve(Pattern& p) {
        if (auto* name = as<NamePat>(p)) {
            if (nullary_variants.count(name->name)) {
                VariantPat v;
                v.name = name->name;
                p.node = std::move(v);
            } else {
                p.node = BindingPat{name->name, false, false};
            }
            return;
        }
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AtPat>) {
                    resolve(*n.sub);
                } else if constexpr (std::is_same_v<T, TuplePat>) {
                    for (auto& el : n.elems) resolve(*el);
                } else if constexpr (std::is_same_v<T, VariantPat>) {
                    for (auto& a : n.args) resolve(*a);
                } else if constexpr (std::is_same_v<T, RecordPat>) {
                    for (auto& [f, sub] : n.fields) resolve(*sub);
                } else if constexpr (std::is_same_v<T, RefPat>) {
                    resolve(*n.sub);
                }
            },
            p.node);
    }

    void resolve_expr(Expr& e) {
        std::visit(
            [&](auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, MatchExpr>) {
                    resolve_expr(*n.scrutinee);
                    for (auto& arm : n.arms) {
                        for (auto& p : arm.alternatives) resolve(*p);
                        if (arm.guard) resolve_expr(*arm.guard);
                        resolve_expr(*arm.body);
                    }
                } else if constexpr (std::is_same_v<T, ForExpr>) {
                    resolve(*n.pat);
                    resolve_expr(*n.iter);
                    resolve_expr(*n.body);
                } else if constexpr (std::is_same_v<T, BlockExpr>) {
                    for (auto& s : n.stmts) {
                        if (auto* let = std::get_if<LetStmt>(&s.node)) {
                            resolve(*let->pat);
                            if (let->init) resolve_expr(*let->init);
                        } else {
                            resolve_expr(*std::get<ExprStmt>(s.node).expr);
                        }
                    }
                    if (n.tail) resolve_expr(*n.tail);
                } else if constexpr (std::is_same_v<T, RecordExpr>) {
                    for (auto& [f, v] : n.fields) resolve_expr(*v);
                    if (n.base) resolve_expr(*n.base);
                } else if constexpr (std::is_same_v<T, TupleExpr> ||
                                     std::is_same_v<T, ArrayExpr> ||
                                     std::is_same_v<T, VecExpr>) {
                    for (auto& el : n.elems) resolve_expr(*el);
                } else if constexpr (std::is_same_v<T, ArrayRepeatExpr>) {
                    resolve_expr(*n.value);
                    resolve_expr(*n.count);
                } else if constexpr (std::is_same_v<T, FieldExpr>) {
                    resolve_expr(*n.base);
                } else if constexpr (std::is_same_v<T, IndexExpr>) {
                    resolve_expr(*n.base);
                    resolve_expr(*n.index);
                } else if constexpr (std::is_same_v<T, IfExpr>) {
                    resolve_expr(*n.cond);
                    resolve_expr(*n.then_block);
                    if (n.else_block) resolve_expr(*n.else_block);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    resolve_expr(*n.callee);
                    for (auto& a : n.args) resolve_expr(*a);
                } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
                    resolve_expr(*n.receiver);
                    for (auto& a : n.args) resolve_expr(*a);
                } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                    resolve_expr(*n.body);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    resolve_expr(*n.lhs);
                    resolve_expr(*n.rhs);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    resolve_expr(*n.operand);
                } else if constexpr (std::is_same_v<T, AssignExpr>) {
                    resolve_expr(*n.place);
                    resolve_expr(*n.value);
                } else if constexpr (std::is_same_v<T, LoopExpr>) {
                    resolve_expr(*n.body);
                } else if constexpr (std::is_same_v<T, WhileExpr>) {
                    resolve_expr(*n.cond);
                    resolve_expr(*n.body);
                } else if constexpr (std::is_same_v<T, ReturnExpr>) {
                    if (n.value) resolve_expr(*n.value);
                } else if constexpr (std::is_same_v<T, BoxExpr>) {
                    resolve_expr(*n.operand);
                } else if constexpr (std::is_same_v<T, PrintExpr>) {
                    for (auto& a : n.args) resolve_expr(*a);
                }
            },
            e.node);
    }

    void resolve_fn(FunctionDef& fn) {
        for (auto& p : fn.params) resolve(*p.pat);
        if (fn.body) resolve_expr(*fn.body);
    }
};

} // namespace

std::optional<MatchBindings> match_rule(std::span<const Token> pattern,
                                        std::span<const Token> input) {
    return RuleMatcher(pattern, input).run();
}

TranscribeResult transcribe(std::span<const Token> tmpl, const MatchBindings& bindings) {
    TranscribeResult result;
    Transcriber tr{bindings, result.diags};
    tr.run(tmpl, result.tokens);
    return result;
}

std::vector<Diagnostic> validate_macro_def(const ast::MacroDef& def) {
    std::vector<Diagnostic> diags;
    auto scan_pattern = [&](std::span<const Token> toks, std::set<std::string>& captures) {
        for (size_t i = 0; i < toks.size(); ++i) {
            if (!is_dollar(toks[i])) continue;
            if (i + 1 < toks.size() && toks[i + 1].is_open_delim()) {
                size_t close = find_matching_close(toks.subspan(i + 1), 0);
                size_t after = i + 1 + close + 1;
                size_t star = after;
                if (star < toks.size() && !toks[star].is_punct("*")) ++star;
                if (star >= toks.size() || !toks[star].is_punct("*")) {
                    std::string_view got =
                        after < toks.size() ? std::string_view(toks[after].text) : "end";
                    diags.push_back(Diagnostic::error(
                        "UnsupportedRepetitionOperator",
                        "repetition must end with '*', found '" + std::string(got) + "'",
                        toks[i].span));
                }
                continue;
            }
            if (i + 3 < toks.size() && toks[i + 1].kind == TokenKind::Ident &&
                toks[i + 2].is_punct(":")) {
                const std::string& spec = toks[i + 3].text;
                if (spec != "ident" && spec != "expr") {
                    diags.push_back(Diagnostic::error(
                        "UnsupportedFragmentSpecifier",
                        "fragment specifier '" + spec + "' is not supported (ident, expr)",
                        toks[i + 3].span));
                }
                captures.insert(toks[i + 1].text);
                continue;
            }
            diags.push_back(Diagnostic::error(
                "MalformedMacroPattern", "expected '$name:spec' or '$(...)' after '$'",
                toks[i].span));
        }
    };
    auto scan_template = [&](std::span<const Token> toks, const std::set<std::string>& captures) {
        for (size_t i = 0; i + 1 < toks.size(); ++i) {
            if (!is_dollar(toks[i])) continue;
            if (toks[i + 1].kind == TokenKind::Ident && !captures.count(toks[i + 1].text)) {
                diags.push_back(Diagnostic::error(
                    "UnboundFragment",
                    "macro fragment '$" + toks[i + 1].text + "' is not bound by the pattern",
                    toks[i + 1].span));
            }
        }
    };
    for (const auto& rule : def.rules) {
        std::set<std::string> captures;
        scan_pattern(rule.pattern, captures);
        scan_template(rule.body, captures);
    }
    return diags;
}

void resolve_patterns(ast::Program& program) {
    PatternResolver resolver;
    resolver.nullary_variants.insert("None");
    for (const auto& item : program.items) {
        if (const auto* e = std::get_if<EnumDef>(&item.node)) {
            for (const auto& v : e->variants)
                if (v.payload.empty()) resolver.nullary_variants.insert(v.name);
        }
    }
    for (auto& item : program.items) {
        if (auto* fn = std::get_if<FunctionDef>(&item.node)) {
            resolver.resolve_fn(*fn);
        } else if (auto* impl = std::get_if<ImplBlock>(&item.node)) {
            for (auto& m : impl->methods) resolver.resolve_fn(m);
        } else if (auto* trait = std::get_if<TraitDef>(&item.node)) {
            for (auto& m : trait->methods) resolver.resolve_fn(m);
        }
    }
}

std::vector<Diagnostic> expand_all(ast::Program& program, int depth_limit) {
    Expander expander;
    expander.depth_limit = depth_limit;
    for (const auto& item : program.items) {
        if (const auto* def = std::get_if<MacroDef>(&item.node)) {
            auto diags = validate_macro_def(*def);
            expander.diags.insert(expander.diags.end(),
                                  std::make_move_iterator(diags.begin()),
                                  std::make_move_iterator(diags.end()));
            expander.macros[def->name] = def;
        }
    }
    expander.expand_program(program);
    resolve_patterns(program);
    sort_diagnostics(expander.diags);
    return expander.diags;
}

} // namespace frs
