#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include <filesystem>

using namespace frs;
using namespace frs::ast;
using frs::test::lex_text;
using frs::test::parse_expr_text;

namespace {

std::string expr_shape(const std::string& src) {
    auto e = parse_expr_text(src);
    REQUIRE(e != nullptr);
    std::string dump = dump_tree(*e);
    if (!dump.empty() && dump.back() == '\n') dump.pop_back();
    return dump;
}

PatternPtr parse_pattern_text(const std::string& src) {
    // Patterns have no standalone entry point; route through a match arm.
    auto e = parse_expr_text("match x { " + src + " => 0 }");
    REQUIRE(e != nullptr);
    auto* m = as<MatchExpr>(*e);
    REQUIRE(m != nullptr);
    REQUIRE(m->arms.size() == 1);
    REQUIRE(m->arms[0].alternatives.size() == 1);
    return std::move(m->arms[0].alternatives[0]);
}

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(FRS_CORPUS_DIR))
        if (entry.path().extension() == ".frs") out.push_back(entry.path().string());
    REQUIRE(!out.empty());
    return out;
}

} // namespace

TEST_CASE("operator precedence") {
    CHECK(expr_shape("3 + 4 * 5") ==
          "(binop + (int 3 untyped) (binop * (int 4 untyped) (int 5 untyped)))");
    CHECK(expr_shape("(3 + 4) * 5") ==
          "(binop * (binop + (int 3 untyped) (int 4 untyped)) (int 5 untyped))");
    CHECK(expr_shape("a") == "(path a)");
    CHECK(expr_shape("1 + 2 - 3") ==
          "(binop - (binop + (int 1 untyped) (int 2 untyped)) (int 3 untyped))");
    CHECK(expr_shape("a == b + 1") ==
          "(binop == (path a) (binop + (path b) (int 1 untyped)))");
    CHECK(expr_shape("1 << 2 + 3") ==
          "(binop << (int 1 untyped) (binop + (int 2 untyped) (int 3 untyped)))");
    CHECK(expr_shape("a & b | c ^ d") ==
          "(binop | (binop & (path a) (path b)) (binop ^ (path c) (path d)))");
    CHECK(expr_shape("a && b || c") == "(binop || (binop && (path a) (path b)) (path c))");
    CHECK(expr_shape("!a && b") == "(binop && (unop not (path a)) (path b))");
    CHECK(expr_shape("-x.f") == "(unop neg (field (path x) f))");
    CHECK(expr_shape("*x + 1") == "(binop + (unop deref (path x)) (int 1 untyped))");
    CHECK(expr_shape("a = b = c") == "(assign (path a) (assign (path b) (path c)))");
    CHECK(expr_shape("x += 1") ==
          "(assign (path x) (binop + (path x) (int 1 untyped)))");
}

TEST_CASE("comparisons are non-associative") {
    auto lexed = tokenize("a < b < c");
    auto parsed = parse_expression_tokens(lexed.tokens);
    CHECK(parsed.expr == nullptr);
    REQUIRE(!parsed.diags.empty());
    CHECK(parsed.diags[0].code == "ParseError");
}

TEST_CASE("compound expressions") {
    CHECK(expr_shape("[x, ..10]") == "(array-repeat (path x) (int 10 untyped))");
    CHECK(expr_shape("[x, y, z]") == "(array (path x) (path y) (path z))");
    CHECK(expr_shape("x[10]") == "(index (path x) (int 10 untyped))");
    CHECK(expr_shape("(x, y, z)") == "(tuple (path x) (path y) (path z))");
    CHECK(expr_shape("x.f") == "(field (path x) f)");
    CHECK(expr_shape("()") == "(unit)");
    CHECK(expr_shape("R { a: 10, b: 20 }") ==
          "(record R (a (int 10 untyped)) (b (int 20 untyped)))");
    CHECK(expr_shape("R { a: 30, ..z }") ==
          "(record R (a (int 30 untyped)) (base (path z)))");
    CHECK(expr_shape("box 3") == "(box (int 3 untyped))");
    CHECK(expr_shape("box(GC) 3") == "(box GC (int 3 untyped))");
    CHECK(expr_shape("box (3)") == "(box (int 3 untyped))");
    CHECK(expr_shape("&mut v") == "(unop refmut (path v))");
    CHECK(expr_shape("Rc::new(3)") == "(call (path Rc::new) (int 3 untyped))");
}

TEST_CASE("block value rule is syntactic") {
    auto with_tail = parse_expr_text("{x;y;z}");
    auto* b1 = as<BlockExpr>(*with_tail);
    REQUIRE(b1 != nullptr);
    CHECK(b1->stmts.size() == 2);
    CHECK(b1->tail != nullptr);

    auto without_tail = parse_expr_text("{x;y;}");
    auto* b2 = as<BlockExpr>(*without_tail);
    REQUIRE(b2 != nullptr);
    CHECK(b2->stmts.size() == 2);
    CHECK(b2->tail == nullptr);
}

TEST_CASE("patterns") {
    auto ref_variant = parse_pattern_text("&Succ(ref a)");
    auto* refp = as<RefPat>(*ref_variant);
    REQUIRE(refp != nullptr);
    auto* variant = as<VariantPat>(*refp->sub);
    REQUIRE(variant != nullptr);
    CHECK(variant->name == "Succ");
    REQUIRE(variant->args.size() == 1);
    auto* bind = as<BindingPat>(*variant->args[0]);
    REQUIRE(bind != nullptr);
    CHECK(bind->name == "a");
    CHECK(bind->by_ref);

    CHECK(is<WildcardPat>(*parse_pattern_text("_")));

    auto at = parse_pattern_text("t @ 2");
    auto* atp = as<AtPat>(*at);
    REQUIRE(atp != nullptr);
    CHECK(atp->name == "t");
    CHECK(is<LiteralPat>(*atp->sub));

    auto tuple = parse_pattern_text("(&Zero, &Zero)");
    auto* tp = as<TuplePat>(*tuple);
    REQUIRE(tp != nullptr);
    CHECK(tp->elems.size() == 2);

    auto record = parse_pattern_text("Point { x: a, y: _ }");
    auto* rp = as<RecordPat>(*record);
    REQUIRE(rp != nullptr);
    CHECK(rp->fields.size() == 2);
}

TEST_CASE("or-alternatives and guards in match arms") {
    auto e = parse_expr_text("match e { 0 | 1 => 1, n if n < 10 => 3, _ => 4 }");
    auto* m = as<MatchExpr>(*e);
    REQUIRE(m != nullptr);
    REQUIRE(m->arms.size() == 3);
    CHECK(m->arms[0].alternatives.size() == 2);
    CHECK(m->arms[1].guard != nullptr);
    CHECK(m->arms[2].guard == nullptr);
}

TEST_CASE("multi-scrutinee match groups into tuples") {
    auto e = parse_expr_text("match a, b { x, y => x, _ => 0 }");
    auto* m = as<MatchExpr>(*e);
    REQUIRE(m != nullptr);
    CHECK(is<TupleExpr>(*m->scrutinee));
    auto* first = as<TuplePat>(*m->arms[0].alternatives[0]);
    REQUIRE(first != nullptr);
    CHECK(first->elems.size() == 2);
    // `_` alone stays a plain wildcard, not a tuple
    CHECK(is<WildcardPat>(*m->arms[1].alternatives[0]));
}

TEST_CASE("items from the corpus programs") {
    auto collatz = parse_source(frs::test::read_corpus("collatz.frs"));
    REQUIRE(collatz.ok());
    REQUIRE(collatz.program.items.size() == 2);
    CHECK(std::get_if<FunctionDef>(&collatz.program.items[0].node) != nullptr);
    CHECK(std::get_if<FunctionDef>(&collatz.program.items[1].node) != nullptr);

    auto trivial = parse_source("fn main() {}");
    REQUIRE(trivial.ok());
    REQUIRE(trivial.program.items.size() == 1);
    const auto* fn = std::get_if<FunctionDef>(&trivial.program.items[0].node);
    REQUIRE(fn != nullptr);
    const auto* body = as<BlockExpr>(*fn->body);
    REQUIRE(body != nullptr);
    CHECK(body->stmts.empty());
    CHECK(body->tail == nullptr);

    auto peano = parse_source(frs::test::read_corpus("peano.frs"));
    REQUIRE(peano.ok());
    const ImplBlock* impl = nullptr;
    for (const auto& item : peano.program.items)
        if (const auto* block = std::get_if<ImplBlock>(&item.node)) impl = block;
    REQUIRE(impl != nullptr);
    CHECK(impl->trait_name == "PartialEq");
    CHECK(impl->type_name == "Peano");
    CHECK(impl->methods.size() == 1);
    CHECK(impl->methods[0].name == "eq");
    CHECK(impl->methods[0].self_kind == SelfKind::Ref);
}

TEST_CASE("trait definitions carry default bodies") {
    auto parsed = parse_source(frs::test::read_corpus("peano.frs"));
    REQUIRE(parsed.ok());
    const TraitDef* trait = nullptr;
    for (const auto& item : parsed.program.items)
        if (const auto* t = std::get_if<TraitDef>(&item.node)) trait = t;
    REQUIRE(trait != nullptr);
    REQUIRE(trait->methods.size() == 2);
    CHECK(trait->methods[0].name == "eq");
    CHECK(trait->methods[0].body == nullptr);
    CHECK(trait->methods[1].name == "ne");
    CHECK(trait->methods[1].body != nullptr);
}

TEST_CASE("macro invocation interiors stay as raw tokens") {
    auto parsed = parse_source(frs::test::read_corpus("macro_pfor.frs"));
    REQUIRE(parsed.ok());
    const auto* def = std::get_if<MacroDef>(&parsed.program.items[0].node);
    REQUIRE(def != nullptr);
    CHECK(def->name == "pfor");
    CHECK(def->rules.size() == 1);
    const auto* fn = std::get_if<FunctionDef>(&parsed.program.items[1].node);
    REQUIRE(fn != nullptr);
    const auto* body = as<BlockExpr>(*fn->body);
    REQUIRE(body != nullptr);
    const auto& stmt = std::get<ExprStmt>(body->stmts[0].node);
    const auto* mac = as<MacroExpr>(*stmt.expr);
    REQUIRE(mac != nullptr);
    CHECK(mac->name == "pfor");
    CHECK(!mac->tokens.empty());
}

TEST_CASE("type annotations parse as uninterpreted terms") {
    auto parsed = parse_source(
        "fn f(a: &mut int, b: Box<Lst<t>>, c: |int, int| -> int, d: (int, uint)) {}");
    REQUIRE(parsed.ok());
    const auto* fn = std::get_if<FunctionDef>(&parsed.program.items[0].node);
    REQUIRE(fn != nullptr);
    REQUIRE(fn->params.size() == 4);
    CHECK(fn->params[0].ty->is_ref_mut());
    CHECK(fn->params[1].ty->is_box());
    CHECK(fn->params[1].ty->args[0].name == "Lst");
    CHECK(fn->params[2].ty->kind == Type::Kind::Fn);
    CHECK(fn->params[3].ty->kind == Type::Kind::Tuple);
}

TEST_CASE("first error aborts the item but later items recover") {
    auto parsed = parse_source("fn broken( { }\n\nfn good() {}");
    CHECK(!parsed.ok());
    bool has_good = false;
    for (const auto& item : parsed.program.items)
        if (const auto* fn = std::get_if<FunctionDef>(&item.node))
            has_good |= fn->name == "good";
    CHECK(has_good);
}

TEST_CASE("use items are accepted and skipped") {
    auto parsed = parse_source("use std::rc::Rc;\nfn main() {}");
    REQUIRE(parsed.ok());
    CHECK(parsed.program.items.size() == 1);
}

TEST_CASE("whole corpus parses with zero diagnostics") {
    for (const auto& path : corpus_files()) {
        auto parsed = parse_source(frs::test::read_file(path));
        INFO(path);
        CHECK(parsed.ok());
    }
}

TEST_CASE("pretty-print round-trip over the corpus") {
    for (const auto& path : corpus_files()) {
        std::string src = frs::test::read_file(path);
        auto first = parse_source(src);
        REQUIRE(first.ok());
        std::string printed = pretty_print(first.program);
        auto second = parse_source(printed);
        INFO(path, " reprinted:\n", printed);
        REQUIRE(second.ok());
        CHECK(dump_tree(first.program) == dump_tree(second.program));
    }
}

TEST_CASE("pretty-print golden forms") {
    auto rec = parse_expr_text("R{a:30, ..z}");
    CHECK(pretty_print(*rec) == "R { a: 30, ..z }");
    auto call = parse_expr_text("(a+b)*c");
    CHECK(pretty_print(*call) == "(a + b) * c");
    auto cmp = parse_expr_text("a == (b == c)");
    CHECK(pretty_print(*cmp) == "a == (b == c)");
}

TEST_CASE("pretty-printed expressions re-parse equal") {
    const char* samples[] = {
        "3 + 4 * 5",
        "a.eq(b).ne(c)",
        "match e { 0 | 1 => 1, t @ 2 => t + 1, n if n < 10 => 3, _ => 4 }",
        "if a { 1 } else if b { 2 } else { 3 }",
        "|x, y| { x + y }",
        "for x in range(0, 10) { println!(\"{}\", x) }",
        "box(GC) vec!(1, 2, 3)",
        "&mut a[i].f",
        "R { a: 30, ..z }",
        "-x - -y",
        "loop { break }",
        "while n != 1 { n = n / 2; }",
    };
    for (const char* sample : samples) {
        auto first = parse_expr_text(sample);
        REQUIRE(first != nullptr);
        std::string printed = pretty_print(*first);
        auto second = parse_expr_text(printed);
        INFO(sample, " -> ", printed);
        REQUIRE(second != nullptr);
        CHECK(dump_tree(*first) == dump_tree(*second));
    }
}
