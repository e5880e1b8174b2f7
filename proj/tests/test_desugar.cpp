#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include <random>

using namespace frs;
using namespace frs::ast;
using frs::test::parse_expr_text;
using frs::test::run_text;
using frs::test::run_text_sugared;

namespace {

std::string desugared_shape(const std::string& src) {
    auto e = parse_expr_text(src);
    REQUIRE(e != nullptr);
    desugar_operators(e);
    std::string dump = dump_tree(*e);
    if (!dump.empty() && dump.back() == '\n') dump.pop_back();
    return dump;
}

std::string desugared_pretty(const std::string& src) {
    auto e = parse_expr_text(src);
    REQUIRE(e != nullptr);
    desugar_for(e);
    desugar_operators(e);
    return pretty_print(*e);
}

} // namespace

TEST_CASE("operator table is total over the paper rows") {
    struct Row {
        BinOp op;
        const char* method;
        const char* trait;
    };
    const Row rows[] = {
        {BinOp::Eq, "eq", "PartialEq"},   {BinOp::Ne, "ne", "PartialEq"},
        {BinOp::Lt, "lt", "PartialOrd"},  {BinOp::Gt, "gt", "PartialOrd"},
        {BinOp::Le, "le", "PartialOrd"},  {BinOp::Ge, "ge", "PartialOrd"},
        {BinOp::Add, "add", "Add"},       {BinOp::Sub, "sub", "Sub"},
        {BinOp::Mul, "mul", "Mul"},       {BinOp::Div, "div", "Div"},
        {BinOp::Rem, "rem", "Rem"},       {BinOp::BitAnd, "bitand", "BitAnd"},
        {BinOp::BitOr, "bitor", "BitOr"}, {BinOp::BitXor, "bitxor", "BitXor"},
        {BinOp::Shl, "shl", "Shl"},       {BinOp::Shr, "shr", "Shr"},
    };
    for (const auto& row : rows) {
        auto method = operator_method(row.op);
        REQUIRE(method.has_value());
        CHECK(method->method == row.method);
        CHECK(method->trait_name == row.trait);
    }
    CHECK(!operator_method(BinOp::And).has_value());
    CHECK(!operator_method(BinOp::Or).has_value());

    CHECK(operator_method(UnOp::Neg)->method == "neg");
    CHECK(operator_method(UnOp::Not)->method == "not");
    CHECK(operator_method(UnOp::Deref)->method == "deref");
    CHECK(!operator_method(UnOp::Ref).has_value());
    CHECK(!operator_method(UnOp::RefMut).has_value());
}

TEST_CASE("operators become method calls") {
    CHECK(desugared_shape("a == b") == "(method-call (path a) eq (path b))");
    CHECK(desugared_shape("!a") == "(method-call (path a) not)");
    CHECK(desugared_shape("x") == "(path x)");
    CHECK(desugared_shape("(a + b) * c") ==
          "(method-call (method-call (path a) add (path b)) mul (path c))");
    CHECK(desugared_shape("-a") == "(method-call (path a) neg)");
    CHECK(desugared_shape("*a + 1") ==
          "(method-call (method-call (path a) deref) add (int 1 untyped))");
}

TEST_CASE("short-circuit and reference operators stay primitive") {
    CHECK(desugared_shape("a && b") == "(binop && (path a) (path b))");
    CHECK(desugared_shape("a || b") == "(binop || (path a) (path b))");
    CHECK(desugared_shape("&a") == "(unop ref (path a))");
    CHECK(desugared_shape("&mut a") == "(unop refmut (path a))");
    // but their operands are rewritten
    CHECK(desugared_shape("&(a + b)") ==
          "(unop ref (method-call (path a) add (path b)))");
    CHECK(desugared_shape("a == b && c == d") ==
          "(binop && (method-call (path a) eq (path b)) "
          "(method-call (path c) eq (path d)))");
}

TEST_CASE("assignment targets keep their place shape") {
    CHECK(desugared_shape("*x = *x + 1") ==
          "(assign (unop deref (path x)) "
          "(method-call (method-call (path x) deref) add (int 1 untyped)))");
    CHECK(desugared_shape("a[i + 1] = 2") ==
          "(assign (index (path a) (method-call (path i) add (int 1 untyped))) "
          "(int 2 untyped))");
    CHECK(desugared_shape("*v.get_mut(0) = 42") ==
          "(assign (unop deref (method-call (path v) get_mut (int 0 untyped))) "
          "(int 42 untyped))");
}

TEST_CASE("for loops expand to the loop/next match") {
    std::string printed = desugared_pretty("for x in it { f(x) }");
    CHECK(printed ==
          "match &mut it {\n"
          "    _v => loop {\n"
          "        match _v.next() {\n"
          "            None => break,\n"
          "            Some(x) => {\n"
          "                f(x)\n"
          "            },\n"
          "        }\n"
          "    },\n"
          "}");
    // expression without for loops is unchanged
    CHECK(desugared_shape("f(x)") == "(call (path f) (path x))");
}

TEST_CASE("nested for loops get distinct iterator names") {
    std::string printed = desugared_pretty("for a in u { for b in v { f(a, b) } }");
    CHECK(printed.find("_v =>") != std::string::npos);
    CHECK(printed.find("_v1 =>") != std::string::npos);
}

TEST_CASE("fresh name avoids identifiers free in the body") {
    std::string printed = desugared_pretty("for x in it { g(_v, _v1) }");
    CHECK(printed.find("_v2 =>") != std::string::npos);
    CHECK(printed.find("_v2.next()") != std::string::npos);
}

TEST_CASE("desugared collatz uses trait methods") {
    auto compiled = desugar_source(frs::test::read_corpus("collatz.frs"));
    REQUIRE(compiled.ok());
    std::string printed = pretty_print(compiled.program);
    CHECK(printed.find("n.rem(2)") != std::string::npos);
    CHECK(printed.find("n.div(2)") != std::string::npos);
    CHECK(printed.find("v.ne(1)") != std::string::npos);
    CHECK(printed.find("3.mul(n).add(1)") != std::string::npos);
}

TEST_CASE("Peano impl body desugars the recursive comparison") {
    auto compiled = desugar_source(frs::test::read_corpus("peano.frs"));
    REQUIRE(compiled.ok());
    std::string printed = pretty_print(compiled.program);
    CHECK(printed.find("a.eq(b)") != std::string::npos);
}

TEST_CASE("desugaring is idempotent") {
    const char* files[] = {"collatz.frs", "peano.frs", "macro_pfor_step.frs",
                           "box_list.frs", "arrays.frs"};
    for (const char* name : files) {
        auto once = desugar_source(frs::test::read_corpus(name));
        REQUIRE(once.ok());
        std::string first = dump_tree(once.program);
        desugar_program(once.program);
        INFO(name);
        CHECK(dump_tree(once.program) == first);
    }
}

TEST_CASE("empty program desugars to itself") {
    auto compiled = desugar_source("");
    REQUIRE(compiled.ok());
    CHECK(compiled.program.items.empty());
}

TEST_CASE("semantic preservation on randomized operands") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> operand(-20, 20);
    const char* ops[] = {"+", "-", "*", "/", "%", "<<", ">>", "&", "|", "^",
                         "==", "!=", "<", ">", "<=", ">="};
    std::uniform_int_distribution<size_t> pick(0, std::size(ops) - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const char* op = ops[pick(rng)];
        int a = operand(rng);
        int b = operand(rng);
        bool division = op[0] == '/' || op[0] == '%';
        if (division && b == 0) b = 1;
        bool shift = op[0] == '<' || op[0] == '>';
        if (shift && (op[1] == '<' || op[1] == '>') && b < 0) b = -b;
        std::string src = "fn main() { println!(\"{}\", (" + std::to_string(a) + ") " +
                          op + " (" + std::to_string(b) + ")); }";
        auto sugared = run_text_sugared(src);
        auto desugared = run_text(src);
        INFO(src);
        REQUIRE(sugared.ok());
        REQUIRE(desugared.ok());
        CHECK(sugared.output == desugared.output);
    }
}

TEST_CASE("for loop over range equals its hand-written expansion") {
    auto loop_run = run_text(
        "fn main() { for x in range(0, 100) { println!(\"{}\", x); } }");
    auto expansion_run = run_text(
        "fn main() {\n"
        "    match &mut range(0, 100) {\n"
        "        _v => loop {\n"
        "            match _v.next() {\n"
        "                None => break,\n"
        "                Some(x) => { println!(\"{}\", x); }\n"
        "            }\n"
        "        }\n"
        "    }\n"
        "}");
    REQUIRE(loop_run.ok());
    REQUIRE(expansion_run.ok());
    CHECK(loop_run.output == expansion_run.output);
    CHECK(loop_run.output.substr(0, 8) == "0\n1\n2\n3\n");
}
