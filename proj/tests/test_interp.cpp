#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

using namespace frs;
using frs::test::run_text;

namespace {

std::string output_of(const std::string& src) {
    auto run = run_text(src);
    INFO(src);
    for (const auto& d : run.diags) INFO(d.code, ": ", d.message);
    REQUIRE(run.ok());
    return run.output;
}

std::string print_of(const std::string& expr) {
    return output_of("fn main() { println!(\"{}\", " + expr + "); }");
}

std::string error_of(const std::string& src) {
    auto run = run_text(src);
    REQUIRE(run.exit_status != 0);
    REQUIRE(!run.diags.empty());
    return run.diags.back().code;
}

// Independent oracle: the Collatz sequence printed from 25.
std::string collatz_oracle(uint64_t n) {
    std::string out;
    while (n != 1) {
        n = n % 2 == 0 ? n / 2 : 3 * n + 1;
        out += std::to_string(n);
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("collatz prints the full sequence") {
    std::string expected = collatz_oracle(25);
    // sanity: 23 lines ending in 1
    CHECK(std::count(expected.begin(), expected.end(), '\n') == 23);
    CHECK(output_of(frs::test::read_corpus("collatz.frs")) == expected);
    CHECK(output_of(frs::test::read_corpus("collatz_while.frs")) == expected);
}

TEST_CASE("empty main") {
    auto run = run_text("fn main() {}");
    REQUIRE(run.ok());
    CHECK(run.output.empty());
}

TEST_CASE("recursive list length") {
    CHECK(output_of(frs::test::read_corpus("box_list.frs")) == "2\n");
}

TEST_CASE("block values") {
    CHECK(print_of("{ 1; 2; 3 }") == "3\n");
    CHECK(print_of("{ 1; 2; }") == "()\n");
    CHECK(print_of("()") == "()\n");
    CHECK(print_of("if false { 1 }") == "()\n");
}

TEST_CASE("record construction and functional update") {
    CHECK(output_of(frs::test::read_corpus("record_update.frs")) ==
          "30\n20\nR { a: 30, b: 20 }\n");
    CHECK(output_of(frs::test::read_corpus("records.frs")) == "3\n");
}

TEST_CASE("match arm order and guards") {
    CHECK(output_of(frs::test::read_corpus("match_guards.frs")) == "1\n1\n3\n3\n4\n");
    CHECK(print_of("match None { None => false, Some(_) => true }") == "false\n");
    CHECK(print_of("match Some(1) { None => false, Some(_) => true }") == "true\n");
    CHECK(print_of("match 77 { _ => 42 }") == "42\n");
    CHECK(error_of("fn main() { match 3 { 0 => 0, 1 => 1 }; }") == "RT-NO-MATCH");
}

TEST_CASE("guards select the next arm when false") {
    CHECK(print_of("match 50 { n if n < 10 => 1, n if n < 100 => 2, _ => 3 }") == "2\n");
}

TEST_CASE("method dispatch") {
    CHECK(print_of("3.add(4)") == "7\n");
    CHECK(print_of("3.eq(4)") == "false\n");
    CHECK(output_of(frs::test::read_corpus("traits_testable.frs")) ==
          "false\ntrue\nfalse\n");
    CHECK(output_of(frs::test::read_corpus("impl_struct.frs")) ==
          "hello 10\nworld\nhello 20\n");
    CHECK(output_of(frs::test::read_corpus("impl_enum.frs")) ==
          "hello A\nworld\nhello B\n");
    CHECK(error_of("fn main() { ().nope(); }") == "RT-NO-METHOD");
}

TEST_CASE("Peano equality via user impl and trait default") {
    CHECK(output_of(frs::test::read_corpus("peano.frs")) ==
          "true\nfalse\ntrue\nfalse\ntrue\nfalse\n");
}

TEST_CASE("trait default ne equals !eq for every corpus receiver") {
    std::string peano = frs::test::read_corpus("peano.frs");
    std::string defs = peano.substr(0, peano.find("fn main"));
    std::string program = defs +
        "fn both(a: &Peano, b: &Peano) -> bool { (a != b) == !(a == b) }\n"
        "fn main() {\n"
        "    let zero = Zero;\n"
        "    let one = Succ(box Zero);\n"
        "    let two = Succ(box Succ(box Zero));\n"
        "    println!(\"{}\", both(&zero, &zero));\n"
        "    println!(\"{}\", both(&zero, &two));\n"
        "    println!(\"{}\", both(&two, &two));\n"
        "    println!(\"{}\", both(&one, &two));\n"
        "}\n";
    CHECK(output_of(program) == "true\ntrue\ntrue\ntrue\n");
}

TEST_CASE("ambiguous trait methods are an error") {
    CHECK(error_of("trait A { fn m(&self) -> int { 1 } }\n"
                   "trait B { fn m(&self) -> int { 2 } }\n"
                   "struct S { x: int }\n"
                   "impl A for S {}\n"
                   "impl B for S {}\n"
                   "fn main() { let s = S { x: 0 }; println!(\"{}\", s.m()); }") ==
          "RT-AMBIGUOUS-METHOD");
}

TEST_CASE("inherent methods shadow trait methods") {
    CHECK(output_of("trait A { fn m(&self) -> int { 1 } }\n"
                    "struct S { x: int }\n"
                    "impl A for S {}\n"
                    "impl S { fn m(&self) -> int { 9 } }\n"
                    "fn main() { let s = S { x: 0 }; println!(\"{}\", s.m()); }") ==
          "9\n");
}

TEST_CASE("iterators") {
    CHECK(output_of("fn main() { for x in range(0, 3) { println!(\"{}\", x); } }") ==
          "0\n1\n2\n");
    CHECK(output_of("fn main() { for x in range(5, 5) { println!(\"{}\", x); } }") == "");
    // user-defined iterator with interior state, hand-traced: yields 0, 1
    CHECK(output_of(
              "enum Counter { At(int) }\n"
              "impl Counter {\n"
              "    fn next(&mut self) -> Option<int> {\n"
              "        match *self {\n"
              "            At(n) => {\n"
              "                if n >= 2 { None }\n"
              "                else { *self = At(n + 1); Some(n) }\n"
              "            }\n"
              "        }\n"
              "    }\n"
              "}\n"
              "fn main() {\n"
              "    let mut it = At(0);\n"
              "    for x in it {\n"
              "        println!(\"{}\", x);\n"
              "    }\n"
              "}") == "0\n1\n");
}

TEST_CASE("format placeholders") {
    CHECK(print_of("42") == "42\n");
    CHECK(output_of("fn main() { println!(\"no placeholders\"); }") ==
          "no placeholders\n");
    CHECK(output_of("fn main() { println!(\"{} and {}\", 1, 2); }") == "1 and 2\n");
    CHECK(output_of("fn main() { println!(\"{{}} literal\"); }") == "{} literal\n");
    CHECK(output_of("fn main() { print!(\"a\"); print!(\"b\"); }") == "ab");
    CHECK(output_of(frs::test::read_corpus("rc_shared.frs")) == "3 3\n");
    CHECK(error_of("fn main() { println!(\"{} {}\", 1); }") == "RT-FORMAT-ARITY");
    CHECK(error_of("fn main() { println!(\"{}\", 1, 2); }") == "RT-FORMAT-ARITY");
}

TEST_CASE("value rendering") {
    CHECK(print_of("(1, 2)") == "(1, 2)\n");
    CHECK(print_of("3.14") == "3.14\n");
    CHECK(print_of("'x'") == "x\n");
    CHECK(print_of("\"verbatim\"") == "verbatim\n");
    CHECK(print_of("vec!(1, 2, 3)") == "[1, 2, 3]\n");
    CHECK(print_of("box 7") == "7\n");
    CHECK(print_of("box(GC) 7") == "7\n"); // GC boxes allocate like plain boxes
    CHECK(print_of("None") == "None\n");
    CHECK(print_of("Some(3)") == "Some(3)\n");
    CHECK(print_of("true") == "true\n");
}

TEST_CASE("integer width semantics") {
    CHECK(print_of("255u8 + 1u8") == "0\n");
    CHECK(print_of("127i8 + 1i8") == "-128\n");
    CHECK(print_of("65535u16 + 1u16") == "0\n");
    CHECK(print_of("4294967295u32 + 1u32") == "0\n");
    CHECK(print_of("18446744073709551615u64 + 1u64") == "0\n");
    CHECK(print_of("-1") == "-1\n");
    CHECK(print_of("-128i8 / -1i8") == "-128\n"); // wraps, no trap
    CHECK(print_of("0u8 - 1u8") == "255\n");
    CHECK(print_of("-9 % 4") == "-1\n");
    CHECK(print_of("1u8 << 9u8") == "2\n"); // shift masked to width
    CHECK(print_of("200u8 > 100u8") == "true\n");
    CHECK(print_of("-1i8 > 100i8") == "false\n");
    CHECK(print_of("!0u8") == "255\n");
    CHECK(error_of("fn main() { println!(\"{}\", 1u8 + 1i32); }") == "RT-TYPE");
}

TEST_CASE("untyped literals adopt the other operand's width") {
    CHECK(print_of("255u8 + 1") == "0\n");
    CHECK(print_of("1 + 255u8") == "0\n");
    CHECK(print_of("255 + 1") == "256\n");
}

TEST_CASE("division and bounds errors") {
    CHECK(error_of("fn main() { println!(\"{}\", 1 / 0); }") == "RT-DIV-ZERO");
    CHECK(error_of("fn main() { println!(\"{}\", 7 % 0); }") == "RT-DIV-ZERO");
    CHECK(error_of("fn main() { let v = vec!(1, 2); println!(\"{}\", v[2]); }") ==
          "RT-INDEX");
    CHECK(error_of("fn main() { let v = vec!(1, 2); println!(\"{}\", v[0 - 1]); }") ==
          "RT-INDEX");
    CHECK(print_of("[2, ..10][9]") == "2\n");
}

TEST_CASE("vector mutation through places and references") {
    CHECK(output_of("fn main() {\n"
                    "    let mut w = box vec!(1i, 2, 3);\n"
                    "    *w.get_mut(0) = 42;\n"
                    "    w[1] = 99;\n"
                    "    println!(\"{}\", w);\n"
                    "}") == "[42, 99, 3]\n");
}

TEST_CASE("shared ref contents never mutate") {
    CHECK(error_of("fn main() { let r = Rc::new(3); *r = 4; }") == "RT-SHAREDREF-WRITE");
    CHECK(error_of("fn main() { let r = Rc::new(vec!(1, 2)); r[0] = 9; }") ==
          "RT-SHAREDREF-WRITE");
}

TEST_CASE("one cell per value: writes through a reference are observed") {
    // The checker rejects this program; the interpreter still runs it.
    std::string src = frs::test::read_corpus("borrow_invalid.frs");
    CHECK(output_of(src) == "2\n3\n3\n3\n");
}

TEST_CASE("box moves share the cell, assignment rebinds the reference") {
    CHECK(output_of("fn main() {\n"
                    "    let mut w = box vec!(1i, 2, 3);\n"
                    "    *w.get_mut(0) = 42;\n"
                    "    let z = w;\n"
                    "    w = box vec!(2i, 4, 5);\n"
                    "    println!(\"{} {}\", w, z);\n"
                    "}") == "[2, 4, 5] [42, 2, 3]\n");
}

TEST_CASE("closures capture their environment") {
    CHECK(output_of(frs::test::read_corpus("lambdas.frs")) == "42\n");
    CHECK(print_of("{ let k = 10; let f = |x| x + k; f(5) }") == "15\n");
    CHECK(error_of("fn main() { (|x| x)(1, 2); }") == "RT-ARITY");
}

TEST_CASE("references auto-deref for fields and methods") {
    CHECK(output_of(frs::test::read_corpus("refs_dist.frs")) ==
          "1.4142135623730951\n1.4142135623730951\n");
    CHECK(output_of(frs::test::read_corpus("refs_option_match.frs")) ==
          "false\ntrue\nfalse\ntrue\n");
}

TEST_CASE("strings index by scalar position") {
    CHECK(print_of("\"abc\"[1]") == "b\n");
    CHECK(error_of("fn main() { println!(\"{}\", \"abc\"[3]); }") == "RT-INDEX");
}

TEST_CASE("control flow") {
    CHECK(output_of(frs::test::read_corpus("fact.frs")) == "120\n");
    CHECK(print_of("{ let mut i = 0; loop { i = i + 1; if i > 3 { break } }; i }") ==
          "4\n");
    CHECK(output_of("fn f(x: int) -> int { if x > 0 { return 1; } 2 }\n"
                    "fn main() { println!(\"{} {}\", f(5), f(0 - 5)); }") == "1 2\n");
}

TEST_CASE("runtime failures carry positions") {
    auto run = run_text("fn main() {\n    println!(\"{}\", 1 / 0);\n}");
    REQUIRE(run.exit_status == 1);
    REQUIRE(run.diags.size() == 1);
    CHECK(run.diags[0].span.start_line == 2);
}

TEST_CASE("deep recursion hits the frame limit, not the native stack") {
    CHECK(error_of("fn f(n: int) -> int { if n == 0 { 0 } else { f(n - 1) } }\n"
                   "fn main() { println!(\"{}\", f(20000)); }") == "RT-STACK-OVERFLOW");
    CHECK(output_of("fn f(n: int) -> int { if n == 0 { 0 } else { f(n - 1) } }\n"
                    "fn main() { println!(\"{}\", f(9000)); }") == "0\n");
}

TEST_CASE("unknown identifiers and non-callables") {
    CHECK(error_of("fn main() { println!(\"{}\", nosuch); }") == "RT-UNKNOWN-IDENT");
    CHECK(error_of("fn main() { nosuch(); }") == "RT-UNKNOWN-IDENT");
    CHECK(error_of("fn main() { let x = 3; x(); }") == "RT-NOT-CALLABLE");
    CHECK(error_of("fn f() {}\nfn main() { f(1); }") == "RT-ARITY");
}

TEST_CASE("strings corpus golden output") {
    CHECK(output_of(frs::test::read_corpus("strings.frs")) ==
          "fo\"o\nfo\\n\nfo\\\"o\nģ\n97\n");
}

TEST_CASE("arrays corpus golden output") {
    CHECK(output_of(frs::test::read_corpus("arrays.frs")) ==
          "2\n11\n2\n[2, 2, 2, 2, 2, 2, 2, 2, 2, 2]\n(1, 2, 3)\n7\n()\n");
}

TEST_CASE("generics and aliases evaluate dynamically") {
    CHECK(output_of(frs::test::read_corpus("generics.frs")) == "42\n(1, 2)\n");
    CHECK(output_of(frs::test::read_corpus("adt_option.frs")) == "false\ntrue\n");
}
