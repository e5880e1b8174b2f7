// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Expected values come from independent oracles computed
// here, never from the implementation under test.

#include "test_util.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace frs;
using frs::test::marked_lines;
using frs::test::read_corpus;
using frs::test::run_text;
using frs::test::run_text_sugared;

namespace {

namespace fs = std::filesystem;

struct Log {
    std::ostringstream text;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            text << "    " << what << "\n";
        }
    }
    template <class T, class U>
    void expect_eq(const T& got, const U& want, const std::string& what) {
        if (!(got == want)) {
            ok = false;
            text << "    " << what << ": got [" << got << "], want [" << want << "]\n";
        }
    }
};

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(FRS_CORPUS_DIR))
        if (entry.path().extension() == ".frs") out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------- criterion 1

void lex_int(Log& log, const std::string& src, uint64_t value, std::string_view suffix) {
    auto result = tokenize(src);
    if (!result.ok() || result.tokens.size() != 1) {
        log.expect(false, src + " did not lex to one token");
        return;
    }
    const Token& t = result.tokens[0];
    log.expect(t.kind == TokenKind::IntLit || t.kind == TokenKind::ByteLit,
               src + " is not an integer literal");
    log.expect_eq(t.int_value, value, src + " payload");
    log.expect_eq(std::string(suffix_name(t.suffix)), std::string(suffix), src + " suffix");
}

void lex_float(Log& log, const std::string& src, const char* same_as,
               std::string_view suffix) {
    auto result = tokenize(src);
    if (!result.ok() || result.tokens.size() != 1 ||
        result.tokens[0].kind != TokenKind::FloatLit) {
        log.expect(false, src + " did not lex to one float literal");
        return;
    }
    // Bit-exact: both sides through correctly-rounded decimal parsing.
    log.expect(result.tokens[0].float_value == std::strtod(same_as, nullptr),
               src + " float payload != " + same_as);
    log.expect_eq(std::string(suffix_name(result.tokens[0].suffix)), std::string(suffix),
                  src + " suffix");
}

void lex_char(Log& log, const std::string& src, uint32_t scalar) {
    auto result = tokenize(src);
    if (!result.ok() || result.tokens.size() != 1 ||
        result.tokens[0].kind != TokenKind::CharLit) {
        log.expect(false, src + " did not lex to one char literal");
        return;
    }
    log.expect_eq(result.tokens[0].int_value, scalar, src + " scalar");
}

void lex_str(Log& log, const std::string& src, const std::string& value, bool byte_str) {
    auto result = tokenize(src);
    TokenKind want = byte_str ? TokenKind::ByteStrLit : TokenKind::StrLit;
    if (!result.ok() || result.tokens.size() != 1 || result.tokens[0].kind != want) {
        log.expect(false, src + " did not lex to one string literal");
        return;
    }
    log.expect_eq(result.tokens[0].str_value, value, src + " content");
}

void lex_rejects(Log& log, const std::string& src, std::string_view code) {
    auto result = tokenize(src);
    log.expect(!result.ok(), src + " should be rejected");
    if (!result.ok())
        log.expect_eq(result.diags[0].code, std::string(code), src + " error code");
}

std::string byte_seq(std::initializer_list<uint8_t> bs) {
    std::string out;
    for (uint8_t b : bs) out.push_back(static_cast<char>(b));
    return out;
}

bool criterion_literals(Log& log) {
    // number table
    lex_int(log, "123i", 123, "i");
    lex_int(log, "123u", 123, "u");
    lex_int(log, "123i8", 123, "i8");
    lex_int(log, "123u8", 123, "u8");
    lex_int(log, "123i16", 123, "i16");
    lex_int(log, "123u16", 123, "u16");
    lex_int(log, "123i32", 123, "i32");
    lex_int(log, "123u32", 123, "u32");
    lex_int(log, "123i64", 123, "i64");
    lex_int(log, "123u64", 123, "u64");
    lex_int(log, "1_2_3_4", 1234, "untyped");
    lex_int(log, "1234_i", 1234, "i");
    lex_int(log, "0x1234", 4660, "untyped");
    lex_int(log, "0x1234u16", 4660, "u16");
    lex_int(log, "0b1010", 10, "untyped");
    lex_int(log, "0o1234", 668, "untyped");
    lex_int(log, "b'a'", 97, "u8");
    lex_str(log, "b\"a\"", byte_seq({97}), true);
    lex_float(log, "12.34", "12.34", "untyped");
    lex_float(log, "12.34f32", "12.34", "f32");
    lex_float(log, "12.34f64", "12.34", "f64");
    lex_float(log, "12e34", "1.2e35", "untyped");
    lex_float(log, "12E34", "1.2e35", "untyped");
    lex_float(log, "12E+34", "1.2e35", "untyped");
    lex_float(log, "12E-34", "1.2e-33", "untyped");
    lex_float(log, "1_2e34", "12e34", "untyped");
    lex_float(log, "1_2e3_4", "12e34", "untyped");

    // escape table
    lex_char(log, "'\\x61'", 0x61);
    lex_char(log, "'\\\\'", 0x5c);
    lex_char(log, "'\\''", 0x27);
    lex_char(log, "'\\0'", 0x00);
    lex_char(log, "'\\t'", 0x09);
    lex_char(log, "'\\n'", 0x0a);
    lex_char(log, "'\\r'", 0x0d);
    lex_char(log, "'\\u0123'", 0x0123);
    lex_char(log, "'\\U00012345'", 0x12345);
    lex_int(log, "b'\\x61'", 97, "u8");
    lex_int(log, "b'\\\\'", 92, "u8");
    lex_int(log, "b'\\''", 39, "u8");
    lex_int(log, "b'\\0'", 0, "u8");
    lex_int(log, "b'\\t'", 9, "u8");
    lex_int(log, "b'\\n'", 10, "u8");
    lex_int(log, "b'\\r'", 13, "u8");
    lex_str(log, "\"\\x61\"", "a", false);
    lex_str(log, "\"\\\\\"", byte_seq({0x5c}), false);
    lex_str(log, "\"\\\"\"", byte_seq({0x22}), false);
    lex_str(log, "\"\\0\"", byte_seq({0x00}), false);
    lex_str(log, "\"\\t\"", byte_seq({0x09}), false);
    lex_str(log, "\"\\n\"", byte_seq({0x0a}), false);
    lex_str(log, "\"\\r\"", byte_seq({0x0d}), false);
    lex_str(log, "\"\\u0123\"", utf8_encode(0x0123), false);
    lex_str(log, "\"\\U00012345\"", utf8_encode(0x12345), false);

    // raw string table
    lex_str(log, "\"foo\"", "foo", false);
    lex_str(log, "\"fo\\\"o\"", "fo\"o", false);
    lex_str(log, "r\"fo\\n\"", "fo\\n", false);
    lex_str(log, "r#\"fo\\\"o\"#", "fo\\\"o", false);
    lex_str(log, "b\"foo\"", byte_seq({102, 111, 111}), true);
    lex_str(log, "b\"fo\\\"o\"", byte_seq({102, 111, 34, 111}), true);
    lex_str(log, "rb\"fo\\n\"", byte_seq({102, 111, 92, 110}), true);
    lex_str(log, "rb#\"fo\\\"o\"#", byte_seq({102, 111, 92, 34, 111}), true);
    lex_str(log, "r##\"foo#\\\"#bar\"##", "foo#\\\"#bar", false);

    // rejected forms
    lex_rejects(log, "'\\a'", "InvalidEscape");
    lex_rejects(log, "'\\f'", "InvalidEscape");
    lex_rejects(log, "\"\\a\"", "InvalidEscape");
    lex_rejects(log, "'\\0123'", "CharLiteralTooLong");
    lex_rejects(log, "b'\\u0123'", "InvalidEscape");
    return log.ok;
}

// ---------------------------------------------------------- criterion 2

std::string collatz_oracle(uint64_t n) {
    std::string out;
    while (n != 1) {
        n = n % 2 == 0 ? n / 2 : 3 * n + 1;
        out += std::to_string(n);
        out += '\n';
    }
    return out;
}

// Oracle for the pfor loop: print, step, stop once past the bound.
std::string pfor_oracle(long s, long e, long step) {
    std::string out;
    long x = s;
    while (true) {
        out += std::to_string(x);
        out += '\n';
        x += step;
        if (x > e) break;
    }
    return out;
}

bool criterion_corpus_execution(Log& log) {
    auto expect_run = [&](const std::string& name, const std::string& want) {
        auto run = run_text(read_corpus(name));
        log.expect(run.ok(), name + " did not run cleanly");
        if (run.ok()) log.expect_eq(run.output, want, name + " stdout");
    };
    expect_run("collatz.frs", collatz_oracle(25));
    expect_run("collatz_while.frs", collatz_oracle(25));
    expect_run("box_list.frs", "2\n");
    // hand-evaluated truth table over Zero / Succ(Succ(Zero)) and friends
    expect_run("peano.frs", "true\nfalse\ntrue\nfalse\ntrue\nfalse\n");
    expect_run("macro_pfor.frs", pfor_oracle(0, 10, 1));
    expect_run("macro_pfor_step.frs", pfor_oracle(0, 10, 2) + pfor_oracle(0, 3, 1));
    expect_run("macro_printall.frs", "hello\n42\n3.14\n");
    return log.ok;
}

// ---------------------------------------------------------- criterion 3

bool criterion_checker_corpus(Log& log) {
    for (const auto& path : corpus_files()) {
        std::string name = fs::path(path).filename().string();
        std::string src = frs::test::read_file(path);
        auto compiled = expand_source(src);
        if (has_errors(compiled.diags)) {
            log.expect(false, name + " failed to compile for checking");
            continue;
        }
        auto diags = check_program(compiled.program);
        std::set<uint32_t> lines;
        for (const auto& d : diags) lines.insert(d.span.start_line);
        auto invalid = marked_lines(src, "// invalid!");
        auto ok_lines = marked_lines(src, "// OK");
        std::set<uint32_t> allowed(invalid.begin(), invalid.end());
        for (uint32_t line : invalid)
            log.expect(lines.count(line) == 1,
                       name + ":" + std::to_string(line) + " missing diagnostic");
        for (uint32_t line : ok_lines)
            log.expect(lines.count(line) == 0,
                       name + ":" + std::to_string(line) + " false positive");
        for (uint32_t line : lines)
            log.expect(allowed.count(line) == 1,
                       name + ":" + std::to_string(line) + " unexpected diagnostic");
    }
    // The two documented strict lines keep their specific codes.
    {
        auto compiled = expand_source(read_corpus("refs_calls_invalid.frs"));
        auto diags = check_program(compiled.program);
        bool mutref = false;
        bool mismatch = false;
        for (const auto& d : diags) {
            if (d.span.start_line == 10 && d.code == "E-MUTREF-IMMUT") mutref = true;
            if (d.span.start_line == 12 && d.code == "E-REF-MISMATCH") mismatch = true;
        }
        log.expect(mutref, "inc(&mut v) line should be E-MUTREF-IMMUT");
        log.expect(mismatch, "inc(&w) line should be E-REF-MISMATCH");
    }
    return log.ok;
}

// ---------------------------------------------------------- criterion 4

bool criterion_desugar_equivalence(Log& log) {
    const char* ops[] = {"+", "-", "*", "/", "%", "<<", ">>", "&", "|", "^",
                         "==", "!=", "<", ">", "<=", ">="};
    std::mt19937 rng(0xf25);
    std::uniform_int_distribution<int> operand(-30, 30);
    std::uniform_int_distribution<size_t> pick(0, std::size(ops) - 1);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const char* op = ops[pick(rng)];
        int a = operand(rng);
        int b = operand(rng);
        if ((op[0] == '/' || op[0] == '%') && b == 0) b = 7;
        if ((op == std::string("<<") || op == std::string(">>")) && b < 0) b = -b;
        std::string src = "fn main() { println!(\"{}\", (" + std::to_string(a) + ") " +
                          op + " (" + std::to_string(b) + ")); }";
        auto sugared = run_text_sugared(src);
        auto desugared = run_text(src);
        if (!sugared.ok() || !desugared.ok() || sugared.output != desugared.output) {
            ++mismatches;
            if (mismatches <= 3)
                log.expect(false, "mismatch for " + src + " sugared=[" + sugared.output +
                                      "] desugared=[" + desugared.output + "]");
        }
    }
    log.expect_eq(mismatches, 0, "sugared/desugared mismatches out of 1000");

    std::string expected;
    for (int i = 0; i < 100; ++i) expected += std::to_string(i) + "\n";
    auto loop_run =
        run_text("fn main() { for x in range(0, 100) { println!(\"{}\", x); } }");
    auto hand_run = run_text(
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
    log.expect(loop_run.ok() && hand_run.ok(), "for-loop programs did not run");
    log.expect_eq(loop_run.output, expected, "for-loop over range(0, 100)");
    log.expect_eq(hand_run.output, expected, "hand-written loop expansion");
    return log.ok;
}

// ---------------------------------------------------------- criterion 5

bool criterion_macro_properties(Log& log) {
    std::string defs = read_corpus("macro_pfor_step.frs");
    std::string rules = defs.substr(0, defs.find("fn main"));

    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<int> lo(-10, 20);
    std::uniform_int_distribution<int> width(0, 12);
    for (int trial = 0; trial < 50; ++trial) {
        int s = lo(rng);
        int e = s + width(rng);
        auto source = [&](bool step) {
            return rules + "fn main() { pfor!(i = " + std::to_string(s) + " to " +
                   std::to_string(e) + (step ? " step 1" : "") +
                   " { println!(\"{}\", i); }); }";
        };
        auto plain = run_text(source(false));
        auto stepped = run_text(source(true));
        if (!plain.ok() || !stepped.ok() || plain.output != stepped.output ||
            plain.output != pfor_oracle(s, e, 1)) {
            log.expect(false, "pfor mismatch for s=" + std::to_string(s) +
                                  " e=" + std::to_string(e));
        }
    }

    // the bound expression evaluates exactly once
    auto once = run_text(rules +
                         "fn main() {\n"
                         "    let mut c = 0;\n"
                         "    pfor!(i = 0 to { c = c + 1; 5 } { i; });\n"
                         "    println!(\"{}\", c);\n"
                         "}");
    log.expect(once.ok(), "single-evaluation program did not run");
    log.expect_eq(once.output, std::string("1\n"), "bound expression evaluations");

    // variadic printall with 0, 1, and 7 arguments
    std::string printall =
        "macro_rules! printall (\n"
        "    ( $( $arg:expr ),* ) => (\n"
        "        $( println!(\"{}\", $arg) );*\n"
        "    );\n"
        ");\n";
    auto count_lines = [](const std::string& s) {
        return std::count(s.begin(), s.end(), '\n');
    };
    auto zero = run_text(printall + "fn main() { printall!(); }");
    log.expect(zero.ok() && count_lines(zero.output) == 0, "printall!() should print 0 lines");
    auto one_arg = run_text(printall + "fn main() { printall!(11); }");
    log.expect(one_arg.ok() && count_lines(one_arg.output) == 1,
               "printall!(11) should print 1 line");
    auto seven = run_text(printall + "fn main() { printall!(1, 2, 3, 4, 5, 6, 7); }");
    log.expect(seven.ok() && count_lines(seven.output) == 7,
               "printall! with 7 args should print 7 lines");
    log.expect_eq(seven.output, std::string("1\n2\n3\n4\n5\n6\n7\n"), "printall 7 output");

    // self-recursive macro trips the configured limit
    auto compiled = parse_source(
        "macro_rules! loopy ( () => (loopy!()); );\nfn main() { loopy!(); }");
    auto diags = expand_all(compiled.program, 128);
    bool limited = false;
    for (const auto& d : diags) limited |= d.code == "RecursionLimitExceeded";
    log.expect(limited, "self-recursive macro should exceed depth 128");
    return log.ok;
}

// ---------------------------------------------------------- criterion 6

bool criterion_semantics_invariants(Log& log) {
    auto expect_output = [&](const std::string& src, const std::string& want,
                             const std::string& what) {
        auto run = run_text(src);
        log.expect(run.ok(), what + " did not run");
        if (run.ok()) log.expect_eq(run.output, want, what);
    };
    auto expect_error = [&](const std::string& src, std::string_view code,
                            const std::string& what) {
        auto run = run_text(src);
        log.expect(run.exit_status != 0, what + " should fail");
        if (!run.diags.empty())
            log.expect_eq(run.diags.back().code, std::string(code), what + " code");
    };

    expect_output("fn main() { println!(\"{}\", { 1; 2; }); }", "()\n",
                  "block with trailing semicolon");
    expect_output("struct R { a: int, b: int }\n"
                  "fn main() { let z = R { a: 10, b: 20 };\n"
                  "    println!(\"{}\", R { a: 30, ..z }); }",
                  "R { a: 30, b: 20 }\n", "functional record update");
    expect_output("fn main() { println!(\"{}\", 255u8 + 1u8); }", "0\n", "u8 wraparound");
    expect_error("fn main() { let v = vec!(1, 2, 3); println!(\"{}\", v[3]); }",
                 "RT-INDEX", "vector out of bounds");
    expect_error("fn main() { let r = Rc::new(3); *r = 4; }", "RT-SHAREDREF-WRITE",
                 "write through shared ref");

    // trait default: ne agrees with !eq for every corpus receiver pair
    std::string peano = read_corpus("peano.frs");
    std::string defs = peano.substr(0, peano.find("fn main"));
    expect_output(defs +
                      "fn both(a: &Peano, b: &Peano) -> bool { (a != b) == !(a == b) }\n"
                      "fn main() {\n"
                      "    let zero = Zero;\n"
                      "    let one = Succ(box Zero);\n"
                      "    let two = Succ(box Succ(box Zero));\n"
                      "    println!(\"{}\", both(&zero, &zero) && both(&zero, &two)\n"
                      "        && both(&two, &two) && both(&one, &two));\n"
                      "}",
                  "true\n", "trait default ne = !eq");
    return log.ok;
}

// ---------------------------------------------------------- criterion 7

bool criterion_round_trips(Log& log) {
    for (const auto& path : corpus_files()) {
        std::string name = fs::path(path).filename().string();
        std::string src = frs::test::read_file(path);

        auto first = parse_source(src);
        if (has_errors(first.diags)) {
            log.expect(false, name + " failed to parse");
            continue;
        }
        std::string printed = pretty_print(first.program);
        auto second = parse_source(printed);
        log.expect(!has_errors(second.diags), name + " pretty output failed to re-parse");
        log.expect(dump_tree(first.program) == dump_tree(second.program),
                   name + " pretty round-trip changed the tree");

        // token texts cover the input; gaps hold only whitespace/comments
        auto lexed = tokenize(src);
        log.expect(lexed.ok(), name + " failed to lex");
        uint32_t cursor = 0;
        bool covered = true;
        auto gap_is_trivia = [&](uint32_t from, uint32_t to) {
            uint32_t i = from;
            while (i < to) {
                char c = src[i];
                if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                    ++i;
                } else if (c == '/' && i + 1 < to && src[i + 1] == '/') {
                    while (i < to && src[i] != '\n') ++i;
                } else {
                    return false;
                }
            }
            return true;
        };
        for (const auto& t : lexed.tokens) {
            if (src.substr(t.span.begin, t.span.end - t.span.begin) != t.text)
                covered = false;
            if (!gap_is_trivia(cursor, t.span.begin)) covered = false;
            cursor = t.span.end;
        }
        if (!gap_is_trivia(cursor, static_cast<uint32_t>(src.size()))) covered = false;
        log.expect(covered, name + " token concatenation does not reproduce the input");
    }
    return log.ok;
}

struct Criterion {
    const char* title;
    bool (*fn)(Log&);
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"1. literal-table conformance (numbers, escapes, raw strings)",
         criterion_literals},
        {"2. corpus execution matches the expected stdout", criterion_corpus_execution},
        {"3. checker corpus: annotated lines diagnose, clean lines do not",
         criterion_checker_corpus},
        {"4. desugar equivalence: 1000 random triples + for-loop expansion",
         criterion_desugar_equivalence},
        {"5. macro engine properties (step equivalence, single-eval, variadic, depth)",
         criterion_macro_properties},
        {"6. semantics invariants (block value, update, wrap, bounds, ne, Rc)",
         criterion_semantics_invariants},
        {"7. round-trips (pretty-print/re-parse, token coverage)",
         criterion_round_trips},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Log log;
        bool ok = criterion.fn(log);
        std::cout << (ok ? "PASS  " : "FAIL  ") << criterion.title << "\n";
        if (!ok) {
            std::cout << log.text.str();
            ++failures;
        }
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
