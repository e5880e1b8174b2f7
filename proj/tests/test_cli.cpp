#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using frs::test::corpus_path;
using frs::test::read_file;

namespace {

namespace fs = std::filesystem;

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

int decode_status(int status) {
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return status;
}

std::string temp_file(const std::string& stem) {
    return (fs::temp_directory_path() / ("frs_cli_" + stem)).string();
}

CommandResult run_cli(const std::string& args, const std::string& stdin_text = "") {
    CommandResult result;
    std::string out_path = temp_file("out.txt");
    std::string err_path = temp_file("err.txt");
    std::string command = std::string(FRS_CLI_PATH) + " " + args;
    if (!stdin_text.empty()) {
        std::string in_path = temp_file("in.frs");
        std::FILE* f = std::fopen(in_path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fwrite(stdin_text.data(), 1, stdin_text.size(), f);
        std::fclose(f);
        command += " < " + in_path;
    }
    command += " > " + out_path + " 2> " + err_path;
    result.exit_code = decode_status(std::system(command.c_str()));
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

std::vector<std::string> corpus_files(bool invalid) {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(FRS_CORPUS_DIR)) {
        if (entry.path().extension() != ".frs") continue;
        bool is_invalid =
            entry.path().filename().string().find("_invalid") != std::string::npos;
        if (is_invalid == invalid) out.push_back(entry.path().string());
    }
    REQUIRE(!out.empty());
    return out;
}

} // namespace

TEST_CASE("run executes the collatz corpus program") {
    auto result = run_cli("run " + corpus_path("collatz.frs"));
    CHECK(result.exit_code == 0);
    CHECK(result.out.substr(0, 9) == "76\n38\n19\n");
    CHECK(result.out.substr(result.out.size() - 4) == "2\n1\n");
}

TEST_CASE("check reports borrow errors on stderr and exits 1") {
    auto result = run_cli("check " + corpus_path("borrow_invalid.frs"));
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("E-BORROWED-USE") != std::string::npos);
    CHECK(result.err.find("^") != std::string::npos); // caret rendering
    CHECK(result.out == "2 errors\n");
}

TEST_CASE("check of a clean file prints the zero summary") {
    auto result = run_cli("check " + corpus_path("collatz.frs"));
    CHECK(result.exit_code == 0);
    CHECK(result.out == "0 errors\n");
    CHECK(result.err.empty());
}

TEST_CASE("missing input file is a usage error") {
    auto result = run_cli("lex /nonexistent.frs");
    CHECK(result.exit_code == 2);
}

TEST_CASE("usage errors") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate x.frs").exit_code == 2);
    CHECK(run_cli("parse --format bogus " + corpus_path("collatz.frs")).exit_code == 2);
    CHECK(run_cli("run --format json " + corpus_path("collatz.frs")).exit_code == 2);
}

TEST_CASE("stdin input via -") {
    auto result = run_cli("run -", "fn main() { println!(\"{}\", 40 + 2); }");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "42\n");
}

TEST_CASE("lex dump format") {
    auto result = run_cli("lex -", "0x1234");
    CHECK(result.exit_code == 0);
    CHECK(result.out == "1:1 IntLit 0x1234 → 4660 untyped\n");
}

TEST_CASE("parse tree format") {
    auto result = run_cli("parse --format tree -", "fn main() {}");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("(program") != std::string::npos);
    CHECK(result.out.find("(fn main") != std::string::npos);
}

TEST_CASE("expand flattens macros and normalizes builtins") {
    auto result = run_cli("expand " + corpus_path("macro_printall.frs"));
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("printall!") == std::string::npos);
    CHECK(result.out.find("println!(\"{}\", \"hello\")") != std::string::npos);

    auto tokens = run_cli("expand --format tokens " + corpus_path("macro_printall.frs"));
    CHECK(tokens.exit_code == 0);
    CHECK(tokens.out.find("Keyword fn") != std::string::npos);
}

TEST_CASE("run refuses checked-out errors unless --unchecked") {
    auto refused = run_cli("run " + corpus_path("borrow_invalid.frs"));
    CHECK(refused.exit_code == 1);
    CHECK(refused.err.find("refusing to run") != std::string::npos);
    CHECK(refused.out.empty());

    auto forced = run_cli("run --unchecked " + corpus_path("borrow_invalid.frs"));
    CHECK(forced.exit_code == 0);
    CHECK(forced.out == "2\n3\n3\n3\n");
}

TEST_CASE("json diagnostics") {
    auto result = run_cli("check --format json " + corpus_path("box_invalid.frs"));
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("\"code\":\"E-MOVED-USE\"") != std::string::npos);
    CHECK(result.err.find("\"line\":12") != std::string::npos);
    CHECK(result.err.find("\"severity\":\"error\"") != std::string::npos);
}

TEST_CASE("macro depth flag and environment fallback") {
    std::string loopy = "macro_rules! loopy ( () => (loopy!()); );\nfn main() { loopy!(); }";
    auto flag = run_cli("expand --macro-depth 7 -", loopy);
    CHECK(flag.exit_code == 1);
    CHECK(flag.err.find("depth limit of 7") != std::string::npos);

    std::string in_path = temp_file("loopy.frs");
    std::FILE* f = std::fopen(in_path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fwrite(loopy.data(), 1, loopy.size(), f);
    std::fclose(f);
    std::string out_path = temp_file("env_out.txt");
    std::string command = "FRS_MACRO_DEPTH=9 " + std::string(FRS_CLI_PATH) +
                          " expand " + in_path + " 2> " + out_path + " > /dev/null";
    CHECK(decode_status(std::system(command.c_str())) == 1);
    CHECK(read_file(out_path).find("depth limit of 9") != std::string::npos);
}

TEST_CASE("exit code contract over the whole corpus") {
    for (const auto& path : corpus_files(/*invalid=*/true)) {
        INFO(path);
        CHECK(run_cli("check " + path).exit_code == 1);
    }
    for (const auto& path : corpus_files(/*invalid=*/false)) {
        INFO(path);
        CHECK(run_cli("check " + path).exit_code == 0);
        CHECK(run_cli("run " + path).exit_code == 0);
    }
}

TEST_CASE("desugar output re-ingests identically") {
    for (const auto& path : corpus_files(/*invalid=*/false)) {
        INFO(path);
        auto direct = run_cli("run " + path);
        REQUIRE(direct.exit_code == 0);
        std::string desugared_path = temp_file("staged.frs");
        auto stage = run_cli("desugar " + path);
        REQUIRE(stage.exit_code == 0);
        std::FILE* f = std::fopen(desugared_path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fwrite(stage.out.data(), 1, stage.out.size(), f);
        std::fclose(f);
        auto staged = run_cli("run " + desugared_path);
        CHECK(staged.exit_code == 0);
        CHECK(staged.out == direct.out);
    }
}

TEST_CASE("runtime errors exit 1 with a rendered diagnostic") {
    auto result = run_cli("run -", "fn main() { println!(\"{}\", 1 / 0); }");
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("RT-DIV-ZERO") != std::string::npos);
}
