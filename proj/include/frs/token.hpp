#pragma once

#include "frs/span.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace frs {

enum class TokenKind {
    IntLit,
    FloatLit,
    CharLit,
    ByteLit,
    StrLit,
    ByteStrLit,
    Ident,
    Keyword,
    Punct,
    Delimiter, // one of ( ) [ ] { }
};

/// Declared width suffix of a number literal. `I`/`U` are the
/// machine-dependent widths, modeled as 64-bit in evaluation.
enum class NumSuffix : uint8_t {
    None,
    I, U,
    I8, U8, I16, U16, I32, U32, I64, U64,
    F32, F64,
};

std::string_view suffix_name(NumSuffix s);

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    SourceSpan span;

    // Decoded payload, valid depending on kind:
    //   IntLit   - int_value (magnitude mod 2^64) + suffix
    //   FloatLit - float_value + suffix
    //   CharLit  - int_value holds the Unicode scalar
    //   ByteLit  - int_value holds the byte, suffix U8
    //   StrLit   - str_value holds decoded UTF-8
    //   ByteStrLit - str_value holds the decoded bytes
    uint64_t int_value = 0;
    double float_value = 0.0;
    NumSuffix suffix = NumSuffix::None;
    std::string str_value;

    bool is_ident(std::string_view name) const {
        return kind == TokenKind::Ident && text == name;
    }
    bool is_keyword(std::string_view name) const {
        return kind == TokenKind::Keyword && text == name;
    }
    bool is_punct(std::string_view p) const {
        return kind == TokenKind::Punct && text == p;
    }
    bool is_delim(char d) const {
        return kind == TokenKind::Delimiter && text.size() == 1 && text[0] == d;
    }
    bool is_open_delim() const {
        return kind == TokenKind::Delimiter &&
               (text == "(" || text == "[" || text == "{");
    }
    bool is_close_delim() const {
        return kind == TokenKind::Delimiter &&
               (text == ")" || text == "]" || text == "}");
    }

    static Token ident(std::string name);
    static Token keyword(std::string name);
    static Token punct(std::string p);
    static Token delim(char d);
    static Token int_lit(uint64_t value);
};

bool is_frs_keyword(std::string_view word);

/// One token per line: `LINE:COL KIND TEXT → PAYLOAD`.
std::string dump_tokens(const std::vector<Token>& tokens);
std::string dump_token(const Token& tok);

} // namespace frs
