#include "frs/lexer.hpp"

#include <array>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace frs {

namespace {

const std::array<std::string_view, 22> kKeywords = {
    "fn", "let", "mut", "struct", "enum", "trait", "impl", "for", "in",
    "match", "if", "else", "loop", "while", "break", "return", "box",
    "ref", "self", "true", "false", "macro_rules",
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_continue(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_dec_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex_digit(char c) {
    return is_dec_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
int hex_value(char c) {
    if (is_dec_digit(c)) return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

std::optional<NumSuffix> suffix_from_text(std::string_view s) {
    if (s == "i") return NumSuffix::I;
    if (s == "u") return NumSuffix::U;
    if (s == "i8") return NumSuffix::I8;
    if (s == "u8") return NumSuffix::U8;
    if (s == "i16") return NumSuffix::I16;
    if (s == "u16") return NumSuffix::U16;
    if (s == "i32") return NumSuffix::I32;
    if (s == "u32") return NumSuffix::U32;
    if (s == "i64") return NumSuffix::I64;
    if (s == "u64") return NumSuffix::U64;
    if (s == "f32") return NumSuffix::F32;
    if (s == "f64") return NumSuffix::F64;
    return std::nullopt;
}

LexError make_err(std::string code, std::string msg, uint32_t begin, uint32_t end) {
    return LexError{std::move(code), std::move(msg), begin, end};
}

} // namespace

std::string_view suffix_name(NumSuffix s) {
    switch (s) {
        case NumSuffix::None: return "untyped";
        case NumSuffix::I: return "i";
        case NumSuffix::U: return "u";
        case NumSuffix::I8: return "i8";
        case NumSuffix::U8: return "u8";
        case NumSuffix::I16: return "i16";
        case NumSuffix::U16: return "u16";
        case NumSuffix::I32: return "i32";
        case NumSuffix::U32: return "u32";
        case NumSuffix::I64: return "i64";
        case NumSuffix::U64: return "u64";
        case NumSuffix::F32: return "f32";
        case NumSuffix::F64: return "f64";
    }
    return "untyped";
}

bool is_frs_keyword(std::string_view word) {
    for (auto kw : kKeywords)
        if (kw == word) return true;
    return false;
}

std::string utf8_encode(uint32_t scalar) {
    std::string out;
    if (scalar < 0x80) {
        out.push_back(static_cast<char>(scalar));
    } else if (scalar < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (scalar >> 6)));
        out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
    } else if (scalar < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (scalar >> 12)));
        out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (scalar >> 18)));
        out.push_back(static_cast<char>(0x80 | ((scalar >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
    }
    return out;
}

std::variant<NumberValue, LexError> decode_number(std::string_view text) {
    NumberValue out;
    size_t i = 0;
    int base = 10;
    size_t digits_begin = 0;

    if (text.size() >= 2 && text[0] == '0' &&
        (text[1] == 'x' || text[1] == 'o' || text[1] == 'b')) {
        base = text[1] == 'x' ? 16 : text[1] == 'o' ? 8 : 2;
        i = 2;
        digits_begin = 2;
    }

    uint64_t magnitude = 0;
    size_t digit_count = 0;
    auto digit_ok = [&](char c) {
        if (base == 16) return is_hex_digit(c);
        return is_dec_digit(c);
    };
    while (i < text.size() && (digit_ok(text[i]) || text[i] == '_')) {
        char c = text[i];
        if (c != '_') {
            int v = hex_value(c);
            if (v >= base) {
                return make_err("InvalidDigitForBase",
                                "digit '" + std::string(1, c) + "' is not valid in base " +
                                    std::to_string(base),
                                static_cast<uint32_t>(i), static_cast<uint32_t>(i + 1));
            }
            magnitude = magnitude * static_cast<uint64_t>(base) + static_cast<uint64_t>(v);
            ++digit_count;
        }
        ++i;
    }
    if (digit_count == 0) {
        return make_err("InvalidDigitForBase", "number literal has no digits",
                        static_cast<uint32_t>(digits_begin), static_cast<uint32_t>(i ? i : 1));
    }

    bool is_float = false;
    size_t frac_begin = 0;
    if (i < text.size() && text[i] == '.' && i + 1 < text.size() && is_dec_digit(text[i + 1])) {
        is_float = true;
        frac_begin = i;
        ++i;
        while (i < text.size() && (is_dec_digit(text[i]) || text[i] == '_')) ++i;
    }
    if (base == 10 && i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && is_dec_digit(text[j])) {
            is_float = true;
            i = j;
            while (i < text.size() && (is_dec_digit(text[i]) || text[i] == '_')) ++i;
        }
    }
    if (is_float && base != 10) {
        return make_err("FloatWithBasePrefix",
                        "base-prefixed literals cannot have a fraction or exponent",
                        static_cast<uint32_t>(frac_begin), static_cast<uint32_t>(i));
    }

    NumSuffix suffix = NumSuffix::None;
    if (i < text.size()) {
        std::string_view rest = text.substr(i);
        auto s = suffix_from_text(rest);
        if (!s) {
            return make_err("UnknownSuffix",
                            "unknown literal suffix '" + std::string(rest) + "'",
                            static_cast<uint32_t>(i), static_cast<uint32_t>(text.size()));
        }
        suffix = *s;
    }

    bool float_suffix = suffix == NumSuffix::F32 || suffix == NumSuffix::F64;
    if (float_suffix && base != 10) {
        return make_err("FloatWithBasePrefix",
                        "base-prefixed literals cannot have a float suffix",
                        static_cast<uint32_t>(i), static_cast<uint32_t>(text.size()));
    }
    if (is_float || float_suffix) {
        std::string cleaned;
        cleaned.reserve(i);
        for (size_t k = 0; k < i; ++k)
            if (text[k] != '_') cleaned.push_back(text[k]);
        out.is_float = true;
        out.float_value = std::strtod(cleaned.c_str(), nullptr);
    } else {
        out.is_float = false;
        out.int_value = magnitude;
    }
    out.suffix = suffix;
    return out;
}

std::variant<DecodedText, LexError> decode_escapes(std::string_view body, EscapeMode mode) {
    DecodedText out;
    bool byte_mode = mode == EscapeMode::Byte || mode == EscapeMode::ByteStr;
    size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (c != '\\') {
            if (byte_mode) {
                out.units.push_back(static_cast<unsigned char>(c));
                ++i;
            } else {
                // Decode one UTF-8 scalar from the raw bytes.
                unsigned char b = static_cast<unsigned char>(c);
                uint32_t scalar = 0;
                size_t len = 1;
                if (b < 0x80) {
                    scalar = b;
                } else if ((b & 0xE0) == 0xC0) {
                    scalar = b & 0x1F;
                    len = 2;
                } else if ((b & 0xF0) == 0xE0) {
                    scalar = b & 0x0F;
                    len = 3;
                } else {
                    scalar = b & 0x07;
                    len = 4;
                }
                for (size_t k = 1; k < len && i + k < body.size(); ++k)
                    scalar = (scalar << 6) | (static_cast<unsigned char>(body[i + k]) & 0x3F);
                out.units.push_back(scalar);
                i += len;
            }
            continue;
        }
        size_t esc_begin = i;
        ++i;
        if (i >= body.size()) {
            return make_err("InvalidEscape", "incomplete escape at end of literal",
                            static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(body.size()));
        }
        char e = body[i];
        ++i;
        auto need_hex = [&](size_t n) -> std::optional<uint32_t> {
            if (i + n > body.size()) return std::nullopt;
            uint32_t v = 0;
            for (size_t k = 0; k < n; ++k) {
                if (!is_hex_digit(body[i + k])) return std::nullopt;
                v = (v << 4) | static_cast<uint32_t>(hex_value(body[i + k]));
            }
            i += n;
            return v;
        };
        switch (e) {
            case '\\': out.units.push_back('\\'); break;
            case '\'': out.units.push_back('\''); break;
            case '"': out.units.push_back('"'); break;
            case '0': out.units.push_back(0); break;
            case 't': out.units.push_back('\t'); break;
            case 'n': out.units.push_back('\n'); break;
            case 'r': out.units.push_back('\r'); break;
            case 'x': {
                auto v = need_hex(2);
                if (!v)
                    return make_err("InvalidEscape", "\\x expects two hex digits",
                                    static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(i));
                out.units.push_back(*v);
                break;
            }
            case 'u':
            case 'U': {
                if (byte_mode)
                    return make_err("InvalidEscape",
                                    "unicode escapes are not valid in byte literals",
                                    static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(i));
                auto v = need_hex(e == 'u' ? 4 : 8);
                if (!v)
                    return make_err("InvalidEscape",
                                    e == 'u' ? "\\u expects four hex digits"
                                             : "\\U expects eight hex digits",
                                    static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(i));
                if (*v > 0x10FFFF || (*v >= 0xD800 && *v <= 0xDFFF))
                    return make_err("InvalidEscape", "escape is not a Unicode scalar value",
                                    static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(i));
                out.units.push_back(*v);
                break;
            }
            default:
                return make_err("InvalidEscape",
                                "unknown escape '\\" + std::string(1, e) + "'",
                                static_cast<uint32_t>(esc_begin), static_cast<uint32_t>(i));
        }
    }
    if (mode == EscapeMode::Char || mode == EscapeMode::Byte) {
        if (out.units.empty())
            return make_err("EmptyCharLiteral", "empty character literal", 0,
                            static_cast<uint32_t>(body.size()));
        if (out.units.size() > 1)
            return make_err("CharLiteralTooLong",
                            "character literal must contain exactly one value", 0,
                            static_cast<uint32_t>(body.size()));
    }
    return out;
}

namespace {

class Lexer {
public:
    Lexer(std::string_view src, uint32_t file_id)
        : src_(src), file_id_(file_id) {}

    LexResult run() {
        LexResult result;
        while (true) {
            skip_trivia(result);
            if (!result.diags.empty()) break;
            if (at_end()) break;
            lex_token(result);
            if (!result.diags.empty()) break;
        }
        return result;
    }

private:
    std::string_view src_;
    uint32_t file_id_;
    size_t pos_ = 0;
    uint32_t line_ = 1;
    uint32_t col_ = 1;

    // Current token start, recorded by begin_token().
    size_t tok_pos_ = 0;
    uint32_t tok_line_ = 1;
    uint32_t tok_col_ = 1;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek(size_t k = 0) const {
        return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    }
    void bump() {
        if (at_end()) return;
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void begin_token() {
        tok_pos_ = pos_;
        tok_line_ = line_;
        tok_col_ = col_;
    }
    SourceSpan span_from_start() const {
        SourceSpan s;
        s.file_id = file_id_;
        s.begin = static_cast<uint32_t>(tok_pos_);
        s.end = static_cast<uint32_t>(pos_);
        s.start_line = tok_line_;
        s.start_col = tok_col_;
        s.end_line = line_;
        s.end_col = col_;
        return s;
    }
    std::string current_text() const {
        return std::string(src_.substr(tok_pos_, pos_ - tok_pos_));
    }

    void error(LexResult& r, std::string code, std::string msg) {
        r.diags.push_back(Diagnostic::error(std::move(code), std::move(msg), span_from_start()));
    }
    // Translate a slice-relative LexError into a diagnostic at the token.
    void error(LexResult& r, const LexError& e, size_t body_offset) {
        SourceSpan s = span_from_start();
        s.begin = static_cast<uint32_t>(tok_pos_ + body_offset + e.begin);
        s.end = static_cast<uint32_t>(tok_pos_ + body_offset + e.end);
        s.start_col = tok_col_ + static_cast<uint32_t>(body_offset + e.begin);
        s.end_col = tok_col_ + static_cast<uint32_t>(body_offset + e.end);
        s.end_line = s.start_line;
        r.diags.push_back(Diagnostic::error(e.code, e.message, s));
    }

    void push(LexResult& r, Token tok) {
        tok.text = current_text();
        tok.span = span_from_start();
        r.tokens.push_back(std::move(tok));
    }

    void skip_trivia(LexResult& r) {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') bump();
            } else if (c == '/' && peek(1) == '*') {
                begin_token();
                bump();
                bump();
                error(r, "UnknownToken", "block comments are not supported");
                return;
            } else {
                break;
            }
        }
    }

    void lex_token(LexResult& r) {
        begin_token();
        char c = peek();

        // Raw strings: r"..", r#".."#, rb"..", rb#".."# ...
        if (c == 'r') {
            size_t k = 1;
            bool byte_str = false;
            if (peek(1) == 'b') {
                byte_str = true;
                k = 2;
            }
            size_t hashes = 0;
            while (peek(k + hashes) == '#') ++hashes;
            if (peek(k + hashes) == '"') {
                lex_raw_string(r, byte_str, hashes);
                return;
            }
        }
        // Byte literals: b'a', b"str"
        if (c == 'b' && (peek(1) == '\'' || peek(1) == '"')) {
            bump();
            if (peek() == '\'')
                lex_char_like(r, /*byte=*/true);
            else
                lex_string_like(r, /*byte=*/true);
            return;
        }
        if (is_ident_start(c)) {
            while (is_ident_continue(peek())) bump();
            Token tok;
            std::string text = current_text();
            tok.kind = is_frs_keyword(text) ? TokenKind::Keyword : TokenKind::Ident;
            push(r, std::move(tok));
            return;
        }
        if (is_dec_digit(c)) {
            lex_number(r);
            return;
        }
        if (c == '"') {
            lex_string_like(r, /*byte=*/false);
            return;
        }
        if (c == '\'') {
            lex_char_like(r, /*byte=*/false);
            return;
        }
        lex_punct(r);
    }

    void lex_number(LexResult& r) {
        // Consume the maximal literal: digits/underscores, base prefix,
        // fraction, exponent, and a trailing alphanumeric suffix run.
        // decode_number() validates the result.
        int base = 10;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'o' || peek(1) == 'b')) {
            base = peek(1) == 'x' ? 16 : peek(1) == 'o' ? 8 : 2;
            bump();
            bump();
        }
        auto digit_ok = [&](char ch) {
            return base == 16 ? is_hex_digit(ch) : is_dec_digit(ch);
        };
        while (digit_ok(peek()) || peek() == '_') bump();
        if (peek() == '.' && is_dec_digit(peek(1))) {
            bump();
            while (is_dec_digit(peek()) || peek() == '_') bump();
        }
        if (base == 10 && (peek() == 'e' || peek() == 'E')) {
            size_t j = 1;
            if (peek(1) == '+' || peek(1) == '-') j = 2;
            if (is_dec_digit(peek(j))) {
                for (size_t k = 0; k < j; ++k) bump();
                while (is_dec_digit(peek()) || peek() == '_') bump();
            }
        }
        while (is_ident_continue(peek())) bump();

        auto decoded = decode_number(current_text());
        if (auto* err = std::get_if<LexError>(&decoded)) {
            error(r, *err, 0);
            return;
        }
        auto& num = std::get<NumberValue>(decoded);
        Token tok;
        tok.kind = num.is_float ? TokenKind::FloatLit : TokenKind::IntLit;
        tok.int_value = num.int_value;
        tok.float_value = num.float_value;
        tok.suffix = num.suffix;
        push(r, std::move(tok));
    }

    void lex_char_like(LexResult& r, bool byte) {
        assert(peek() == '\'');
        bump();
        size_t body_begin = pos_;
        while (!at_end()) {
            char c = peek();
            if (c == '\'') break;
            if (c == '\n') break;
            if (c == '\\') bump();
            bump();
        }
        if (at_end() || peek() != '\'') {
            error(r, "UnterminatedString", "unterminated character literal");
            return;
        }
        std::string_view body = src_.substr(body_begin, pos_ - body_begin);
        bump(); // closing quote
        auto decoded = decode_escapes(body, byte ? EscapeMode::Byte : EscapeMode::Char);
        if (auto* err = std::get_if<LexError>(&decoded)) {
            error(r, *err, body_begin - tok_pos_);
            return;
        }
        auto& units = std::get<DecodedText>(decoded).units;
        Token tok;
        if (byte) {
            tok.kind = TokenKind::ByteLit;
            tok.int_value = units[0];
            tok.suffix = NumSuffix::U8;
        } else {
            tok.kind = TokenKind::CharLit;
            tok.int_value = units[0];
        }
        push(r, std::move(tok));
    }

    void lex_string_like(LexResult& r, bool byte) {
        assert(peek() == '"');
        bump();
        size_t body_begin = pos_;
        while (!at_end()) {
            char c = peek();
            if (c == '"') break;
            if (c == '\\') bump();
            bump();
        }
        if (at_end()) {
            error(r, "UnterminatedString", "unterminated string literal");
            return;
        }
        std::string_view body = src_.substr(body_begin, pos_ - body_begin);
        bump(); // closing quote
        auto decoded = decode_escapes(body, byte ? EscapeMode::ByteStr : EscapeMode::Str);
        if (auto* err = std::get_if<LexError>(&decoded)) {
            error(r, *err, body_begin - tok_pos_);
            return;
        }
        auto& units = std::get<DecodedText>(decoded).units;
        Token tok;
        tok.kind = byte ? TokenKind::ByteStrLit : TokenKind::StrLit;
        for (uint32_t u : units) {
            if (byte)
                tok.str_value.push_back(static_cast<char>(u));
            else
                tok.str_value += utf8_encode(u);
        }
        push(r, std::move(tok));
    }

    void lex_raw_string(LexResult& r, bool byte_str, size_t hashes) {
        bump(); // r
        if (byte_str) bump(); // b
        if (hashes > 255) {
            error(r, "RawStringDelimiterTooLong",
                  "raw string delimiter exceeds 255 '#' characters");
            return;
        }
        for (size_t k = 0; k < hashes; ++k) bump();
        bump(); // opening quote
        size_t body_begin = pos_;
        size_t body_end = 0;
        bool closed = false;
        while (!at_end()) {
            if (peek() == '"') {
                size_t k = 0;
                while (k < hashes && peek(1 + k) == '#') ++k;
                if (k == hashes) {
                    body_end = pos_;
                    bump();
                    for (size_t h = 0; h < hashes; ++h) bump();
                    closed = true;
                    break;
                }
            }
            bump();
        }
        if (!closed) {
            error(r, "UnterminatedRawString", "unterminated raw string literal");
            return;
        }
        Token tok;
        tok.kind = byte_str ? TokenKind::ByteStrLit : TokenKind::StrLit;
        tok.str_value = std::string(src_.substr(body_begin, body_end - body_begin));
        push(r, std::move(tok));
    }

    void lex_punct(LexResult& r) {
        char c = peek();
        switch (c) {
            case '(': case ')': case '[': case ']': case '{': case '}': {
                bump();
                Token tok;
                tok.kind = TokenKind::Delimiter;
                push(r, std::move(tok));
                return;
            }
            default:
                break;
        }
        static const std::array<std::string_view, 22> kMulti = {
            "<<=", ">>=", "::", "->", "=>", "==", "!=", "<=", ">=", "&&",
            "||", "<<", ">>", "..", "+=", "-=", "*=", "/=", "%=", "&=",
            "|=", "^=",
        };
        std::string_view rest = src_.substr(pos_);
        for (auto op : kMulti) {
            if (rest.substr(0, op.size()) == op) {
                for (size_t k = 0; k < op.size(); ++k) bump();
                Token tok;
                tok.kind = TokenKind::Punct;
                push(r, std::move(tok));
                return;
            }
        }
        static const std::string_view kSingle = "+-*/%<>=!&|^.,;:@#$";
        if (kSingle.find(c) != std::string_view::npos) {
            bump();
            Token tok;
            tok.kind = TokenKind::Punct;
            push(r, std::move(tok));
            return;
        }
        bump();
        error(r, "UnknownToken", "unrecognized character");
    }
};

} // namespace

LexResult tokenize(std::string_view source, uint32_t file_id) {
    return Lexer(source, file_id).run();
}

} // namespace frs
