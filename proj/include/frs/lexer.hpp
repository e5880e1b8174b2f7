#pragma once

#include "frs/diagnostic.hpp"
#include "frs/token.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace frs {

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diags;
    bool ok() const { return diags.empty(); }
};

/// Tokenize a whole source text. Comments (`//` to end of line) and
/// whitespace are skipped; everything else becomes a token whose span
/// covers exactly its source slice. Lexing stops at the first error.
LexResult tokenize(std::string_view source, uint32_t file_id = 0);

/// Error local to a decoded slice; offsets are relative to the slice.
struct LexError {
    std::string code;
    std::string message;
    uint32_t begin = 0;
    uint32_t end = 0;
};

struct NumberValue {
    bool is_float = false;
    uint64_t int_value = 0; // magnitude mod 2^64
    double float_value = 0.0;
    NumSuffix suffix = NumSuffix::None;
};

/// Decode a complete numeric literal: optional base prefix 0x/0o/0b,
/// digits with underscores, optional fraction/exponent, optional width
/// suffix. Underscores are ignored in every digit group including the
/// exponent; `e`/`E` are equivalent; base prefixes are integer-only.
std::variant<NumberValue, LexError> decode_number(std::string_view text);

enum class EscapeMode { Char, Byte, Str, ByteStr };

struct DecodedText {
    /// Unicode scalars (Char/Str) or bytes (Byte/ByteStr), in order.
    std::vector<uint32_t> units;
};

/// Decode the body between quotes. Recognized escapes: \xNN, \\, \', \",
/// \0, \t, \n, \r, and in Char/Str mode \uNNNN and \UNNNNNNNN. Anything
/// else is InvalidEscape. Char/Byte modes require exactly one unit.
std::variant<DecodedText, LexError> decode_escapes(std::string_view body, EscapeMode mode);

std::string utf8_encode(uint32_t scalar);

} // namespace frs
