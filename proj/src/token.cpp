#include "frs/token.hpp"

#include "frs/lexer.hpp"

#include <charconv>
#include <sstream>

namespace frs {

Token Token::ident(std::string name) {
    Token t;
    t.kind = TokenKind::Ident;
    t.text = std::move(name);
    return t;
}

Token Token::keyword(std::string name) {
    Token t;
    t.kind = TokenKind::Keyword;
    t.text = std::move(name);
    return t;
}

Token Token::punct(std::string p) {
    Token t;
    t.kind = TokenKind::Punct;
    t.text = std::move(p);
    return t;
}

Token Token::delim(char d) {
    Token t;
    t.kind = TokenKind::Delimiter;
    t.text = std::string(1, d);
    return t;
}

Token Token::int_lit(uint64_t value) {
    Token t;
    t.kind = TokenKind::IntLit;
    t.int_value = value;
    t.text = std::to_string(value);
    return t;
}

namespace {

std::string_view kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::IntLit: return "IntLit";
        case TokenKind::FloatLit: return "FloatLit";
        case TokenKind::CharLit: return "CharLit";
        case TokenKind::ByteLit: return "ByteLit";
        case TokenKind::StrLit: return "StrLit";
        case TokenKind::ByteStrLit: return "ByteStrLit";
        case TokenKind::Ident: return "Ident";
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::Punct: return "Punct";
        case TokenKind::Delimiter: return "Delimiter";
    }
    return "?";
}

std::string float_repr(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\0': out += "\\0"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string dump_token(const Token& tok) {
    std::ostringstream os;
    os << tok.span.start_line << ':' << tok.span.start_col << ' '
       << kind_name(tok.kind) << ' ' << tok.text << " → ";
    switch (tok.kind) {
        case TokenKind::IntLit:
            os << tok.int_value << ' ' << suffix_name(tok.suffix);
            break;
        case TokenKind::FloatLit:
            os << float_repr(tok.float_value) << ' ' << suffix_name(tok.suffix);
            break;
        case TokenKind::CharLit: {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(tok.int_value));
            os << buf;
            break;
        }
        case TokenKind::ByteLit:
            os << tok.int_value << " u8";
            break;
        case TokenKind::StrLit:
            os << quoted(tok.str_value);
            break;
        case TokenKind::ByteStrLit: {
            os << '[';
            for (size_t i = 0; i < tok.str_value.size(); ++i) {
                if (i) os << ", ";
                os << static_cast<unsigned>(static_cast<unsigned char>(tok.str_value[i]));
            }
            os << ']';
            break;
        }
        default:
            os << '-';
    }
    return os.str();
}

std::string dump_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        out += dump_token(t);
        out += '\n';
    }
    return out;
}

} // namespace frs
