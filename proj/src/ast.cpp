#include "frs/ast.hpp"

namespace frs::ast {

std::string_view binop_symbol(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Rem: return "%";
        case BinOp::Shl: return "<<";
        case BinOp::Shr: return ">>";
        case BinOp::BitAnd: return "&";
        case BinOp::BitXor: return "^";
        case BinOp::BitOr: return "|";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Gt: return ">";
        case BinOp::Le: return "<=";
        case BinOp::Ge: return ">=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

std::string_view unop_symbol(UnOp op) {
    switch (op) {
        case UnOp::Neg: return "-";
        case UnOp::Not: return "!";
        case UnOp::Deref: return "*";
        case UnOp::Ref: return "&";
        case UnOp::RefMut: return "&mut ";
    }
    return "?";
}

std::string PathExpr::joined() const {
    std::string out;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (i) out += "::";
        out += segments[i];
    }
    return out;
}

bool is_block_like(const Expr& e) {
    return is<BlockExpr>(e) || is<IfExpr>(e) || is<MatchExpr>(e) ||
           is<LoopExpr>(e) || is<WhileExpr>(e) || is<ForExpr>(e);
}

} // namespace frs::ast
