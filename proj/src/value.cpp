#include "frs/value.hpp"

#include "frs/lexer.hpp"

#include <charconv>

namespace frs {

bool int_width_signed(IntWidth w) {
    switch (w) {
        case IntWidth::I8:
        case IntWidth::I16:
        case IntWidth::I32:
        case IntWidth::I64:
        case IntWidth::Untyped:
            return true;
        default:
            return false;
    }
}

unsigned int_width_bits(IntWidth w) {
    switch (w) {
        case IntWidth::I8:
        case IntWidth::U8: return 8;
        case IntWidth::I16:
        case IntWidth::U16: return 16;
        case IntWidth::I32:
        case IntWidth::U32: return 32;
        default: return 64;
    }
}

std::string_view int_width_name(IntWidth w) {
    switch (w) {
        case IntWidth::I8: return "i8";
        case IntWidth::I16: return "i16";
        case IntWidth::I32: return "i32";
        case IntWidth::I64: return "i64";
        case IntWidth::U8: return "u8";
        case IntWidth::U16: return "u16";
        case IntWidth::U32: return "u32";
        case IntWidth::U64: return "u64";
        case IntWidth::Untyped: return "int";
    }
    return "int";
}

uint64_t truncate_to_width(uint64_t bits, IntWidth w) {
    unsigned n = int_width_bits(w);
    if (n == 64) return bits;
    return bits & ((uint64_t{1} << n) - 1);
}

int64_t sign_extend(uint64_t bits, IntWidth w) {
    unsigned n = int_width_bits(w);
    if (n == 64) return static_cast<int64_t>(bits);
    uint64_t sign_bit = uint64_t{1} << (n - 1);
    uint64_t mask = (uint64_t{1} << n) - 1;
    uint64_t v = bits & mask;
    if (v & sign_bit) v |= ~mask;
    return static_cast<int64_t>(v);
}

Slot make_slot(Value v) { return std::make_shared<Value>(std::move(v)); }

Value copy_value(const Value& v) {
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, TupleVal>) {
                TupleVal out;
                for (const auto& s : n.elems) out.elems.push_back(make_slot(copy_value(*s)));
                return Value{std::move(out)};
            } else if constexpr (std::is_same_v<T, RecordVal>) {
                RecordVal out;
                out.type_name = n.type_name;
                for (const auto& [f, s] : n.fields)
                    out.fields.emplace_back(f, make_slot(copy_value(*s)));
                return Value{std::move(out)};
            } else if constexpr (std::is_same_v<T, VariantVal>) {
                VariantVal out;
                out.enum_name = n.enum_name;
                out.variant = n.variant;
                for (const auto& s : n.payload) out.payload.push_back(make_slot(copy_value(*s)));
                return Value{std::move(out)};
            } else if constexpr (std::is_same_v<T, VectorVal>) {
                VectorVal out;
                for (const auto& s : n.elems) out.elems.push_back(make_slot(copy_value(*s)));
                return Value{std::move(out)};
            } else {
                return Value{n}; // scalars and pointer-like values
            }
        },
        v.v);
}

namespace {

std::string float_repr(double value, FloatWidth width) {
    char buf[64];
    if (width == FloatWidth::F32) {
        float f = static_cast<float>(value);
        auto res = std::to_chars(buf, buf + sizeof(buf), f);
        return std::string(buf, res.ptr);
    }
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void render(const Value& v, std::string& out, int depth) {
    if (depth > 64) {
        out += "...";
        return;
    }
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, UnitVal>) {
                out += "()";
            } else if constexpr (std::is_same_v<T, BoolVal>) {
                out += n.value ? "true" : "false";
            } else if constexpr (std::is_same_v<T, IntVal>) {
                if (int_width_signed(n.width))
                    out += std::to_string(sign_extend(n.bits, n.width));
                else
                    out += std::to_string(truncate_to_width(n.bits, n.width));
            } else if constexpr (std::is_same_v<T, FloatVal>) {
                out += float_repr(n.value, n.width);
            } else if constexpr (std::is_same_v<T, CharVal>) {
                out += utf8_encode(n.scalar);
            } else if constexpr (std::is_same_v<T, StrVal>) {
                out += n.text;
            } else if constexpr (std::is_same_v<T, TupleVal>) {
                out += '(';
                for (size_t i = 0; i < n.elems.size(); ++i) {
                    if (i) out += ", ";
                    render(*n.elems[i], out, depth + 1);
                }
                out += ')';
            } else if constexpr (std::is_same_v<T, RecordVal>) {
                out += n.type_name;
                out += " { ";
                for (size_t i = 0; i < n.fields.size(); ++i) {
                    if (i) out += ", ";
                    out += n.fields[i].first;
                    out += ": ";
                    render(*n.fields[i].second, out, depth + 1);
                }
                out += " }";
            } else if constexpr (std::is_same_v<T, VariantVal>) {
                out += n.variant;
                if (!n.payload.empty()) {
                    out += '(';
                    for (size_t i = 0; i < n.payload.size(); ++i) {
                        if (i) out += ", ";
                        render(*n.payload[i], out, depth + 1);
                    }
                    out += ')';
                }
            } else if constexpr (std::is_same_v<T, VectorVal>) {
                out += '[';
                for (size_t i = 0; i < n.elems.size(); ++i) {
                    if (i) out += ", ";
                    render(*n.elems[i], out, depth + 1);
                }
                out += ']';
            } else if constexpr (std::is_same_v<T, ClosureVal>) {
                out += "<closure>";
            } else if constexpr (std::is_same_v<T, BoxVal>) {
                render(*n.inner, out, depth + 1);
            } else if constexpr (std::is_same_v<T, RcVal>) {
                render(*n.inner, out, depth + 1);
            } else if constexpr (std::is_same_v<T, RefVal>) {
                render(*n.target, out, depth + 1);
            } else {
                static_assert(std::is_same_v<T, RangeIterVal>);
                out += "range(" + std::to_string(n.next) + ", " + std::to_string(n.end) + ")";
            }
        },
        v.v);
}

} // namespace

std::string render_value(const Value& v) {
    std::string out;
    render(v, out, 0);
    return out;
}

} // namespace frs
