#pragma once

#include "frs/ast.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace frs {

struct Value;
/// Every storage location (binding, vector element, record field, box
/// interior) is one shared cell; references alias cells.
using Slot = std::shared_ptr<Value>;

enum class IntWidth : uint8_t { I8, I16, I32, I64, U8, U16, U32, U64, Untyped };
enum class FloatWidth : uint8_t { F32, F64, Untyped };

bool int_width_signed(IntWidth w);
unsigned int_width_bits(IntWidth w);
std::string_view int_width_name(IntWidth w);

struct UnitVal {};
struct BoolVal {
    bool value = false;
};
/// Two's-complement integer; `bits` is truncated to the width.
struct IntVal {
    uint64_t bits = 0;
    IntWidth width = IntWidth::Untyped;
};
struct FloatVal {
    double value = 0.0;
    FloatWidth width = FloatWidth::Untyped;
};
struct CharVal {
    uint32_t scalar = 0;
};
struct StrVal {
    std::string text;
};
struct TupleVal {
    std::vector<Slot> elems;
};
struct RecordVal {
    std::string type_name;
    std::vector<std::pair<std::string, Slot>> fields;
};
struct VariantVal {
    std::string enum_name;
    std::string variant;
    std::vector<Slot> payload;
};
struct VectorVal {
    std::vector<Slot> elems;
};
struct Env;
using EnvPtr = std::shared_ptr<Env>;
struct ClosureVal {
    const ast::LambdaExpr* lambda = nullptr;
    EnvPtr env;
};
/// Uniquely-owned heap cell; copies share the cell (a moved box aliases
/// its source, which the checker forbids using).
struct BoxVal {
    Slot inner;
};
/// Reference-counted immutable cell.
struct RcVal {
    Slot inner;
};
struct RefVal {
    Slot target;
    bool is_mut = false;
};
struct RangeIterVal {
    int64_t next = 0;
    int64_t end = 0;
};

struct Value {
    std::variant<UnitVal, BoolVal, IntVal, FloatVal, CharVal, StrVal, TupleVal,
                 RecordVal, VariantVal, VectorVal, ClosureVal, BoxVal, RcVal, RefVal,
                 RangeIterVal>
        v;
};

struct Env {
    EnvPtr parent;
    std::vector<std::pair<std::string, Slot>> vars;

    Slot* find(const std::string& name) {
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            if (it->first == name) return &it->second;
        if (parent) return parent->find(name);
        return nullptr;
    }
};

template <class T>
bool is(const Value& v) {
    return std::holds_alternative<T>(v.v);
}
template <class T>
const T* as(const Value& v) {
    return std::get_if<T>(&v.v);
}
template <class T>
T* as(Value& v) {
    return std::get_if<T>(&v.v);
}

Slot make_slot(Value v);

/// Value-semantics copy: aggregates copy deeply into fresh cells; boxes,
/// shared refs, references and closures copy shallowly (they are
/// pointers). Wrap a width's worth of bits.
Value copy_value(const Value& v);

uint64_t truncate_to_width(uint64_t bits, IntWidth w);
int64_t sign_extend(uint64_t bits, IntWidth w);

/// Rendering used by the print builtins and diagnostics.
std::string render_value(const Value& v);

} // namespace frs
