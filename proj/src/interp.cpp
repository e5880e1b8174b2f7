#include "frs/interp.hpp"

#include "frs/lexer.hpp"
#include "frs/parser.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <pthread.h>

namespace frs {

using namespace ast;

namespace {

constexpr int kMaxFrames = 10'000;

struct EvalAbort {
    Diagnostic diag;
};
struct BreakUnwind {};
struct ReturnUnwind {
    Value value;
};

[[noreturn]] void fail(std::string code, std::string msg, SourceSpan span) {
    throw EvalAbort{Diagnostic::error(std::move(code), std::move(msg), span)};
}

std::string type_desc(const Value& v) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, UnitVal>) return "()";
            else if constexpr (std::is_same_v<T, BoolVal>) return "bool";
            else if constexpr (std::is_same_v<T, IntVal>)
                return std::string(int_width_name(n.width));
            else if constexpr (std::is_same_v<T, FloatVal>)
                return n.width == FloatWidth::F32 ? "f32" : "f64";
            else if constexpr (std::is_same_v<T, CharVal>) return "char";
            else if constexpr (std::is_same_v<T, StrVal>) return "str";
            else if constexpr (std::is_same_v<T, TupleVal>) return "tuple";
            else if constexpr (std::is_same_v<T, RecordVal>) return n.type_name;
            else if constexpr (std::is_same_v<T, VariantVal>) return n.enum_name;
            else if constexpr (std::is_same_v<T, VectorVal>) return "Vec";
            else if constexpr (std::is_same_v<T, ClosureVal>) return "closure";
            else if constexpr (std::is_same_v<T, BoxVal>) return "Box";
            else if constexpr (std::is_same_v<T, RcVal>) return "Rc";
            else if constexpr (std::is_same_v<T, RefVal>) return "reference";
            else return "iterator";
        },
        v.v);
}

IntWidth width_from_suffix(NumSuffix s) {
    switch (s) {
        case NumSuffix::I: return IntWidth::I64;
        case NumSuffix::U: return IntWidth::U64;
        case NumSuffix::I8: return IntWidth::I8;
        case NumSuffix::U8: return IntWidth::U8;
        case NumSuffix::I16: return IntWidth::I16;
        case NumSuffix::U16: return IntWidth::U16;
        case NumSuffix::I32: return IntWidth::I32;
        case NumSuffix::U32: return IntWidth::U32;
        case NumSuffix::I64: return IntWidth::I64;
        case NumSuffix::U64: return IntWidth::U64;
        default: return IntWidth::Untyped;
    }
}

IntWidth combine_widths(IntWidth a, IntWidth b, SourceSpan span) {
    if (a == IntWidth::Untyped) return b;
    if (b == IntWidth::Untyped) return a;
    if (a == b) return a;
    fail("RT-TYPE",
         std::string("mismatched integer widths ") + std::string(int_width_name(a)) +
             " and " + std::string(int_width_name(b)),
         span);
}

FloatWidth combine_fwidths(FloatWidth a, FloatWidth b) {
    if (a == FloatWidth::Untyped) return b;
    if (b == FloatWidth::Untyped) return a;
    return a == b ? a : FloatWidth::F64;
}

Value int_value(uint64_t bits, IntWidth w) {
    return Value{IntVal{truncate_to_width(bits, w), w}};
}

Value bool_value(bool b) { return Value{BoolVal{b}}; }

// Two's-complement arithmetic at the combined width.
Value int_binop(std::string_view op, IntVal a, IntVal b, SourceSpan span) {
    IntWidth w = combine_widths(a.width, b.width, span);
    uint64_t ua = truncate_to_width(a.bits, w);
    uint64_t ub = truncate_to_width(b.bits, w);
    bool sgn = int_width_signed(w);
    int64_t sa = sign_extend(a.bits, w);
    int64_t sb = sign_extend(b.bits, w);

    if (op == "add") return int_value(ua + ub, w);
    if (op == "sub") return int_value(ua - ub, w);
    if (op == "mul") return int_value(ua * ub, w);
    if (op == "div" || op == "rem") {
        if (ub == 0) fail("RT-DIV-ZERO", "division by zero", span);
        if (sgn) {
            int64_t min = sign_extend(uint64_t{1} << (int_width_bits(w) - 1), w);
            if (sa == min && sb == -1)
                return int_value(op == "div" ? static_cast<uint64_t>(min) : 0, w);
            int64_t r = op == "div" ? sa / sb : sa % sb;
            return int_value(static_cast<uint64_t>(r), w);
        }
        return int_value(op == "div" ? ua / ub : ua % ub, w);
    }
    if (op == "bitand") return int_value(ua & ub, w);
    if (op == "bitor") return int_value(ua | ub, w);
    if (op == "bitxor") return int_value(ua ^ ub, w);
    if (op == "shl" || op == "shr") {
        unsigned amount = static_cast<unsigned>(ub) & (int_width_bits(w) - 1);
        if (op == "shl") return int_value(ua << amount, w);
        if (sgn) return int_value(static_cast<uint64_t>(sa >> amount), w);
        return int_value(ua >> amount, w);
    }
    if (op == "eq") return bool_value(ua == ub);
    if (op == "ne") return bool_value(ua != ub);
    bool lt = sgn ? sa < sb : ua < ub;
    bool gt = sgn ? sa > sb : ua > ub;
    if (op == "lt") return bool_value(lt);
    if (op == "gt") return bool_value(gt);
    if (op == "le") return bool_value(!gt);
    if (op == "ge") return bool_value(!lt);
    fail("RT-NO-METHOD", "no integer method '" + std::string(op) + "'", span);
}

Value float_binop(std::string_view op, FloatVal a, FloatVal b, SourceSpan span) {
    FloatWidth w = combine_fwidths(a.width, b.width);
    double x = a.value;
    double y = b.value;
    auto wrap = [&](double r) {
        if (w == FloatWidth::F32) r = static_cast<float>(r);
        return Value{FloatVal{r, w}};
    };
    if (op == "add") return wrap(x + y);
    if (op == "sub") return wrap(x - y);
    if (op == "mul") return wrap(x * y);
    if (op == "div") return wrap(x / y);
    if (op == "rem") return wrap(std::fmod(x, y));
    if (op == "eq") return bool_value(x == y);
    if (op == "ne") return bool_value(x != y);
    if (op == "lt") return bool_value(x < y);
    if (op == "gt") return bool_value(x > y);
    if (op == "le") return bool_value(x <= y);
    if (op == "ge") return bool_value(x >= y);
    fail("RT-NO-METHOD", "no float method '" + std::string(op) + "'", span);
}

std::optional<bool> value_eq(const Value& a, const Value& b);

std::optional<bool> seq_eq(const std::vector<Slot>& a, const std::vector<Slot>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        auto r = value_eq(*a[i], *b[i]);
        if (!r) return std::nullopt;
        if (!*r) return false;
    }
    return true;
}

std::optional<bool> value_eq(const Value& a, const Value& b) {
    if (const auto* ia = as<IntVal>(a)) {
        const auto* ib = as<IntVal>(b);
        if (!ib) return std::nullopt;
        IntWidth w = ia->width == IntWidth::Untyped ? ib->width : ia->width;
        return truncate_to_width(ia->bits, w) == truncate_to_width(ib->bits, w);
    }
    if (const auto* fa = as<FloatVal>(a)) {
        const auto* fb = as<FloatVal>(b);
        if (!fb) return std::nullopt;
        return fa->value == fb->value;
    }
    if (const auto* ba = as<BoolVal>(a)) {
        const auto* bb = as<BoolVal>(b);
        if (!bb) return std::nullopt;
        return ba->value == bb->value;
    }
    if (const auto* ca = as<CharVal>(a)) {
        const auto* cb = as<CharVal>(b);
        if (!cb) return std::nullopt;
        return ca->scalar == cb->scalar;
    }
    if (const auto* sa = as<StrVal>(a)) {
        const auto* sb = as<StrVal>(b);
        if (!sb) return std::nullopt;
        return sa->text == sb->text;
    }
    if (is<UnitVal>(a)) return is<UnitVal>(b) ? std::optional<bool>(true) : std::nullopt;
    if (const auto* ta = as<TupleVal>(a)) {
        const auto* tb = as<TupleVal>(b);
        if (!tb) return std::nullopt;
        return seq_eq(ta->elems, tb->elems);
    }
    if (const auto* va = as<VectorVal>(a)) {
        const auto* vb = as<VectorVal>(b);
        if (!vb) return std::nullopt;
        return seq_eq(va->elems, vb->elems);
    }
    return std::nullopt;
}

struct FrameGuard {
    int& depth;
    explicit FrameGuard(int& d, SourceSpan span) : depth(d) {
        if (++depth > kMaxFrames)
            fail("RT-STACK-OVERFLOW",
                 "recursion exceeded " + std::to_string(kMaxFrames) + " activation frames",
                 span);
    }
    ~FrameGuard() { --depth; }
};

class Interpreter {
public:
    Interpreter(const Program& program, std::ostream& out) : out_(out) {
        register_builtin_traits();
        for (const auto& item : program.items) register_item(item);
        if (!variants_.count("None")) variants_["None"] = {"Option", 0};
        if (!variants_.count("Some")) variants_["Some"] = {"Option", 1};
    }

    RunOutcome run(const std::string& entry) {
        auto it = functions_.find(entry);
        if (it == functions_.end() || !it->second->body) {
            RunOutcome outcome;
            outcome.exit_status = 1;
            outcome.error = Diagnostic::error(
                "RT-UNKNOWN-IDENT", "no entry function '" + entry + "'", SourceSpan{});
            return outcome;
        }
        try {
            call_function(*it->second, {}, it->second->span);
        } catch (EvalAbort& abort) {
            RunOutcome outcome;
            outcome.exit_status = 1;
            outcome.error = std::move(abort.diag);
            return outcome;
        }
        return RunOutcome{};
    }

private:
    std::ostream& out_;
    ParseResult builtin_defs_;

    struct TypeImpls {
        std::vector<const FunctionDef*> inherent;
        std::vector<std::pair<std::string, const FunctionDef*>> trait_methods;
        std::vector<std::string> traits;
    };
    std::map<std::string, TypeImpls> impls_;
    std::map<std::string, const TraitDef*> traits_;
    std::map<std::string, const FunctionDef*> functions_;
    std::map<std::string, const StructDef*> structs_;
    std::map<std::string, std::pair<std::string, size_t>> variants_;
    int depth_ = 0;

    void register_builtin_traits() {
        static const char* kSource =
            "trait PartialEq {\n"
            "    fn eq(&self, other: &Self) -> bool;\n"
            "    fn ne(&self, other: &Self) -> bool { !self.eq(other) }\n"
            "}\n";
        auto lexed = tokenize(kSource);
        builtin_defs_ = parse_program(std::move(lexed.tokens));
        for (const auto& item : builtin_defs_.program.items)
            if (const auto* trait = std::get_if<TraitDef>(&item.node))
                traits_[trait->name] = trait;
    }

    void register_item(const Item& item) {
        if (const auto* fn = std::get_if<FunctionDef>(&item.node)) {
            functions_.emplace(fn->name, fn);
        } else if (const auto* s = std::get_if<StructDef>(&item.node)) {
            structs_.emplace(s->name, s);
        } else if (const auto* e = std::get_if<EnumDef>(&item.node)) {
            for (const auto& v : e->variants)
                variants_.emplace(v.name, std::make_pair(e->name, v.payload.size()));
        } else if (const auto* t = std::get_if<TraitDef>(&item.node)) {
            traits_[t->name] = t;
        } else if (const auto* impl = std::get_if<ImplBlock>(&item.node)) {
            TypeImpls& entry = impls_[impl->type_name];
            if (impl->trait_name.empty()) {
                for (const auto& m : impl->methods) entry.inherent.push_back(&m);
            } else {
                entry.traits.push_back(impl->trait_name);
                for (const auto& m : impl->methods)
                    entry.trait_methods.emplace_back(impl->trait_name, &m);
            }
        }
    }

    // --------------------------------------------------------- helpers

    std::vector<std::string> type_candidates(const Value& v) {
        if (const auto* i = as<IntVal>(v)) {
            switch (i->width) {
                case IntWidth::Untyped: return {"int"};
                case IntWidth::I64: return {"i64", "int"};
                case IntWidth::U64: return {"u64", "uint"};
                default: return {std::string(int_width_name(i->width))};
            }
        }
        if (const auto* f = as<FloatVal>(v))
            return {f->width == FloatWidth::F32 ? "f32" : "f64"};
        if (is<BoolVal>(v)) return {"bool"};
        if (is<CharVal>(v)) return {"char"};
        if (is<StrVal>(v)) return {"str"};
        if (is<VectorVal>(v)) return {"Vec"};
        if (const auto* r = as<RecordVal>(v)) return {r->type_name};
        if (const auto* e = as<VariantVal>(v)) return {e->enum_name};
        return {};
    }

    Value make_option(std::optional<Value> payload) {
        VariantVal v;
        v.enum_name = "Option";
        if (payload) {
            v.variant = "Some";
            v.payload.push_back(make_slot(std::move(*payload)));
        } else {
            v.variant = "None";
        }
        return Value{std::move(v)};
    }

    // ---------------------------------------------------- method calls

    Value dispatch_method(Slot receiver, const std::string& name,
                          std::vector<Value> args, SourceSpan span) {
        Slot cur = std::move(receiver);
        for (int hops = 0; hops < 256; ++hops) {
            if (auto builtin = builtin_method(cur, name, args, span)) return std::move(*builtin);

            const Value& val = *cur;
            for (const auto& type_name : type_candidates(val)) {
                auto impl_it = impls_.find(type_name);
                if (impl_it == impls_.end()) continue;
                const TypeImpls& impls = impl_it->second;
                for (const auto* m : impls.inherent)
                    if (m->name == name) return call_method(*m, cur, std::move(args), span);
                std::vector<const FunctionDef*> found;
                for (const auto& [trait, m] : impls.trait_methods)
                    if (m->name == name) found.push_back(m);
                if (found.empty()) {
                    // fall back to trait default bodies
                    for (const auto& trait_name : impls.traits) {
                        auto trait_it = traits_.find(trait_name);
                        if (trait_it == traits_.end()) continue;
                        for (const auto& m : trait_it->second->methods)
                            if (m.name == name && m.body) found.push_back(&m);
                    }
                }
                if (found.size() > 1)
                    fail("RT-AMBIGUOUS-METHOD",
                         "method '" + name + "' on '" + type_name +
                             "' is provided by more than one trait",
                         span);
                if (found.size() == 1)
                    return call_method(*found[0], cur, std::move(args), span);
            }

            if (const auto* r = as<RefVal>(val)) {
                cur = r->target;
                continue;
            }
            if (const auto* b = as<BoxVal>(val)) {
                cur = b->inner;
                continue;
            }
            if (const auto* rc = as<RcVal>(val)) {
                cur = rc->inner;
                continue;
            }
            fail("RT-NO-METHOD",
                 "no method '" + name + "' for value of type '" + type_desc(val) + "'", span);
        }
        fail("RT-TYPE", "reference chain too deep", span);
    }

    std::optional<Value> builtin_method(const Slot& cur, const std::string& name,
                                        std::vector<Value>& args, SourceSpan span) {
        Value& val = *cur;
        auto unary = [&](auto fn) -> std::optional<Value> {
            if (!args.empty())
                fail("RT-ARITY", "method '" + name + "' takes no arguments", span);
            return fn();
        };
        if (auto* i = as<IntVal>(val)) {
            static const char* kBinary[] = {"eq", "ne", "lt", "gt", "le", "ge",
                                            "add", "sub", "mul", "div", "rem",
                                            "bitand", "bitor", "bitxor", "shl", "shr"};
            for (const char* op : kBinary) {
                if (name != op) continue;
                if (args.size() != 1)
                    fail("RT-ARITY", "method '" + name + "' takes one argument", span);
                const auto* rhs = as<IntVal>(args[0]);
                if (!rhs)
                    fail("RT-TYPE",
                         "integer '" + name + "' needs an integer argument, got '" +
                             type_desc(args[0]) + "'",
                         span);
                return int_binop(name, *i, *rhs, span);
            }
            if (name == "neg")
                return unary([&] { return int_value(0 - i->bits, i->width); });
            if (name == "not")
                return unary([&] { return int_value(~i->bits, i->width); });
            return std::nullopt;
        }
        if (auto* f = as<FloatVal>(val)) {
            static const char* kBinary[] = {"eq", "ne", "lt", "gt", "le", "ge",
                                            "add", "sub", "mul", "div", "rem"};
            for (const char* op : kBinary) {
                if (name != op) continue;
                if (args.size() != 1)
                    fail("RT-ARITY", "method '" + name + "' takes one argument", span);
                const auto* rhs = as<FloatVal>(args[0]);
                if (!rhs)
                    fail("RT-TYPE", "float '" + name + "' needs a float argument", span);
                return float_binop(name, *f, *rhs, span);
            }
            if (name == "neg")
                return unary([&] { return Value{FloatVal{-f->value, f->width}}; });
            return std::nullopt;
        }
        if (auto* b = as<BoolVal>(val)) {
            if ((name == "eq" || name == "ne") && args.size() == 1) {
                const auto* rhs = as<BoolVal>(args[0]);
                if (!rhs) fail("RT-TYPE", "bool comparison needs a bool argument", span);
                return bool_value(name == "eq" ? b->value == rhs->value
                                               : b->value != rhs->value);
            }
            if (name == "not") return unary([&] { return bool_value(!b->value); });
            return std::nullopt;
        }
        if (auto* c = as<CharVal>(val)) {
            static const char* kCmp[] = {"eq", "ne", "lt", "gt", "le", "ge"};
            for (const char* op : kCmp) {
                if (name != op) continue;
                const auto* rhs = args.size() == 1 ? as<CharVal>(args[0]) : nullptr;
                if (!rhs) fail("RT-TYPE", "char comparison needs a char argument", span);
                uint32_t a = c->scalar;
                uint32_t b2 = rhs->scalar;
                if (name == "eq") return bool_value(a == b2);
                if (name == "ne") return bool_value(a != b2);
                if (name == "lt") return bool_value(a < b2);
                if (name == "gt") return bool_value(a > b2);
                if (name == "le") return bool_value(a <= b2);
                return bool_value(a >= b2);
            }
            return std::nullopt;
        }
        if (auto* s = as<StrVal>(val)) {
            static const char* kCmp[] = {"eq", "ne", "lt", "gt", "le", "ge"};
            for (const char* op : kCmp) {
                if (name != op) continue;
                const auto* rhs = args.size() == 1 ? as<StrVal>(args[0]) : nullptr;
                if (!rhs) fail("RT-TYPE", "string comparison needs a string argument", span);
                int c = s->text.compare(rhs->text);
                if (name == "eq") return bool_value(c == 0);
                if (name == "ne") return bool_value(c != 0);
                if (name == "lt") return bool_value(c < 0);
                if (name == "gt") return bool_value(c > 0);
                if (name == "le") return bool_value(c <= 0);
                return bool_value(c >= 0);
            }
            return std::nullopt;
        }
        if (is<TupleVal>(val) || is<VectorVal>(val)) {
            if ((name == "eq" || name == "ne") && args.size() == 1) {
                auto r = value_eq(val, args[0]);
                if (!r)
                    fail("RT-NO-METHOD",
                         "cannot compare values of type '" + type_desc(val) + "' and '" +
                             type_desc(args[0]) + "'",
                         span);
                return bool_value(name == "eq" ? *r : !*r);
            }
            if (is<VectorVal>(val) && (name == "get_mut" || name == "get")) {
                if (args.size() != 1 || !is<IntVal>(args[0]))
                    fail("RT-ARITY", "'" + name + "' takes one integer index", span);
                auto& vec = *as<VectorVal>(val);
                int64_t idx = sign_extend(as<IntVal>(args[0])->bits, as<IntVal>(args[0])->width);
                if (idx < 0 || static_cast<size_t>(idx) >= vec.elems.size())
                    fail("RT-INDEX",
                         "index " + std::to_string(idx) + " out of bounds for length " +
                             std::to_string(vec.elems.size()),
                         span);
                return Value{RefVal{vec.elems[static_cast<size_t>(idx)], name == "get_mut"}};
            }
            return std::nullopt;
        }
        if (auto* iter = as<RangeIterVal>(val)) {
            if (name == "next") {
                if (!args.empty()) fail("RT-ARITY", "'next' takes no arguments", span);
                if (iter->next >= iter->end) return make_option(std::nullopt);
                Value v = Value{IntVal{static_cast<uint64_t>(iter->next), IntWidth::Untyped}};
                ++iter->next;
                return make_option(std::move(v));
            }
            return std::nullopt;
        }
        if (name == "deref") {
            if (const auto* r = as<RefVal>(val))
                return unary([&] { return copy_value(*r->target); });
            if (const auto* b = as<BoxVal>(val))
                return unary([&] { return copy_value(*b->inner); });
            if (const auto* rc = as<RcVal>(val))
                return unary([&] { return copy_value(*rc->inner); });
        }
        return std::nullopt;
    }

    Value call_method(const FunctionDef& def, Slot self_slot, std::vector<Value> args,
                      SourceSpan span) {
        FrameGuard guard(depth_, span);
        auto env = std::make_shared<Env>();
        switch (def.self_kind) {
            case SelfKind::Ref:
                env->vars.emplace_back("self", make_slot(Value{RefVal{self_slot, false}}));
                break;
            case SelfKind::RefMut:
                env->vars.emplace_back("self", make_slot(Value{RefVal{self_slot, true}}));
                break;
            case SelfKind::Value:
            case SelfKind::None:
                env->vars.emplace_back("self", make_slot(copy_value(*self_slot)));
                break;
        }
        bind_params(def, std::move(args), env, span);
        return run_body(def, env);
    }

    Value call_function(const FunctionDef& def, std::vector<Value> args, SourceSpan span) {
        FrameGuard guard(depth_, span);
        auto env = std::make_shared<Env>();
        bind_params(def, std::move(args), env, span);
        return run_body(def, env);
    }

    void bind_params(const FunctionDef& def, std::vector<Value> args, EnvPtr& env,
                     SourceSpan span) {
        if (args.size() != def.params.size())
            fail("RT-ARITY",
                 "'" + def.name + "' takes " + std::to_string(def.params.size()) +
                     " argument(s), got " + std::to_string(args.size()),
                 span);
        for (size_t i = 0; i < args.size(); ++i) {
            Slot slot = make_slot(std::move(args[i]));
            if (!bind_pattern(*def.params[i].pat, slot, *env))
                fail("RT-NO-MATCH",
                     "argument " + std::to_string(i + 1) + " of '" + def.name +
                         "' does not match its parameter pattern",
                     span);
        }
    }

    Value run_body(const FunctionDef& def, EnvPtr env) {
        try {
            return eval(*def.body, env);
        } catch (ReturnUnwind& ret) {
            return std::move(ret.value);
        }
    }

    Value call_closure(const ClosureVal& closure, std::vector<Value> args, SourceSpan span) {
        FrameGuard guard(depth_, span);
        const LambdaExpr& lambda = *closure.lambda;
        if (args.size() != lambda.params.size())
            fail("RT-ARITY",
                 "closure takes " + std::to_string(lambda.params.size()) +
                     " argument(s), got " + std::to_string(args.size()),
                 span);
        auto env = std::make_shared<Env>();
        env->parent = closure.env;
        for (size_t i = 0; i < args.size(); ++i)
            env->vars.emplace_back(lambda.params[i].name, make_slot(std::move(args[i])));
        try {
            return eval(*lambda.body, env);
        } catch (ReturnUnwind& ret) {
            return std::move(ret.value);
        }
    }

    // -------------------------------------------------------- patterns

    // Bindings are appended to `env` as matching proceeds; callers use a
    // scratch env and commit on success.
    bool bind_pattern(const Pattern& p, Slot slot, Env& env) {
        return std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, WildcardPat>) {
                    return true;
                } else if constexpr (std::is_same_v<T, LiteralPat>) {
                    return literal_matches(n.lit, *unwrap_slot(slot));
                } else if constexpr (std::is_same_v<T, NamePat>) {
                    env.vars.emplace_back(n.name, make_slot(copy_value(*slot)));
                    return true;
                } else if constexpr (std::is_same_v<T, BindingPat>) {
                    if (n.by_ref)
                        env.vars.emplace_back(n.name, make_slot(Value{RefVal{slot, false}}));
                    else
                        env.vars.emplace_back(n.name, make_slot(copy_value(*slot)));
                    return true;
                } else if constexpr (std::is_same_v<T, AtPat>) {
                    env.vars.emplace_back(n.name, make_slot(copy_value(*slot)));
                    return bind_pattern(*n.sub, slot, env);
                } else if constexpr (std::is_same_v<T, TuplePat>) {
                    Slot inner = unwrap_slot(slot);
                    const auto* tuple = as<TupleVal>(*inner);
                    if (!tuple || tuple->elems.size() != n.elems.size()) return false;
                    for (size_t i = 0; i < n.elems.size(); ++i)
                        if (!bind_pattern(*n.elems[i], tuple->elems[i], env)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, VariantPat>) {
                    Slot inner = unwrap_slot(slot);
                    const auto* variant = as<VariantVal>(*inner);
                    if (!variant || variant->variant != n.name) return false;
                    if (variant->payload.size() != n.args.size()) return false;
                    for (size_t i = 0; i < n.args.size(); ++i)
                        if (!bind_pattern(*n.args[i], variant->payload[i], env)) return false;
                    return true;
                } else if constexpr (std::is_same_v<T, RecordPat>) {
                    Slot inner = unwrap_slot(slot);
                    const auto* rec = as<RecordVal>(*inner);
                    if (!rec || rec->type_name != n.name) return false;
                    for (const auto& [field, sub] : n.fields) {
                        const Slot* found = nullptr;
                        for (const auto& [f, s] : rec->fields)
                            if (f == field) found = &s;
                        if (!found) return false;
                        if (!bind_pattern(*sub, *found, env)) return false;
                    }
                    return true;
                } else {
                    static_assert(std::is_same_v<T, RefPat>);
                    // Unwraps one reference/box layer; matches the value
                    // directly when there is none (annotations are not
                    // enforced at runtime).
                    const Value& v = *slot;
                    if (const auto* r = as<RefVal>(v)) return bind_pattern(*n.sub, r->target, env);
                    if (const auto* b = as<BoxVal>(v)) return bind_pattern(*n.sub, b->inner, env);
                    if (const auto* rc = as<RcVal>(v)) return bind_pattern(*n.sub, rc->inner, env);
                    return bind_pattern(*n.sub, slot, env);
                }
            },
            p.node);
    }

    Slot unwrap_slot(Slot slot) {
        for (int hops = 0; hops < 256; ++hops) {
            const Value& v = *slot;
            if (const auto* r = as<RefVal>(v)) {
                slot = r->target;
            } else if (const auto* b = as<BoxVal>(v)) {
                slot = b->inner;
            } else if (const auto* rc = as<RcVal>(v)) {
                slot = rc->inner;
            } else {
                return slot;
            }
        }
        return slot;
    }

    bool literal_matches(const Token& lit, const Value& v) {
        switch (lit.kind) {
            case TokenKind::IntLit: {
                const auto* i = as<IntVal>(v);
                if (!i) return false;
                IntWidth w = width_from_suffix(lit.suffix);
                IntWidth cmp = w == IntWidth::Untyped ? i->width : w;
                return truncate_to_width(i->bits, cmp) ==
                       truncate_to_width(lit.int_value, cmp);
            }
            case TokenKind::ByteLit: {
                const auto* i = as<IntVal>(v);
                return i && truncate_to_width(i->bits, IntWidth::U8) == lit.int_value;
            }
            case TokenKind::FloatLit: {
                const auto* f = as<FloatVal>(v);
                return f && f->value == lit.float_value;
            }
            case TokenKind::CharLit: {
                const auto* c = as<CharVal>(v);
                return c && c->scalar == lit.int_value;
            }
            case TokenKind::StrLit: {
                const auto* s = as<StrVal>(v);
                return s && s->text == lit.str_value;
            }
            default: {
                const auto* b = as<BoolVal>(v);
                return b && b->value == (lit.text == "true");
            }
        }
    }

    // ------------------------------------------------------ evaluation

    Value eval(const Expr& e, EnvPtr env) {
        return std::visit([&](const auto& n) -> Value { return eval_node(n, e, env); },
                          e.node);
    }

    Value eval_node(const LiteralExpr& n, const Expr& e, EnvPtr&) {
        const Token& lit = n.lit;
        switch (lit.kind) {
            case TokenKind::IntLit: {
                IntWidth w = width_from_suffix(lit.suffix);
                return int_value(lit.int_value, w);
            }
            case TokenKind::FloatLit: {
                FloatWidth w = lit.suffix == NumSuffix::F32 ? FloatWidth::F32
                               : lit.suffix == NumSuffix::F64 ? FloatWidth::F64
                                                              : FloatWidth::Untyped;
                double v = lit.float_value;
                if (w == FloatWidth::F32) v = static_cast<float>(v);
                return Value{FloatVal{v, w}};
            }
            case TokenKind::CharLit:
                return Value{CharVal{static_cast<uint32_t>(lit.int_value)}};
            case TokenKind::ByteLit:
                return int_value(lit.int_value, IntWidth::U8);
            case TokenKind::StrLit:
                return Value{StrVal{lit.str_value}};
            case TokenKind::ByteStrLit: {
                VectorVal vec;
                for (unsigned char c : lit.str_value)
                    vec.elems.push_back(make_slot(int_value(c, IntWidth::U8)));
                return Value{std::move(vec)};
            }
            default:
                if (lit.text == "true" || lit.text == "false")
                    return bool_value(lit.text == "true");
                fail("RT-TYPE", "unexpected literal", e.span);
        }
    }

    Value eval_node(const UnitExpr&, const Expr&, EnvPtr&) { return Value{UnitVal{}}; }

    Value eval_node(const PathExpr& n, const Expr& e, EnvPtr& env) {
        if (n.is_single()) {
            if (Slot* slot = env->find(n.name())) return copy_value(**slot);
            auto variant = variants_.find(n.name());
            if (variant != variants_.end() && variant->second.second == 0) {
                VariantVal v;
                v.enum_name = variant->second.first;
                v.variant = n.name();
                return Value{std::move(v)};
            }
            if (functions_.count(n.name()))
                fail("RT-UNKNOWN-IDENT",
                     "function '" + n.name() + "' must be called; functions are not values",
                     e.span);
        }
        fail("RT-UNKNOWN-IDENT", "unknown identifier '" + n.joined() + "'", e.span);
    }

    Value eval_node(const RecordExpr& n, const Expr& e, EnvPtr& env) {
        auto struct_it = structs_.find(n.name);
        if (struct_it == structs_.end())
            fail("RT-TYPE", "unknown struct '" + n.name + "'", e.span);
        const StructDef& def = *struct_it->second;

        RecordVal base;
        bool have_base = false;
        std::vector<std::pair<std::string, Value>> provided;
        for (const auto& [field, init] : n.fields) {
            bool known = false;
            for (const auto& [f, t] : def.fields) known |= f == field;
            if (!known)
                fail("RT-UNKNOWN-FIELD",
                     "struct '" + n.name + "' has no field '" + field + "'", init->span);
            provided.emplace_back(field, eval(*init, env));
        }
        if (n.base) {
            Value b = eval(*n.base, env);
            Slot inner = unwrap_slot(make_slot(std::move(b)));
            const auto* rec = as<RecordVal>(*inner);
            if (!rec || rec->type_name != n.name)
                fail("RT-TYPE", "functional update base is not a '" + n.name + "'",
                     n.base->span);
            base = *rec;
            have_base = true;
        }

        RecordVal out;
        out.type_name = n.name;
        for (const auto& [field, ty] : def.fields) {
            const Value* given = nullptr;
            for (auto& [f, v] : provided)
                if (f == field) given = &v;
            if (given) {
                out.fields.emplace_back(field, make_slot(copy_value(*given)));
            } else if (have_base) {
                const Slot* from = nullptr;
                for (const auto& [f, s] : base.fields)
                    if (f == field) from = &s;
                if (!from)
                    fail("RT-UNKNOWN-FIELD", "field '" + field + "' missing from base",
                         e.span);
                out.fields.emplace_back(field, make_slot(copy_value(**from)));
            } else {
                fail("RT-UNKNOWN-FIELD",
                     "missing field '" + field + "' of struct '" + n.name + "'", e.span);
            }
        }
        return Value{std::move(out)};
    }

    Value eval_node(const TupleExpr& n, const Expr&, EnvPtr& env) {
        TupleVal out;
        for (const auto& el : n.elems) out.elems.push_back(make_slot(eval(*el, env)));
        return Value{std::move(out)};
    }

    Value eval_node(const FieldExpr& n, const Expr& e, EnvPtr& env) {
        Value base = eval(*n.base, env);
        Slot inner = unwrap_slot(make_slot(std::move(base)));
        const auto* rec = as<RecordVal>(*inner);
        if (!rec)
            fail("RT-TYPE",
                 "field access on non-record value of type '" + type_desc(*inner) + "'",
                 e.span);
        for (const auto& [f, s] : rec->fields)
            if (f == n.field) return copy_value(*s);
        fail("RT-UNKNOWN-FIELD",
             "'" + rec->type_name + "' has no field '" + n.field + "'", e.span);
    }

    Value eval_node(const ArrayExpr& n, const Expr&, EnvPtr& env) {
        VectorVal out;
        for (const auto& el : n.elems) out.elems.push_back(make_slot(eval(*el, env)));
        return Value{std::move(out)};
    }

    Value eval_node(const ArrayRepeatExpr& n, const Expr& e, EnvPtr& env) {
        Value v = eval(*n.value, env);
        Value count = eval(*n.count, env);
        const auto* i = as<IntVal>(count);
        if (!i) fail("RT-TYPE", "array repeat count must be an integer", n.count->span);
        int64_t c = sign_extend(i->bits, i->width);
        if (c < 0) fail("RT-TYPE", "array repeat count is negative", n.count->span);
        VectorVal out;
        for (int64_t k = 0; k < c; ++k) out.elems.push_back(make_slot(copy_value(v)));
        (void)e;
        return Value{std::move(out)};
    }

    Value eval_node(const IndexExpr& n, const Expr& e, EnvPtr& env) {
        Value base = eval(*n.base, env);
        Slot inner = unwrap_slot(make_slot(std::move(base)));
        Value idx = eval(*n.index, env);
        const auto* i = as<IntVal>(idx);
        if (!i) fail("RT-TYPE", "index must be an integer", n.index->span);
        int64_t k = sign_extend(i->bits, i->width);
        if (const auto* vec = as<VectorVal>(*inner)) {
            if (k < 0 || static_cast<size_t>(k) >= vec->elems.size())
                fail("RT-INDEX",
                     "index " + std::to_string(k) + " out of bounds for length " +
                         std::to_string(vec->elems.size()),
                     e.span);
            return copy_value(*vec->elems[static_cast<size_t>(k)]);
        }
        if (const auto* s = as<StrVal>(*inner)) {
            int64_t pos = 0;
            size_t byte = 0;
            while (byte < s->text.size()) {
                unsigned char c = static_cast<unsigned char>(s->text[byte]);
                size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : 4;
                if (pos == k) {
                    uint32_t scalar = 0;
                    if (len == 1) scalar = c;
                    else if (len == 2) scalar = c & 0x1F;
                    else if (len == 3) scalar = c & 0x0F;
                    else scalar = c & 0x07;
                    for (size_t m = 1; m < len && byte + m < s->text.size(); ++m)
                        scalar = (scalar << 6) |
                                 (static_cast<unsigned char>(s->text[byte + m]) & 0x3F);
                    return Value{CharVal{scalar}};
                }
                byte += len;
                ++pos;
            }
            fail("RT-INDEX", "string index " + std::to_string(k) + " out of bounds", e.span);
        }
        fail("RT-TYPE", "cannot index value of type '" + type_desc(*inner) + "'", e.span);
    }

    Value eval_node(const BlockExpr& n, const Expr&, EnvPtr& env) {
        auto scope = std::make_shared<Env>();
        scope->parent = env;
        for (const auto& s : n.stmts) {
            if (const auto* let = std::get_if<LetStmt>(&s.node)) {
                Slot slot = make_slot(eval(*let->init, scope));
                if (!bind_pattern(*let->pat, slot, *scope))
                    fail("RT-NO-MATCH", "let pattern does not match its initializer",
                         let->span);
            } else {
                eval(*std::get<ExprStmt>(s.node).expr, scope);
            }
        }
        if (n.tail) return eval(*n.tail, scope);
        return Value{UnitVal{}};
    }

    bool eval_condition(const Expr& cond, EnvPtr& env) {
        Value v = eval(cond, env);
        const auto* b = as<BoolVal>(v);
        if (!b)
            fail("RT-TYPE",
                 "condition must be a bool, got '" + type_desc(v) + "'", cond.span);
        return b->value;
    }

    Value eval_node(const IfExpr& n, const Expr&, EnvPtr& env) {
        if (eval_condition(*n.cond, env)) return eval(*n.then_block, env);
        if (n.else_block) return eval(*n.else_block, env);
        return Value{UnitVal{}};
    }

    Value eval_node(const MatchExpr& n, const Expr& e, EnvPtr& env) {
        Slot scrutinee = make_slot(eval(*n.scrutinee, env));
        for (const auto& arm : n.arms) {
            for (const auto& alt : arm.alternatives) {
                auto scope = std::make_shared<Env>();
                scope->parent = env;
                if (!bind_pattern(*alt, scrutinee, *scope)) continue;
                if (arm.guard && !eval_condition(*arm.guard, scope)) continue;
                return eval(*arm.body, scope);
            }
        }
        fail("RT-NO-MATCH",
             "no arm matches value " + render_value(*scrutinee), e.span);
    }

    Value eval_node(const CallExpr& n, const Expr& e, EnvPtr& env) {
        std::vector<Value> args;
        auto eval_args = [&] {
            for (const auto& a : n.args) args.push_back(eval(*a, env));
        };
        if (const auto* path = as<PathExpr>(*n.callee)) {
            const std::string joined = path->joined();
            if (path->is_single()) {
                if (Slot* slot = env->find(path->name())) {
                    Value callee = copy_value(**slot);
                    const auto* closure = as<ClosureVal>(callee);
                    if (!closure)
                        fail("RT-NOT-CALLABLE",
                             "'" + path->name() + "' is not callable", e.span);
                    eval_args();
                    return call_closure(*closure, std::move(args), e.span);
                }
                auto fn = functions_.find(path->name());
                if (fn != functions_.end()) {
                    eval_args();
                    return call_function(*fn->second, std::move(args), e.span);
                }
                auto variant = variants_.find(path->name());
                if (variant != variants_.end()) {
                    eval_args();
                    if (args.size() != variant->second.second)
                        fail("RT-ARITY",
                             "variant '" + path->name() + "' takes " +
                                 std::to_string(variant->second.second) + " argument(s)",
                             e.span);
                    VariantVal v;
                    v.enum_name = variant->second.first;
                    v.variant = path->name();
                    for (auto& a : args) v.payload.push_back(make_slot(std::move(a)));
                    return Value{std::move(v)};
                }
                if (path->name() == "range") {
                    eval_args();
                    if (args.size() != 2 || !is<IntVal>(args[0]) || !is<IntVal>(args[1]))
                        fail("RT-ARITY", "range(a, b) takes two integers", e.span);
                    const auto* a = as<IntVal>(args[0]);
                    const auto* b = as<IntVal>(args[1]);
                    return Value{RangeIterVal{sign_extend(a->bits, a->width),
                                              sign_extend(b->bits, b->width)}};
                }
                if (path->name() == "sqrt") {
                    eval_args();
                    const auto* f = args.size() == 1 ? as<FloatVal>(args[0]) : nullptr;
                    if (!f) fail("RT-TYPE", "sqrt takes one float", e.span);
                    double r = std::sqrt(f->value);
                    if (f->width == FloatWidth::F32) r = static_cast<float>(r);
                    return Value{FloatVal{r, f->width}};
                }
            }
            if (joined == "Rc::new" || joined == "std::rc::Rc::new") {
                eval_args();
                if (args.size() != 1) fail("RT-ARITY", "Rc::new takes one value", e.span);
                return Value{RcVal{make_slot(std::move(args[0]))}};
            }
            if (joined == "std::num::sqrt" || joined == "num::sqrt") {
                eval_args();
                const auto* f = args.size() == 1 ? as<FloatVal>(args[0]) : nullptr;
                if (!f) fail("RT-TYPE", "sqrt takes one float", e.span);
                double r = std::sqrt(f->value);
                if (f->width == FloatWidth::F32) r = static_cast<float>(r);
                return Value{FloatVal{r, f->width}};
            }
            fail("RT-UNKNOWN-IDENT", "unknown function '" + joined + "'", e.span);
        }
        Value callee = eval(*n.callee, env);
        const auto* closure = as<ClosureVal>(callee);
        if (!closure)
            fail("RT-NOT-CALLABLE",
                 "value of type '" + type_desc(callee) + "' is not callable", e.span);
        eval_args();
        return call_closure(*closure, std::move(args), e.span);
    }

    Value eval_node(const MethodCallExpr& n, const Expr& e, EnvPtr& env) {
        Slot receiver = eval_receiver(*n.receiver, env);
        std::vector<Value> args;
        for (const auto& a : n.args) args.push_back(eval(*a, env));
        return dispatch_method(std::move(receiver), n.method, std::move(args), e.span);
    }

    // Method receivers auto-reference places so `&mut self` methods and
    // the iterator protocol mutate the named binding, not a copy.
    Slot eval_receiver(const Expr& receiver, EnvPtr& env) {
        if (const auto* path = as<PathExpr>(receiver)) {
            if (path->is_single())
                if (Slot* slot = env->find(path->name())) return *slot;
        }
        if (is<FieldExpr>(receiver) || is<IndexExpr>(receiver))
            return eval_place(receiver, env, /*for_write=*/false);
        if (const auto* un = as<UnaryExpr>(receiver); un && un->op == UnOp::Deref)
            return eval_place(receiver, env, /*for_write=*/false);
        return make_slot(eval(receiver, env));
    }

    Value eval_node(const LambdaExpr& n, const Expr&, EnvPtr& env) {
        return Value{ClosureVal{&n, env}};
    }

    Value eval_node(const BinaryExpr& n, const Expr& e, EnvPtr& env) {
        if (n.op == BinOp::And || n.op == BinOp::Or) {
            bool lhs = eval_condition(*n.lhs, env);
            if (n.op == BinOp::And && !lhs) return bool_value(false);
            if (n.op == BinOp::Or && lhs) return bool_value(true);
            return bool_value(eval_condition(*n.rhs, env));
        }
        static const std::map<BinOp, std::string> kMethods = {
            {BinOp::Add, "add"}, {BinOp::Sub, "sub"}, {BinOp::Mul, "mul"},
            {BinOp::Div, "div"}, {BinOp::Rem, "rem"}, {BinOp::Shl, "shl"},
            {BinOp::Shr, "shr"}, {BinOp::BitAnd, "bitand"}, {BinOp::BitOr, "bitor"},
            {BinOp::BitXor, "bitxor"}, {BinOp::Eq, "eq"}, {BinOp::Ne, "ne"},
            {BinOp::Lt, "lt"}, {BinOp::Gt, "gt"}, {BinOp::Le, "le"}, {BinOp::Ge, "ge"},
        };
        const std::string& method = kMethods.at(n.op);
        Value lhs = eval(*n.lhs, env);
        Value rhs = eval(*n.rhs, env);
        if (const auto* a = as<IntVal>(lhs))
            if (const auto* b = as<IntVal>(rhs)) return int_binop(method, *a, *b, e.span);
        if (const auto* a = as<FloatVal>(lhs))
            if (const auto* b = as<FloatVal>(rhs)) return float_binop(method, *a, *b, e.span);
        return dispatch_method(make_slot(std::move(lhs)), method, make_one(std::move(rhs)),
                               e.span);
    }

    static std::vector<Value> make_one(Value v) {
        std::vector<Value> out;
        out.push_back(std::move(v));
        return out;
    }

    Value eval_node(const UnaryExpr& n, const Expr& e, EnvPtr& env) {
        switch (n.op) {
            case UnOp::Neg: {
                Value v = eval(*n.operand, env);
                if (const auto* i = as<IntVal>(v)) return int_value(0 - i->bits, i->width);
                if (const auto* f = as<FloatVal>(v))
                    return Value{FloatVal{-f->value, f->width}};
                return dispatch_method(make_slot(std::move(v)), "neg", {}, e.span);
            }
            case UnOp::Not: {
                Value v = eval(*n.operand, env);
                if (const auto* b = as<BoolVal>(v)) return bool_value(!b->value);
                if (const auto* i = as<IntVal>(v)) return int_value(~i->bits, i->width);
                return dispatch_method(make_slot(std::move(v)), "not", {}, e.span);
            }
            case UnOp::Deref: {
                Value v = eval(*n.operand, env);
                if (const auto* r = as<RefVal>(v)) return copy_value(*r->target);
                if (const auto* b = as<BoxVal>(v)) return copy_value(*b->inner);
                if (const auto* rc = as<RcVal>(v)) return copy_value(*rc->inner);
                fail("RT-TYPE",
                     "cannot dereference value of type '" + type_desc(v) + "'", e.span);
            }
            case UnOp::Ref:
            case UnOp::RefMut: {
                Slot slot = eval_receiver(*n.operand, env);
                return Value{RefVal{std::move(slot), n.op == UnOp::RefMut}};
            }
        }
        fail("RT-TYPE", "bad unary operator", e.span);
    }

    Value eval_node(const AssignExpr& n, const Expr&, EnvPtr& env) {
        Value value = eval(*n.value, env);
        Slot slot = eval_place(*n.place, env, /*for_write=*/true);
        *slot = std::move(value);
        return Value{UnitVal{}};
    }

    Value eval_node(const ForExpr& n, const Expr& e, EnvPtr& env) {
        Slot iter = eval_receiver(*n.iter, env);
        while (true) {
            Value step = dispatch_method(iter, "next", {}, e.span);
            const auto* variant = as<VariantVal>(step);
            if (!variant || variant->enum_name != "Option")
                fail("RT-ITERATOR",
                     "iterator 'next' must return an Option value, got '" +
                         type_desc(step) + "'",
                     e.span);
            if (variant->variant == "None") break;
            if (variant->variant != "Some" || variant->payload.size() != 1)
                fail("RT-ITERATOR", "iterator 'next' returned a malformed Option", e.span);
            auto scope = std::make_shared<Env>();
            scope->parent = env;
            if (!bind_pattern(*n.pat, variant->payload[0], *scope))
                fail("RT-NO-MATCH", "loop pattern does not match the iterator value",
                     n.pat->span);
            try {
                eval(*n.body, scope);
            } catch (BreakUnwind&) {
                break;
            }
        }
        return Value{UnitVal{}};
    }

    Value eval_node(const LoopExpr& n, const Expr&, EnvPtr& env) {
        while (true) {
            try {
                eval(*n.body, env);
            } catch (BreakUnwind&) {
                break;
            }
        }
        return Value{UnitVal{}};
    }

    Value eval_node(const WhileExpr& n, const Expr&, EnvPtr& env) {
        while (eval_condition(*n.cond, env)) {
            try {
                eval(*n.body, env);
            } catch (BreakUnwind&) {
                break;
            }
        }
        return Value{UnitVal{}};
    }

    Value eval_node(const BreakExpr&, const Expr&, EnvPtr&) { throw BreakUnwind{}; }

    Value eval_node(const ReturnExpr& n, const Expr&, EnvPtr& env) {
        Value v = n.value ? eval(*n.value, env) : Value{UnitVal{}};
        throw ReturnUnwind{std::move(v)};
    }

    Value eval_node(const BoxExpr& n, const Expr&, EnvPtr& env) {
        // box(GC) allocates exactly like box; uniqueness is the
        // checker's concern.
        return Value{BoxVal{make_slot(eval(*n.operand, env))}};
    }

    Value eval_node(const MacroExpr& n, const Expr& e, EnvPtr&) {
        fail("RT-TYPE", "unexpanded macro '" + n.name + "!'", e.span);
    }

    Value eval_node(const VecExpr& n, const Expr&, EnvPtr& env) {
        VectorVal out;
        for (const auto& el : n.elems) out.elems.push_back(make_slot(eval(*el, env)));
        return Value{std::move(out)};
    }

    Value eval_node(const PrintExpr& n, const Expr& e, EnvPtr& env) {
        std::vector<Value> args;
        for (const auto& a : n.args) args.push_back(eval(*a, env));
        std::string rendered;
        size_t next_arg = 0;
        const std::string& fmt = n.format;
        for (size_t i = 0; i < fmt.size(); ++i) {
            char c = fmt[i];
            if (c == '{') {
                if (i + 1 < fmt.size() && fmt[i + 1] == '{') {
                    rendered += '{';
                    ++i;
                    continue;
                }
                if (i + 1 < fmt.size() && fmt[i + 1] == '}') {
                    if (next_arg >= args.size())
                        fail("RT-FORMAT-ARITY",
                             "format template has more placeholders than arguments",
                             n.format_span);
                    rendered += render_value(args[next_arg++]);
                    ++i;
                    continue;
                }
                fail("RT-FORMAT", "stray '{' in format template", n.format_span);
            }
            if (c == '}') {
                if (i + 1 < fmt.size() && fmt[i + 1] == '}') {
                    rendered += '}';
                    ++i;
                    continue;
                }
                fail("RT-FORMAT", "stray '}' in format template", n.format_span);
            }
            rendered += c;
        }
        if (next_arg != args.size())
            fail("RT-FORMAT-ARITY",
                 "format template has " + std::to_string(next_arg) +
                     " placeholder(s) but " + std::to_string(args.size()) + " argument(s)",
                 n.format_span);
        if (n.newline) rendered += '\n';
        out_ << rendered;
        (void)e;
        return Value{UnitVal{}};
    }

    // --------------------------------------------------------- places

    Slot eval_place(const Expr& e, EnvPtr& env, bool for_write) {
        if (const auto* path = as<PathExpr>(e)) {
            if (path->is_single())
                if (Slot* slot = env->find(path->name())) return *slot;
            if (for_write)
                fail("RT-UNKNOWN-IDENT",
                     "cannot assign to unknown identifier '" + path->joined() + "'", e.span);
            return make_slot(eval(e, env));
        }
        if (const auto* un = as<UnaryExpr>(e); un && un->op == UnOp::Deref) {
            Value v = eval(*un->operand, env);
            if (const auto* r = as<RefVal>(v)) return r->target;
            if (const auto* b = as<BoxVal>(v)) return b->inner;
            if (const auto* rc = as<RcVal>(v)) {
                if (for_write)
                    fail("RT-SHAREDREF-WRITE",
                         "shared reference contents are immutable", e.span);
                return rc->inner;
            }
            fail("RT-TYPE", "cannot dereference value of type '" + type_desc(v) + "'",
                 e.span);
        }
        if (const auto* field = as<FieldExpr>(e)) {
            Slot base = eval_place(*field->base, env, for_write);
            Slot inner = unwrap_for_place(base, for_write, e.span);
            auto* rec = as<RecordVal>(*inner);
            if (!rec)
                fail("RT-TYPE", "field access on non-record value", e.span);
            for (auto& [f, s] : rec->fields)
                if (f == field->field) return s;
            fail("RT-UNKNOWN-FIELD",
                 "'" + rec->type_name + "' has no field '" + field->field + "'", e.span);
        }
        if (const auto* index = as<IndexExpr>(e)) {
            Slot base = eval_place(*index->base, env, for_write);
            Slot inner = unwrap_for_place(base, for_write, e.span);
            Value idx = eval(*index->index, env);
            const auto* i = as<IntVal>(idx);
            if (!i) fail("RT-TYPE", "index must be an integer", index->index->span);
            int64_t k = sign_extend(i->bits, i->width);
            auto* vec = as<VectorVal>(*inner);
            if (!vec)
                fail("RT-TYPE", "cannot index value of type '" + type_desc(*inner) + "'",
                     e.span);
            if (k < 0 || static_cast<size_t>(k) >= vec->elems.size())
                fail("RT-INDEX",
                     "index " + std::to_string(k) + " out of bounds for length " +
                         std::to_string(vec->elems.size()),
                     e.span);
            return vec->elems[static_cast<size_t>(k)];
        }
        return make_slot(eval(e, env));
    }

    Slot unwrap_for_place(Slot slot, bool for_write, SourceSpan span) {
        for (int hops = 0; hops < 256; ++hops) {
            Value& v = *slot;
            if (const auto* r = as<RefVal>(v)) {
                slot = r->target;
            } else if (const auto* b = as<BoxVal>(v)) {
                slot = b->inner;
            } else if (const auto* rc = as<RcVal>(v)) {
                if (for_write)
                    fail("RT-SHAREDREF-WRITE",
                         "shared reference contents are immutable", span);
                slot = rc->inner;
            } else {
                return slot;
            }
        }
        return slot;
    }
};

struct ThreadTask {
    const Program* program;
    std::ostream* out;
    const std::string* entry;
    RunOutcome outcome;
};

void* interp_thread(void* arg) {
    auto* task = static_cast<ThreadTask*>(arg);
    Interpreter interp(*task->program, *task->out);
    task->outcome = interp.run(*task->entry);
    return nullptr;
}

} // namespace

RunOutcome run_program(const Program& p, std::ostream& out, const std::string& entry) {
    ThreadTask task{&p, &out, &entry, {}};
    pthread_attr_t attr;
    pthread_attr_init(&attr);
    pthread_attr_setstacksize(&attr, size_t{512} * 1024 * 1024);
    pthread_t thread;
    if (pthread_create(&thread, &attr, interp_thread, &task) != 0) {
        // Fall back to the caller's stack.
        interp_thread(&task);
    } else {
        pthread_join(thread, nullptr);
    }
    pthread_attr_destroy(&attr);
    return task.outcome;
}

} // namespace frs
