#include "tiger/runtime.hpp"

#include <limits>

namespace tiger {
namespace {

constexpr BuiltinInfo kBuiltins[kBuiltinCount] = {
    {Builtin::Print, "print", 1, false},        {Builtin::Flush, "flush", 0, false},
    {Builtin::Getchar, "getchar", 0, true},     {Builtin::Ord, "ord", 1, true},
    {Builtin::Chr, "chr", 1, true},             {Builtin::Size, "size", 1, true},
    {Builtin::Substring, "substring", 3, true}, {Builtin::Concat, "concat", 2, true},
    {Builtin::Not, "not", 1, true},             {Builtin::Exit, "exit", 1, false},
};

} // namespace

const char* trapCode(TrapKind kind) {
    switch (kind) {
    case TrapKind::DivZero: return "DIV_ZERO";
    case TrapKind::NilDeref: return "NIL_DEREF";
    case TrapKind::IndexOob: return "INDEX_OOB";
    case TrapKind::StackUnderflow: return "STACK_UNDERFLOW";
    case TrapKind::BadTag: return "BAD_TAG";
    case TrapKind::NoSuchLabel: return "NO_SUCH_LABEL";
    case TrapKind::StepBudget: return "STEP_BUDGET";
    case TrapKind::CallDepth: return "CALL_DEPTH";
    case TrapKind::HeapExhausted: return "HEAP_EXHAUSTED";
    }
    return "?";
}

const BuiltinInfo* builtinTable() { return kBuiltins; }

std::optional<BuiltinInfo> findBuiltin(std::string_view name) {
    for (const auto& b : kBuiltins) {
        if (b.name == name) return b;
    }
    return std::nullopt;
}

std::int64_t wrapAdd(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

std::int64_t wrapSub(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}

std::int64_t wrapMul(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

std::int64_t wrapNeg(std::int64_t a) { return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(a)); }

std::int64_t wrapDiv(std::int64_t a, std::int64_t b) {
    if (a == std::numeric_limits<std::int64_t>::min() && b == -1) return a;
    return a / b;
}

} // namespace tiger
