#pragma once

// Pieces shared by the interpreter and the VM: trap classification, the
// standard library's names and arities, and the byte-stream I/O channel.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tiger {

/// Runtime fault classes. The interpreter and the VM agree on these, which
/// is what the differential harness compares.
///
/// BAD_TAG covers every dynamic type fault: only unchecked programs (or a
/// miscompiled one) can reach it. CALL_DEPTH fires when more than
/// kMaxCallDepth user functions are active. chr/substring range errors are
/// classified INDEX_OOB.
enum class TrapKind {
    DivZero,
    NilDeref,
    IndexOob,
    StackUnderflow,
    BadTag,
    NoSuchLabel,
    StepBudget,
    CallDepth,
    HeapExhausted,
};

inline constexpr int kMaxCallDepth = 1000;

const char* trapCode(TrapKind kind);

enum class Builtin { Print, Flush, Getchar, Ord, Chr, Size, Substring, Concat, Not, Exit };

struct BuiltinInfo {
    Builtin id;
    std::string_view name;
    int arity;
    bool returnsValue;
};

/// The ten standard-library functions in declaration order.
const BuiltinInfo* builtinTable();
inline constexpr int kBuiltinCount = 10;
std::optional<BuiltinInfo> findBuiltin(std::string_view name);

/// Program input and output as plain byte buffers.
struct ByteIo {
    std::string_view input;
    std::size_t inputPos = 0;
    std::string output;

    /// Next input byte as a one-character string, or "" at end of input.
    std::string readChar() {
        if (inputPos >= input.size()) return {};
        return std::string(1, input[inputPos++]);
    }
};

/// Two's-complement wrapping arithmetic on 64-bit ints.
std::int64_t wrapAdd(std::int64_t a, std::int64_t b);
std::int64_t wrapSub(std::int64_t a, std::int64_t b);
std::int64_t wrapMul(std::int64_t a, std::int64_t b);
std::int64_t wrapNeg(std::int64_t a);
/// Truncating division; the caller checks b != 0. INT64_MIN / -1 wraps.
std::int64_t wrapDiv(std::int64_t a, std::int64_t b);

} // namespace tiger
