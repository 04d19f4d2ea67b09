#pragma once

// Tree-walking interpreter: the reference semantics of Tiger.
//
// Every dynamic assumption (operand tags, arity, assignability of loop
// counters, break placement) is checked at run time, so ill-typed programs
// trap with BAD_TAG instead of misbehaving.

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tiger/ast.hpp"
#include "tiger/runtime.hpp"

namespace tiger::interp {

struct RecordCell;
struct ArrayCell;

struct Unit {
    friend bool operator==(Unit, Unit) = default;
};
struct Nil {
    friend bool operator==(Nil, Nil) = default;
};

/// Records and arrays are references into the run's heap; equality on them
/// is identity.
using Value = std::variant<Unit, std::int64_t, std::string, Nil, RecordCell*, ArrayCell*>;

struct RecordCell {
    std::vector<std::pair<Symbol, Value>> fields;
};
struct ArrayCell {
    std::vector<Value> elems;
};

/// All records and arrays allocated by one run. Nothing is reclaimed before
/// the heap itself is destroyed.
struct Heap {
    std::deque<RecordCell> records;
    std::deque<ArrayCell> arrays;
};

/// Largest single array the interpreter will allocate.
inline constexpr std::int64_t kMaxAllocation = std::int64_t{1} << 26;

// ---- environments --------------------------------------------------------

struct Scope;

struct VarEntry {
    Value value;
    bool assignable = true;
};
struct FunEntry {
    const FunDecl* decl;
    std::weak_ptr<Scope> closure;  // scope of the declaring function run
};
struct BuiltinEntry {
    Builtin id;
};
using Entry = std::variant<VarEntry, FunEntry, BuiltinEntry>;

/// One link of the environment chain. Extending the chain never mutates an
/// ancestor; variable cells live inside the scope that declared them and are
/// shared by every chain that passes through it.
struct Scope : std::enable_shared_from_this<Scope> {
    std::shared_ptr<Scope> parent;
    std::unordered_map<Symbol, Entry> values;
    std::unordered_map<Symbol, const TypeSpec*> types;

    Entry* lookup(Symbol name);
};

// ---- running -------------------------------------------------------------

struct Trap {
    TrapKind kind;
    Pos pos;
    std::string message;
};

struct Outcome {
    enum class Kind { Normal, Exit, Trap, BudgetExceeded };
    Kind kind = Kind::Normal;
    Value value;                 // Normal
    std::int64_t exitCode = 0;   // Exit
    std::optional<Trap> trap;    // Trap, BudgetExceeded
};

struct RunOptions {
    /// Maximum number of expression evaluations; unlimited when empty.
    std::optional<std::uint64_t> stepBudget;
};

struct RunResult {
    std::string output;
    Outcome outcome;
    std::shared_ptr<Heap> heap;  // keeps record/array values in `outcome` alive
};

/// Evaluates `program` with `input` as its stdin. Deterministic.
RunResult run(const Exp& program, std::string_view input, const RunOptions& options = {});

/// Result of one standard-library call, for parity checks against the VM.
struct BuiltinOutcome {
    std::optional<Value> value;        // set unless the call trapped or exited
    std::optional<TrapKind> trap;
    std::optional<std::int64_t> exit;
};

BuiltinOutcome invokeBuiltin(Builtin id, std::span<const Value> args, ByteIo& io);

/// Human-readable rendering: ints in decimal, strings quoted, `nil`, `()`,
/// `<record>` / `<array>`.
std::string describe(const Value& v);

} // namespace tiger::interp
