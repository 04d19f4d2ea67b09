#pragma once

// TVM: a small stack machine with a line-oriented textual assembly.
//
//   .module <name> [<version>]
//   .str <k> "<escaped>"                 ; string pool entry k
//   .fun <name> <nparams> [<nlocals>]
//   <label>:
//     <mnemonic> [operands]              ; one instruction per line
//   .end
//
// Arguments arrive in local slots 0..nparams-1. `main` takes no parameters
// and finishes with `halt`, which pops the program's exit code.
//
// Mnemonics: ldc n, lds k, ldnil, iload k, istore k, aload k, astore k,
// iadd, isub, imul, idiv, ineg, icmpeq, icmpne, icmplt, icmple, icmpgt,
// icmpge, refeq, dup, pop, goto L, brz L, brnz L, call f n, ret, retv,
// newrec n, getf i, setf i, newarr, aget, aset, builtin name n, halt.
//
// `i`-prefixed loads/stores move ints; `a`-prefixed ones move strings and
// references (records, arrays, nil). Every misuse traps rather than crashing.

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tiger/diagnostic.hpp"
#include "tiger/runtime.hpp"

namespace tiger::vm {

inline constexpr int kFormatVersion = 1;

enum class Op {
    Ldc, Lds, Ldnil, Iload, Istore, Aload, Astore,
    Iadd, Isub, Imul, Idiv, Ineg,
    Icmpeq, Icmpne, Icmplt, Icmple, Icmpgt, Icmpge, Refeq,
    Dup, Pop, Goto, Brz, Brnz, Call, Ret, Retv,
    Newrec, Getf, Setf, Newarr, Aget, Aset, Builtin, Halt,
};

const char* mnemonic(Op op);
std::optional<Op> parseMnemonic(std::string_view text);

enum class OperandKind {
    None,
    Int,       // ldc
    Index,     // lds, loads/stores, newrec, getf, setf: non-negative
    Label,     // goto, brz, brnz
    Callee,    // call f n
    BuiltinOp, // builtin name n
};
OperandKind operandKind(Op op);

struct Instruction {
    Instruction(Op op, std::int64_t value = 0, std::string name = {}, int argc = 0)
        : op(op), value(value), name(std::move(name)), argc(argc) {}

    Op op;
    std::int64_t value = 0;  // Int/Index operand; resolved branch target or callee index after assembly
    std::string name;        // label, function or builtin name
    int argc = 0;            // call/builtin argument count

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct StackEffect {
    int pops;
    int pushes;
};
/// Operand-stack effect of `ins`. For `call`, whether the callee returns a
/// value is not visible in the instruction and must be supplied.
StackEffect stackEffect(const Instruction& ins, bool calleeReturnsValue = false);

/// String-comparison helper available to `builtin` alongside the standard
/// library: strcmp a b pushes -1, 0 or 1.
inline constexpr std::string_view kStrcmp = "strcmp";

/// Arity and result count for a `builtin` name, or nullopt if unknown.
struct BuiltinSignature {
    int arity;
    bool returnsValue;
};
std::optional<BuiltinSignature> builtinSignature(std::string_view name);

// ---- text-level module ---------------------------------------------------

struct LabelDef {
    std::string name;
    friend bool operator==(const LabelDef&, const LabelDef&) = default;
};
using Line = std::variant<LabelDef, Instruction>;

struct CodeFunction {
    std::string name;
    int params = 0;
    int locals = 0;
    std::vector<Line> body;
    /// Frame end observed by the code generator when it finished the
    /// function; -1 when unknown (hand-written code).
    int frameEndAtExit = -1;
};

struct CodeModule {
    std::string name = "tiger";
    std::vector<std::string> strings;
    std::vector<CodeFunction> functions;  // includes "main"
};

std::string render(const CodeModule& module);

// ---- assembled module ----------------------------------------------------

struct AssembledFunction {
    std::string name;
    int params = 0;
    int locals = 0;
    std::vector<Instruction> code;  // branch/call operands resolved into `value`
};

struct AssembledModule {
    std::string name;
    std::vector<std::string> strings;
    std::vector<AssembledFunction> functions;
    std::unordered_map<std::string, int> functionIndex;
    int mainIndex = -1;
};

struct AssembleResult {
    std::optional<AssembledModule> module;
    Diagnostics diagnostics;  // positioned by line; column 1
    bool ok() const { return module.has_value(); }
};

/// Parses and validates assembly text: syntax, operand ranges, labels,
/// callee arity, and a terminating instruction at the end of every function.
/// Diagnostic codes: BAD_DIRECTIVE, UNKNOWN_MNEMONIC, BAD_OPERAND,
/// DUPLICATE_LABEL, NO_SUCH_LABEL, DUPLICATE_FUNCTION, NO_SUCH_FUNCTION,
/// UNKNOWN_BUILTIN, NO_MAIN, FALLTHROUGH.
AssembleResult assemble(std::string_view text);

// ---- execution -----------------------------------------------------------

struct Cell;
struct Nil {
    friend bool operator==(Nil, Nil) = default;
};
using Value = std::variant<std::int64_t, std::string, Nil, Cell*>;

struct Cell {
    bool isArray = false;
    std::vector<Value> slots;
};

struct Trap {
    TrapKind kind;
    std::string function;
    int index = 0;  // instruction index within `function`
    std::string message;
};

struct Outcome {
    enum class Kind { Halt, Exit, Trap };
    Kind kind = Kind::Halt;
    std::int64_t code = 0;     // Halt: main's result; Exit: exit() argument
    std::optional<Trap> trap;  // Trap
};

struct ExecOptions {
    /// Trap with STEP_BUDGET before executing instruction budget+1.
    std::optional<std::uint64_t> stepBudget;
    /// Total record fields plus array elements the program may allocate.
    std::uint64_t heapLimit = std::uint64_t{1} << 24;
};

struct ExecResult {
    std::string output;
    Outcome outcome;
    std::uint64_t steps = 0;
};

ExecResult execute(const AssembledModule& module, std::string_view input, const ExecOptions& options = {});

/// Result of one `builtin` instruction, for parity checks against the
/// interpreter.
struct BuiltinOutcome {
    std::optional<Value> value;  // set on success for value-returning builtins
    std::optional<TrapKind> trap;
    std::optional<std::int64_t> exit;
};

/// Runs builtin `name` on `args` the way the `builtin` instruction does.
BuiltinOutcome invokeBuiltin(std::string_view name, std::span<const Value> args, ByteIo& io);

} // namespace tiger::vm
