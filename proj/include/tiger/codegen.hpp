#pragma once

// Compiles a type-checked program to TVM code.
//
// Every Tiger function becomes a top-level TVM function. A nested function
// receives its enclosing activation through a static link in local slot 0;
// its parameters follow in slots 1..n. Variables read or written by a more
// deeply nested function live in a heap record (the activation's escape
// record) whose field 0 links to the next enclosing record. Everything else
// lives in local slots handed out by a stack-disciplined Frame.

#include <optional>
#include <string>
#include <vector>

#include "tiger/ast.hpp"
#include "tiger/diagnostic.hpp"
#include "tiger/semant.hpp"
#include "tiger/vm.hpp"

namespace tiger::codegen {

/// Local-slot allocator for one function. Slots below `params` hold the
/// incoming arguments; the rest are handed out and returned in LIFO order.
class Frame {
public:
    explicit Frame(int params) : params_(params), end_(params), high_(params) {}

    int allocLocal();
    /// Releases the most recently allocated slot.
    void popLocal();

    int params() const { return params_; }
    int frameEnd() const { return end_; }
    int highWater() const { return high_; }

private:
    int params_;
    int end_;
    int high_;
};

/// Where a variable lives.
struct Access {
    enum class Kind { Local, Escaped };
    Kind kind = Kind::Local;
    int level = 0;  // nesting depth of the owning function; main is 0
    int index = 0;  // local slot, or field of the owner's escape record
};

struct CompileResult {
    std::optional<vm::CodeModule> module;
    Diagnostics diagnostics;  // static errors; compilation only runs on clean programs
    bool ok() const { return module.has_value(); }
};

CompileResult compile(const Exp& program, const semant::Options& options = {});

/// Compiles a program that `analysis` reports clean.
vm::CodeModule compile(const Exp& program, const semant::Analysis& analysis);

/// A violation of the stack or frame discipline found by `verify`.
struct Violation {
    std::string function;
    int index = 0;  // instruction index, or -1 for the function as a whole
    std::string code;
    std::string message;
};

/// Static checks on generated code: the operand stack has one depth at every
/// instruction regardless of path, never underflows, is empty at `ret` and
/// holds exactly the result at `retv`/`halt`; control never runs off the end;
/// branch targets and callees exist; local operands are in range; and the
/// generator's frame end matched the parameter count at every exit.
/// Codes: STACK_MISMATCH, STACK_UNDERFLOW, RETURN_DEPTH, FALLTHROUGH,
/// NO_SUCH_LABEL, NO_SUCH_FUNCTION, BAD_LOCAL, FRAME_END.
std::vector<Violation> verify(const vm::CodeModule& module);

} // namespace tiger::codegen
