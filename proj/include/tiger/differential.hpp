#pragma once

// Interpreter versus compiled execution, built only from public entry points:
// interp::run on one side, compile -> render -> assemble -> execute on the
// other.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tiger/ast.hpp"
#include "tiger/interp.hpp"
#include "tiger/vm.hpp"

namespace tiger {

/// How a run ended, in terms both engines share.
struct Termination {
    enum class Kind { Normal, Exit, Trap, Budget };
    Kind kind = Kind::Normal;
    std::int64_t code = 0;           // Normal: int result or 0; Exit: exit() argument
    TrapKind trap = TrapKind::BadTag;  // Trap

    friend bool operator==(const Termination&, const Termination&) = default;
};

std::string describe(const Termination& t);

Termination terminationOf(const interp::Outcome& outcome);
Termination terminationOf(const vm::Outcome& outcome);

struct DiffReport {
    enum class Verdict { Pass, Fail, Inconclusive };
    Verdict verdict = Verdict::Pass;
    std::string reason;  // empty on Pass

    std::string interpOutput;
    Termination interpEnd;
    std::string vmOutput;
    Termination vmEnd;
};

/// `program` must type-check cleanly. A step budget applies to both sides;
/// if either exhausts it the verdict is Inconclusive.
DiffReport differential(const Exp& program, std::string_view input,
                        std::optional<std::uint64_t> budget = std::nullopt);

} // namespace tiger
