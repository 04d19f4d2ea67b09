#include "tiger/differential.hpp"

#include "tiger/codegen.hpp"

namespace tiger {

std::string describe(const Termination& t) {
    switch (t.kind) {
    case Termination::Kind::Normal: return "normal, code " + std::to_string(t.code);
    case Termination::Kind::Exit: return "exit(" + std::to_string(t.code) + ")";
    case Termination::Kind::Trap: return std::string("trap ") + trapCode(t.trap);
    case Termination::Kind::Budget: return "step budget exhausted";
    }
    return "?";
}

Termination terminationOf(const interp::Outcome& outcome) {
    Termination t;
    switch (outcome.kind) {
    case interp::Outcome::Kind::Normal:
        if (const auto* i = std::get_if<std::int64_t>(&outcome.value)) t.code = *i;
        break;
    case interp::Outcome::Kind::Exit:
        t.kind = Termination::Kind::Exit;
        t.code = outcome.exitCode;
        break;
    case interp::Outcome::Kind::Trap:
        t.kind = Termination::Kind::Trap;
        t.trap = outcome.trap->kind;
        break;
    case interp::Outcome::Kind::BudgetExceeded: t.kind = Termination::Kind::Budget; break;
    }
    return t;
}

Termination terminationOf(const vm::Outcome& outcome) {
    Termination t;
    switch (outcome.kind) {
    case vm::Outcome::Kind::Halt: t.code = outcome.code; break;
    case vm::Outcome::Kind::Exit:
        t.kind = Termination::Kind::Exit;
        t.code = outcome.code;
        break;
    case vm::Outcome::Kind::Trap:
        if (outcome.trap->kind == TrapKind::StepBudget) {
            t.kind = Termination::Kind::Budget;
        } else {
            t.kind = Termination::Kind::Trap;
            t.trap = outcome.trap->kind;
        }
        break;
    }
    return t;
}

DiffReport differential(const Exp& program, std::string_view input, std::optional<std::uint64_t> budget) {
    DiffReport report;

    interp::RunResult ran = interp::run(program, input, interp::RunOptions{budget});
    report.interpOutput = std::move(ran.output);
    report.interpEnd = terminationOf(ran.outcome);

    codegen::CompileResult compiled = codegen::compile(program);
    if (!compiled.ok()) {
        report.verdict = DiffReport::Verdict::Fail;
        report.reason = "program does not type-check";
        return report;
    }
    vm::AssembleResult assembled = vm::assemble(vm::render(*compiled.module));
    if (!assembled.ok()) {
        report.verdict = DiffReport::Verdict::Fail;
        const Diagnostic& d = assembled.diagnostics.front();
        report.reason = "generated code does not assemble: line " + std::to_string(d.pos.line) + ": " + d.code +
                        ": " + d.message;
        return report;
    }
    vm::ExecResult executed = vm::execute(*assembled.module, input, vm::ExecOptions{budget});
    report.vmOutput = std::move(executed.output);
    report.vmEnd = terminationOf(executed.outcome);

    if (report.interpEnd.kind == Termination::Kind::Budget || report.vmEnd.kind == Termination::Kind::Budget) {
        report.verdict = DiffReport::Verdict::Inconclusive;
        report.reason = "step budget exhausted";
    } else if (report.interpOutput != report.vmOutput) {
        report.verdict = DiffReport::Verdict::Fail;
        std::size_t at = 0;
        while (at < report.interpOutput.size() && at < report.vmOutput.size() &&
               report.interpOutput[at] == report.vmOutput[at]) {
            ++at;
        }
        report.reason = "output differs at byte " + std::to_string(at) + " (interpreter wrote " +
                        std::to_string(report.interpOutput.size()) + " bytes, vm " +
                        std::to_string(report.vmOutput.size()) + ")";
    } else if (!(report.interpEnd == report.vmEnd)) {
        report.verdict = DiffReport::Verdict::Fail;
        report.reason = "interpreter ended with " + describe(report.interpEnd) + ", vm with " + describe(report.vmEnd);
    }
    return report;
}

} // namespace tiger
