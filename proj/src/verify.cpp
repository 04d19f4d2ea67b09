#include <deque>
#include <unordered_map>

#include "tiger/codegen.hpp"

namespace tiger::codegen {
namespace {

using vm::Instruction;
using vm::Op;

struct Callee {
    int params;
    bool returnsValue;
};

class FunctionChecker {
public:
    FunctionChecker(const vm::CodeFunction& fn, const std::unordered_map<std::string, Callee>& callees,
                    std::vector<Violation>& out)
        : fn_(fn), callees_(callees), out_(out) {
        for (const auto& line : fn.body) {
            if (const auto* l = std::get_if<vm::LabelDef>(&line)) {
                labels_[l->name] = static_cast<int>(code_.size());
            } else {
                code_.push_back(&std::get<Instruction>(line));
            }
        }
    }

    void run() {
        if (fn_.frameEndAtExit >= 0 && fn_.frameEndAtExit != fn_.params) {
            report(-1, "FRAME_END", "frame end " + std::to_string(fn_.frameEndAtExit) + " at exit, expected " +
                                        std::to_string(fn_.params));
        }
        depth_.assign(code_.size(), -1);
        flow(0, 0, -1);
        while (!work_.empty()) {
            int pc = work_.front();
            work_.pop_front();
            step(pc);
        }
    }

private:
    void report(int index, const char* code, std::string message) {
        out_.push_back({fn_.name, index, code, std::move(message)});
    }

    // Records that control reaches `pc` with `depth` values on the stack.
    void flow(int pc, int depth, int from) {
        if (pc >= static_cast<int>(code_.size())) {
            report(from, "FALLTHROUGH", "control runs past the last instruction");
            return;
        }
        if (depth_[pc] < 0) {
            depth_[pc] = depth;
            work_.push_back(pc);
        } else if (depth_[pc] != depth) {
            report(pc, "STACK_MISMATCH", "stack depth " + std::to_string(depth) + " on one path, " +
                                             std::to_string(depth_[pc]) + " on another");
        }
    }

    void step(int pc) {
        const Instruction& ins = *code_[pc];
        int depth = depth_[pc];
        bool returnsValue = false;

        switch (ins.op) {
        case Op::Iload:
        case Op::Istore:
        case Op::Aload:
        case Op::Astore:
            if (ins.value >= fn_.locals) {
                report(pc, "BAD_LOCAL", "local " + std::to_string(ins.value) + " outside a frame of " +
                                            std::to_string(fn_.locals));
            }
            break;
        case Op::Call: {
            auto it = callees_.find(ins.name);
            if (it == callees_.end()) {
                report(pc, "NO_SUCH_FUNCTION", "no function '" + ins.name + "'");
                return;
            }
            returnsValue = it->second.returnsValue;
            break;
        }
        default: break;
        }

        vm::StackEffect eff = vm::stackEffect(ins, returnsValue);
        if (depth < eff.pops) {
            report(pc, "STACK_UNDERFLOW", std::string(vm::mnemonic(ins.op)) + " needs " + std::to_string(eff.pops) +
                                              " operand(s), stack has " + std::to_string(depth));
            return;
        }
        int after = depth - eff.pops + eff.pushes;

        switch (ins.op) {
        case Op::Ret:
            if (depth != 0) report(pc, "RETURN_DEPTH", "ret with " + std::to_string(depth) + " value(s) on the stack");
            return;
        case Op::Retv:
        case Op::Halt:
            if (depth != 1) {
                report(pc, "RETURN_DEPTH", std::string(vm::mnemonic(ins.op)) + " with " + std::to_string(depth) +
                                               " value(s) on the stack, expected 1");
            }
            return;
        case Op::Goto:
        case Op::Brz:
        case Op::Brnz: {
            auto it = labels_.find(ins.name);
            if (it == labels_.end()) {
                report(pc, "NO_SUCH_LABEL", "no label '" + ins.name + "'");
                return;
            }
            flow(it->second, after, pc);
            if (ins.op != Op::Goto) flow(pc + 1, after, pc);
            return;
        }
        default: flow(pc + 1, after, pc);
        }
    }

    const vm::CodeFunction& fn_;
    const std::unordered_map<std::string, Callee>& callees_;
    std::vector<Violation>& out_;
    std::vector<const Instruction*> code_;
    std::unordered_map<std::string, int> labels_;
    std::vector<int> depth_;
    std::deque<int> work_;
};

} // namespace

std::vector<Violation> verify(const vm::CodeModule& module) {
    std::unordered_map<std::string, Callee> callees;
    for (const auto& fn : module.functions) {
        Callee c{fn.params, false};
        for (const auto& line : fn.body) {
            const auto* ins = std::get_if<Instruction>(&line);
            if (ins && ins->op == Op::Retv) c.returnsValue = true;
        }
        callees.emplace(fn.name, c);
    }
    std::vector<Violation> out;
    for (const auto& fn : module.functions) FunctionChecker(fn, callees, out).run();
    return out;
}

} // namespace tiger::codegen
