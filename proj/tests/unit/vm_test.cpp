#include <doctest.h>

#include <string>

#include "tiger/vm.hpp"

using namespace tiger;
using vm::Outcome;

namespace {

vm::AssembledModule assembleOk(std::string_view text) {
    auto r = vm::assemble(text);
    REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty() ? "" : r.diagnostics.front().code + " " + r.diagnostics.front().message));
    return std::move(*r.module);
}

std::string firstError(std::string_view text) {
    auto r = vm::assemble(text);
    return r.diagnostics.empty() ? "" : r.diagnostics.front().code;
}

vm::ExecResult execText(std::string_view text, std::string_view input = {}, vm::ExecOptions opts = {}) {
    return vm::execute(assembleOk(text), input, opts);
}

std::string mainOf(std::string_view body, int locals = 0) {
    return ".module t\n.fun main 0 " + std::to_string(locals) + "\n" + std::string(body) + "\n.end\n";
}

TrapKind trapOf(const vm::ExecResult& r) {
    REQUIRE(r.outcome.kind == Outcome::Kind::Trap);
    return r.outcome.trap->kind;
}

} // namespace

TEST_SUITE("vm") {
    TEST_CASE("minimal module") {
        auto m = assembleOk(".module m\n.fun main 0\n  ldc 0\n  halt\n.end\n");
        CHECK(m.name == "m");
        REQUIRE(m.functions.size() == 1);
        CHECK(m.functions[m.mainIndex].name == "main");
        auto r = vm::execute(m, {});
        CHECK(r.outcome.kind == Outcome::Kind::Halt);
        CHECK(r.outcome.code == 0);
        CHECK(r.steps == 2);
    }

    TEST_CASE("arithmetic") {
        auto r = execText(mainOf("ldc 2\nldc 3\niadd\nhalt"));
        CHECK(r.outcome.code == 5);
        CHECK(execText(mainOf("ldc -7\nldc 2\nidiv\nhalt")).outcome.code == -3);
        CHECK(execText(mainOf("ldc 9223372036854775807\nldc 1\niadd\nhalt")).outcome.code == INT64_MIN);
        CHECK(execText(mainOf("ldc -9223372036854775808\nldc -1\nidiv\nhalt")).outcome.code == INT64_MIN);
        CHECK(execText(mainOf("ldc 4\nineg\nldc 3\nicmplt\nhalt")).outcome.code == 1);
    }

    TEST_CASE("division by zero traps at the instruction") {
        auto r = execText(mainOf("ldc 1\nldc 0\nidiv\nhalt"));
        CHECK(trapOf(r) == TrapKind::DivZero);
        CHECK(r.outcome.trap->function == "main");
        CHECK(r.outcome.trap->index == 2);
    }

    TEST_CASE("syntax and link errors") {
        CHECK(firstError(mainOf("goto nowhere")) == "NO_SUCH_LABEL");
        CHECK(firstError(mainOf("a:\na:\nldc 0\nhalt")) == "DUPLICATE_LABEL");
        CHECK(firstError(mainOf("frob\nhalt")) == "UNKNOWN_MNEMONIC");
        CHECK(firstError(mainOf("ldc x\nhalt")) == "BAD_OPERAND");
        CHECK(firstError(mainOf("iload -1\nhalt")) == "BAD_OPERAND");
        CHECK(firstError(mainOf("iload 4\nhalt", 1)) == "BAD_OPERAND");
        CHECK(firstError(mainOf("call f 0\nhalt")) == "NO_SUCH_FUNCTION");
        CHECK(firstError(mainOf("builtin launch 0\nhalt")) == "UNKNOWN_BUILTIN");
        CHECK(firstError(mainOf("ldc 1")) == "FALLTHROUGH");
        CHECK(firstError(".module t\n.fun f 0\nret\n.end\n") == "NO_MAIN");
        CHECK(firstError(".module t\n.fun main 0\nldc 0\nhalt\n.end\n.fun main 0\nldc 0\nhalt\n.end\n") ==
              "DUPLICATE_FUNCTION");
        CHECK(firstError(".bogus\n") == "BAD_DIRECTIVE");
        auto r = vm::assemble(".module t\n.fun main 0\n  ldc 0\n  goto missing\n.end\n");
        REQUIRE_FALSE(r.ok());
        CHECK(r.diagnostics.front().pos.line == 4);
    }

    TEST_CASE("labels, branches and comments") {
        const char* body = R"(
            ldc 0
            istore 0      ; counter
        top: iload 0
            ldc 5
            icmpge
            brnz done
            iload 0
            ldc 1
            iadd
            istore 0
            goto top
        done:
            iload 0
            halt)";
        CHECK(execText(mainOf(body, 1)).outcome.code == 5);
    }

    TEST_CASE("calls") {
        const char* text = R"(.module t
.str 0 "a\tb"
.fun main 0
    ldc 20
    ldc 22
    call add 2
    lds 0
    builtin print 1
    halt
.end
.fun add 2
    iload 0
    iload 1
    iadd
    retv
.end
)";
        auto r = execText(text);
        CHECK(r.output == "a\tb");
        CHECK(r.outcome.code == 42);
    }

    TEST_CASE("heap cells") {
        const char* body = R"(
            ldc 3
            ldc 7
            newarr
            astore 0
            aload 0
            ldc 2
            ldc 9
            aset
            ldc 1
            ldc 2
            newrec 2
            astore 1
            aload 1
            ldc 5
            setf 0
            aload 0
            ldc 2
            aget
            aload 1
            getf 0
            iadd
            halt)";
        CHECK(execText(mainOf(body, 2)).outcome.code == 14);
        CHECK(trapOf(execText(mainOf("ldc 2\nldc 0\nnewarr\nldc 2\naget\nhalt"))) == TrapKind::IndexOob);
        CHECK(trapOf(execText(mainOf("ldnil\ngetf 0\nhalt"))) == TrapKind::NilDeref);
        CHECK(trapOf(execText(mainOf("ldc -1\nldc 0\nnewarr\npop\nldc 0\nhalt"))) == TrapKind::IndexOob);
        vm::ExecOptions small;
        small.heapLimit = 10;
        CHECK(trapOf(execText(mainOf("ldc 11\nldc 0\nnewarr\npop\nldc 0\nhalt"), {}, small)) ==
              TrapKind::HeapExhausted);
    }

    TEST_CASE("tag discipline") {
        CHECK(trapOf(execText(mainOf("ldnil\nistore 0\nldc 0\nhalt", 1))) == TrapKind::BadTag);
        CHECK(trapOf(execText(mainOf("ldc 1\nastore 0\nldc 0\nhalt", 1))) == TrapKind::BadTag);
        CHECK(trapOf(execText(mainOf("aload 0\nhalt", 1))) == TrapKind::BadTag);
        CHECK(trapOf(execText(mainOf("ldnil\nldc 1\niadd\nhalt"))) == TrapKind::BadTag);
        CHECK(trapOf(execText(mainOf("ldc 1\nldc 1\ngetf 0\nhalt"))) == TrapKind::BadTag);
        CHECK(trapOf(execText(mainOf("pop\nldc 0\nhalt"))) == TrapKind::StackUnderflow);
    }

    TEST_CASE("strings and references compare") {
        const char* text = R"(.module t
.str 0 "abc"
.str 1 "abd"
.fun main 0
    lds 0
    lds 1
    builtin strcmp 2
    ldnil
    ldnil
    refeq
    ldc 10
    imul
    iadd
    halt
.end
)";
        CHECK(execText(text).outcome.code == 9);
    }

    TEST_CASE("step budget traps after exactly the budget") {
        std::string loop = mainOf("top: goto top");
        for (std::uint64_t budget : {1u, 2u, 17u, 1000u}) {
            vm::ExecOptions opts;
            opts.stepBudget = budget;
            auto r = execText(loop, {}, opts);
            CHECK(trapOf(r) == TrapKind::StepBudget);
            CHECK(r.steps == budget);
        }
        vm::ExecOptions exact;
        exact.stepBudget = 2;
        CHECK(execText(mainOf("ldc 0\nhalt"), {}, exact).outcome.kind == Outcome::Kind::Halt);
        exact.stepBudget = 1;
        CHECK(trapOf(execText(mainOf("ldc 0\nhalt"), {}, exact)) == TrapKind::StepBudget);
    }

    TEST_CASE("call depth") {
        const char* text = R"(.module t
.fun main 0
    call f 0
    ldc 0
    halt
.end
.fun f 0
    call f 0
    ret
.end
)";
        CHECK(trapOf(execText(text)) == TrapKind::CallDepth);
    }

    TEST_CASE("exit builtin") {
        auto r = execText(mainOf("ldc 6\nbuiltin exit 1\nldc 0\nhalt"));
        CHECK(r.outcome.kind == Outcome::Kind::Exit);
        CHECK(r.outcome.code == 6);
    }

    TEST_CASE("render and assemble round trip") {
        vm::CodeModule m;
        m.name = "rt";
        m.strings = {"", "q\"\\\n\x01", "plain"};
        vm::CodeFunction main{"main", 0, 1, {}};
        main.body = {
            vm::Instruction(vm::Op::Ldc, -5),
            vm::Instruction(vm::Op::Istore, 0),
            vm::LabelDef{"L0"},
            vm::Instruction(vm::Op::Lds, 1),
            vm::Instruction(vm::Op::Builtin, 0, "print", 1),
            vm::Instruction(vm::Op::Ldc, 0),
            vm::Instruction(vm::Op::Brnz, 0, "L0"),
            vm::Instruction(vm::Op::Ldc, 1),
            vm::Instruction(vm::Op::Call, 0, "f", 1),
            vm::Instruction(vm::Op::Halt),
        };
        vm::CodeFunction f{"f", 1, 1, {vm::Instruction(vm::Op::Iload, 0), vm::Instruction(vm::Op::Retv)}};
        m.functions = {main, f};
        std::string text = vm::render(m);
        auto a = assembleOk(text);
        CHECK(a.name == "rt");
        CHECK(a.strings == m.strings);
        REQUIRE(a.functions.size() == 2);
        auto r = vm::execute(a, {});
        CHECK(r.output == m.strings[1]);
        CHECK(r.outcome.code == 1);
    }
}
