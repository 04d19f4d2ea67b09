#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "../support/corpus.hpp"
#include "tiger/codegen.hpp"
#include "tiger/frontend.hpp"

using namespace tiger;
using vm::Instruction;
using vm::Op;

namespace {

vm::CodeModule compileOk(std::string_view src) {
    ParseResult parsed = parseSource(src);
    REQUIRE(parsed.ok());
    auto r = codegen::compile(*parsed.program);
    REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty() ? "" : r.diagnostics.front().code));
    return std::move(*r.module);
}

const vm::CodeFunction& function(const vm::CodeModule& m, std::string_view prefix) {
    for (const auto& f : m.functions) {
        if (f.name.starts_with(prefix)) return f;
    }
    FAIL("no function " << prefix);
    return m.functions.front();
}

std::vector<Instruction> instructions(const vm::CodeFunction& f) {
    std::vector<Instruction> out;
    for (const auto& line : f.body) {
        if (const auto* ins = std::get_if<Instruction>(&line)) out.push_back(*ins);
    }
    return out;
}

std::vector<Op> ops(const vm::CodeFunction& f) {
    std::vector<Op> out;
    for (const auto& ins : instructions(f)) out.push_back(ins.op);
    return out;
}

bool contains(const std::vector<Op>& hay, std::vector<Op> needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::int64_t runCompiled(std::string_view src, std::string* output = nullptr) {
    auto text = vm::render(compileOk(src));
    auto assembled = vm::assemble(text);
    REQUIRE(assembled.ok());
    auto r = vm::execute(*assembled.module, {});
    if (output) *output = r.output;
    REQUIRE(r.outcome.kind == vm::Outcome::Kind::Halt);
    return r.outcome.code;
}

vm::CodeModule handWritten(std::vector<vm::Line> body, int locals = 0) {
    vm::CodeModule m;
    m.functions.push_back(vm::CodeFunction{"main", 0, locals, std::move(body)});
    return m;
}

std::vector<std::string> violationCodes(const vm::CodeModule& m) {
    std::vector<std::string> out;
    for (const auto& v : codegen::verify(m)) out.push_back(v.code);
    return out;
}

} // namespace

TEST_SUITE("codegen") {
    TEST_CASE("frame slots are stack-disciplined") {
        codegen::Frame f(2);
        CHECK(f.frameEnd() == 2);
        CHECK(f.allocLocal() == 2);
        CHECK(f.allocLocal() == 3);
        f.popLocal();
        CHECK(f.allocLocal() == 3);
        CHECK(f.highWater() == 4);
        f.popLocal();
        f.popLocal();
        CHECK(f.frameEnd() == 2);
        CHECK_THROWS(f.popLocal());
    }

    TEST_CASE("an integer literal") {
        auto m = compileOk("7");
        CHECK(instructions(function(m, "main")) == std::vector<Instruction>{Instruction(Op::Ldc, 7), Instruction(Op::Halt)});
    }

    TEST_CASE("int locals use iload and istore on their slot") {
        auto m = compileOk("let var a := 1 var b := 2 var c := 3 var d := 4 in d := d + 1; d end");
        auto code = instructions(function(m, "main"));
        CHECK(std::count(code.begin(), code.end(), Instruction(Op::Istore, 3)) == 2);
        CHECK(std::count(code.begin(), code.end(), Instruction(Op::Iload, 3)) == 2);
        // assignment stores without reading the target first
        std::vector<Instruction> tail(code.end() - 6, code.end());
        CHECK(tail == std::vector<Instruction>{Instruction(Op::Iload, 3), Instruction(Op::Ldc, 1),
                                               Instruction(Op::Iadd), Instruction(Op::Istore, 3),
                                               Instruction(Op::Iload, 3), Instruction(Op::Halt)});
    }

    TEST_CASE("strings go through the pool") {
        auto m = compileOk("(print(\"hi\"); print(\"hi\"); print(\"yo\"))");
        CHECK(m.strings == std::vector<std::string>{"hi", "yo"});
        auto code = instructions(function(m, "main"));
        CHECK(code[0] == Instruction(Op::Lds, 0));
        CHECK(code[1] == Instruction(Op::Builtin, 0, "print", 1));
    }

    TEST_CASE("while tests before the body and jumps back") {
        auto m = compileOk("let var i := 0 in while i < 3 do i := i + 1 end");
        auto code = ops(function(m, "main"));
        CHECK(contains(code, {Op::Iload, Op::Ldc, Op::Icmplt, Op::Brz}));
        CHECK(std::count(code.begin(), code.end(), Op::Goto) == 1);
        CHECK(runCompiled("let var i := 0 in while i < 3 do i := i + 1; i end") == 3);
    }

    TEST_CASE("logical operators short-circuit") {
        auto m = compileOk("let var a := 1 var b := 0 in a & b end");
        auto code = ops(function(m, "main"));
        CHECK(contains(code, {Op::Iload, Op::Brz, Op::Iload, Op::Goto}));
        std::string out;
        CHECK(runCompiled("(0 & (print(\"x\"); 1)) + (1 | (print(\"y\"); 1)) + (3 & 4)", &out) == 5);
        CHECK(out.empty());
    }

    TEST_CASE("escaping variables live in records") {
        const char* src = R"(
            let var n := 5
                function get(): int = n
                var m := 1
            in n := n + m; get() end)";
        auto m = compileOk(src);
        auto mainOps = ops(function(m, "main"));
        CHECK(contains(mainOps, {Op::Ldnil, Op::Ldc, Op::Newrec, Op::Astore}));
        auto getOps = ops(function(m, "get"));
        CHECK(getOps == std::vector<Op>{Op::Aload, Op::Getf, Op::Retv});
        CHECK(runCompiled(src) == 6);
    }

    TEST_CASE("static links reach several levels out") {
        const char* src = R"(
            let var x := 1
                function a(): int =
                    let function b(): int =
                            let function c(): int = (x := x * 10; x) in c() end
                    in b() + 1 end
            in a() + a() end)";
        CHECK(runCompiled(src) == 10 + 1 + 100 + 1);
        auto m = compileOk(src);
        CHECK(contains(ops(function(m, "c")), {Op::Aload, Op::Getf, Op::Getf}));
    }

    TEST_CASE("the generator records a balanced frame") {
        for (const auto& p : testing::loadCorpus("ok")) {
            CAPTURE(p.name);
            auto m = compileOk(p.source);
            for (const auto& f : m.functions) {
                CAPTURE(f.name);
                CHECK(f.frameEndAtExit == f.params);
                CHECK(f.locals >= f.params);
            }
        }
    }

    TEST_CASE("verify accepts every corpus program") {
        for (const auto& p : testing::loadCorpus("ok")) {
            CAPTURE(p.name);
            auto violations = codegen::verify(compileOk(p.source));
            for (const auto& v : violations) FAIL_CHECK(v.function << "@" << v.index << " " << v.code << " " << v.message);
        }
    }

    TEST_CASE("verify rejects broken code") {
        using vm::LabelDef;
        // join with different depths
        CHECK(violationCodes(handWritten({Instruction(Op::Ldc, 1), Instruction(Op::Brz, 0, "J"), Instruction(Op::Ldc, 2),
                                          LabelDef{"J"}, Instruction(Op::Ldc, 0), Instruction(Op::Halt)})) ==
              std::vector<std::string>{"STACK_MISMATCH"});
        CHECK(violationCodes(handWritten({Instruction(Op::Iadd), Instruction(Op::Halt)})) ==
              std::vector<std::string>{"STACK_UNDERFLOW"});
        CHECK(violationCodes(handWritten({Instruction(Op::Ldc, 1), Instruction(Op::Ldc, 1), Instruction(Op::Halt)})) ==
              std::vector<std::string>{"RETURN_DEPTH"});
        CHECK(violationCodes(handWritten({Instruction(Op::Ldc, 1)})) == std::vector<std::string>{"FALLTHROUGH"});
        CHECK(violationCodes(handWritten({Instruction(Op::Goto, 0, "X")})) == std::vector<std::string>{"NO_SUCH_LABEL"});
        CHECK(violationCodes(handWritten({Instruction(Op::Call, 0, "g", 0), Instruction(Op::Ldc, 0),
                                          Instruction(Op::Halt)})) == std::vector<std::string>{"NO_SUCH_FUNCTION"});
        CHECK(violationCodes(handWritten({Instruction(Op::Iload, 2), Instruction(Op::Halt)}, 1)) ==
              std::vector<std::string>{"BAD_LOCAL"});
        auto m = handWritten({Instruction(Op::Ldc, 0), Instruction(Op::Halt)}, 1);
        m.functions[0].frameEndAtExit = 1;
        CHECK(violationCodes(m) == std::vector<std::string>{"FRAME_END"});
    }
}
