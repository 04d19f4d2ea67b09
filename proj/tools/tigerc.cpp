// tigerc: command-line driver for the Tiger toolkit.
//
//   tigerc pretty  <file|->
//   tigerc check   <file|->
//   tigerc run     <file|-> [--no-typecheck] [--budget N] [--stdin-file PATH]
//   tigerc compile <file|-> [-o out.tvm]
//   tigerc exec    <file.tvm|-> [--budget N] [--stdin-file PATH]
//   tigerc diff    <file|-> [--budget N] [--stdin-file PATH]
//
// Exit status: 0 success, 1 static errors, 2 runtime trap or diff mismatch,
// 3 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tiger/codegen.hpp"
#include "tiger/differential.hpp"
#include "tiger/frontend.hpp"
#include "tiger/interp.hpp"
#include "tiger/semant.hpp"
#include "tiger/vm.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kStaticError = 1;
constexpr int kRuntimeError = 2;
constexpr int kUsage = 3;

struct Source {
    std::string name;
    std::string text;
};

std::optional<std::string> slurp(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Options {
    std::string input;
    std::string output;
    std::string stdinFile;
    std::optional<std::uint64_t> budget;
    bool noTypecheck = false;
};

class Driver {
public:
    explicit Driver(const Options& opts) : opts_(opts) {}

    int pretty() {
        auto program = parse();
        if (!program) return failure();
        std::cout << tiger::pretty(*program) << '\n';
        return kOk;
    }

    int check() {
        auto program = parse();
        if (!program) return failure();
        if (!typecheck(*program)) return kStaticError;
        return kOk;
    }

    int run() {
        auto program = parse();
        if (!program) return failure();
        if (!opts_.noTypecheck && !typecheck(*program)) return kStaticError;
        auto input = programInput();
        if (!input) return kUsage;
        tiger::interp::RunResult r = tiger::interp::run(*program, *input, tiger::interp::RunOptions{opts_.budget});
        std::cout << r.output << std::flush;
        const auto& o = r.outcome;
        switch (o.kind) {
        case tiger::interp::Outcome::Kind::Trap:
        case tiger::interp::Outcome::Kind::BudgetExceeded:
            report(tiger::Diagnostic{o.trap->pos, tiger::trapCode(o.trap->kind), o.trap->message});
            return kRuntimeError;
        default: reportExitCode(tiger::terminationOf(o).code); return kOk;
        }
    }

    int compile() {
        auto program = parse();
        if (!program) return failure();
        tiger::codegen::CompileResult compiled = tiger::codegen::compile(*program);
        if (!compiled.ok()) {
            for (const auto& d : compiled.diagnostics) report(d);
            return kStaticError;
        }
        std::string text = tiger::vm::render(*compiled.module);
        if (opts_.output.empty() || opts_.output == "-") {
            std::cout << text;
            return kOk;
        }
        std::ofstream out(opts_.output, std::ios::binary);
        if (!(out << text)) {
            std::cerr << "tigerc: cannot write " << opts_.output << '\n';
            return kUsage;
        }
        return kOk;
    }

    int exec() {
        auto source = read();
        if (!source) return kUsage;
        tiger::vm::AssembleResult assembled = tiger::vm::assemble(source->text);
        if (!assembled.ok()) {
            for (const auto& d : assembled.diagnostics) report(d);
            return kStaticError;
        }
        auto input = programInput();
        if (!input) return kUsage;
        tiger::vm::ExecResult r = tiger::vm::execute(*assembled.module, *input, tiger::vm::ExecOptions{opts_.budget});
        std::cout << r.output << std::flush;
        if (r.outcome.kind == tiger::vm::Outcome::Kind::Trap) {
            const auto& t = *r.outcome.trap;
            std::cerr << name_ << ": error[" << tiger::trapCode(t.kind) << "]: " << t.message << " (in " << t.function
                      << " at instruction " << t.index << ")\n";
            return kRuntimeError;
        }
        reportExitCode(r.outcome.code);
        return kOk;
    }

    int diff() {
        auto program = parse();
        if (!program) return failure();
        if (!typecheck(*program)) return kStaticError;
        auto input = programInput();
        if (!input) return kUsage;
        tiger::DiffReport d = tiger::differential(*program, *input, opts_.budget);
        switch (d.verdict) {
        case tiger::DiffReport::Verdict::Pass: std::cout << "PASS\n"; return kOk;
        case tiger::DiffReport::Verdict::Fail: std::cout << "FAIL: " << d.reason << '\n'; return kRuntimeError;
        case tiger::DiffReport::Verdict::Inconclusive:
            std::cout << "INCONCLUSIVE: " << d.reason << '\n';
            return kRuntimeError;
        }
        return kRuntimeError;
    }

private:
    std::optional<Source> read() {
        auto text = slurp(opts_.input);
        name_ = opts_.input == "-" ? "<stdin>" : opts_.input;
        if (!text) {
            unreadable_ = true;
            std::cerr << "tigerc: cannot read " << opts_.input << '\n';
            return std::nullopt;
        }
        return Source{name_, std::move(*text)};
    }

    std::optional<tiger::Exp> parse() {
        auto source = read();
        if (!source) return std::nullopt;
        tiger::ParseResult parsed = tiger::parseSource(source->text);
        for (const auto& d : parsed.diagnostics) report(d);
        return std::move(parsed.program);
    }

    // Parse failed: a missing input file is a usage error, not a static one.
    int failure() const { return unreadable_ ? kUsage : kStaticError; }

    bool typecheck(const tiger::Exp& program) {
        tiger::semant::Analysis analysis = tiger::semant::analyze(program);
        for (const auto& d : analysis.diagnostics) report(d);
        return analysis.ok();
    }

    // Program stdin: --stdin-file if given, otherwise the process's stdin
    // unless the source itself came from there.
    std::optional<std::string> programInput() {
        if (!opts_.stdinFile.empty()) {
            auto text = slurp(opts_.stdinFile);
            if (!text) std::cerr << "tigerc: cannot read " << opts_.stdinFile << '\n';
            return text;
        }
        if (opts_.input == "-") return std::string();
        return slurp("-");
    }

    void report(const tiger::Diagnostic& d) { std::cerr << tiger::formatDiagnostic(name_, d) << '\n'; }

    void reportExitCode(std::int64_t code) {
        if (code != 0) std::cerr << name_ << ": exit code " << code << '\n';
    }

    const Options& opts_;
    std::string name_;
    bool unreadable_ = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tiger toolkit: pretty-printer, checker, interpreter, compiler and VM"};
    app.require_subcommand(1);
    Options opts;

    auto addInput = [&](CLI::App* sub) { sub->add_option("input", opts.input, "source file, or - for stdin")->required(); };
    auto addRunFlags = [&](CLI::App* sub) {
        sub->add_option("--budget", opts.budget, "step limit");
        sub->add_option("--stdin-file", opts.stdinFile, "file to use as the program's standard input");
    };

    auto* pretty = app.add_subcommand("pretty", "print canonical source");
    auto* check = app.add_subcommand("check", "report lexical, syntax and type errors");
    auto* run = app.add_subcommand("run", "type-check and interpret");
    auto* compile = app.add_subcommand("compile", "type-check and emit TVM assembly");
    auto* exec = app.add_subcommand("exec", "assemble and execute TVM assembly");
    auto* diff = app.add_subcommand("diff", "compare interpreter and compiled execution");
    for (auto* sub : {pretty, check, run, compile, exec, diff}) addInput(sub);
    for (auto* sub : {run, exec, diff}) addRunFlags(sub);
    run->add_flag("--no-typecheck", opts.noTypecheck, "interpret without static checking");
    compile->add_option("-o", opts.output, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    Driver driver(opts);
    if (*pretty) return driver.pretty();
    if (*check) return driver.check();
    if (*run) return driver.run();
    if (*compile) return driver.compile();
    if (*exec) return driver.exec();
    return driver.diff();
}
