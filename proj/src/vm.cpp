#include "tiger/vm.hpp"

#include <array>
#include <charconv>

#include "tiger/escape.hpp"

namespace tiger::vm {
namespace {

struct OpInfo {
    Op op;
    const char* name;
    OperandKind operand;
};

constexpr std::array kOps = {
    OpInfo{Op::Ldc, "ldc", OperandKind::Int},          OpInfo{Op::Lds, "lds", OperandKind::Index},
    OpInfo{Op::Ldnil, "ldnil", OperandKind::None},     OpInfo{Op::Iload, "iload", OperandKind::Index},
    OpInfo{Op::Istore, "istore", OperandKind::Index},  OpInfo{Op::Aload, "aload", OperandKind::Index},
    OpInfo{Op::Astore, "astore", OperandKind::Index},  OpInfo{Op::Iadd, "iadd", OperandKind::None},
    OpInfo{Op::Isub, "isub", OperandKind::None},       OpInfo{Op::Imul, "imul", OperandKind::None},
    OpInfo{Op::Idiv, "idiv", OperandKind::None},       OpInfo{Op::Ineg, "ineg", OperandKind::None},
    OpInfo{Op::Icmpeq, "icmpeq", OperandKind::None},   OpInfo{Op::Icmpne, "icmpne", OperandKind::None},
    OpInfo{Op::Icmplt, "icmplt", OperandKind::None},   OpInfo{Op::Icmple, "icmple", OperandKind::None},
    OpInfo{Op::Icmpgt, "icmpgt", OperandKind::None},   OpInfo{Op::Icmpge, "icmpge", OperandKind::None},
    OpInfo{Op::Refeq, "refeq", OperandKind::None},     OpInfo{Op::Dup, "dup", OperandKind::None},
    OpInfo{Op::Pop, "pop", OperandKind::None},         OpInfo{Op::Goto, "goto", OperandKind::Label},
    OpInfo{Op::Brz, "brz", OperandKind::Label},        OpInfo{Op::Brnz, "brnz", OperandKind::Label},
    OpInfo{Op::Call, "call", OperandKind::Callee},     OpInfo{Op::Ret, "ret", OperandKind::None},
    OpInfo{Op::Retv, "retv", OperandKind::None},       OpInfo{Op::Newrec, "newrec", OperandKind::Index},
    OpInfo{Op::Getf, "getf", OperandKind::Index},      OpInfo{Op::Setf, "setf", OperandKind::Index},
    OpInfo{Op::Newarr, "newarr", OperandKind::None},   OpInfo{Op::Aget, "aget", OperandKind::None},
    OpInfo{Op::Aset, "aset", OperandKind::None},       OpInfo{Op::Builtin, "builtin", OperandKind::BuiltinOp},
    OpInfo{Op::Halt, "halt", OperandKind::None},
};

const OpInfo& info(Op op) { return kOps[static_cast<std::size_t>(op)]; }

bool isTerminator(Op op) { return op == Op::Goto || op == Op::Ret || op == Op::Retv || op == Op::Halt; }

bool isIdentStart(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool isIdentChar(char c) { return isIdentStart(c) || (c >= '0' && c <= '9') || c == '.' || c == '$'; }

bool isIdent(std::string_view s) {
    if (s.empty() || !isIdentStart(s[0])) return false;
    for (char c : s) {
        if (!isIdentChar(c)) return false;
    }
    return true;
}

template <class Int>
std::optional<Int> parseInt(std::string_view s) {
    Int v{};
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
    return v;
}

// Splits on blanks; a double-quoted token is kept whole (with its quotes) and
// `;` outside quotes starts a comment. Returns nullopt for an unclosed quote.
std::optional<std::vector<std::string_view>> splitLine(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
        } else if (c == ';') {
            break;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < line.size() && line[j] != '"') j += line[j] == '\\' ? 2 : 1;
            if (j >= line.size()) return std::nullopt;
            out.push_back(line.substr(i, j + 1 - i));
            i = j + 1;
        } else {
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ';') ++j;
            out.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return out;
}

std::optional<std::string> unquote(std::string_view tok) {
    if (tok.size() < 2 || tok.front() != '"' || tok.back() != '"') return std::nullopt;
    tok = tok.substr(1, tok.size() - 2);
    std::string out;
    for (std::size_t i = 0; i < tok.size(); ++i) {
        if (tok[i] != '\\') {
            out += tok[i];
            continue;
        }
        auto esc = decodeEscape(tok.substr(i + 1));
        if (!esc) return std::nullopt;
        out += esc->byte;
        i += esc->length;
    }
    return out;
}

struct PendingFunction {
    AssembledFunction fn;
    int line = 0;
    std::unordered_map<std::string, int> labels;
    std::vector<int> lines;  // source line per instruction
};

class Assembler {
public:
    AssembleResult run(std::string_view text) {
        int lineNo = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            ++lineNo;
            line(text.substr(start, nl - start), lineNo);
            start = nl + 1;
        }
        if (current_) error(lineNo, "BAD_DIRECTIVE", "missing .end for function '" + current_->fn.name + "'");
        link();
        AssembleResult result;
        result.diagnostics = std::move(diags_);
        if (result.diagnostics.empty()) result.module = std::move(module_);
        return result;
    }

private:
    void error(int line, std::string code, std::string message) {
        diags_.push_back(Diagnostic{Pos{line, 1}, std::move(code), std::move(message)});
    }

    void line(std::string_view raw, int lineNo) {
        auto toks = splitLine(raw);
        if (!toks) {
            error(lineNo, "BAD_OPERAND", "unterminated string");
            return;
        }
        if (toks->empty()) return;
        std::string_view head = (*toks)[0];
        if (head.front() == '.') {
            directive(*toks, lineNo);
            return;
        }
        if (head.back() == ':') {
            std::string_view name = head.substr(0, head.size() - 1);
            if (!current_) {
                error(lineNo, "BAD_DIRECTIVE", "label outside a function");
                return;
            }
            if (!isIdent(name)) {
                error(lineNo, "BAD_OPERAND", "malformed label '" + std::string(name) + "'");
            } else if (!current_->labels.emplace(std::string(name), static_cast<int>(current_->fn.code.size())).second) {
                error(lineNo, "DUPLICATE_LABEL", "label '" + std::string(name) + "' defined twice");
            }
            toks->erase(toks->begin());
            if (toks->empty()) return;
        }
        instruction(*toks, lineNo);
    }

    void directive(const std::vector<std::string_view>& toks, int lineNo) {
        std::string_view d = toks[0];
        if (d == ".module") {
            if (toks.size() < 2 || toks.size() > 3 || !isIdent(toks[1])) {
                error(lineNo, "BAD_DIRECTIVE", "expected .module <name> [<version>]");
                return;
            }
            if (toks.size() == 3 && parseInt<int>(toks[2]) != kFormatVersion) {
                error(lineNo, "BAD_DIRECTIVE", "unsupported format version " + std::string(toks[2]));
            }
            module_.name = std::string(toks[1]);
        } else if (d == ".str") {
            auto k = toks.size() == 3 ? parseInt<int>(toks[1]) : std::nullopt;
            auto s = toks.size() == 3 ? unquote(toks[2]) : std::nullopt;
            if (!k || *k < 0 || !s) {
                error(lineNo, "BAD_DIRECTIVE", "expected .str <index> \"<text>\"");
                return;
            }
            auto idx = static_cast<std::size_t>(*k);
            if (idx >= module_.strings.size()) {
                module_.strings.resize(idx + 1);
                stringDefined_.resize(idx + 1, false);
            }
            if (stringDefined_[idx]) error(lineNo, "BAD_DIRECTIVE", "string " + std::to_string(idx) + " defined twice");
            module_.strings[idx] = std::move(*s);
            stringDefined_[idx] = true;
        } else if (d == ".fun") {
            if (current_) {
                error(lineNo, "BAD_DIRECTIVE", "nested .fun");
                return;
            }
            auto params = toks.size() >= 3 ? parseInt<int>(toks[2]) : std::nullopt;
            auto locals = toks.size() == 4 ? parseInt<int>(toks[3]) : params;
            if (toks.size() < 3 || toks.size() > 4 || !isIdent(toks[1]) || !params || !locals || *params < 0 ||
                *locals < *params) {
                error(lineNo, "BAD_DIRECTIVE", "expected .fun <name> <nparams> [<nlocals>] with nlocals >= nparams");
                // Still open a function so its body does not cascade errors.
            }
            current_ = PendingFunction{};
            current_->fn.name = toks.size() >= 2 ? std::string(toks[1]) : "?";
            current_->fn.params = params.value_or(0);
            current_->fn.locals = std::max(locals.value_or(0), current_->fn.params);
            current_->line = lineNo;
        } else if (d == ".end") {
            if (!current_) {
                error(lineNo, "BAD_DIRECTIVE", ".end without .fun");
                return;
            }
            finishFunction(lineNo);
        } else {
            error(lineNo, "BAD_DIRECTIVE", "unknown directive '" + std::string(d) + "'");
        }
    }

    void instruction(const std::vector<std::string_view>& toks, int lineNo) {
        if (!current_) {
            error(lineNo, "BAD_DIRECTIVE", "instruction outside a function");
            return;
        }
        auto op = parseMnemonic(toks[0]);
        if (!op) {
            error(lineNo, "UNKNOWN_MNEMONIC", "unknown mnemonic '" + std::string(toks[0]) + "'");
            return;
        }
        Instruction ins(*op);
        auto bad = [&](const std::string& why) {
            error(lineNo, "BAD_OPERAND", std::string(info(*op).name) + ": " + why);
        };
        std::size_t want = 1;
        switch (info(*op).operand) {
        case OperandKind::None: break;
        case OperandKind::Int:
        case OperandKind::Index: want = 2; break;
        case OperandKind::Label: want = 2; break;
        case OperandKind::Callee:
        case OperandKind::BuiltinOp: want = 3; break;
        }
        if (toks.size() != want) {
            bad("expected " + std::to_string(want - 1) + " operand(s)");
            return;
        }
        switch (info(*op).operand) {
        case OperandKind::None: break;
        case OperandKind::Int: {
            auto v = parseInt<std::int64_t>(toks[1]);
            if (!v) return bad("expected an integer");
            ins.value = *v;
            break;
        }
        case OperandKind::Index: {
            auto v = parseInt<std::int64_t>(toks[1]);
            if (!v || *v < 0) return bad("expected a non-negative integer");
            ins.value = *v;
            bool local = *op == Op::Iload || *op == Op::Istore || *op == Op::Aload || *op == Op::Astore;
            if (local && *v >= current_->fn.locals) return bad("local slot " + std::to_string(*v) + " out of range");
            break;
        }
        case OperandKind::Label:
            if (!isIdent(toks[1])) return bad("malformed label");
            ins.name = std::string(toks[1]);
            break;
        case OperandKind::Callee:
        case OperandKind::BuiltinOp: {
            auto n = parseInt<int>(toks[2]);
            if (!isIdent(toks[1]) || !n || *n < 0) return bad("expected <name> <argc>");
            ins.name = std::string(toks[1]);
            ins.argc = *n;
            if (*op == Op::Builtin) {
                auto sig = builtinSignature(ins.name);
                if (!sig) {
                    error(lineNo, "UNKNOWN_BUILTIN", "unknown builtin '" + ins.name + "'");
                    return;
                }
                if (sig->arity != *n) return bad(ins.name + " takes " + std::to_string(sig->arity) + " argument(s)");
            }
            break;
        }
        }
        if (*op == Op::Halt && current_->fn.name != "main") return bad("halt is only allowed in main");
        current_->fn.code.push_back(std::move(ins));
        current_->lines.push_back(lineNo);
    }

    void finishFunction(int lineNo) {
        PendingFunction p = std::move(*current_);
        current_.reset();
        if (p.fn.code.empty() || !isTerminator(p.fn.code.back().op)) {
            error(lineNo, "FALLTHROUGH", "function '" + p.fn.name + "' can run past its last instruction");
        }
        for (std::size_t i = 0; i < p.fn.code.size(); ++i) {
            Instruction& ins = p.fn.code[i];
            if (info(ins.op).operand == OperandKind::Label) {
                auto it = p.labels.find(ins.name);
                if (it == p.labels.end()) {
                    error(p.lines[i], "NO_SUCH_LABEL", "no label '" + ins.name + "' in '" + p.fn.name + "'");
                } else {
                    ins.value = it->second;
                }
            }
        }
        if (!module_.functionIndex.emplace(p.fn.name, static_cast<int>(module_.functions.size())).second) {
            error(p.line, "DUPLICATE_FUNCTION", "function '" + p.fn.name + "' defined twice");
            return;
        }
        lines_.push_back(std::move(p.lines));
        module_.functions.push_back(std::move(p.fn));
    }

    void link() {
        for (std::size_t f = 0; f < module_.functions.size(); ++f) {
            auto& fn = module_.functions[f];
            for (std::size_t i = 0; i < fn.code.size(); ++i) {
                Instruction& ins = fn.code[i];
                int line = lines_[f][i];
                if (ins.op == Op::Lds &&
                    (ins.value >= static_cast<std::int64_t>(module_.strings.size()) || !stringDefined_[ins.value])) {
                    error(line, "BAD_OPERAND", "lds: no string " + std::to_string(ins.value));
                }
                if (ins.op != Op::Call) continue;
                auto it = module_.functionIndex.find(ins.name);
                if (it == module_.functionIndex.end()) {
                    error(line, "NO_SUCH_FUNCTION", "no function '" + ins.name + "'");
                    continue;
                }
                ins.value = it->second;
                int want = module_.functions[it->second].params;
                if (ins.argc != want) {
                    error(line, "BAD_OPERAND",
                          "call: '" + ins.name + "' takes " + std::to_string(want) + " argument(s)");
                }
            }
        }
        auto main = module_.functionIndex.find("main");
        if (main == module_.functionIndex.end()) {
            error(1, "NO_MAIN", "no function 'main'");
        } else if (module_.functions[main->second].params != 0) {
            error(1, "NO_MAIN", "'main' must take no parameters");
        } else {
            module_.mainIndex = main->second;
        }
    }

    AssembledModule module_;
    std::vector<bool> stringDefined_;
    std::vector<std::vector<int>> lines_;
    std::optional<PendingFunction> current_;
    Diagnostics diags_;
};

// ---- execution -------------------------------------------------------------

struct TrapSignal {
    TrapKind kind;
    std::string message;
};
struct ExitSignal {
    std::int64_t code;
};

[[noreturn]] void trap(TrapKind kind, std::string message) { throw TrapSignal{kind, std::move(message)}; }

const char* tagName(const Value& v) {
    switch (v.index()) {
    case 0: return "int";
    case 1: return "string";
    case 2: return "nil";
    default: return std::get<Cell*>(v)->isArray ? "array" : "record";
    }
}

std::int64_t asInt(const Value& v, const char* what) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    trap(TrapKind::BadTag, std::string(what) + ": expected int, got " + tagName(v));
}

const std::string& asString(const Value& v, const char* what) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    trap(TrapKind::BadTag, std::string(what) + ": expected string, got " + tagName(v));
}

Value callBuiltin(std::string_view name, std::span<const Value> args, ByteIo& io, bool& hasResult) {
    hasResult = true;
    if (name == "print") {
        io.output += asString(args[0], "print");
        hasResult = false;
        return {};
    }
    if (name == "flush") {
        hasResult = false;
        return {};
    }
    if (name == "getchar") return io.readChar();
    if (name == "ord") {
        const std::string& s = asString(args[0], "ord");
        return s.empty() ? std::int64_t{-1} : std::int64_t{static_cast<unsigned char>(s[0])};
    }
    if (name == "chr") {
        std::int64_t i = asInt(args[0], "chr");
        if (i < 0 || i > 255) trap(TrapKind::IndexOob, "chr(" + std::to_string(i) + ") out of range");
        return std::string(1, static_cast<char>(i));
    }
    if (name == "size") return static_cast<std::int64_t>(asString(args[0], "size").size());
    if (name == "substring") {
        const std::string& s = asString(args[0], "substring");
        std::int64_t first = asInt(args[1], "substring");
        std::int64_t n = asInt(args[2], "substring");
        auto size = static_cast<std::int64_t>(s.size());
        if (first < 0 || n < 0 || first > size || n > size - first) {
            trap(TrapKind::IndexOob, "substring(" + std::to_string(first) + ", " + std::to_string(n) +
                                         ") out of range for length " + std::to_string(size));
        }
        return s.substr(static_cast<std::size_t>(first), static_cast<std::size_t>(n));
    }
    if (name == "concat") return asString(args[0], "concat") + asString(args[1], "concat");
    if (name == "not") return std::int64_t{asInt(args[0], "not") == 0 ? 1 : 0};
    if (name == "exit") throw ExitSignal{asInt(args[0], "exit")};
    if (name == kStrcmp) {
        int c = asString(args[0], "strcmp").compare(asString(args[1], "strcmp"));
        return std::int64_t{c < 0 ? -1 : (c > 0 ? 1 : 0)};
    }
    trap(TrapKind::BadTag, "unknown builtin " + std::string(name));
}

struct Frame {
    int fn;
    int pc = 0;
    std::size_t stackBase;
    std::vector<Value> locals;
};

class Machine {
public:
    Machine(const AssembledModule& m, std::string_view input, const ExecOptions& o) : module_(m), options_(o) {
        io_.input = input;
    }

    ExecResult run() {
        ExecResult result;
        try {
            enter(module_.mainIndex, 0);
            result.outcome = loop();
        } catch (const TrapSignal& t) {
            result.outcome.kind = Outcome::Kind::Trap;
            const Frame& f = frames_.back();
            result.outcome.trap = Trap{t.kind, module_.functions[f.fn].name, f.pc, t.message};
        } catch (const ExitSignal& e) {
            result.outcome.kind = Outcome::Kind::Exit;
            result.outcome.code = e.code;
        }
        result.output = std::move(io_.output);
        result.steps = steps_;
        return result;
    }

private:
    void enter(int fn, int argc) {
        const AssembledFunction& f = module_.functions[fn];
        // main's own frame does not count toward the depth limit.
        if (static_cast<int>(frames_.size()) > kMaxCallDepth) trap(TrapKind::CallDepth, "call depth limit exceeded");
        Frame frame{fn, 0, stack_.size() - static_cast<std::size_t>(argc), {}};
        frame.locals.assign(static_cast<std::size_t>(f.locals), Value{std::int64_t{0}});
        for (int i = 0; i < argc; ++i) frame.locals[i] = std::move(stack_[frame.stackBase + i]);
        stack_.resize(frame.stackBase);
        frames_.push_back(std::move(frame));
    }

    void need(std::size_t n) {
        if (stack_.size() < frames_.back().stackBase + n) trap(TrapKind::StackUnderflow, "operand stack underflow");
    }

    Value pop() {
        need(1);
        Value v = std::move(stack_.back());
        stack_.pop_back();
        return v;
    }

    std::int64_t popInt(const char* what) { return asInt(pop(), what); }

    Cell* allocate(bool isArray, std::int64_t n) {
        if (n < 0 || static_cast<std::uint64_t>(n) > options_.heapLimit - heapUsed_) {
            trap(TrapKind::HeapExhausted, "heap limit exceeded");
        }
        heapUsed_ += static_cast<std::uint64_t>(n);
        Cell& c = heap_.emplace_back();
        c.isArray = isArray;
        return &c;
    }

    Cell* popRef(bool isArray, const char* what) {
        Value v = pop();
        if (std::holds_alternative<Nil>(v)) trap(TrapKind::NilDeref, std::string(what) + " through nil");
        auto* c = std::get_if<Cell*>(&v);
        if (!c || (*c)->isArray != isArray) {
            trap(TrapKind::BadTag, std::string(what) + ": expected " + (isArray ? "array" : "record") + ", got " +
                                       tagName(v));
        }
        return *c;
    }

    std::size_t checkIndex(const Cell* arr, std::int64_t i) {
        if (i < 0 || static_cast<std::uint64_t>(i) >= arr->slots.size()) {
            trap(TrapKind::IndexOob,
                 "index " + std::to_string(i) + " out of range for length " + std::to_string(arr->slots.size()));
        }
        return static_cast<std::size_t>(i);
    }

    std::size_t checkField(const Cell* rec, std::int64_t i) {
        if (static_cast<std::uint64_t>(i) >= rec->slots.size()) trap(TrapKind::BadTag, "no field " + std::to_string(i));
        return static_cast<std::size_t>(i);
    }

    void push(Value v) { stack_.push_back(std::move(v)); }

    Outcome loop() {
        for (;;) {
            Frame& f = frames_.back();
            const auto& code = module_.functions[f.fn].code;
            if (f.pc < 0 || f.pc >= static_cast<int>(code.size())) {
                trap(TrapKind::NoSuchLabel, "control left the function body");
            }
            if (options_.stepBudget && steps_ >= *options_.stepBudget) trap(TrapKind::StepBudget, "step budget exhausted");
            ++steps_;
            const Instruction& ins = code[f.pc];
            int next = f.pc + 1;
            switch (ins.op) {
            case Op::Ldc: push(ins.value); break;
            case Op::Lds:
                if (ins.value >= static_cast<std::int64_t>(module_.strings.size())) {
                    trap(TrapKind::BadTag, "no string " + std::to_string(ins.value));
                }
                push(module_.strings[ins.value]);
                break;
            case Op::Ldnil: push(Nil{}); break;
            case Op::Iload: {
                const Value& v = f.locals.at(ins.value);
                asInt(v, "iload");
                push(v);
                break;
            }
            case Op::Istore: f.locals.at(ins.value) = popInt("istore"); break;
            case Op::Aload: {
                const Value& v = f.locals.at(ins.value);
                if (std::holds_alternative<std::int64_t>(v)) trap(TrapKind::BadTag, "aload: slot holds an int");
                push(v);
                break;
            }
            case Op::Astore: {
                Value v = pop();
                if (std::holds_alternative<std::int64_t>(v)) trap(TrapKind::BadTag, "astore: value is an int");
                f.locals.at(ins.value) = std::move(v);
                break;
            }
            case Op::Iadd:
            case Op::Isub:
            case Op::Imul:
            case Op::Idiv: {
                need(2);
                std::int64_t b = popInt(mnemonic(ins.op));
                std::int64_t a = popInt(mnemonic(ins.op));
                std::int64_t r = 0;
                switch (ins.op) {
                case Op::Iadd: r = wrapAdd(a, b); break;
                case Op::Isub: r = wrapSub(a, b); break;
                case Op::Imul: r = wrapMul(a, b); break;
                default:
                    if (b == 0) trap(TrapKind::DivZero, "division by zero");
                    r = wrapDiv(a, b);
                }
                push(r);
                break;
            }
            case Op::Ineg: push(wrapNeg(popInt("ineg"))); break;
            case Op::Icmpeq:
            case Op::Icmpne:
            case Op::Icmplt:
            case Op::Icmple:
            case Op::Icmpgt:
            case Op::Icmpge: {
                need(2);
                std::int64_t b = popInt(mnemonic(ins.op));
                std::int64_t a = popInt(mnemonic(ins.op));
                bool r = false;
                switch (ins.op) {
                case Op::Icmpeq: r = a == b; break;
                case Op::Icmpne: r = a != b; break;
                case Op::Icmplt: r = a < b; break;
                case Op::Icmple: r = a <= b; break;
                case Op::Icmpgt: r = a > b; break;
                default: r = a >= b;
                }
                push(std::int64_t{r});
                break;
            }
            case Op::Refeq: {
                need(2);
                Value b = pop();
                Value a = pop();
                auto isRef = [](const Value& v) { return v.index() >= 2; };
                if (!isRef(a) || !isRef(b)) trap(TrapKind::BadTag, std::string("refeq on ") + tagName(a));
                push(std::int64_t{a == b});
                break;
            }
            case Op::Dup: {
                need(1);
                Value v = stack_.back();
                push(std::move(v));
                break;
            }
            case Op::Pop: pop(); break;
            case Op::Goto: next = static_cast<int>(ins.value); break;
            case Op::Brz:
                if (popInt("brz") == 0) next = static_cast<int>(ins.value);
                break;
            case Op::Brnz:
                if (popInt("brnz") != 0) next = static_cast<int>(ins.value);
                break;
            case Op::Call: {
                need(static_cast<std::size_t>(ins.argc));
                enter(static_cast<int>(ins.value), ins.argc);
                frames_[frames_.size() - 2].pc = next;
                continue;
            }
            case Op::Ret:
            case Op::Retv: {
                std::optional<Value> result;
                if (ins.op == Op::Retv) result = pop();
                stack_.resize(f.stackBase);
                if (frames_.size() == 1) trap(TrapKind::BadTag, "return from main");
                frames_.pop_back();
                if (result) push(std::move(*result));
                continue;
            }
            case Op::Newrec: {
                auto n = static_cast<std::size_t>(ins.value);
                need(n);
                Cell* c = allocate(false, ins.value);
                c->slots.assign(std::make_move_iterator(stack_.end() - static_cast<std::ptrdiff_t>(n)),
                                std::make_move_iterator(stack_.end()));
                stack_.resize(stack_.size() - n);
                push(c);
                break;
            }
            case Op::Getf: {
                Cell* c = popRef(false, "field read");
                push(c->slots[checkField(c, ins.value)]);
                break;
            }
            case Op::Setf: {
                need(2);
                Value v = pop();
                Cell* c = popRef(false, "field write");
                c->slots[checkField(c, ins.value)] = std::move(v);
                break;
            }
            case Op::Newarr: {
                need(2);
                Value init = pop();
                std::int64_t n = popInt("newarr size");
                if (n < 0) trap(TrapKind::IndexOob, "negative array size " + std::to_string(n));
                Cell* c = allocate(true, n);
                c->slots.assign(static_cast<std::size_t>(n), init);
                push(c);
                break;
            }
            case Op::Aget: {
                need(2);
                std::int64_t i = popInt("aget index");
                Cell* c = popRef(true, "subscript");
                push(c->slots[checkIndex(c, i)]);
                break;
            }
            case Op::Aset: {
                need(3);
                Value v = pop();
                std::int64_t i = popInt("aset index");
                Cell* c = popRef(true, "subscript");
                c->slots[checkIndex(c, i)] = std::move(v);
                break;
            }
            case Op::Builtin: {
                auto argc = static_cast<std::size_t>(ins.argc);
                need(argc);
                std::span<const Value> args(stack_.data() + (stack_.size() - argc), argc);
                bool hasResult = false;
                Value r = callBuiltin(ins.name, args, io_, hasResult);
                stack_.resize(stack_.size() - argc);
                if (hasResult) push(std::move(r));
                break;
            }
            case Op::Halt: {
                Outcome o;
                o.kind = Outcome::Kind::Halt;
                o.code = popInt("halt");
                return o;
            }
            }
            frames_.back().pc = next;
        }
    }

    const AssembledModule& module_;
    const ExecOptions& options_;
    ByteIo io_;
    std::vector<Value> stack_;
    std::vector<Frame> frames_;
    std::deque<Cell> heap_;
    std::uint64_t heapUsed_ = 0;
    std::uint64_t steps_ = 0;
};

void renderInstruction(std::string& out, const Instruction& ins) {
    out += info(ins.op).name;
    switch (info(ins.op).operand) {
    case OperandKind::None: break;
    case OperandKind::Int:
    case OperandKind::Index: out += ' ' + std::to_string(ins.value); break;
    case OperandKind::Label: out += ' ' + ins.name; break;
    case OperandKind::Callee:
    case OperandKind::BuiltinOp: out += ' ' + ins.name + ' ' + std::to_string(ins.argc); break;
    }
}

} // namespace

const char* mnemonic(Op op) { return info(op).name; }

std::optional<Op> parseMnemonic(std::string_view text) {
    for (const auto& o : kOps) {
        if (text == o.name) return o.op;
    }
    return std::nullopt;
}

OperandKind operandKind(Op op) { return info(op).operand; }

std::optional<BuiltinSignature> builtinSignature(std::string_view name) {
    if (name == kStrcmp) return BuiltinSignature{2, true};
    if (auto b = findBuiltin(name)) return BuiltinSignature{b->arity, b->returnsValue};
    return std::nullopt;
}

StackEffect stackEffect(const Instruction& ins, bool calleeReturnsValue) {
    switch (ins.op) {
    case Op::Ldc:
    case Op::Lds:
    case Op::Ldnil:
    case Op::Iload:
    case Op::Aload: return {0, 1};
    case Op::Istore:
    case Op::Astore:
    case Op::Pop:
    case Op::Brz:
    case Op::Brnz:
    case Op::Retv:
    case Op::Halt: return {1, 0};
    case Op::Iadd:
    case Op::Isub:
    case Op::Imul:
    case Op::Idiv:
    case Op::Icmpeq:
    case Op::Icmpne:
    case Op::Icmplt:
    case Op::Icmple:
    case Op::Icmpgt:
    case Op::Icmpge:
    case Op::Refeq:
    case Op::Newarr:
    case Op::Aget: return {2, 1};
    case Op::Ineg:
    case Op::Getf: return {1, 1};
    case Op::Dup: return {1, 2};
    case Op::Goto:
    case Op::Ret: return {0, 0};
    case Op::Call: return {ins.argc, calleeReturnsValue ? 1 : 0};
    case Op::Newrec: return {static_cast<int>(ins.value), 1};
    case Op::Setf: return {2, 0};
    case Op::Aset: return {3, 0};
    case Op::Builtin: {
        auto sig = builtinSignature(ins.name);
        return {ins.argc, sig && sig->returnsValue ? 1 : 0};
    }
    }
    return {0, 0};
}

std::string render(const CodeModule& module) {
    std::string out = ".module " + module.name + " " + std::to_string(kFormatVersion) + "\n";
    for (std::size_t i = 0; i < module.strings.size(); ++i) {
        out += ".str " + std::to_string(i) + " " + quoteString(module.strings[i]) + "\n";
    }
    for (const auto& fn : module.functions) {
        out += "\n.fun " + fn.name + " " + std::to_string(fn.params) + " " + std::to_string(fn.locals) + "\n";
        for (const auto& line : fn.body) {
            if (auto* l = std::get_if<LabelDef>(&line)) {
                out += l->name + ":\n";
            } else {
                out += "    ";
                renderInstruction(out, std::get<Instruction>(line));
                out += '\n';
            }
        }
        out += ".end\n";
    }
    return out;
}

AssembleResult assemble(std::string_view text) { return Assembler{}.run(text); }

ExecResult execute(const AssembledModule& module, std::string_view input, const ExecOptions& options) {
    return Machine(module, input, options).run();
}

BuiltinOutcome invokeBuiltin(std::string_view name, std::span<const Value> args, ByteIo& io) {
    BuiltinOutcome out;
    try {
        bool hasResult = false;
        Value v = callBuiltin(name, args, io, hasResult);
        if (hasResult) out.value = std::move(v);
    } catch (const TrapSignal& t) {
        out.trap = t.kind;
    } catch (const ExitSignal& e) {
        out.exit = e.code;
    }
    return out;
}

} // namespace tiger::vm
