#include "tiger/interp.hpp"

#include <limits>

namespace tiger::interp {
namespace {

struct TrapSignal {
    Trap trap;
};
struct ExitSignal {
    std::int64_t code;
};
struct BreakSignal {};

[[noreturn]] void trap(TrapKind kind, Pos pos, std::string message) {
    throw TrapSignal{Trap{kind, pos, std::move(message)}};
}

const char* tagName(const Value& v) {
    switch (v.index()) {
    case 0: return "unit";
    case 1: return "int";
    case 2: return "string";
    case 3: return "nil";
    case 4: return "record";
    default: return "array";
    }
}

std::int64_t expectInt(const Value& v, Pos pos, const char* what) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    trap(TrapKind::BadTag, pos, std::string(what) + " must be an int, got " + tagName(v));
}

const std::string& expectString(const Value& v, Pos pos, const char* what) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    trap(TrapKind::BadTag, pos, std::string(what) + " must be a string, got " + tagName(v));
}

// Standard library over interpreter values. Throws TrapSignal (at `pos`) or
// ExitSignal.
Value callBuiltin(Builtin id, std::span<const Value> args, ByteIo& io, Pos pos) {
    switch (id) {
    case Builtin::Print: io.output += expectString(args[0], pos, "print argument"); return Unit{};
    case Builtin::Flush: return Unit{};
    case Builtin::Getchar: return io.readChar();
    case Builtin::Ord: {
        const std::string& s = expectString(args[0], pos, "ord argument");
        return s.empty() ? std::int64_t{-1} : std::int64_t{static_cast<unsigned char>(s[0])};
    }
    case Builtin::Chr: {
        std::int64_t i = expectInt(args[0], pos, "chr argument");
        if (i < 0 || i > 255) trap(TrapKind::IndexOob, pos, "chr argument " + std::to_string(i) + " out of range 0..255");
        return std::string(1, static_cast<char>(i));
    }
    case Builtin::Size: return static_cast<std::int64_t>(expectString(args[0], pos, "size argument").size());
    case Builtin::Substring: {
        const std::string& s = expectString(args[0], pos, "substring argument");
        std::int64_t first = expectInt(args[1], pos, "substring start");
        std::int64_t n = expectInt(args[2], pos, "substring length");
        auto size = static_cast<std::int64_t>(s.size());
        if (first < 0 || n < 0 || first > size || n > size - first) {
            trap(TrapKind::IndexOob, pos,
                 "substring(" + std::to_string(first) + ", " + std::to_string(n) + ") out of range for length " +
                     std::to_string(size));
        }
        return s.substr(static_cast<std::size_t>(first), static_cast<std::size_t>(n));
    }
    case Builtin::Concat:
        return expectString(args[0], pos, "concat argument") + expectString(args[1], pos, "concat argument");
    case Builtin::Not: return std::int64_t{expectInt(args[0], pos, "not argument") == 0 ? 1 : 0};
    case Builtin::Exit: throw ExitSignal{expectInt(args[0], pos, "exit argument")};
    }
    trap(TrapKind::BadTag, pos, "unknown builtin");
}

bool valuesEqual(const Value& a, const Value& b, Pos pos) {
    if (a.index() == b.index()) {
        if (std::holds_alternative<Unit>(a)) trap(TrapKind::BadTag, pos, "cannot compare unit values");
        return a == b;
    }
    auto isRef = [](const Value& v) {
        return std::holds_alternative<Nil>(v) || std::holds_alternative<RecordCell*>(v) ||
               std::holds_alternative<ArrayCell*>(v);
    };
    if (isRef(a) && isRef(b) && (std::holds_alternative<Nil>(a) || std::holds_alternative<Nil>(b))) return false;
    trap(TrapKind::BadTag, pos, std::string("cannot compare ") + tagName(a) + " with " + tagName(b));
}

int orderValues(const Value& a, const Value& b, Pos pos) {
    if (auto* x = std::get_if<std::int64_t>(&a)) {
        if (auto* y = std::get_if<std::int64_t>(&b)) return *x < *y ? -1 : (*x > *y ? 1 : 0);
    }
    if (auto* x = std::get_if<std::string>(&a)) {
        if (auto* y = std::get_if<std::string>(&b)) {
            int c = x->compare(*y);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
    }
    trap(TrapKind::BadTag, pos, std::string("cannot order ") + tagName(a) + " and " + tagName(b));
}

using ScopePtr = std::shared_ptr<Scope>;

class Evaluator {
public:
    Evaluator(std::string_view input, const RunOptions& options, Heap& heap)
        : heap_(heap), budget_(options.stepBudget) {
        io_.input = input;
    }

    ScopePtr baseScope() {
        auto root = std::make_shared<Scope>();
        const BuiltinInfo* table = builtinTable();
        for (int i = 0; i < kBuiltinCount; ++i) {
            root->values.emplace(intern(table[i].name), BuiltinEntry{table[i].id});
        }
        return root;
    }

    std::string takeOutput() { return std::move(io_.output); }

    Value eval(const Exp& e, const ScopePtr& env) {
        if (budget_ && steps_ >= *budget_) trap(TrapKind::StepBudget, e.pos, "step budget exhausted");
        ++steps_;
        return traverse(e, ExpVisitor{*this, env});
    }

private:
    struct ExpVisitor {
        Evaluator& ev;
        const ScopePtr& env;

        Value operator()(const IntLit& n, Pos) { return n.value; }
        Value operator()(const StrLit& n, Pos) { return n.value; }
        Value operator()(const NilLit&, Pos) { return Nil{}; }
        Value operator()(const VarExp& n, Pos) { return ev.read(n.var, env); }
        Value operator()(const AssignExp& n, Pos pos) {
            ev.assign(n, pos, env);
            return Unit{};
        }
        Value operator()(const SeqExp& n, Pos) { return ev.sequence(n.exps, env); }
        Value operator()(const OpExp& n, Pos pos) { return ev.binary(n, pos, env); }
        Value operator()(const NegExp& n, Pos pos) {
            return wrapNeg(expectInt(ev.eval(*n.operand, env), pos, "operand of unary '-'"));
        }
        Value operator()(const CallExp& n, Pos pos) { return ev.call(n, pos, env); }
        Value operator()(const RecordExp& n, Pos) {
            RecordCell cell;
            for (const FieldInit& f : n.fields) {
                Value v = ev.eval(*f.value, env);
                if (std::holds_alternative<Unit>(v)) trap(TrapKind::BadTag, f.pos, "field initializer has no value");
                cell.fields.emplace_back(f.name, std::move(v));
            }
            return &ev.heap_.records.emplace_back(std::move(cell));
        }
        Value operator()(const ArrayExp& n, Pos pos) {
            std::int64_t size = expectInt(ev.eval(*n.size, env), n.size->pos, "array size");
            Value init = ev.eval(*n.init, env);
            if (std::holds_alternative<Unit>(init)) trap(TrapKind::BadTag, n.init->pos, "array initializer has no value");
            if (size < 0) trap(TrapKind::IndexOob, pos, "negative array size " + std::to_string(size));
            if (size > kMaxAllocation) trap(TrapKind::HeapExhausted, pos, "array of " + std::to_string(size) + " elements is too large");
            return &ev.heap_.arrays.emplace_back(ArrayCell{std::vector<Value>(static_cast<std::size_t>(size), init)});
        }
        Value operator()(const IfExp& n, Pos) {
            if (ev.truth(*n.test, env)) ev.eval(*n.then, env);
            return Unit{};
        }
        Value operator()(const IfElseExp& n, Pos) {
            return ev.truth(*n.test, env) ? ev.eval(*n.then, env) : ev.eval(*n.otherwise, env);
        }
        Value operator()(const WhileExp& n, Pos) {
            ++ev.loopDepth_;
            try {
                while (ev.truth(*n.test, env)) ev.eval(*n.body, env);
            } catch (const BreakSignal&) {
            }
            --ev.loopDepth_;
            return Unit{};
        }
        Value operator()(const ForExp& n, Pos) { return ev.forLoop(n, env); }
        Value operator()(const BreakExp&, Pos pos) {
            if (ev.loopDepth_ == 0) trap(TrapKind::BadTag, pos, "break outside of a loop");
            throw BreakSignal{};
        }
        Value operator()(const LetExp& n, Pos) { return ev.let(n, env); }
    };

    bool truth(const Exp& test, const ScopePtr& env) {
        return expectInt(eval(test, env), test.pos, "condition") != 0;
    }

    Value sequence(const std::vector<Exp>& exps, const ScopePtr& env) {
        Value last = Unit{};
        for (const Exp& e : exps) last = eval(e, env);
        return last;
    }

    VarEntry& variable(Symbol name, Pos pos, const ScopePtr& env) {
        Entry* entry = env->lookup(name);
        if (!entry) trap(TrapKind::BadTag, pos, "undefined variable '" + std::string(name.text()) + "'");
        auto* var = std::get_if<VarEntry>(entry);
        if (!var) trap(TrapKind::BadTag, pos, "'" + std::string(name.text()) + "' is a function, not a variable");
        return *var;
    }

    RecordCell* recordRef(const Value& base, Pos pos) {
        if (std::holds_alternative<Nil>(base)) trap(TrapKind::NilDeref, pos, "field access on nil");
        if (auto* r = std::get_if<RecordCell*>(&base)) return *r;
        trap(TrapKind::BadTag, pos, std::string("field access on ") + tagName(base));
    }

    Value& fieldSlot(RecordCell* rec, Symbol field, Pos pos) {
        for (auto& [name, value] : rec->fields) {
            if (name == field) return value;
        }
        trap(TrapKind::BadTag, pos, "record has no field '" + std::string(field.text()) + "'");
    }

    Value& element(const Value& base, const Value& index, Pos pos) {
        if (std::holds_alternative<Nil>(base)) trap(TrapKind::NilDeref, pos, "subscript of nil");
        auto* arr = std::get_if<ArrayCell*>(&base);
        if (!arr) trap(TrapKind::BadTag, pos, std::string("subscript of ") + tagName(base));
        std::int64_t i = expectInt(index, pos, "array index");
        auto size = static_cast<std::int64_t>((*arr)->elems.size());
        if (i < 0 || i >= size) {
            trap(TrapKind::IndexOob, pos, "index " + std::to_string(i) + " out of bounds for array of size " + std::to_string(size));
        }
        return (*arr)->elems[static_cast<std::size_t>(i)];
    }

    Value read(const LValue& lv, const ScopePtr& env) {
        return traverse(lv, overloaded{
                                [&](const SimpleVar& v, Pos pos) -> Value { return variable(v.name, pos, env).value; },
                                [&](const FieldVar& v, Pos pos) -> Value {
                                    Value base = read(*v.base, env);
                                    return fieldSlot(recordRef(base, pos), v.field, pos);
                                },
                                [&](const SubscriptVar& v, Pos pos) -> Value {
                                    Value base = read(*v.base, env);
                                    Value index = eval(*v.index, env);
                                    return element(base, index, pos);
                                },
                            });
    }

    // Location operands are evaluated before the right-hand side; the
    // nil/bounds checks happen after it, at the store.
    void assign(const AssignExp& n, Pos pos, const ScopePtr& env) {
        auto checkValue = [&](const Value& v) {
            if (std::holds_alternative<Unit>(v)) trap(TrapKind::BadTag, pos, "assigned expression has no value");
        };
        traverse(n.target, overloaded{
                               [&](const SimpleVar& v, Pos vpos) {
                                   Value rhs = eval(*n.value, env);
                                   checkValue(rhs);
                                   VarEntry& var = variable(v.name, vpos, env);
                                   if (!var.assignable) {
                                       trap(TrapKind::BadTag, pos, "cannot assign to loop counter '" + std::string(v.name.text()) + "'");
                                   }
                                   var.value = std::move(rhs);
                               },
                               [&](const FieldVar& v, Pos vpos) {
                                   Value base = read(*v.base, env);
                                   Value rhs = eval(*n.value, env);
                                   checkValue(rhs);
                                   fieldSlot(recordRef(base, vpos), v.field, vpos) = std::move(rhs);
                               },
                               [&](const SubscriptVar& v, Pos vpos) {
                                   Value base = read(*v.base, env);
                                   Value index = eval(*v.index, env);
                                   Value rhs = eval(*n.value, env);
                                   checkValue(rhs);
                                   element(base, index, vpos) = std::move(rhs);
                               },
                           });
    }

    Value binary(const OpExp& n, Pos pos, const ScopePtr& env) {
        std::string what = std::string("operand of '") + operSpelling(n.op) + "'";
        if (n.op == Oper::And || n.op == Oper::Or) {
            std::int64_t left = expectInt(eval(*n.left, env), pos, what.c_str());
            if (n.op == Oper::And && left == 0) return std::int64_t{0};
            if (n.op == Oper::Or && left != 0) return std::int64_t{1};
            return expectInt(eval(*n.right, env), pos, what.c_str());
        }
        Value left = eval(*n.left, env);
        Value right = eval(*n.right, env);
        if (isArithmetic(n.op)) {
            std::int64_t a = expectInt(left, pos, what.c_str());
            std::int64_t b = expectInt(right, pos, what.c_str());
            switch (n.op) {
            case Oper::Plus: return wrapAdd(a, b);
            case Oper::Minus: return wrapSub(a, b);
            case Oper::Times: return wrapMul(a, b);
            default:
                if (b == 0) trap(TrapKind::DivZero, pos, "division by zero");
                return wrapDiv(a, b);
            }
        }
        auto flag = [](bool b) { return Value{std::int64_t{b ? 1 : 0}}; };
        switch (n.op) {
        case Oper::Eq: return flag(valuesEqual(left, right, pos));
        case Oper::Ne: return flag(!valuesEqual(left, right, pos));
        case Oper::Lt: return flag(orderValues(left, right, pos) < 0);
        case Oper::Le: return flag(orderValues(left, right, pos) <= 0);
        case Oper::Gt: return flag(orderValues(left, right, pos) > 0);
        default: return flag(orderValues(left, right, pos) >= 0);
        }
    }

    Value call(const CallExp& n, Pos pos, const ScopePtr& env) {
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const Exp& a : n.args) {
            args.push_back(eval(a, env));
            if (std::holds_alternative<Unit>(args.back())) trap(TrapKind::BadTag, a.pos, "argument has no value");
        }
        Entry* entry = env->lookup(n.func);
        std::string name(n.func.text());
        if (!entry) trap(TrapKind::BadTag, pos, "undefined function '" + name + "'");
        if (auto* b = std::get_if<BuiltinEntry>(entry)) {
            int arity = 0;
            for (int i = 0; i < kBuiltinCount; ++i) {
                if (builtinTable()[i].id == b->id) arity = builtinTable()[i].arity;
            }
            if (static_cast<int>(args.size()) != arity) trap(TrapKind::BadTag, pos, "wrong number of arguments to '" + name + "'");
            return callBuiltin(b->id, args, io_, pos);
        }
        auto* fn = std::get_if<FunEntry>(entry);
        if (!fn) trap(TrapKind::BadTag, pos, "'" + name + "' is a variable, not a function");
        const FunDecl& decl = *fn->decl;
        if (args.size() != decl.params.size()) trap(TrapKind::BadTag, pos, "wrong number of arguments to '" + name + "'");
        if (callDepth_ >= kMaxCallDepth) trap(TrapKind::CallDepth, pos, "call depth limit exceeded");

        auto frame = std::make_shared<Scope>();
        frame->parent = fn->closure.lock();
        for (std::size_t i = 0; i < args.size(); ++i) {
            frame->values.insert_or_assign(decl.params[i].name, VarEntry{std::move(args[i]), true});
        }
        ++callDepth_;
        int savedLoops = std::exchange(loopDepth_, 0);
        Value result = eval(*decl.body, frame);
        loopDepth_ = savedLoops;
        --callDepth_;
        if (!decl.result) return Unit{};
        if (std::holds_alternative<Unit>(result)) trap(TrapKind::BadTag, pos, "function '" + name + "' produced no value");
        return result;
    }

    Value forLoop(const ForExp& n, const ScopePtr& env) {
        std::int64_t lo = expectInt(eval(*n.lo, env), n.lo->pos, "for-loop bound");
        std::int64_t hi = expectInt(eval(*n.hi, env), n.hi->pos, "for-loop bound");
        auto scope = std::make_shared<Scope>();
        scope->parent = env;
        auto& counter = std::get<VarEntry>(scope->values.emplace(n.var, VarEntry{lo, false}).first->second);
        if (lo > hi) return Unit{};
        ++loopDepth_;
        try {
            while (true) {
                eval(*n.body, scope);
                std::int64_t i = std::get<std::int64_t>(counter.value);
                if (i == hi) break;
                counter.value = i + 1;
            }
        } catch (const BreakSignal&) {
        }
        --loopDepth_;
        return Unit{};
    }

    Value let(const LetExp& n, ScopePtr env) {
        auto extend = [&] {
            auto child = std::make_shared<Scope>();
            child->parent = env;
            env = child;
        };
        const auto& decls = n.decls;
        for (std::size_t i = 0; i < decls.size();) {
            const Decl& d = decls[i];
            if (auto* v = std::get_if<VarDecl>(&d.node)) {
                Value init = eval(*v->init, env);
                if (std::holds_alternative<Unit>(init)) trap(TrapKind::BadTag, d.pos, "variable initializer has no value");
                extend();
                env->values.insert_or_assign(v->name, VarEntry{std::move(init), true});
                ++i;
            } else if (std::holds_alternative<TypeDecl>(d.node)) {
                extend();
                for (; i < decls.size() && std::holds_alternative<TypeDecl>(decls[i].node); ++i) {
                    const auto& t = std::get<TypeDecl>(decls[i].node);
                    env->types.insert_or_assign(t.name, &t.type);
                }
            } else {
                extend();
                for (; i < decls.size() && std::holds_alternative<FunDecl>(decls[i].node); ++i) {
                    const auto& f = std::get<FunDecl>(decls[i].node);
                    env->values.insert_or_assign(f.name, FunEntry{&f, env});
                }
            }
        }
        return sequence(n.body, env);
    }

    Heap& heap_;
    ByteIo io_;
    std::optional<std::uint64_t> budget_;
    std::uint64_t steps_ = 0;
    int loopDepth_ = 0;
    int callDepth_ = 0;
};

} // namespace

Entry* Scope::lookup(Symbol name) {
    for (Scope* s = this; s; s = s->parent.get()) {
        if (auto it = s->values.find(name); it != s->values.end()) return &it->second;
    }
    return nullptr;
}

RunResult run(const Exp& program, std::string_view input, const RunOptions& options) {
    RunResult result;
    result.heap = std::make_shared<Heap>();
    Evaluator ev(input, options, *result.heap);
    try {
        result.outcome.value = ev.eval(program, ev.baseScope());
        result.outcome.kind = Outcome::Kind::Normal;
    } catch (const TrapSignal& t) {
        result.outcome.kind =
            t.trap.kind == TrapKind::StepBudget ? Outcome::Kind::BudgetExceeded : Outcome::Kind::Trap;
        result.outcome.trap = t.trap;
    } catch (const ExitSignal& e) {
        result.outcome.kind = Outcome::Kind::Exit;
        result.outcome.exitCode = e.code;
    }
    result.output = ev.takeOutput();
    return result;
}

BuiltinOutcome invokeBuiltin(Builtin id, std::span<const Value> args, ByteIo& io) {
    BuiltinOutcome out;
    try {
        out.value = callBuiltin(id, args, io, Pos{});
    } catch (const TrapSignal& t) {
        out.trap = t.trap.kind;
    } catch (const ExitSignal& e) {
        out.exit = e.code;
    }
    return out;
}

std::string describe(const Value& v) {
    return std::visit(overloaded{
                          [](Unit) -> std::string { return "()"; },
                          [](std::int64_t i) -> std::string { return std::to_string(i); },
                          [](const std::string& s) -> std::string { return "\"" + s + "\""; },
                          [](Nil) -> std::string { return "nil"; },
                          [](RecordCell*) -> std::string { return "<record>"; },
                          [](ArrayCell*) -> std::string { return "<array>"; },
                      },
                      v);
}

} // namespace tiger::interp
