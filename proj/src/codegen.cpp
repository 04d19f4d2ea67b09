#include "tiger/codegen.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "tiger/runtime.hpp"
#include "tiger/scoped_table.hpp"

namespace tiger::codegen {

int Frame::allocLocal() {
    int slot = end_++;
    if (end_ > high_) high_ = end_;
    return slot;
}

void Frame::popLocal() {
    if (end_ <= params_) throw std::logic_error("Frame::popLocal below the parameters");
    --end_;
}

namespace {

using types::Kind;
using vm::Instruction;
using vm::Op;

// ---- escape analysis -------------------------------------------------------

// Bindings are identified by the node that introduces them: a VarDecl, a
// parameter's Field, or a ForExp.
using BindingKey = const void*;

struct EscapeInfo {
    std::unordered_map<BindingKey, int> field;  // escaped binding -> record field (1-based)
    std::unordered_map<const FunDecl*, std::vector<BindingKey>> records;  // nullptr is main
    std::unordered_set<const FunDecl*> declaresFunctions;

    bool needsRecord(const FunDecl* fn) const { return declaresFunctions.count(fn) != 0; }
};

class EscapeFinder {
public:
    explicit EscapeFinder(EscapeInfo& info) : info_(info) {}

    void exp(const Exp& e) {
        traverse(e, overloaded{
                        [](const IntLit&, Pos) {},
                        [](const StrLit&, Pos) {},
                        [](const NilLit&, Pos) {},
                        [&](const VarExp& n, Pos) { lvalue(n.var); },
                        [&](const AssignExp& n, Pos) {
                            lvalue(n.target);
                            exp(*n.value);
                        },
                        [&](const SeqExp& n, Pos) {
                            for (const Exp& x : n.exps) exp(x);
                        },
                        [&](const OpExp& n, Pos) {
                            exp(*n.left);
                            exp(*n.right);
                        },
                        [&](const NegExp& n, Pos) { exp(*n.operand); },
                        [&](const CallExp& n, Pos) {
                            for (const Exp& x : n.args) exp(x);
                        },
                        [&](const RecordExp& n, Pos) {
                            for (const FieldInit& f : n.fields) exp(*f.value);
                        },
                        [&](const ArrayExp& n, Pos) {
                            exp(*n.size);
                            exp(*n.init);
                        },
                        [&](const IfExp& n, Pos) {
                            exp(*n.test);
                            exp(*n.then);
                        },
                        [&](const IfElseExp& n, Pos) {
                            exp(*n.test);
                            exp(*n.then);
                            exp(*n.otherwise);
                        },
                        [&](const WhileExp& n, Pos) {
                            exp(*n.test);
                            exp(*n.body);
                        },
                        [&](const ForExp& n, Pos) {
                            exp(*n.lo);
                            exp(*n.hi);
                            ScopeGuard scope(env_);
                            env_.put(n.var, Var{&n, owner_, level_});
                            exp(*n.body);
                        },
                        [](const BreakExp&, Pos) {},
                        [&](const LetExp& n, Pos) { let(n); },
                    });
    }

private:
    struct Var {
        BindingKey key;
        const FunDecl* owner;
        int level;
    };
    struct Fun {};
    using Entry = std::variant<Var, Fun>;

    void lvalue(const LValue& lv) {
        traverse(lv, overloaded{
                         [&](const SimpleVar& v, Pos) {
                             const Entry* e = env_.get(v.name);
                             if (const Var* var = e ? std::get_if<Var>(e) : nullptr; var && var->level < level_) {
                                 escape(*var);
                             }
                         },
                         [&](const FieldVar& v, Pos) { lvalue(*v.base); },
                         [&](const SubscriptVar& v, Pos) {
                             lvalue(*v.base);
                             exp(*v.index);
                         },
                     });
    }

    void escape(const Var& v) {
        if (info_.field.count(v.key)) return;
        auto& fields = info_.records[v.owner];
        fields.push_back(v.key);
        info_.field[v.key] = static_cast<int>(fields.size());
    }

    void let(const LetExp& n) {
        ScopeGuard scope(env_);
        for (std::size_t i = 0; i < n.decls.size();) {
            std::size_t end = semant::runEnd(n.decls, i);
            const Decl& first = n.decls[i];
            if (const auto* v = std::get_if<VarDecl>(&first.node)) {
                exp(*v->init);
                env_.put(v->name, Var{v, owner_, level_});
            } else if (std::holds_alternative<FunDecl>(first.node)) {
                info_.declaresFunctions.insert(owner_);
                for (std::size_t k = i; k < end; ++k) env_.put(std::get<FunDecl>(n.decls[k].node).name, Fun{});
                for (std::size_t k = i; k < end; ++k) function(std::get<FunDecl>(n.decls[k].node));
            }
            i = end;
        }
        for (const Exp& e : n.body) exp(e);
    }

    void function(const FunDecl& fn) {
        ScopeGuard scope(env_);
        const FunDecl* savedOwner = std::exchange(owner_, &fn);
        ++level_;
        for (const Field& p : fn.params) env_.put(p.name, Var{&p, &fn, level_});
        exp(*fn.body);
        --level_;
        owner_ = savedOwner;
    }

    EscapeInfo& info_;
    ScopedTable<Entry> env_;
    const FunDecl* owner_ = nullptr;
    int level_ = 0;
};

// ---- code generation -------------------------------------------------------

bool isInt(const types::Type* t) { return types::actual(t)->kind() == Kind::Int; }

struct GenVar {
    Access access;
    bool isInt;
};
struct GenFun {
    std::string label;
    int level;
    bool returnsValue;
};
struct GenBuiltin {
    std::string name;
    bool returnsValue;
};
using GenEntry = std::variant<GenVar, GenFun, GenBuiltin>;

struct Loop {
    std::string exit;
    int depth;
};

struct FunState {
    FunState(std::string name, int params, int level) : frame(params), level(level) { out.name = std::move(name); }

    vm::CodeFunction out;
    Frame frame;
    int level;
    int recordSlot = -1;
    int depth = 0;
    int nextLabel = 0;
    std::vector<Loop> loops;
};

class Generator {
public:
    Generator(const semant::Analysis& analysis, const EscapeInfo& escapes) : analysis_(analysis), escapes_(escapes) {
        for (int k = 0; k < kBuiltinCount; ++k) {
            const BuiltinInfo& b = builtinTable()[k];
            env_.put(intern(b.name), GenBuiltin{std::string(b.name), b.returnsValue});
        }
    }

    vm::CodeModule program(const Exp& body) {
        FunState main("main", 0, 0);
        cur_ = &main;
        if (escapes_.needsRecord(nullptr)) prologue(nullptr, {});
        exp(body);
        const types::Type* t = analysis_.typeOf(body);
        if (types::isUnit(t)) {
            emit({Op::Ldc});
        } else if (!isInt(t)) {
            emit({Op::Pop});
            emit({Op::Ldc});
        }
        finish(main, {Op::Halt});
        module_.functions.insert(module_.functions.begin(), std::move(main.out));
        return std::move(module_);
    }

private:
    // ---- emission --------------------------------------------------------

    void emit(Instruction ins, bool calleeReturnsValue = false) {
        vm::StackEffect eff = vm::stackEffect(ins, calleeReturnsValue);
        if (cur_->depth < eff.pops) throw std::logic_error("codegen: operand stack underflow");
        cur_->depth += eff.pushes - eff.pops;
        cur_->out.body.emplace_back(std::move(ins));
    }

    void emitLocal(Op op, int slot) { emit({op, slot}); }

    std::string newLabel() { return "L" + std::to_string(cur_->nextLabel++); }
    void place(const std::string& label) { cur_->out.body.emplace_back(vm::LabelDef{label}); }
    void jump(Op op, const std::string& label) { emit({op, 0, label}); }

    int stringIndex(const std::string& s) {
        auto [it, fresh] = strings_.emplace(s, static_cast<int>(module_.strings.size()));
        if (fresh) module_.strings.push_back(s);
        return it->second;
    }

    // Escape record of the enclosing function at `level`.
    void loadRecordOf(int level) {
        if (level == cur_->level) {
            emitLocal(Op::Aload, cur_->recordSlot);
            return;
        }
        emitLocal(Op::Aload, 0);
        for (int l = cur_->level - 1; l > level; --l) emit({Op::Getf, 0});
    }

    // Allocates the escape record: field 0 links outward, escaped parameters
    // are copied in, other escaped variables start as 0 until initialized.
    void prologue(const FunDecl* fn, const std::unordered_map<BindingKey, int>& paramSlots) {
        cur_->recordSlot = cur_->frame.allocLocal();
        if (fn) {
            emitLocal(Op::Aload, 0);
        } else {
            emit({Op::Ldnil});
        }
        auto it = escapes_.records.find(fn);
        int fields = 1;
        if (it != escapes_.records.end()) {
            for (BindingKey key : it->second) {
                auto p = paramSlots.find(key);
                if (p != paramSlots.end()) {
                    emitLocal(isInt(analysis_.bindingTypes.at(key)) ? Op::Iload : Op::Aload, p->second);
                } else {
                    emit({Op::Ldc});
                }
                ++fields;
            }
        }
        emit({Op::Newrec, fields});
        emitLocal(Op::Astore, cur_->recordSlot);
    }

    void finish(FunState& st, Instruction exit) {
        if (st.recordSlot >= 0) st.frame.popLocal();
        emit(std::move(exit));
        st.out.frameEndAtExit = st.frame.frameEnd();
        st.out.params = st.frame.params();
        st.out.locals = st.frame.highWater();
    }

    Access bind(BindingKey key, int localSlot) {
        auto it = escapes_.field.find(key);
        if (it != escapes_.field.end()) return Access{Access::Kind::Escaped, cur_->level, it->second};
        return Access{Access::Kind::Local, cur_->level, localSlot};
    }

    // ---- expressions -----------------------------------------------------

    bool produces(const Exp& e) const { return !types::isUnit(analysis_.typeOf(e)); }

    void exp(const Exp& e) {
        int before = cur_->depth;
        traverse(e, overloaded{
                        [&](const IntLit& n, Pos) { emit({Op::Ldc, n.value}); },
                        [&](const StrLit& n, Pos) { emit({Op::Lds, stringIndex(n.value)}); },
                        [&](const NilLit&, Pos) { emit({Op::Ldnil}); },
                        [&](const VarExp& n, Pos) { load(n.var); },
                        [&](const AssignExp& n, Pos) { assign(n); },
                        [&](const SeqExp& n, Pos) { sequence(n.exps); },
                        [&](const OpExp& n, Pos) { binary(n); },
                        [&](const NegExp& n, Pos) {
                            exp(*n.operand);
                            emit({Op::Ineg});
                        },
                        [&](const CallExp& n, Pos) { call(n); },
                        [&](const RecordExp& n, Pos) {
                            for (const FieldInit& f : n.fields) exp(*f.value);
                            emit({Op::Newrec, static_cast<std::int64_t>(n.fields.size())});
                        },
                        [&](const ArrayExp& n, Pos) {
                            exp(*n.size);
                            exp(*n.init);
                            emit({Op::Newarr});
                        },
                        [&](const IfExp& n, Pos) {
                            std::string end = newLabel();
                            exp(*n.test);
                            jump(Op::Brz, end);
                            exp(*n.then);
                            place(end);
                        },
                        [&](const IfElseExp& n, Pos) {
                            std::string other = newLabel();
                            std::string end = newLabel();
                            exp(*n.test);
                            jump(Op::Brz, other);
                            int split = cur_->depth;
                            exp(*n.then);
                            jump(Op::Goto, end);
                            cur_->depth = split;
                            place(other);
                            exp(*n.otherwise);
                            place(end);
                        },
                        [&](const WhileExp& n, Pos) {
                            std::string test = newLabel();
                            std::string end = newLabel();
                            place(test);
                            exp(*n.test);
                            jump(Op::Brz, end);
                            cur_->loops.push_back({end, cur_->depth});
                            exp(*n.body);
                            cur_->loops.pop_back();
                            jump(Op::Goto, test);
                            place(end);
                        },
                        [&](const ForExp& n, Pos) { forLoop(n); },
                        [&](const BreakExp&, Pos) {
                            const Loop& loop = cur_->loops.back();
                            int saved = cur_->depth;
                            while (cur_->depth > loop.depth) emit({Op::Pop});
                            jump(Op::Goto, loop.exit);
                            cur_->depth = saved;
                        },
                        [&](const LetExp& n, Pos) { let(n); },
                    });
        if (cur_->depth != before + (produces(e) ? 1 : 0)) {
            throw std::logic_error("codegen: stack depth drifted at " + std::to_string(e.pos.line) + ":" +
                                   std::to_string(e.pos.column));
        }
    }

    void sequence(const std::vector<Exp>& exps) {
        for (std::size_t i = 0; i < exps.size(); ++i) {
            exp(exps[i]);
            if (i + 1 < exps.size() && produces(exps[i])) emit({Op::Pop});
        }
    }

    const GenVar& variable(Symbol name) {
        const GenEntry* e = env_.get(name);
        const GenVar* v = e ? std::get_if<GenVar>(e) : nullptr;
        if (!v) throw std::logic_error("codegen: unresolved variable " + std::string(name.text()));
        return *v;
    }

    int fieldIndex(const LValue& base, Symbol field) const {
        return types::actual(analysis_.typeOf(base))->fieldIndex(field);
    }

    void load(const LValue& lv) {
        traverse(lv, overloaded{
                         [&](const SimpleVar& v, Pos) {
                             const GenVar& var = variable(v.name);
                             if (var.access.kind == Access::Kind::Local) {
                                 emitLocal(var.isInt ? Op::Iload : Op::Aload, var.access.index);
                             } else {
                                 loadRecordOf(var.access.level);
                                 emit({Op::Getf, var.access.index});
                             }
                         },
                         [&](const FieldVar& v, Pos) {
                             load(*v.base);
                             emit({Op::Getf, fieldIndex(*v.base, v.field)});
                         },
                         [&](const SubscriptVar& v, Pos) {
                             load(*v.base);
                             exp(*v.index);
                             emit({Op::Aget});
                         },
                     });
    }

    void assign(const AssignExp& n) {
        traverse(n.target, overloaded{
                               [&](const SimpleVar& v, Pos) {
                                   const GenVar& var = variable(v.name);
                                   if (var.access.kind == Access::Kind::Local) {
                                       exp(*n.value);
                                       emitLocal(var.isInt ? Op::Istore : Op::Astore, var.access.index);
                                   } else {
                                       loadRecordOf(var.access.level);
                                       exp(*n.value);
                                       emit({Op::Setf, var.access.index});
                                   }
                               },
                               [&](const FieldVar& v, Pos) {
                                   load(*v.base);
                                   exp(*n.value);
                                   emit({Op::Setf, fieldIndex(*v.base, v.field)});
                               },
                               [&](const SubscriptVar& v, Pos) {
                                   load(*v.base);
                                   exp(*v.index);
                                   exp(*n.value);
                                   emit({Op::Aset});
                               },
                           });
    }

    void binary(const OpExp& n) {
        if (n.op == Oper::And || n.op == Oper::Or) {
            std::string shortcut = newLabel();
            std::string end = newLabel();
            exp(*n.left);
            jump(n.op == Oper::And ? Op::Brz : Op::Brnz, shortcut);
            exp(*n.right);
            jump(Op::Goto, end);
            --cur_->depth;
            place(shortcut);
            emit({Op::Ldc, n.op == Oper::And ? 0 : 1});
            place(end);
            return;
        }
        exp(*n.left);
        exp(*n.right);
        switch (n.op) {
        case Oper::Plus: emit({Op::Iadd}); return;
        case Oper::Minus: emit({Op::Isub}); return;
        case Oper::Times: emit({Op::Imul}); return;
        case Oper::Divide: emit({Op::Idiv}); return;
        default: break;
        }
        Kind kind = types::actual(analysis_.typeOf(*n.left))->kind();
        if (kind == Kind::Nil) kind = types::actual(analysis_.typeOf(*n.right))->kind();
        if (kind == Kind::Record || kind == Kind::Array || kind == Kind::Nil) {
            emit({Op::Refeq});
            if (n.op == Oper::Ne) {
                emit({Op::Ldc});
                emit({Op::Icmpeq});
            }
            return;
        }
        if (kind == Kind::String) {
            emit({Op::Builtin, 0, std::string(vm::kStrcmp), 2});
            emit({Op::Ldc});
        }
        switch (n.op) {
        case Oper::Eq: emit({Op::Icmpeq}); break;
        case Oper::Ne: emit({Op::Icmpne}); break;
        case Oper::Lt: emit({Op::Icmplt}); break;
        case Oper::Le: emit({Op::Icmple}); break;
        case Oper::Gt: emit({Op::Icmpgt}); break;
        default: emit({Op::Icmpge}); break;
        }
    }

    void call(const CallExp& n) {
        const GenEntry* e = env_.get(n.func);
        if (!e) throw std::logic_error("codegen: unresolved function " + std::string(n.func.text()));
        if (const auto* b = std::get_if<GenBuiltin>(e)) {
            for (const Exp& a : n.args) exp(a);
            emit({Op::Builtin, 0, b->name, static_cast<int>(n.args.size())});
            return;
        }
        const auto& fn = std::get<GenFun>(*e);
        loadRecordOf(fn.level - 1);
        for (const Exp& a : n.args) exp(a);
        emit({Op::Call, 0, fn.label, static_cast<int>(n.args.size()) + 1}, fn.returnsValue);
    }

    void forLoop(const ForExp& n) {
        std::string body = newLabel();
        std::string end = newLabel();
        exp(*n.lo);
        int counter = cur_->frame.allocLocal();
        emitLocal(Op::Istore, counter);
        exp(*n.hi);
        int limit = cur_->frame.allocLocal();
        emitLocal(Op::Istore, limit);
        emitLocal(Op::Iload, counter);
        emitLocal(Op::Iload, limit);
        emit({Op::Icmpgt});
        jump(Op::Brnz, end);
        place(body);

        ScopeGuard scope(env_);
        Access access = bind(&n, counter);
        if (access.kind == Access::Kind::Escaped) {
            loadRecordOf(cur_->level);
            emitLocal(Op::Iload, counter);
            emit({Op::Setf, access.index});
        }
        env_.put(n.var, GenVar{access, true});
        cur_->loops.push_back({end, cur_->depth});
        exp(*n.body);
        cur_->loops.pop_back();

        // Stop before the increment when the counter reaches the limit, so
        // a limit of the largest int cannot overflow.
        emitLocal(Op::Iload, counter);
        emitLocal(Op::Iload, limit);
        emit({Op::Icmpeq});
        jump(Op::Brnz, end);
        emitLocal(Op::Iload, counter);
        emit({Op::Ldc, 1});
        emit({Op::Iadd});
        emitLocal(Op::Istore, counter);
        jump(Op::Goto, body);
        place(end);
        cur_->frame.popLocal();
        cur_->frame.popLocal();
    }

    void let(const LetExp& n) {
        ScopeGuard scope(env_);
        int locals = 0;
        for (std::size_t i = 0; i < n.decls.size();) {
            std::size_t end = semant::runEnd(n.decls, i);
            const Decl& first = n.decls[i];
            if (const auto* v = std::get_if<VarDecl>(&first.node)) {
                bool intSlot = isInt(analysis_.bindingTypes.at(v));
                auto field = escapes_.field.find(v);
                if (field != escapes_.field.end()) {
                    loadRecordOf(cur_->level);
                    exp(*v->init);
                    emit({Op::Setf, field->second});
                    env_.put(v->name, GenVar{Access{Access::Kind::Escaped, cur_->level, field->second}, intSlot});
                } else {
                    exp(*v->init);
                    int slot = cur_->frame.allocLocal();
                    ++locals;
                    emitLocal(intSlot ? Op::Istore : Op::Astore, slot);
                    env_.put(v->name, GenVar{Access{Access::Kind::Local, cur_->level, slot}, intSlot});
                }
            } else if (std::holds_alternative<FunDecl>(first.node)) {
                std::vector<std::string> labels;
                for (std::size_t k = i; k < end; ++k) {
                    const auto& fn = std::get<FunDecl>(n.decls[k].node);
                    labels.push_back(std::string(fn.name.text()) + "_" + std::to_string(++functionCount_));
                    env_.put(fn.name, GenFun{labels.back(), cur_->level + 1, fn.result.has_value()});
                }
                for (std::size_t k = i; k < end; ++k) function(std::get<FunDecl>(n.decls[k].node), labels[k - i]);
            }
            i = end;
        }
        sequence(n.body);
        for (int k = 0; k < locals; ++k) cur_->frame.popLocal();
    }

    void function(const FunDecl& fn, const std::string& label) {
        FunState st(label, static_cast<int>(fn.params.size()) + 1, cur_->level + 1);
        FunState* saved = std::exchange(cur_, &st);
        {
            ScopeGuard scope(env_);
            std::unordered_map<BindingKey, int> paramSlots;
            for (std::size_t k = 0; k < fn.params.size(); ++k) {
                const Field& p = fn.params[k];
                int slot = static_cast<int>(k) + 1;
                paramSlots[&p] = slot;
                env_.put(p.name, GenVar{bind(&p, slot), isInt(analysis_.bindingTypes.at(&p))});
            }
            if (escapes_.needsRecord(&fn)) prologue(&fn, paramSlots);
            exp(*fn.body);
            finish(st, {fn.result ? Op::Retv : Op::Ret});
        }
        cur_ = saved;
        module_.functions.push_back(std::move(st.out));
    }

    const semant::Analysis& analysis_;
    const EscapeInfo& escapes_;
    ScopedTable<GenEntry> env_;
    vm::CodeModule module_;
    std::unordered_map<std::string, int> strings_;
    FunState* cur_ = nullptr;
    int functionCount_ = 0;
};

} // namespace

vm::CodeModule compile(const Exp& program, const semant::Analysis& analysis) {
    EscapeInfo escapes;
    EscapeFinder(escapes).exp(program);
    return Generator(analysis, escapes).program(program);
}

CompileResult compile(const Exp& program, const semant::Options& options) {
    CompileResult result;
    semant::Analysis analysis = semant::analyze(program, options);
    if (!analysis.ok()) {
        result.diagnostics = std::move(analysis.diagnostics);
        return result;
    }
    result.module = compile(program, analysis);
    return result;
}

} // namespace tiger::codegen
