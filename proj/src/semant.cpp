#include "tiger/semant.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "tiger/runtime.hpp"

namespace tiger::semant {
namespace {

using types::Kind;
using types::actual;
using types::describe;
using types::errorType;
using types::intType;
using types::nilType;
using types::stringType;
using types::unitType;

Kind kindOf(const Type* t) { return actual(t)->kind(); }

std::string quoted(Symbol s) { return "'" + std::string(s.text()) + "'"; }

class Checker {
public:
    Checker(const Options& options, types::TypeTable& table, Analysis& notes)
        : options_(options), table_(table), notes_(notes) {
        installBase(env_);
    }

    Diagnostics takeDiagnostics() { return std::move(diags_); }

    const Type* exp(const Exp& e) {
        const Type* t = traverse(e, ExpRules{*this});
        notes_.expTypes[&e] = t;
        return t;
    }

private:
    void report(Pos pos, const char* code, std::string message) { diags_.push_back({pos, code, std::move(message)}); }

    // ---- expressions -----------------------------------------------------

    struct ExpRules {
        Checker& c;

        const Type* operator()(const IntLit&, Pos) { return intType(); }
        const Type* operator()(const StrLit&, Pos) { return stringType(); }
        const Type* operator()(const NilLit&, Pos) { return nilType(); }
        const Type* operator()(const VarExp& n, Pos) { return c.var(n.var); }
        const Type* operator()(const AssignExp& n, Pos pos) { return c.assign(n, pos); }
        const Type* operator()(const SeqExp& n, Pos) { return c.sequence(n.exps); }
        const Type* operator()(const OpExp& n, Pos pos) { return c.binary(n, pos); }
        const Type* operator()(const NegExp& n, Pos pos) {
            const Type* t = c.exp(*n.operand);
            if (types::isUnit(t)) {
                c.report(n.operand->pos, "VOID_VALUE", "operand of unary '-' produces no value");
                return errorType();
            }
            if (kindOf(t) == Kind::Error) return errorType();
            if (kindOf(t) != Kind::Int) {
                c.report(pos, "OPERAND_TYPE", "unary '-' needs an int operand, got " + describe(t));
                return errorType();
            }
            return intType();
        }
        const Type* operator()(const CallExp& n, Pos pos) { return c.call(n, pos); }
        const Type* operator()(const RecordExp& n, Pos pos) { return c.record(n, pos); }
        const Type* operator()(const ArrayExp& n, Pos pos) { return c.array(n, pos); }
        const Type* operator()(const IfExp& n, Pos) {
            c.condition(*n.test);
            c.unitBody(*n.then, "then-branch of if without else");
            return unitType();
        }
        const Type* operator()(const IfElseExp& n, Pos pos) {
            c.condition(*n.test);
            const Type* a = c.exp(*n.then);
            const Type* b = c.exp(*n.otherwise);
            if (kindOf(a) == Kind::Error) return b;
            if (kindOf(b) == Kind::Error) return a;
            if (actual(a) == actual(b)) return a;
            if (kindOf(a) == Kind::Nil && kindOf(b) == Kind::Record) return b;
            if (kindOf(b) == Kind::Nil && kindOf(a) == Kind::Record) return a;
            c.report(pos, "IFELSE_BRANCH_MISMATCH",
                     "branches of if-then-else have different types: " + describe(a) + " and " + describe(b));
            return errorType();
        }
        const Type* operator()(const WhileExp& n, Pos) {
            c.condition(*n.test);
            ++c.loopDepth_;
            c.unitBody(*n.body, "body of while");
            --c.loopDepth_;
            return unitType();
        }
        const Type* operator()(const ForExp& n, Pos) {
            c.bound(*n.lo);
            c.bound(*n.hi);
            ScopeGuard scope(c.env_.venv, c.env_.tenv);
            c.env_.venv.put(n.var, VarEntry{intType(), false});
            c.notes_.bindingTypes[&n] = intType();
            ++c.loopDepth_;
            c.unitBody(*n.body, "body of for");
            --c.loopDepth_;
            return unitType();
        }
        const Type* operator()(const BreakExp&, Pos pos) {
            if (c.loopDepth_ == 0) c.report(pos, "BREAK_OUTSIDE_LOOP", "break is not inside a while or for loop");
            return unitType();
        }
        const Type* operator()(const LetExp& n, Pos) {
            ScopeGuard scope(c.env_.venv, c.env_.tenv);
            for (std::size_t i = 0; i < n.decls.size();) {
                std::size_t end = runEnd(n.decls, i);
                c.declarations(std::span<const Decl>(n.decls).subspan(i, end - i));
                i = end;
            }
            return c.sequence(n.body);
        }
    };

    const Type* sequence(const std::vector<Exp>& exps) {
        const Type* last = unitType();
        for (const Exp& e : exps) last = exp(e);
        return last;
    }

    void condition(const Exp& test) {
        const Type* t = exp(test);
        if (kindOf(t) != Kind::Int && kindOf(t) != Kind::Error) {
            report(test.pos, "COND_NOT_INT", "condition must be an int, got " + describe(t));
        }
    }

    void bound(const Exp& e) {
        const Type* t = exp(e);
        if (kindOf(t) != Kind::Int && kindOf(t) != Kind::Error) {
            report(e.pos, "COND_NOT_INT", "for-loop bound must be an int, got " + describe(t));
        }
    }

    void unitBody(const Exp& body, const char* what) {
        const Type* t = exp(body);
        if (kindOf(t) != Kind::Unit && kindOf(t) != Kind::Error) {
            report(body.pos, "BODY_NOT_UNIT", std::string(what) + " must produce no value, got " + describe(t));
        }
    }

    // Operand that must carry a value; reports VOID_VALUE and yields ERROR
    // for unit expressions.
    const Type* valueOf(const Exp& e, const char* what) {
        const Type* t = exp(e);
        if (types::isUnit(t)) {
            report(e.pos, "VOID_VALUE", std::string(what) + " produces no value");
            return errorType();
        }
        return t;
    }

    const Type* binary(const OpExp& n, Pos pos) {
        std::string opName = std::string("'") + operSpelling(n.op) + "'";
        const Type* a = valueOf(*n.left, ("operand of " + opName).c_str());
        const Type* b = valueOf(*n.right, ("operand of " + opName).c_str());
        Kind ka = kindOf(a);
        Kind kb = kindOf(b);
        if (ka == Kind::Error || kb == Kind::Error) return isComparison(n.op) ? intType() : errorType();

        if (!isComparison(n.op)) {
            if (ka == Kind::Int && kb == Kind::Int) return intType();
            report(pos, "OPERAND_TYPE", opName + " needs int operands, got " + describe(a) + " and " + describe(b));
            return errorType();
        }
        if (ka == Kind::Int && kb == Kind::Int) return intType();
        if (ka == Kind::String && kb == Kind::String) return intType();
        if (n.op == Oper::Eq || n.op == Oper::Ne) {
            bool isRef = ka == Kind::Record || ka == Kind::Array;
            if (isRef && actual(a) == actual(b)) return intType();
            if ((ka == Kind::Nil && kb == Kind::Record) || (kb == Kind::Nil && ka == Kind::Record)) return intType();
            if (ka == Kind::Nil && kb == Kind::Nil) {
                if (options_.allowNilEquality) return intType();
                report(pos, "NIL_UNCONSTRAINED", "comparison of nil with nil: no record type constrains either side");
                return errorType();
            }
        }
        report(pos, "COMPARISON_TYPE", "cannot compare " + describe(a) + " with " + describe(b) + " using " + opName);
        return errorType();
    }

    const Type* var(const LValue& lv) {
        const Type* t = lvalue(lv);
        notes_.varTypes[&lv] = t;
        return t;
    }

    const Type* lvalue(const LValue& lv) {
        return traverse(lv, overloaded{
                                [&](const SimpleVar& v, Pos pos) -> const Type* {
                                    const SemEntry* entry = env_.venv.get(v.name);
                                    if (!entry) {
                                        report(pos, "UNDECLARED_VAR", "undeclared variable " + quoted(v.name));
                                        return errorType();
                                    }
                                    if (std::holds_alternative<FunEntry>(*entry)) {
                                        report(pos, "NOT_A_VAR", quoted(v.name) + " is a function, not a variable");
                                        return errorType();
                                    }
                                    return std::get<VarEntry>(*entry).ty;
                                },
                                [&](const FieldVar& v, Pos pos) -> const Type* {
                                    const Type* base = var(*v.base);
                                    if (kindOf(base) == Kind::Error) return errorType();
                                    if (kindOf(base) != Kind::Record) {
                                        report(pos, "NOT_A_RECORD", "field access on non-record type " + describe(base));
                                        return errorType();
                                    }
                                    const Type* rec = actual(base);
                                    int idx = rec->fieldIndex(v.field);
                                    if (idx < 0) {
                                        report(pos, "FIELD_UNKNOWN", describe(base) + " has no field " + quoted(v.field));
                                        return errorType();
                                    }
                                    return rec->fields()[static_cast<std::size_t>(idx)].second;
                                },
                                [&](const SubscriptVar& v, Pos pos) -> const Type* {
                                    const Type* base = var(*v.base);
                                    const Type* index = exp(*v.index);
                                    bool bad = false;
                                    if (kindOf(index) != Kind::Int && kindOf(index) != Kind::Error) {
                                        report(v.index->pos, "INDEX_NOT_INT", "array index must be an int, got " + describe(index));
                                        bad = true;
                                    }
                                    if (kindOf(base) == Kind::Error) return errorType();
                                    if (kindOf(base) != Kind::Array) {
                                        report(pos, "NOT_AN_ARRAY", "subscript of non-array type " + describe(base));
                                        return errorType();
                                    }
                                    return bad ? errorType() : actual(base)->elem();
                                },
                            });
    }

    const Type* assign(const AssignExp& n, Pos pos) {
        if (const auto* simple = std::get_if<SimpleVar>(&n.target.node)) {
            const SemEntry* entry = env_.venv.get(simple->name);
            if (entry) {
                if (const auto* v = std::get_if<VarEntry>(entry); v && !v->assignable) {
                    report(pos, "ASSIGN_LOOPVAR", "cannot assign to loop counter " + quoted(simple->name));
                    exp(*n.value);
                    return unitType();
                }
            }
        }
        const Type* target = var(n.target);
        const Type* value = valueOf(*n.value, "assigned expression");
        if (!types::assignable(target, value)) {
            report(n.value->pos, "ASSIGN_TYPE", "cannot assign " + describe(value) + " to " + describe(target));
        }
        return unitType();
    }

    const Type* call(const CallExp& n, Pos pos) {
        std::vector<const Type*> args;
        for (const Exp& a : n.args) args.push_back(exp(a));

        const SemEntry* entry = env_.venv.get(n.func);
        if (!entry) {
            report(pos, "UNDECLARED_FUN", "undeclared function " + quoted(n.func));
            return errorType();
        }
        const auto* fn = std::get_if<FunEntry>(entry);
        if (!fn) {
            report(pos, "NOT_A_FUN", quoted(n.func) + " is a variable, not a function");
            return errorType();
        }
        if (args.size() != fn->formals.size()) {
            report(pos, "ARITY_MISMATCH", quoted(n.func) + " expects " + std::to_string(fn->formals.size()) +
                                              " argument(s), got " + std::to_string(args.size()));
            return errorType();
        }
        bool bad = false;
        for (std::size_t i = 0; i < args.size(); ++i) {
            const Type* want = fn->formals[i].second;
            if (types::isUnit(args[i]) || !types::assignable(want, args[i])) {
                report(n.args[i].pos, "ARG_TYPE", "argument " + std::to_string(i + 1) + " of " + quoted(n.func) +
                                                      " must be " + describe(want) + ", got " + describe(args[i]));
                bad = true;
            }
        }
        return bad ? errorType() : fn->result;
    }

    const Type* record(const RecordExp& n, Pos pos) {
        std::vector<const Type*> inits;
        for (const FieldInit& f : n.fields) inits.push_back(exp(*f.value));

        const Type* const* declared = env_.tenv.get(n.type);
        if (!declared) {
            report(pos, "UNDECLARED_TYPE", "undeclared type " + quoted(n.type));
            return errorType();
        }
        const Type* ty = actual(*declared);
        if (ty->kind() == Kind::Error) return errorType();
        if (ty->kind() != Kind::Record) {
            report(pos, "NOT_A_RECORD", quoted(n.type) + " is not a record type");
            return errorType();
        }
        bool bad = false;
        bool misordered = n.fields.size() != ty->fields().size();
        for (std::size_t i = 0; i < n.fields.size(); ++i) {
            const FieldInit& f = n.fields[i];
            int idx = ty->fieldIndex(f.name);
            if (idx < 0) {
                report(f.pos, "FIELD_UNKNOWN", describe(ty) + " has no field " + quoted(f.name));
                bad = true;
                continue;
            }
            if (static_cast<std::size_t>(idx) != i) {
                misordered = true;
                continue;
            }
            const Type* want = ty->fields()[i].second;
            if (types::isUnit(inits[i]) || !types::assignable(want, inits[i])) {
                report(f.value->pos, "ASSIGN_TYPE", "field " + quoted(f.name) + " must be " + describe(want) + ", got " +
                                                       describe(inits[i]));
                bad = true;
            }
        }
        if (misordered && !bad) {
            report(pos, "FIELD_ORDER", "fields of " + quoted(n.type) + " must be given exactly, in declaration order");
            bad = true;
        }
        return bad ? errorType() : *declared;
    }

    const Type* array(const ArrayExp& n, Pos pos) {
        const Type* size = exp(*n.size);
        const Type* init = exp(*n.init);
        bool bad = false;
        if (kindOf(size) != Kind::Int && kindOf(size) != Kind::Error) {
            report(n.size->pos, "INDEX_NOT_INT", "array size must be an int, got " + describe(size));
            bad = true;
        }
        const Type* const* declared = env_.tenv.get(n.type);
        if (!declared) {
            report(pos, "UNDECLARED_TYPE", "undeclared type " + quoted(n.type));
            return errorType();
        }
        const Type* ty = actual(*declared);
        if (ty->kind() == Kind::Error) return errorType();
        if (ty->kind() != Kind::Array) {
            report(pos, "NOT_AN_ARRAY", quoted(n.type) + " is not an array type");
            return errorType();
        }
        if (types::isUnit(init) || !types::assignable(ty->elem(), init)) {
            report(n.init->pos, "ASSIGN_TYPE",
                   "array initializer must be " + describe(ty->elem()) + ", got " + describe(init));
            bad = true;
        }
        return bad ? errorType() : *declared;
    }

    // ---- declarations ----------------------------------------------------

    void declarations(std::span<const Decl> run) {
        const Decl& first = run.front();
        if (const auto* v = std::get_if<VarDecl>(&first.node)) {
            variable(*v, first.pos);
        } else if (std::holds_alternative<TypeDecl>(first.node)) {
            declareTypeRun(run, env_.tenv, table_, diags_);
        } else {
            functions(run);
        }
    }

    void variable(const VarDecl& v, Pos pos) {
        const Type* init = exp(*v.init);
        const Type* bound = init;
        if (v.type) {
            bound = lookupType(env_.tenv, *v.type, pos, diags_);
            if (types::isUnit(init) || !types::assignable(bound, init)) {
                report(v.init->pos, "ASSIGN_TYPE",
                       "initializer of " + quoted(v.name) + " must be " + describe(bound) + ", got " + describe(init));
            }
        } else if (kindOf(init) == Kind::Nil) {
            report(v.init->pos, "NIL_UNCONSTRAINED", "nil initializer needs a declared record type for " + quoted(v.name));
            bound = errorType();
        } else if (kindOf(init) == Kind::Unit) {
            report(v.init->pos, "VOID_VALUE", "initializer of " + quoted(v.name) + " produces no value");
            bound = errorType();
        }
        env_.venv.put(v.name, VarEntry{bound, true});
        notes_.bindingTypes[&v] = bound;
    }

    void functions(std::span<const Decl> run) {
        std::vector<FunEntry> headers;
        std::unordered_set<Symbol> seen;
        for (const Decl& d : run) {
            const auto& fn = std::get<FunDecl>(d.node);
            headers.push_back(functionHeader(fn, d.pos, env_.tenv, diags_));
            if (!seen.insert(fn.name).second) {
                report(d.pos, "DUPLICATE_NAME", "function " + quoted(fn.name) + " declared twice in one group");
                continue;
            }
            env_.venv.put(fn.name, headers.back());
        }
        for (std::size_t i = 0; i < run.size(); ++i) {
            const auto& fn = std::get<FunDecl>(run[i].node);
            const FunEntry& header = headers[i];
            ScopeGuard scope(env_.venv, env_.tenv);
            std::unordered_set<Symbol> params;
            for (std::size_t k = 0; k < fn.params.size(); ++k) {
                if (!params.insert(fn.params[k].name).second) {
                    report(fn.params[k].pos, "DUPLICATE_NAME", "parameter " + quoted(fn.params[k].name) + " declared twice");
                }
                env_.venv.put(fn.params[k].name, VarEntry{header.formals[k].second, true});
                notes_.bindingTypes[&fn.params[k]] = header.formals[k].second;
            }
            int savedLoops = std::exchange(loopDepth_, 0);
            const Type* body = exp(*fn.body);
            loopDepth_ = savedLoops;
            if (!fn.result) {
                if (kindOf(body) != Kind::Unit && kindOf(body) != Kind::Error) {
                    report(fn.body->pos, "BODY_NOT_UNIT",
                           "procedure " + quoted(fn.name) + " must produce no value, got " + describe(body));
                }
            } else if (types::isUnit(body) || !types::assignable(header.result, body)) {
                report(fn.body->pos, "ASSIGN_TYPE",
                       "body of " + quoted(fn.name) + " must be " + describe(header.result) + ", got " + describe(body));
            }
        }
    }

    const Options& options_;
    types::TypeTable& table_;
    Analysis& notes_;
    DualEnv env_;
    Diagnostics diags_;
    int loopDepth_ = 0;
};

} // namespace

void installBase(DualEnv& env) {
    env.tenv.put(intern("int"), intType());
    env.tenv.put(intern("string"), stringType());

    auto s = [] { return stringType(); };
    auto i = [] { return intType(); };
    auto formals = [](std::initializer_list<const Type*> ts) {
        std::vector<std::pair<Symbol, const Type*>> out;
        int k = 0;
        for (const Type* t : ts) out.emplace_back(intern("arg" + std::to_string(k++)), t);
        return out;
    };
    for (int k = 0; k < kBuiltinCount; ++k) {
        const BuiltinInfo& b = builtinTable()[k];
        FunEntry entry;
        switch (b.id) {
        case Builtin::Print: entry = {formals({s()}), unitType()}; break;
        case Builtin::Flush: entry = {formals({}), unitType()}; break;
        case Builtin::Getchar: entry = {formals({}), s()}; break;
        case Builtin::Ord: entry = {formals({s()}), i()}; break;
        case Builtin::Chr: entry = {formals({i()}), s()}; break;
        case Builtin::Size: entry = {formals({s()}), i()}; break;
        case Builtin::Substring: entry = {formals({s(), i(), i()}), s()}; break;
        case Builtin::Concat: entry = {formals({s(), s()}), s()}; break;
        case Builtin::Not: entry = {formals({i()}), i()}; break;
        case Builtin::Exit: entry = {formals({i()}), unitType()}; break;
        }
        env.venv.put(intern(b.name), std::move(entry));
    }
}

std::size_t runEnd(const std::vector<Decl>& decls, std::size_t start) {
    std::size_t kind = decls[start].node.index();
    if (std::holds_alternative<VarDecl>(decls[start].node)) return start + 1;
    std::size_t end = start + 1;
    while (end < decls.size() && decls[end].node.index() == kind) ++end;
    return end;
}

const Type* lookupType(const ScopedTable<const Type*>& tenv, Symbol name, Pos pos, Diagnostics& diags) {
    if (const Type* const* t = tenv.get(name)) return *t;
    diags.push_back({pos, "UNDECLARED_TYPE", "undeclared type " + quoted(name)});
    return errorType();
}

void declareTypeRun(std::span<const Decl> run, ScopedTable<const Type*>& tenv, types::TypeTable& table,
                    Diagnostics& diags) {
    std::vector<const Type*> aliases;
    std::unordered_set<Symbol> seen;
    for (const Decl& d : run) {
        const auto& td = std::get<TypeDecl>(d.node);
        aliases.push_back(table.newName(td.name));
        if (!seen.insert(td.name).second) {
            diags.push_back({d.pos, "DUPLICATE_NAME", "type " + quoted(td.name) + " declared twice in one group"});
            continue;
        }
        tenv.put(td.name, aliases.back());
    }

    for (std::size_t i = 0; i < run.size(); ++i) {
        const auto& td = std::get<TypeDecl>(run[i].node);
        const Type* definition = traverse(
            td.type, overloaded{
                         [&](const NameTy& n, Pos pos) { return lookupType(tenv, n.name, pos, diags); },
                         [&](const RecordTy& r, Pos) -> const Type* {
                             Type* rec = table.newRecord(td.name);
                             std::unordered_set<Symbol> fieldNames;
                             for (const Field& f : r.fields) {
                                 if (!fieldNames.insert(f.name).second) {
                                     diags.push_back({f.pos, "DUPLICATE_NAME", "field " + quoted(f.name) + " declared twice"});
                                 }
                                 table.addField(rec, f.name, lookupType(tenv, f.type, f.pos, diags));
                             }
                             return rec;
                         },
                         [&](const ArrayTy& a, Pos pos) {
                             return table.newArray(td.name, lookupType(tenv, a.elem, pos, diags));
                         },
                     });
        aliases[i]->bind(definition);
    }

    // An alias chain that never reaches a record/array/primitive is a cycle.
    std::unordered_set<const Type*> reported;
    for (std::size_t i = 0; i < run.size(); ++i) {
        std::vector<const Type*> path;
        const Type* t = aliases[i];
        while (t && t->kind() == Kind::Name && std::find(path.begin(), path.end(), t) == path.end()) {
            path.push_back(t);
            t = t->target();
        }
        if (!t || t->kind() != Kind::Name) continue;
        // `t` is the first repeated alias: the cycle is path[pos(t)..].
        auto cycleStart = std::find(path.begin(), path.end(), t);
        if (reported.count(t)) continue;
        std::size_t firstDecl = run.size();
        for (auto it = cycleStart; it != path.end(); ++it) {
            reported.insert(*it);
            for (std::size_t k = 0; k < run.size(); ++k) {
                if (aliases[k] == *it) firstDecl = std::min(firstDecl, k);
            }
        }
        const auto& td = std::get<TypeDecl>(run[firstDecl].node);
        diags.push_back({run[firstDecl].pos, "TYPE_CYCLE",
                         "type " + quoted(td.name) + " is defined in terms of itself through aliases only"});
    }
}

FunEntry functionHeader(const FunDecl& fn, Pos pos, const ScopedTable<const Type*>& tenv, Diagnostics& diags) {
    FunEntry entry;
    for (const Field& p : fn.params) entry.formals.emplace_back(p.name, lookupType(tenv, p.type, p.pos, diags));
    entry.result = fn.result ? lookupType(tenv, *fn.result, pos, diags) : unitType();
    return entry;
}

Analysis analyze(const Exp& program, const Options& options) {
    Analysis result;
    result.types = std::make_shared<types::TypeTable>();
    Checker checker(options, *result.types, result);
    const Type* t = checker.exp(program);
    result.diagnostics = checker.takeDiagnostics();
    result.programType = result.diagnostics.empty() ? t : errorType();
    return result;
}

const Type* Analysis::typeOf(const Exp& e) const {
    auto it = expTypes.find(&e);
    return it == expTypes.end() ? errorType() : it->second;
}

const Type* Analysis::typeOf(const LValue& v) const {
    auto it = varTypes.find(&v);
    return it == varTypes.end() ? errorType() : it->second;
}

} // namespace tiger::semant
