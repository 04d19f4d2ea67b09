// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iterator>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "../support/corpus.hpp"
#include "queens_oracle.hpp"
#include "tiger/codegen.hpp"
#include "tiger/differential.hpp"
#include "tiger/frontend.hpp"
#include "tiger/interp.hpp"
#include "tiger/scoped_table.hpp"
#include "tiger/semant.hpp"
#include "tiger/vm.hpp"

using namespace tiger;
using tiger::testing::CorpusProgram;
using tiger::testing::loadCorpus;

namespace {

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(std::string why) {
        pass = false;
        if (notes.size() < 8) notes.push_back(std::move(why));
    }
};

struct Parsed {
    const CorpusProgram* source;
    Exp program;
};

std::vector<Parsed> parseAll(const std::vector<CorpusProgram>& corpus, Criterion& c) {
    std::vector<Parsed> out;
    for (const auto& p : corpus) {
        ParseResult r = parseSource(p.source);
        if (!r.ok()) {
            c.fail(p.name + ": does not parse");
            continue;
        }
        out.push_back({&p, std::move(*r.program)});
    }
    return out;
}

// ---- AST production coverage ----------------------------------------------

constexpr std::array<const char*, 17> kExpNames = {
    "IntLit",  "StrLit",   "NilLit",   "VarExp", "AssignExp", "SeqExp",  "OpExp",    "NegExp", "CallExp",
    "RecordExp", "ArrayExp", "IfExp", "IfElseExp", "WhileExp", "ForExp", "BreakExp", "LetExp"};
constexpr std::array<const char*, 3> kVarNames = {"SimpleVar", "FieldVar", "SubscriptVar"};
constexpr std::array<const char*, 3> kDeclNames = {"TypeDecl", "VarDecl", "FunDecl"};
constexpr std::array<const char*, 3> kTypeNames = {"NameTy", "RecordTy", "ArrayTy"};
constexpr std::array<const char*, 12> kOperNames = {"+", "-", "*", "/", "=", "<>", "<", "<=", ">", ">=", "&", "|"};

class Coverage {
public:
    std::map<std::string, int> counts;

    void exp(const Exp& e) {
        ++counts[kExpNames[e.node.index()]];
        traverse(e, overloaded{
                        [&](const VarExp& n, Pos) { var(n.var); },
                        [&](const AssignExp& n, Pos) {
                            var(n.target);
                            exp(*n.value);
                        },
                        [&](const SeqExp& n, Pos) { all(n.exps); },
                        [&](const OpExp& n, Pos) {
                            ++counts[std::string("op ") + kOperNames[static_cast<int>(n.op)]];
                            exp(*n.left);
                            exp(*n.right);
                        },
                        [&](const NegExp& n, Pos) { exp(*n.operand); },
                        [&](const CallExp& n, Pos) { all(n.args); },
                        [&](const RecordExp& n, Pos) {
                            for (const auto& f : n.fields) exp(*f.value);
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
                            exp(*n.body);
                        },
                        [&](const LetExp& n, Pos) {
                            for (const auto& d : n.decls) decl(d);
                            all(n.body);
                        },
                        [](const auto&, Pos) {},
                    });
    }

    std::vector<std::string> missing() const {
        std::vector<std::string> out;
        auto need = [&](const auto& names, const char* prefix) {
            for (const char* n : names) {
                std::string key = std::string(prefix) + n;
                if (!counts.count(key)) out.push_back(key);
            }
        };
        need(kExpNames, "");
        need(kVarNames, "");
        need(kDeclNames, "");
        need(kTypeNames, "");
        need(kOperNames, "op ");
        return out;
    }

private:
    void all(const std::vector<Exp>& es) {
        for (const auto& e : es) exp(e);
    }

    void var(const LValue& v) {
        ++counts[kVarNames[v.node.index()]];
        traverse(v, overloaded{
                        [&](const FieldVar& n, Pos) { var(*n.base); },
                        [&](const SubscriptVar& n, Pos) {
                            var(*n.base);
                            exp(*n.index);
                        },
                        [](const SimpleVar&, Pos) {},
                    });
    }

    void decl(const Decl& d) {
        ++counts[kDeclNames[d.node.index()]];
        traverse(d, overloaded{
                        [&](const TypeDecl& n, Pos) { ++counts[kTypeNames[n.type.node.index()]]; },
                        [&](const VarDecl& n, Pos) { exp(*n.init); },
                        [&](const FunDecl& n, Pos) { exp(*n.body); },
                    });
    }
};

// 1. Corpus size, production coverage and differential agreement.
Criterion corpusAgreement(const std::vector<CorpusProgram>& ok) {
    Criterion c;
    auto parsed = parseAll(ok, c);
    if (ok.size() < 30) c.fail("only " + std::to_string(ok.size()) + " corpus programs");
    Coverage cov;
    for (const auto& p : parsed) cov.exp(p.program);
    for (const auto& m : cov.missing()) c.fail("no program uses " + m);

    auto start = std::chrono::steady_clock::now();
    int compared = 0;
    for (const auto& p : parsed) {
        if (!semant::analyze(p.program).ok()) {
            c.fail(p.source->name + ": does not type-check");
            continue;
        }
        DiffReport d = differential(p.program, p.source->input);
        ++compared;
        if (d.verdict != DiffReport::Verdict::Pass) c.fail(p.source->name + ": " + d.reason);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 10.0) c.fail("differential runs took " + std::to_string(secs) + " s");
    std::ostringstream note;
    note << compared << " programs agree in " << secs << " s";
    c.notes.insert(c.notes.begin(), note.str());
    return c;
}

// ---- negative programs -----------------------------------------------------

const std::vector<std::string> kSemanticCodes = {
    "UNDECLARED_VAR", "UNDECLARED_TYPE", "UNDECLARED_FUN",         "NOT_A_VAR",        "NOT_A_FUN",
    "OPERAND_TYPE",   "COMPARISON_TYPE", "IFELSE_BRANCH_MISMATCH", "COND_NOT_INT",     "BODY_NOT_UNIT",
    "ASSIGN_TYPE",    "ASSIGN_LOOPVAR",  "ARITY_MISMATCH",         "ARG_TYPE",         "FIELD_UNKNOWN",
    "FIELD_ORDER",    "NOT_A_RECORD",    "NOT_AN_ARRAY",           "INDEX_NOT_INT",    "TYPE_CYCLE",
    "DUPLICATE_NAME", "BREAK_OUTSIDE_LOOP", "NIL_UNCONSTRAINED",   "VOID_VALUE",
};

// All diagnostics a checking front end reports for `source`.
Diagnostics diagnose(const std::string& source) {
    ParseResult parsed = parseSource(source);
    if (!parsed.ok()) return parsed.diagnostics;
    return semant::analyze(*parsed.program).diagnostics;
}

// 2. Every diagnostic code has a negative program that triggers it exactly.
Criterion negativePrograms(const std::vector<CorpusProgram>& bad) {
    Criterion c;
    std::set<std::string> covered;
    for (const auto& p : bad) {
        auto want = testing::expectation(p.source);
        if (!want) {
            c.fail(p.name + ": no expectation header");
            continue;
        }
        Diagnostics got = diagnose(p.source);
        bool hit = got.size() == 1 && got.front().code == want->code && got.front().pos.line == want->line &&
                   got.front().pos.column == want->column;
        if (!hit) {
            std::string desc = got.size() != 1 ? std::to_string(got.size()) + " diagnostics"
                                           : got.front().code + " at " + std::to_string(got.front().pos.line) + ":" +
                                                 std::to_string(got.front().pos.column);
            c.fail(p.name + ": expected " + want->code + " at " + std::to_string(want->line) + ":" +
                   std::to_string(want->column) + ", got " + desc);
            continue;
        }
        covered.insert(want->code);
    }
    for (const auto& code : kSemanticCodes) {
        if (!covered.count(code)) c.fail("no negative program for " + code);
    }
    c.notes.insert(c.notes.begin(), std::to_string(covered.size()) + " distinct codes over " +
                                        std::to_string(bad.size()) + " programs");
    return c;
}

// 3. Well-typed programs never reach a dynamic tag fault.
Criterion noTagFaults(const std::vector<CorpusProgram>& ok, const std::vector<CorpusProgram>& bad) {
    Criterion c;
    int ran = 0;
    for (const auto* set : {&ok, &bad}) {
        for (const auto& p : *set) {
            ParseResult parsed = parseSource(p.source);
            if (!parsed.ok() || !semant::analyze(*parsed.program).ok()) continue;
            ++ran;
            auto r = interp::run(*parsed.program, p.input);
            if (r.outcome.kind == interp::Outcome::Kind::Trap && r.outcome.trap->kind == TrapKind::BadTag) {
                c.fail(p.name + ": " + r.outcome.trap->message);
            }
        }
    }
    c.notes.insert(c.notes.begin(), std::to_string(ran) + " programs run unchecked");
    return c;
}

// ---- symbol table ------------------------------------------------------------

class ScopeListOracle {
public:
    ScopeListOracle() : scopes_(1) {}
    void put(Symbol k, int v) { scopes_.back()[k] = v; }
    void beginScope() { scopes_.emplace_back(); }
    void endScope() { scopes_.pop_back(); }
    std::size_t depth() const { return scopes_.size() - 1; }
    std::optional<int> get(Symbol k) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (auto f = it->find(k); f != it->end()) return f->second;
        }
        return std::nullopt;
    }

private:
    std::vector<std::map<Symbol, int>> scopes_;
};

// 4. Randomized operation sequences against a naive model.
Criterion symbolTable() {
    Criterion c;
    std::mt19937 rng(20261019);
    std::vector<Symbol> keys;
    for (int i = 0; i < 8; ++i) keys.push_back(intern("s" + std::to_string(i)));
    long ops = 0;
    for (int run = 0; run < 1000 && c.pass; ++run) {
        ScopedTable<int> table;
        ScopeListOracle oracle;
        int n = std::uniform_int_distribution<int>(1, 200)(rng);
        for (int i = 0; i < n; ++i, ++ops) {
            int op = std::uniform_int_distribution<int>(0, 3)(rng);
            Symbol k = keys[std::uniform_int_distribution<std::size_t>(0, keys.size() - 1)(rng)];
            if (op == 0) {
                table.put(k, i);
                oracle.put(k, i);
            } else if (op == 1 && oracle.depth() < 8) {
                table.beginScope();
                oracle.beginScope();
            } else if (op == 2 && oracle.depth() > 0) {
                table.endScope();
                oracle.endScope();
            } else {
                const int* got = table.get(k);
                auto want = oracle.get(k);
                if ((got == nullptr) != !want.has_value() || (got && *got != *want)) {
                    c.fail("sequence " + std::to_string(run) + " op " + std::to_string(i) + ": lookup mismatch");
                    break;
                }
            }
        }
    }
    c.notes.insert(c.notes.begin(), "1000 sequences, " + std::to_string(ops) + " operations");
    return c;
}

// 5. parse . pretty . parse is the identity.
Criterion roundTrip(const std::vector<CorpusProgram>& ok) {
    Criterion c;
    auto parsed = parseAll(ok, c);
    for (const auto& p : parsed) {
        std::string text = pretty(p.program);
        ParseResult again = parseSource(text);
        if (!again.ok()) {
            c.fail(p.source->name + ": pretty output does not parse");
        } else if (!(*again.program == p.program)) {
            c.fail(p.source->name + ": tree changed");
        }
    }
    return c;
}

// ---- builtin parity ------------------------------------------------------------

using Arg = std::variant<std::int64_t, std::string>;

struct Expected {
    enum class Kind { Value, None, Trap, Exit };
    Kind kind;
    Arg value{};
    std::int64_t exitCode = 0;
    std::string output{};
};

struct Row {
    std::string builtin;
    std::vector<Arg> args;
    std::string input;
    std::size_t inputPos;
    Expected want;
};

Expected val(Arg v, std::string out = {}) { return {Expected::Kind::Value, std::move(v), 0, std::move(out)}; }
Expected none(std::string out = {}) { return {Expected::Kind::None, {}, 0, std::move(out)}; }
Expected oob() { return {Expected::Kind::Trap}; }
Expected quits(std::int64_t code) { return {Expected::Kind::Exit, {}, code}; }

std::string bytes(std::initializer_list<int> cs) {
    std::string s;
    for (int c : cs) s += static_cast<char>(c);
    return s;
}

std::vector<Row> parityRows() {
    using S = std::string;
    using I = std::int64_t;
    const S longText(1000, 'z');
    std::vector<Row> rows = {
        {"print", {S("")}, "", 0, none("")},
        {"print", {S("hello")}, "", 0, none("hello")},
        {"print", {S("\n")}, "", 0, none("\n")},
        {"print", {bytes({0, 255})}, "", 0, none(bytes({0, 255}))},
        {"print", {longText}, "", 0, none(longText)},

        {"flush", {}, "", 0, none()},
        {"flush", {}, "abc", 0, none()},
        {"flush", {}, "abc", 3, none()},
        {"flush", {}, "\n", 1, none()},
        {"flush", {}, bytes({0}), 0, none()},

        {"getchar", {}, "", 0, val(S(""))},
        {"getchar", {}, "a", 0, val(S("a"))},
        {"getchar", {}, "ab", 1, val(S("b"))},
        {"getchar", {}, "ab", 2, val(S(""))},
        {"getchar", {}, bytes({255}), 0, val(bytes({255}))},
        {"getchar", {}, bytes({0}), 0, val(bytes({0}))},

        {"ord", {S("")}, "", 0, val(I{-1})},
        {"ord", {S("A")}, "", 0, val(I{65})},
        {"ord", {S("ab")}, "", 0, val(I{97})},
        {"ord", {bytes({0})}, "", 0, val(I{0})},
        {"ord", {bytes({255})}, "", 0, val(I{255})},

        {"chr", {I{0}}, "", 0, val(bytes({0}))},
        {"chr", {I{65}}, "", 0, val(S("A"))},
        {"chr", {I{255}}, "", 0, val(bytes({255}))},
        {"chr", {I{256}}, "", 0, oob()},
        {"chr", {I{-1}}, "", 0, oob()},
        {"chr", {INT64_MIN}, "", 0, oob()},

        {"size", {S("")}, "", 0, val(I{0})},
        {"size", {S("a")}, "", 0, val(I{1})},
        {"size", {S("abc")}, "", 0, val(I{3})},
        {"size", {bytes({0, 0})}, "", 0, val(I{2})},
        {"size", {longText}, "", 0, val(I{1000})},

        {"substring", {S("hello"), I{0}, I{5}}, "", 0, val(S("hello"))},
        {"substring", {S("hello"), I{1}, I{3}}, "", 0, val(S("ell"))},
        {"substring", {S("hello"), I{5}, I{0}}, "", 0, val(S(""))},
        {"substring", {S(""), I{0}, I{0}}, "", 0, val(S(""))},
        {"substring", {S("hello"), I{4}, I{2}}, "", 0, oob()},
        {"substring", {S("hello"), I{-1}, I{1}}, "", 0, oob()},
        {"substring", {S("hello"), I{1}, I{-1}}, "", 0, oob()},
        {"substring", {S("hello"), I{2}, INT64_MAX}, "", 0, oob()},

        {"concat", {S(""), S("")}, "", 0, val(S(""))},
        {"concat", {S("ab"), S("")}, "", 0, val(S("ab"))},
        {"concat", {S(""), S("cd")}, "", 0, val(S("cd"))},
        {"concat", {S("ab"), S("cd")}, "", 0, val(S("abcd"))},
        {"concat", {bytes({0}), bytes({255})}, "", 0, val(bytes({0, 255}))},

        {"not", {I{0}}, "", 0, val(I{1})},
        {"not", {I{1}}, "", 0, val(I{0})},
        {"not", {I{-1}}, "", 0, val(I{0})},
        {"not", {I{42}}, "", 0, val(I{0})},
        {"not", {INT64_MIN}, "", 0, val(I{0})},

        {"exit", {I{0}}, "", 0, quits(0)},
        {"exit", {I{1}}, "", 0, quits(1)},
        {"exit", {I{-1}}, "", 0, quits(-1)},
        {"exit", {I{255}}, "", 0, quits(255)},
        {"exit", {INT64_MAX}, "", 0, quits(INT64_MAX)},
    };
    return rows;
}

template <class Value>
Value toValue(const Arg& a) {
    return std::visit([](const auto& x) -> Value { return x; }, a);
}

template <class Value>
std::optional<Arg> fromValue(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return Arg{*i};
    if (auto* s = std::get_if<std::string>(&v)) return Arg{*s};
    return std::nullopt;
}

struct Observed {
    Expected::Kind kind;
    std::optional<Arg> value;
    std::optional<TrapKind> trap;
    std::int64_t exitCode = 0;
    std::string output;
    std::size_t inputPos = 0;
};

template <class Outcome>
Observed observe(const Outcome& o, const ByteIo& io) {
    Observed obs{Expected::Kind::None, {}, {}, 0, io.output, io.inputPos};
    if (o.trap) {
        obs.kind = Expected::Kind::Trap;
        obs.trap = o.trap;
    } else if (o.exit) {
        obs.kind = Expected::Kind::Exit;
        obs.exitCode = *o.exit;
    } else if (o.value) {
        obs.value = fromValue(*o.value);
        if (obs.value) obs.kind = Expected::Kind::Value;
    }
    return obs;
}

bool matches(const Observed& o, const Row& row, std::string& why) {
    const Expected& w = row.want;
    if (o.kind != w.kind) return why = "wrong outcome kind", false;
    if (w.kind == Expected::Kind::Value && o.value != w.value) return why = "wrong value", false;
    if (w.kind == Expected::Kind::Trap && o.trap != TrapKind::IndexOob) return why = "wrong trap", false;
    if (w.kind == Expected::Kind::Exit && o.exitCode != w.exitCode) return why = "wrong exit code", false;
    if (o.output != w.output) return why = "wrong output", false;
    std::size_t consumed = row.builtin == "getchar" && row.inputPos < row.input.size() ? 1 : 0;
    if (o.inputPos != row.inputPos + consumed) return why = "wrong input position", false;
    return true;
}

// 6. Interpreter and VM standard libraries agree with each other and with
// host-computed expectations.
Criterion builtinParity() {
    Criterion c;
    auto rows = parityRows();
    std::map<std::string, int> perBuiltin;
    for (const auto& row : rows) {
        auto info = findBuiltin(row.builtin);
        if (!info) {
            c.fail("unknown builtin " + row.builtin);
            continue;
        }
        ByteIo iio{row.input, row.inputPos, {}};
        std::vector<interp::Value> iargs;
        for (const auto& a : row.args) iargs.push_back(toValue<interp::Value>(a));
        Observed fromInterp = observe(interp::invokeBuiltin(info->id, iargs, iio), iio);

        ByteIo vio{row.input, row.inputPos, {}};
        std::vector<vm::Value> vargs;
        for (const auto& a : row.args) vargs.push_back(toValue<vm::Value>(a));
        Observed fromVm = observe(vm::invokeBuiltin(row.builtin, vargs, vio), vio);

        std::string why;
        if (!matches(fromInterp, row, why)) c.fail("interp " + row.builtin + ": " + why);
        if (!matches(fromVm, row, why)) c.fail("vm " + row.builtin + ": " + why);
        ++perBuiltin[row.builtin];
    }
    for (int i = 0; i < kBuiltinCount; ++i) {
        std::string name(builtinTable()[i].name);
        if (perBuiltin[name] < 5) c.fail(name + " has fewer than 5 rows");
    }
    c.notes.insert(c.notes.begin(), std::to_string(rows.size()) + " rows over " + std::to_string(perBuiltin.size()) +
                                        " builtins");
    return c;
}

// ---- end-to-end programs ---------------------------------------------------------

const CorpusProgram* find(const std::vector<CorpusProgram>& corpus, const std::string& name) {
    for (const auto& p : corpus) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::optional<DiffReport> runBoth(const CorpusProgram* p, Criterion& c) {
    if (!p) {
        c.fail("program missing from corpus");
        return std::nullopt;
    }
    ParseResult parsed = parseSource(p->source);
    if (!parsed.ok() || !semant::analyze(*parsed.program).ok()) {
        c.fail(p->name + ": not a valid program");
        return std::nullopt;
    }
    return differential(*parsed.program, p->input);
}

// 7. Eight queens and merge sort on both engines.
Criterion classicPrograms(const std::vector<CorpusProgram>& ok) {
    Criterion c;
    long solutions = testing::countQueens(8);
    if (solutions != 92) c.fail("oracle counts " + std::to_string(solutions) + " solutions");
    if (auto q = runBoth(find(ok, "queens.tig"), c)) {
        std::string want = std::to_string(solutions) + "\n";
        if (q->interpOutput != want) c.fail("run printed '" + q->interpOutput + "'");
        if (q->vmOutput != want) c.fail("exec printed '" + q->vmOutput + "'");
    }

    const CorpusProgram* ms = find(ok, "mergesort.tig");
    if (auto m = runBoth(ms, c)) {
        std::istringstream in(ms->input);
        std::vector<std::int64_t> nums{std::istream_iterator<std::int64_t>(in), std::istream_iterator<std::int64_t>()};
        if (nums.size() != 100) c.fail("mergesort input has " + std::to_string(nums.size()) + " ints");
        std::sort(nums.begin(), nums.end());
        std::string want;
        for (auto n : nums) want += std::to_string(n) + "\n";
        if (m->interpOutput != want) c.fail("run output is not the sorted input");
        if (m->vmOutput != want) c.fail("exec output is not the sorted input");
    }
    return c;
}

// 8. Static stack and frame discipline of generated code.
Criterion codeDiscipline(const std::vector<CorpusProgram>& ok) {
    Criterion c;
    auto parsed = parseAll(ok, c);
    int functions = 0;
    for (const auto& p : parsed) {
        auto compiled = codegen::compile(p.program);
        if (!compiled.ok()) {
            c.fail(p.source->name + ": does not compile");
            continue;
        }
        functions += static_cast<int>(compiled.module->functions.size());
        for (const auto& v : codegen::verify(*compiled.module)) {
            c.fail(p.source->name + " " + v.function + "@" + std::to_string(v.index) + ": " + v.code + " " +
                   v.message);
        }
    }
    c.notes.insert(c.notes.begin(), std::to_string(functions) + " functions checked");
    return c;
}

} // namespace

int main() {
    auto ok = loadCorpus("ok");
    auto bad = loadCorpus("bad");

    std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
        {"corpus coverage and differential agreement", [&] { return corpusAgreement(ok); }},
        {"negative program per diagnostic code", [&] { return negativePrograms(bad); }},
        {"no tag faults in well-typed programs", [&] { return noTagFaults(ok, bad); }},
        {"scoped table against scope-list model", [] { return symbolTable(); }},
        {"parse/pretty round trip", [&] { return roundTrip(ok); }},
        {"builtin parity", [] { return builtinParity(); }},
        {"queens and mergesort on both engines", [&] { return classicPrograms(ok); }},
        {"static stack and frame discipline", [&] { return codeDiscipline(ok); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        try {
            c = criteria[i].second();
        } catch (const std::exception& e) {
            c.fail(std::string("exception: ") + e.what());
        }
        if (!c.pass) ++failed;
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
        if (!c.notes.empty()) {
            std::cout << " (";
            for (std::size_t k = 0; k < c.notes.size(); ++k) std::cout << (k ? "; " : "") << c.notes[k];
            std::cout << ")";
        }
        std::cout << '\n';
    }
    return failed == 0 ? 0 : 1;
}
