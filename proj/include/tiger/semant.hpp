#pragma once

// Static checking as abstract evaluation: the same walk the interpreter
// performs, over types instead of values.
//
// Diagnostic codes (closed set):
//   UNDECLARED_VAR UNDECLARED_TYPE UNDECLARED_FUN NOT_A_VAR NOT_A_FUN
//   OPERAND_TYPE COMPARISON_TYPE IFELSE_BRANCH_MISMATCH COND_NOT_INT
//   BODY_NOT_UNIT ASSIGN_TYPE ASSIGN_LOOPVAR ARITY_MISMATCH ARG_TYPE
//   FIELD_UNKNOWN FIELD_ORDER NOT_A_RECORD NOT_AN_ARRAY INDEX_NOT_INT
//   TYPE_CYCLE DUPLICATE_NAME BREAK_OUTSIDE_LOOP NIL_UNCONSTRAINED VOID_VALUE
//
// A faulty subexpression has type ERROR, which is compatible with every
// type, so one mistake is reported once.

#include <cstddef>
#include <memory>
#include <span>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "tiger/ast.hpp"
#include "tiger/diagnostic.hpp"
#include "tiger/scoped_table.hpp"
#include "tiger/types.hpp"

namespace tiger::semant {

using types::Type;

struct VarEntry {
    const Type* ty;
    bool assignable = true;  // false only for for-loop counters
};
struct FunEntry {
    std::vector<std::pair<Symbol, const Type*>> formals;
    const Type* result = nullptr;
};
using SemEntry = std::variant<VarEntry, FunEntry>;

/// Variables/functions and type names live in separate namespaces.
struct DualEnv {
    ScopedTable<SemEntry> venv;
    ScopedTable<const Type*> tenv;
};

/// Binds `int`, `string` and the standard library.
void installBase(DualEnv& env);

struct Options {
    /// Accept `nil = nil` / `nil <> nil`. Rejected with NIL_UNCONSTRAINED
    /// by default.
    bool allowNilEquality = false;
};

struct Analysis {
    Diagnostics diagnostics;
    const Type* programType = nullptr;
    std::shared_ptr<types::TypeTable> types;  // owns programType when it is a record/array

    /// Type of every expression and l-value visited, keyed by node address.
    std::unordered_map<const Exp*, const Type*> expTypes;
    std::unordered_map<const LValue*, const Type*> varTypes;
    /// Type of each variable binding: keyed by the VarDecl, the parameter's
    /// Field, or the ForExp that introduces it.
    std::unordered_map<const void*, const Type*> bindingTypes;

    const Type* typeOf(const Exp& e) const;
    const Type* typeOf(const LValue& v) const;

    bool ok() const { return diagnostics.empty(); }
};

Analysis analyze(const Exp& program, const Options& options = {});

// ---- building blocks reused by the code generator --------------------------

/// End (exclusive) of the declaration run starting at `start`: a maximal
/// sequence of type declarations or of function declarations. A variable
/// declaration is a run of its own.
std::size_t runEnd(const std::vector<Decl>& decls, std::size_t start);

/// Looks a type name up, reporting UNDECLARED_TYPE and yielding ERROR when
/// it is absent.
const Type* lookupType(const ScopedTable<const Type*>& tenv, Symbol name, Pos pos, Diagnostics& diags);

/// Enters a run of mutually recursive type declarations into `tenv`:
/// headers first, then definitions, then alias-cycle detection.
void declareTypeRun(std::span<const Decl> run, ScopedTable<const Type*>& tenv, types::TypeTable& table,
                    Diagnostics& diags);

/// Signature of a function declaration. An absent result type means unit.
/// An undeclared result type is reported at `pos`.
FunEntry functionHeader(const FunDecl& fn, Pos pos, const ScopedTable<const Type*>& tenv, Diagnostics& diags);

} // namespace tiger::semant
