#pragma once

// Abstract syntax for Tiger. Nodes are immutable values: every phase walks
// the same tree with `traverse` and keeps its own state on the side.
//
// Equality on nodes is structural and ignores source positions.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tiger/symbol.hpp"

namespace tiger {

struct Pos {
    int line = 1;
    int column = 1;

    friend bool operator==(Pos, Pos) = default;
};

/// Owning, deep-copying pointer whose equality compares the pointees.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }
    const T& get() const { return *ptr_; }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

enum class Oper { Plus, Minus, Times, Divide, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

const char* operSpelling(Oper op);
bool isComparison(Oper op);
bool isArithmetic(Oper op);

struct Exp;

/// `name : type` in record types and function formals.
struct Field {
    Symbol name;
    Symbol type;
    Pos pos;

    bool operator==(const Field& o) const { return name == o.name && type == o.type; }
};

// ---- type specifications -------------------------------------------------

struct NameTy {
    Symbol name;
    bool operator==(const NameTy&) const = default;
};
struct RecordTy {
    std::vector<Field> fields;
    bool operator==(const RecordTy&) const = default;
};
struct ArrayTy {
    Symbol elem;
    bool operator==(const ArrayTy&) const = default;
};

struct TypeSpec {
    using Node = std::variant<NameTy, RecordTy, ArrayTy>;
    Pos pos;
    Node node;

    bool operator==(const TypeSpec& o) const { return node == o.node; }
};

// ---- l-values ------------------------------------------------------------

struct LValue;

struct SimpleVar {
    Symbol name;
    bool operator==(const SimpleVar&) const = default;
};
struct FieldVar {
    Box<LValue> base;
    Symbol field;
    bool operator==(const FieldVar&) const = default;
};
struct SubscriptVar {
    Box<LValue> base;
    Box<Exp> index;
    bool operator==(const SubscriptVar&) const = default;
};

struct LValue {
    using Node = std::variant<SimpleVar, FieldVar, SubscriptVar>;
    Pos pos;
    Node node;

    bool operator==(const LValue& o) const { return node == o.node; }
};

// ---- declarations --------------------------------------------------------

struct TypeDecl {
    Symbol name;
    TypeSpec type;
    bool operator==(const TypeDecl&) const = default;
};
struct VarDecl {
    Symbol name;
    std::optional<Symbol> type;
    Box<Exp> init;
    bool operator==(const VarDecl&) const = default;
};
struct FunDecl {
    Symbol name;
    std::vector<Field> params;
    std::optional<Symbol> result;
    Box<Exp> body;
    bool operator==(const FunDecl&) const = default;
};

struct Decl {
    using Node = std::variant<TypeDecl, VarDecl, FunDecl>;
    Pos pos;
    Node node;

    bool operator==(const Decl& o) const { return node == o.node; }
};

// ---- expressions ---------------------------------------------------------

struct IntLit {
    std::int64_t value;
    bool operator==(const IntLit&) const = default;
};
struct StrLit {
    std::string value;
    bool operator==(const StrLit&) const = default;
};
struct NilLit {
    bool operator==(const NilLit&) const = default;
};
struct VarExp {
    LValue var;
    bool operator==(const VarExp&) const = default;
};
struct AssignExp {
    LValue target;
    Box<Exp> value;
    bool operator==(const AssignExp&) const = default;
};
struct SeqExp {
    std::vector<Exp> exps;
    bool operator==(const SeqExp&) const = default;
};
struct OpExp {
    Box<Exp> left;
    Oper op;
    Box<Exp> right;
    bool operator==(const OpExp&) const = default;
};
struct NegExp {
    Box<Exp> operand;
    bool operator==(const NegExp&) const = default;
};
struct CallExp {
    Symbol func;
    std::vector<Exp> args;
    bool operator==(const CallExp&) const = default;
};
struct FieldInit {
    Symbol name;
    Box<Exp> value;
    Pos pos;
    bool operator==(const FieldInit& o) const { return name == o.name && value == o.value; }
};
struct RecordExp {
    Symbol type;
    std::vector<FieldInit> fields;
    bool operator==(const RecordExp&) const = default;
};
struct ArrayExp {
    Symbol type;
    Box<Exp> size;
    Box<Exp> init;
    bool operator==(const ArrayExp&) const = default;
};
struct IfExp {
    Box<Exp> test;
    Box<Exp> then;
    bool operator==(const IfExp&) const = default;
};
struct IfElseExp {
    Box<Exp> test;
    Box<Exp> then;
    Box<Exp> otherwise;
    bool operator==(const IfElseExp&) const = default;
};
struct WhileExp {
    Box<Exp> test;
    Box<Exp> body;
    bool operator==(const WhileExp&) const = default;
};
struct ForExp {
    Symbol var;
    Box<Exp> lo;
    Box<Exp> hi;
    Box<Exp> body;
    bool operator==(const ForExp&) const = default;
};
struct BreakExp {
    bool operator==(const BreakExp&) const = default;
};
struct LetExp {
    std::vector<Decl> decls;
    std::vector<Exp> body;
    bool operator==(const LetExp&) const = default;
};

struct Exp {
    using Node = std::variant<IntLit, StrLit, NilLit, VarExp, AssignExp, SeqExp, OpExp, NegExp, CallExp,
                              RecordExp, ArrayExp, IfExp, IfElseExp, WhileExp, ForExp, BreakExp, LetExp>;
    Pos pos;
    Node node;

    bool operator==(const Exp& o) const { return node == o.node; }
};

// ---- traversal -----------------------------------------------------------

/// Handler-table helper: `overloaded{[](const IntLit&, Pos) {...}, ...}`.
template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Invokes the handler for `node`'s variant exactly once, passing the variant
/// payload and the node's position. A handler set that misses a variant does
/// not compile. Recursion into children is up to the handlers.
template <class Node, class Handlers>
decltype(auto) traverse(const Node& node, Handlers&& handlers) {
    return std::visit([&](const auto& payload) -> decltype(auto) { return handlers(payload, node.pos); },
                      node.node);
}

} // namespace tiger
