#include "tiger/types.hpp"

#include <stdexcept>

namespace tiger::types {

void Type::bind(const Type* target) const {
    if (kind_ != Kind::Name) throw std::logic_error("bind on a non-alias type");
    if (target_) throw std::logic_error("alias bound twice");
    target_ = target;
}

int Type::fieldIndex(Symbol field) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].first == field) return static_cast<int>(i);
    }
    return -1;
}

const Type* intType() {
    static const Type t(Kind::Int, 1);
    return &t;
}
const Type* stringType() {
    static const Type t(Kind::String, 2);
    return &t;
}
const Type* nilType() {
    static const Type t(Kind::Nil, 3);
    return &t;
}
const Type* unitType() {
    static const Type t(Kind::Unit, 4);
    return &t;
}
const Type* errorType() {
    static const Type t(Kind::Error, 5);
    return &t;
}

Type* TypeTable::newRecord(Symbol name) {
    Type& t = types_.emplace_back(Type(Kind::Record, nextUid_++));
    t.name_ = name;
    return &t;
}

void TypeTable::addField(Type* record, Symbol field, const Type* type) { record->fields_.emplace_back(field, type); }

const Type* TypeTable::newArray(Symbol name, const Type* elem) {
    Type& t = types_.emplace_back(Type(Kind::Array, nextUid_++));
    t.name_ = name;
    t.elem_ = elem;
    return &t;
}

const Type* TypeTable::newName(Symbol name) {
    Type& t = types_.emplace_back(Type(Kind::Name, nextUid_++));
    t.name_ = name;
    return &t;
}

const Type* actual(const Type* t) {
    // Bounded walk: a cycle that escaped detection degrades to ERROR.
    for (int hops = 0; t && t->kind() == Kind::Name; ++hops) {
        if (hops > 10000) return errorType();
        t = t->target();
    }
    return t ? t : errorType();
}

bool isError(const Type* t) { return actual(t)->kind() == Kind::Error; }
bool isUnit(const Type* t) { return actual(t)->kind() == Kind::Unit; }

bool assignable(const Type* slot, const Type* value) {
    const Type* a = actual(slot);
    const Type* b = actual(value);
    if (a->kind() == Kind::Error || b->kind() == Kind::Error) return true;
    if (a == b) return true;
    return b->kind() == Kind::Nil && a->kind() == Kind::Record;
}

std::string describe(const Type* t) {
    const Type* a = actual(t);
    switch (a->kind()) {
    case Kind::Int: return "int";
    case Kind::String: return "string";
    case Kind::Nil: return "nil";
    case Kind::Unit: return "unit";
    case Kind::Error: return "<error>";
    case Kind::Record: return "record " + std::string(a->name().text());
    case Kind::Array: return "array " + std::string(a->name().text());
    case Kind::Name: break;
    }
    return "?";
}

} // namespace tiger::types
