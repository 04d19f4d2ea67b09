#pragma once

#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "tiger/symbol.hpp"

namespace tiger::types {

enum class Kind { Int, String, Nil, Unit, Error, Record, Array, Name };

/// A static type. Records and arrays are compared by identity (uid); NAME is
/// an alias whose target is filled in once the declaring type run has been
/// processed.
class Type {
public:
    Kind kind() const { return kind_; }
    int uid() const { return uid_; }
    Symbol name() const { return name_; }

    const std::vector<std::pair<Symbol, const Type*>>& fields() const { return fields_; }
    const Type* elem() const { return elem_; }

    const Type* target() const { return target_; }
    /// Sets a NAME type's target. Each NAME is bound exactly once.
    void bind(const Type* target) const;

    /// Declaration-order index of `field`, or -1.
    int fieldIndex(Symbol field) const;

private:
    friend class TypeTable;
    friend const Type* intType();
    friend const Type* stringType();
    friend const Type* nilType();
    friend const Type* unitType();
    friend const Type* errorType();

    Type(Kind kind, int uid) : kind_(kind), uid_(uid) {}

    Kind kind_;
    int uid_;
    Symbol name_;
    std::vector<std::pair<Symbol, const Type*>> fields_;
    const Type* elem_ = nullptr;
    mutable const Type* target_ = nullptr;
};

const Type* intType();
const Type* stringType();
const Type* nilType();
const Type* unitType();
const Type* errorType();

/// Owns the record, array and alias types created while analyzing one
/// program. Pointers stay valid for the table's lifetime.
class TypeTable {
public:
    Type* newRecord(Symbol name);
    void addField(Type* record, Symbol field, const Type* type);
    const Type* newArray(Symbol name, const Type* elem);
    const Type* newName(Symbol name);

private:
    std::deque<Type> types_;
    int nextUid_ = 100;
};

/// Follows NAME links to the underlying type. An unbound or cyclic alias
/// yields ERROR.
const Type* actual(const Type* t);

bool isError(const Type* t);
bool isUnit(const Type* t);

/// Can a value of type `value` be stored where `slot` is expected?
/// ERROR is compatible with everything; NIL fits any record.
bool assignable(const Type* slot, const Type* value);

/// Printable name: `int`, `string`, `nil`, `unit`, `<error>`, or the declared
/// name of a record/array.
std::string describe(const Type* t);

} // namespace tiger::types
