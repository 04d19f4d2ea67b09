#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tiger/symbol.hpp"

namespace tiger {

/// Symbol -> entry map with nested scopes.
///
/// Bindings live in a single hash map holding the innermost binding of each
/// symbol. Every put records the binding it displaced in an undo journal, so
/// endScope costs time proportional to the puts made in the closing scope.
/// Re-binding a symbol within one scope replaces the earlier binding.
template <class Entry>
class ScopedTable {
public:
    /// Innermost binding of `key`, or nullptr.
    const Entry* get(Symbol key) const {
        auto it = bindings_.find(key);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    void put(Symbol key, Entry value) {
        auto it = bindings_.find(key);
        if (it == bindings_.end()) {
            journal_.push_back({key, std::nullopt});
            bindings_.emplace(key, std::move(value));
        } else {
            journal_.push_back({key, std::move(it->second)});
            it->second = std::move(value);
        }
    }

    void beginScope() { marks_.push_back(journal_.size()); }

    void endScope() {
        if (marks_.empty()) throw std::logic_error("ScopedTable::endScope without matching beginScope");
        std::size_t mark = marks_.back();
        marks_.pop_back();
        while (journal_.size() > mark) {
            Undo& u = journal_.back();
            if (u.previous) {
                bindings_.find(u.key)->second = std::move(*u.previous);
            } else {
                bindings_.erase(u.key);
            }
            journal_.pop_back();
        }
    }

    std::size_t depth() const { return marks_.size(); }

private:
    struct Undo {
        Symbol key;
        std::optional<Entry> previous;
    };

    std::unordered_map<Symbol, Entry> bindings_;
    std::vector<Undo> journal_;
    std::vector<std::size_t> marks_;
};

/// Opens a scope on construction and closes it on destruction.
template <class... Tables>
class ScopeGuard {
public:
    explicit ScopeGuard(Tables&... tables) : tables_(tables...) {
        std::apply([](auto&... t) { (t.beginScope(), ...); }, tables_);
    }
    ~ScopeGuard() {
        std::apply([](auto&... t) { (t.endScope(), ...); }, tables_);
    }
    ScopeGuard(const ScopeGuard&) = delete;
    ScopeGuard& operator=(const ScopeGuard&) = delete;

private:
    std::tuple<Tables&...> tables_;
};

} // namespace tiger
