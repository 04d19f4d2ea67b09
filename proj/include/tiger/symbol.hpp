#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string_view>

namespace tiger {

/// Interned identifier. Two symbols compare equal iff they were interned from
/// the same spelling. The intern table is process-wide and guarded by a mutex,
/// so interning is safe from any thread.
class Symbol {
public:
    Symbol() = default;

    static Symbol intern(std::string_view text);

    std::uint32_t id() const { return id_; }
    std::string_view text() const;
    bool valid() const { return id_ != 0; }

    friend bool operator==(Symbol, Symbol) = default;
    friend auto operator<=>(Symbol, Symbol) = default;

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}

    // 0 is reserved for the default-constructed (invalid) symbol.
    std::uint32_t id_ = 0;
};

inline Symbol intern(std::string_view text) { return Symbol::intern(text); }

inline std::ostream& operator<<(std::ostream& os, Symbol s) { return os << s.text(); }

} // namespace tiger

template <>
struct std::hash<tiger::Symbol> {
    std::size_t operator()(tiger::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
