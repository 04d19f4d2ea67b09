#include "tiger/symbol.hpp"

#include <deque>
#include <mutex>
#include <string>
#include <unordered_map>

namespace tiger {
namespace {

struct InternTable {
    std::mutex mutex;
    std::deque<std::string> spellings{std::string{}};  // slot 0: invalid symbol
    std::unordered_map<std::string_view, std::uint32_t> ids;
};

InternTable& table() {
    static InternTable t;
    return t;
}

} // namespace

Symbol Symbol::intern(std::string_view text) {
    auto& t = table();
    std::lock_guard lock(t.mutex);
    if (auto it = t.ids.find(text); it != t.ids.end()) {
        return Symbol(it->second);
    }
    auto id = static_cast<std::uint32_t>(t.spellings.size());
    const std::string& stored = t.spellings.emplace_back(text);
    t.ids.emplace(stored, id);
    return Symbol(id);
}

std::string_view Symbol::text() const {
    auto& t = table();
    std::lock_guard lock(t.mutex);
    // deque never relocates elements, so the view outlives the lock.
    return t.spellings[id_];
}

} // namespace tiger
