#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tiger {

/// Quotes `bytes` as a Tiger string literal, including the surrounding double
/// quotes. Printable ASCII is emitted as-is except `"` and `\`; newline and
/// tab use `\n` / `\t`; every other byte uses the three-digit `\ddd` form.
std::string quoteString(std::string_view bytes);

struct EscapeResult {
    char byte;
    std::size_t length;  // characters consumed after the backslash
};

/// Decodes one escape sequence. `rest` starts just after the backslash.
/// Accepts \n \t \" \\ \^c and \ddd (000-255). Returns nullopt if malformed.
std::optional<EscapeResult> decodeEscape(std::string_view rest);

} // namespace tiger
