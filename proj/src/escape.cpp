#include "tiger/escape.hpp"

#include "tiger/diagnostic.hpp"

namespace tiger {

std::string quoteString(std::string_view bytes) {
    std::string out = "\"";
    for (unsigned char c : bytes) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c >= 0x20 && c < 0x7f) {
                out += static_cast<char>(c);
            } else {
                out += '\\';
                out += static_cast<char>('0' + c / 100);
                out += static_cast<char>('0' + c / 10 % 10);
                out += static_cast<char>('0' + c % 10);
            }
        }
    }
    out += '"';
    return out;
}

std::optional<EscapeResult> decodeEscape(std::string_view rest) {
    if (rest.empty()) return std::nullopt;
    switch (rest[0]) {
    case 'n': return EscapeResult{'\n', 1};
    case 't': return EscapeResult{'\t', 1};
    case '"': return EscapeResult{'"', 1};
    case '\\': return EscapeResult{'\\', 1};
    case '^': {
        if (rest.size() < 2) return std::nullopt;
        char c = rest[1];
        if (c == '?') return EscapeResult{'\x7f', 2};
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        if (c >= '@' && c <= '_') return EscapeResult{static_cast<char>(c - '@'), 2};
        return std::nullopt;
    }
    default: break;
    }
    if (rest.size() >= 3) {
        int value = 0;
        for (int i = 0; i < 3; ++i) {
            char d = rest[i];
            if (d < '0' || d > '9') return std::nullopt;
            value = value * 10 + (d - '0');
        }
        if (value > 255) return std::nullopt;
        return EscapeResult{static_cast<char>(value), 3};
    }
    return std::nullopt;
}

std::string formatDiagnostic(std::string_view file, const Diagnostic& d) {
    std::string out(file);
    out += ':' + std::to_string(d.pos.line) + ':' + std::to_string(d.pos.column) + ": error[" + d.code +
           "]: " + d.message;
    return out;
}

} // namespace tiger
