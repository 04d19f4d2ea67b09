#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tiger/ast.hpp"

namespace tiger {

/// A positioned error. `code` is a short stable identifier drawn from one of
/// the closed sets below; `message` is free text for humans.
///
/// Lexical:  ILLEGAL_CHAR, UNTERMINATED_STRING, UNTERMINATED_COMMENT,
///           BAD_ESCAPE, INT_OVERFLOW
/// Syntax:   UNEXPECTED_TOKEN, NONASSOC_COMPARISON, BAD_DECL
/// Semantic: see semant.hpp
/// Runtime:  DIV_ZERO, NIL_DEREF, INDEX_OOB, BAD_TAG, CALL_DEPTH,
///           HEAP_EXHAUSTED, STEP_BUDGET (see runtime.hpp)
struct Diagnostic {
    Pos pos;
    std::string code;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

/// `<file>:<line>:<col>: error[<CODE>]: <message>`
std::string formatDiagnostic(std::string_view file, const Diagnostic& d);

} // namespace tiger
