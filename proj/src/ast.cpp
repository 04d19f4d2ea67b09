#include "tiger/ast.hpp"

namespace tiger {

const char* operSpelling(Oper op) {
    switch (op) {
    case Oper::Plus: return "+";
    case Oper::Minus: return "-";
    case Oper::Times: return "*";
    case Oper::Divide: return "/";
    case Oper::Eq: return "=";
    case Oper::Ne: return "<>";
    case Oper::Lt: return "<";
    case Oper::Le: return "<=";
    case Oper::Gt: return ">";
    case Oper::Ge: return ">=";
    case Oper::And: return "&";
    case Oper::Or: return "|";
    }
    return "?";
}

bool isComparison(Oper op) {
    switch (op) {
    case Oper::Eq:
    case Oper::Ne:
    case Oper::Lt:
    case Oper::Le:
    case Oper::Gt:
    case Oper::Ge: return true;
    default: return false;
    }
}

bool isArithmetic(Oper op) {
    return op == Oper::Plus || op == Oper::Minus || op == Oper::Times || op == Oper::Divide;
}

} // namespace tiger
