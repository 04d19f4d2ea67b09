#include <string>

#include "tiger/escape.hpp"
#include "tiger/frontend.hpp"

namespace tiger {
namespace {

// True when the printed form of `e` ends in a trailing expression that would
// swallow a following binary operator (`if a then b + 1`).
bool rightOpen(const Exp& e) {
    return traverse(e, overloaded{
                           [](const IfExp&, Pos) { return true; },
                           [](const IfElseExp&, Pos) { return true; },
                           [](const WhileExp&, Pos) { return true; },
                           [](const ForExp&, Pos) { return true; },
                           [](const AssignExp&, Pos) { return true; },
                           [](const NegExp& n, Pos) { return rightOpen(*n.operand); },
                           [](const ArrayExp& a, Pos) { return rightOpen(*a.init); },
                           [](const auto&, Pos) { return false; },
                       });
}

// True when the printed form of `e` ends in an else-less `if` that would
// capture a following `else`.
bool danglingIf(const Exp& e) {
    return traverse(e, overloaded{
                           [](const IfExp&, Pos) { return true; },
                           [](const IfElseExp& n, Pos) { return danglingIf(*n.otherwise); },
                           [](const WhileExp& n, Pos) { return danglingIf(*n.body); },
                           [](const ForExp& n, Pos) { return danglingIf(*n.body); },
                           [](const AssignExp& n, Pos) { return danglingIf(*n.value); },
                           [](const NegExp& n, Pos) { return danglingIf(*n.operand); },
                           [](const ArrayExp& a, Pos) { return danglingIf(*a.init); },
                           [](const auto&, Pos) { return false; },
                       });
}

class Printer {
public:
    std::string out;

    void exp(const Exp& e, int indent) { traverse(e, Visit{*this, indent}); }

    void wrapped(const Exp& e, int indent, bool wrap) {
        if (wrap) out += '(';
        exp(e, indent);
        if (wrap) out += ')';
    }

    void lvalue(const LValue& v, int indent) {
        traverse(v, overloaded{
                        [&](const SimpleVar& s, Pos) { out += s.name.text(); },
                        [&](const FieldVar& f, Pos) {
                            lvalue(*f.base, indent);
                            out += '.';
                            out += f.field.text();
                        },
                        [&](const SubscriptVar& s, Pos) {
                            lvalue(*s.base, indent);
                            out += '[';
                            exp(*s.index, indent);
                            out += ']';
                        },
                    });
    }

    void fields(const std::vector<Field>& fs) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            if (i) out += ", ";
            out += fs[i].name.text();
            out += ": ";
            out += fs[i].type.text();
        }
    }

    void newline(int indent) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent) * 2, ' ');
    }

    void decl(const Decl& d, int indent) {
        traverse(d, overloaded{
                        [&](const TypeDecl& t, Pos) {
                            out += "type ";
                            out += t.name.text();
                            out += " = ";
                            traverse(t.type, overloaded{
                                                 [&](const NameTy& n, Pos) { out += n.name.text(); },
                                                 [&](const RecordTy& r, Pos) {
                                                     out += '{';
                                                     fields(r.fields);
                                                     out += '}';
                                                 },
                                                 [&](const ArrayTy& a, Pos) {
                                                     out += "array of ";
                                                     out += a.elem.text();
                                                 },
                                             });
                        },
                        [&](const VarDecl& v, Pos) {
                            out += "var ";
                            out += v.name.text();
                            if (v.type) {
                                out += ": ";
                                out += v.type->text();
                            }
                            out += " := ";
                            exp(*v.init, indent);
                        },
                        [&](const FunDecl& f, Pos) {
                            out += "function ";
                            out += f.name.text();
                            out += '(';
                            fields(f.params);
                            out += ')';
                            if (f.result) {
                                out += ": ";
                                out += f.result->text();
                            }
                            out += " =";
                            newline(indent + 1);
                            exp(*f.body, indent + 1);
                        },
                    });
    }

    struct Visit {
        Printer& p;
        int indent;

        void operator()(const IntLit& n, Pos) { p.out += std::to_string(n.value); }
        void operator()(const StrLit& n, Pos) { p.out += quoteString(n.value); }
        void operator()(const NilLit&, Pos) { p.out += "nil"; }
        void operator()(const VarExp& n, Pos) { p.lvalue(n.var, indent); }
        void operator()(const AssignExp& n, Pos) {
            p.lvalue(n.target, indent);
            p.out += " := ";
            p.exp(*n.value, indent);
        }
        void operator()(const SeqExp& n, Pos) {
            p.out += '(';
            for (std::size_t i = 0; i < n.exps.size(); ++i) {
                if (i) p.out += "; ";
                p.exp(n.exps[i], indent);
            }
            p.out += ')';
        }
        void operator()(const OpExp& n, Pos) {
            p.out += '(';
            p.wrapped(*n.left, indent, rightOpen(*n.left));
            p.out += ' ';
            p.out += operSpelling(n.op);
            p.out += ' ';
            p.exp(*n.right, indent);
            p.out += ')';
        }
        void operator()(const NegExp& n, Pos) {
            p.out += '-';
            p.exp(*n.operand, indent);
        }
        void operator()(const CallExp& n, Pos) {
            p.out += n.func.text();
            p.out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) p.out += ", ";
                p.exp(n.args[i], indent);
            }
            p.out += ')';
        }
        void operator()(const RecordExp& n, Pos) {
            p.out += n.type.text();
            p.out += " {";
            for (std::size_t i = 0; i < n.fields.size(); ++i) {
                if (i) p.out += ", ";
                p.out += n.fields[i].name.text();
                p.out += " = ";
                p.exp(*n.fields[i].value, indent);
            }
            p.out += '}';
        }
        void operator()(const ArrayExp& n, Pos) {
            p.out += n.type.text();
            p.out += " [";
            p.exp(*n.size, indent);
            p.out += "] of ";
            p.exp(*n.init, indent);
        }
        void operator()(const IfExp& n, Pos) {
            p.out += "if ";
            p.exp(*n.test, indent);
            p.out += " then ";
            p.exp(*n.then, indent);
        }
        void operator()(const IfElseExp& n, Pos) {
            p.out += "if ";
            p.exp(*n.test, indent);
            p.out += " then ";
            p.wrapped(*n.then, indent, danglingIf(*n.then));
            p.out += " else ";
            p.exp(*n.otherwise, indent);
        }
        void operator()(const WhileExp& n, Pos) {
            p.out += "while ";
            p.exp(*n.test, indent);
            p.out += " do ";
            p.exp(*n.body, indent);
        }
        void operator()(const ForExp& n, Pos) {
            p.out += "for ";
            p.out += n.var.text();
            p.out += " := ";
            p.exp(*n.lo, indent);
            p.out += " to ";
            p.exp(*n.hi, indent);
            p.out += " do ";
            p.exp(*n.body, indent);
        }
        void operator()(const BreakExp&, Pos) { p.out += "break"; }
        void operator()(const LetExp& n, Pos) {
            p.out += "let";
            for (const Decl& d : n.decls) {
                p.newline(indent + 1);
                p.decl(d, indent + 1);
            }
            p.newline(indent);
            p.out += "in";
            for (std::size_t i = 0; i < n.body.size(); ++i) {
                if (i) p.out += ';';
                p.newline(indent + 1);
                p.exp(n.body[i], indent + 1);
            }
            p.newline(indent);
            p.out += "end";
        }
    };
};

} // namespace

std::string pretty(const Exp& program) {
    Printer p;
    p.exp(program, 0);
    return p.out;
}

} // namespace tiger
