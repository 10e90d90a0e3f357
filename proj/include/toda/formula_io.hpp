#pragma once

#include <string>

#include "toda/formula.hpp"

namespace toda {

/// Syntax error with a 1-based source position.
class ParseError : public FormulaError {
public:
    ParseError(ErrorKind kind, int line, int column, const std::string& what);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Reads the s-expression formula syntax:
///
///   sentence  := "(sentence" free? prefix? body ")"
///   free      := "(free" blockdecl+ ")"
///   prefix    := "(prefix" qblock+ ")"
///   blockdecl := "(" NAME INT radius? ")" | "(" NAME radius? "(parts" ("(" NAME INT ")")+ "))"
///   radius    := "(radius2" RATIONAL ")"
///   qblock    := "(" ("exists"|"forall") NAME INT ")" | "(" ("exists"|"forall") blockdecl+ ")"
///   body      := "(body" bool ")"
///   bool      := atom | "(and" bool+ ")" | "(or" bool+ ")" | "(not" bool ")"
///   atom      := "(atom" SIGN poly "0)"
///   poly      := "(poly" mono+ ")"
///   mono      := "(mono" RATIONAL ("(" NAME "." INT INT ")")* ")"
///
/// ';' starts a comment running to the end of the line.
Formula parse_formula(const std::string& text);

/// Canonical text; parse_formula(print_formula(f)) is structurally equal to f.
std::string print_formula(const Formula& f);
std::string print_expr(const Expr& e);
std::string print_polynomial(const Polynomial& p);

}  // namespace toda
