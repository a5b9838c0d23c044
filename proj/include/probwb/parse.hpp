#pragma once

// Concrete grammar for types, terms and formulas.  Application is
// whitespace separated and prefix everywhere; binders carry ascriptions
// x^tau (tau a base type, a numeral, or [type] for arrow types).  Unicode
// spellings are accepted alongside the canonical ASCII names; the printers
// in syntax.hpp emit the ASCII forms, and parse(print(x)) == x.
//
//   type    := base suffix*            base := numeral | "Omega" | "S"
//   suffix  := "(" type ")"
//   term    := atom+                   (application, left associative)
//   atom    := numeral | ident ascription? | "(" term ")" | "\" ident
//              ascription "." term
//   formula := implication with "and" / "or" / "not" / "->" / "<->",
//              binders "forall" / "exists" (ascribed, scope maximal),
//              bounded "exists x^tau <= t", atoms "s REL t" with REL among
//              =0 <=0 =R <=R <R <=T and the sugared In NotIn =S subS =Omega
//
// Sugar (cap, Omega-the-event, =S, subS, In, NotIn, <->, bounded exists) is
// expanded at parse time; nodes born from sugar carry a tag when
// keep_sugar is set.

#include "probwb/syntax.hpp"

#include <map>
#include <string>

namespace probwb {

using VarCtx = std::map<std::string, TypePtr>;

TypePtr parse_type(const std::string& text);
TermPtr parse_term(const std::string& text, const VarCtx& ctx = {});

struct ParseOpts {
  VarCtx ctx;
  bool keep_sugar = false;
};
FormulaPtr parse_formula(const std::string& text, const ParseOpts& opts = {});

}  // namespace probwb
