#include "probwb/parse.hpp"

#include <cctype>
#include <vector>

namespace probwb {

namespace {

struct Tok {
  std::string s;
  size_t pos;
};

const std::vector<std::pair<std::string, std::string>>& unicode_aliases() {
  static const std::vector<std::pair<std::string, std::string>> tab = {
      {"c_Ω", "comega"}, {"≤₀", "<=0"}, {"=₀", "=0"},  {"≤ℝ", "<=R"},
      {"=ℝ", "=R"},      {"<ℝ", "<R"},  {"Ω", "Omega"}, {"∅", "empty"},
      {"∈", "In"},       {"∉", "NotIn"}, {"∪", "cup"},  {"∩", "cap"},
      {"⋃", "bigU"},     {"ℙ", "P"},    {"∫", "integ"}, {"τ", "tauseq"},
      {"∀", "forall"},   {"∃", "exists"}, {"∧", "and"}, {"∨", "or"},
      {"¬", "not"},      {"→", "->"},   {"↔", "<->"},  {"λ", "\\"},
      {"⊆", "subS"},
  };
  return tab;
}

std::vector<Tok> lex(const std::string& text) {
  std::vector<Tok> out;
  size_t i = 0;
  auto err = [&](const std::string& m) { throw SyntaxError(m, i); };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    bool aliased = false;
    for (const auto& [u, canon] : unicode_aliases()) {
      if (text.compare(i, u.size(), u) == 0) {
        out.push_back({canon, i});
        i += u.size();
        aliased = true;
        break;
      }
    }
    if (aliased) continue;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({text.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({text.substr(i, j - i), i});
      i = j;
      continue;
    }
    switch (c) {
      case '(': case ')': case '[': case ']': case '^': case '\\':
      case '.': case ',':
        out.push_back({std::string(1, c), i});
        ++i;
        continue;
      case '=': {
        size_t j = i + 1, k = j;
        while (k < text.size() &&
               std::isalnum(static_cast<unsigned char>(text[k])))
          ++k;
        std::string word = text.substr(j, k - j);
        if (word == "0" || word.rfind("0", 0) == 0) { out.push_back({"=0", i}); i = j + 1; continue; }
        if (word == "R") { out.push_back({"=R", i}); i = k; continue; }
        if (word == "S") { out.push_back({"=S", i}); i = k; continue; }
        if (word == "Omega" || word == "Om") { out.push_back({"=Omega", i}); i = k; continue; }
        err("bad relation token after '='");
      }
      case '<': {
        if (text.compare(i, 3, "<->") == 0) { out.push_back({"<->", i}); i += 3; continue; }
        if (text.compare(i, 2, "<=") == 0) {
          if (i + 2 < text.size() && text[i + 2] == '0') { out.push_back({"<=0", i}); i += 3; continue; }
          if (i + 2 < text.size() && text[i + 2] == 'R') { out.push_back({"<=R", i}); i += 3; continue; }
          if (i + 2 < text.size() && text[i + 2] == 'T') { out.push_back({"<=T", i}); i += 3; continue; }
          out.push_back({"<=", i});
          i += 2;
          continue;
        }
        if (i + 1 < text.size() && text[i + 1] == 'R') { out.push_back({"<R", i}); i += 2; continue; }
        err("bad relation token after '<'");
      }
      case '-':
        if (text.compare(i, 2, "->") == 0) { out.push_back({"->", i}); i += 2; continue; }
        err("unexpected '-'");
      default:
        err(std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

bool is_rel_tok(const std::string& s) {
  return s == "=0" || s == "<=0" || s == "=R" || s == "<=R" || s == "<R" ||
         s == "<=T" || s == "In" || s == "NotIn" || s == "=S" || s == "subS" ||
         s == "=Omega";
}

bool is_formula_kw(const std::string& s) {
  return s == "and" || s == "or" || s == "not" || s == "->" || s == "<->" ||
         s == "forall" || s == "exists" || s == "<=";
}

class Parser {
 public:
  Parser(std::string text, VarCtx ctx, bool keep_sugar)
      : toks_(lex(text)), ctx_(std::move(ctx)), keep_sugar_(keep_sugar) {}

  TypePtr type_toplevel() {
    TypePtr t = parse_type_expr();
    expect_eof();
    return t;
  }

  TermPtr term_toplevel() {
    TermPtr t = parse_app(false);
    expect_eof();
    return t;
  }

  FormulaPtr formula_toplevel() {
    FormulaPtr f = parse_implication();
    expect_eof();
    return f;
  }

 private:
  std::vector<Tok> toks_;
  size_t i_ = 0;
  VarCtx ctx_;
  bool keep_sugar_;

  [[noreturn]] void err(const std::string& m) {
    throw SyntaxError(m, i_ < toks_.size() ? toks_[i_].pos : ~size_t(0));
  }
  bool done() const { return i_ >= toks_.size(); }
  const std::string& peek(size_t ahead = 0) const {
    static const std::string eof = "<eof>";
    return i_ + ahead < toks_.size() ? toks_[i_ + ahead].s : eof;
  }
  std::string take() {
    if (done()) err("unexpected end of input");
    return toks_[i_++].s;
  }
  void expect(const std::string& s) {
    if (peek() != s) err("expected '" + s + "', got '" + peek() + "'");
    ++i_;
  }
  void expect_eof() {
    if (!done()) err("trailing input from '" + peek() + "'");
  }

  static bool is_numeral(const std::string& s) {
    return !s.empty() && std::isdigit(static_cast<unsigned char>(s[0]));
  }

  // ---- types ----

  TypePtr parse_type_expr() {
    TypePtr t = parse_type_base();
    while (peek() == "(") {
      ++i_;
      TypePtr arg = parse_type_expr();
      expect(")");
      t = ty_arrow(t, arg);
    }
    return t;
  }

  TypePtr parse_type_base() {
    std::string s = take();
    if (is_numeral(s)) return ty_pure(static_cast<unsigned>(std::stoul(s)));
    if (s == "Omega") return ty_omega();
    if (s == "S") return ty_s();
    err("unknown base-type token '" + s + "'");
  }

  TypePtr parse_ascription() {
    expect("^");
    if (peek() == "[") {
      ++i_;
      TypePtr t = parse_type_expr();
      expect("]");
      return t;
    }
    return parse_type_base();
  }

  // ---- terms ----

  bool starts_atom() const {
    const std::string& s = peek();
    if (s == "(" || s == "\\") return true;
    if (s == ")" || s == "]" || s == "." || s == "," || s == "<eof>") return false;
    if (is_rel_tok(s) || is_formula_kw(s)) return false;
    return is_numeral(s) || std::isalpha(static_cast<unsigned char>(s[0])) ||
           s[0] == '_';
  }

  TermPtr parse_app(bool /*in_formula*/) {
    // head position admits the relation-spelled prefix constants (e.g. In)
    TermPtr t = parse_atom_head();
    while (starts_atom()) t = mk_app(t, parse_atom());
    return t;
  }

  TermPtr parse_atom_head() {
    if (peek() == "cap") {
      ++i_;
      TermPtr a = parse_atom(), b = parse_atom();
      return mk_app(mk_const("compl"),
                    mk_app(mk_app(mk_const("cup"), mk_app(mk_const("compl"), a)),
                           mk_app(mk_const("compl"), b)));
    }
    return parse_atom();
  }

  TermPtr parse_atom() {
    if (done()) err("expected a term");
    std::string s = peek();
    if (s == "(") {
      ++i_;
      TermPtr t = parse_app(false);
      expect(")");
      return t;
    }
    if (s == "\\") {
      ++i_;
      std::string name = take();
      TypePtr ty = parse_ascription();
      expect(".");
      auto saved = ctx_.find(name) != ctx_.end()
                       ? std::optional<TypePtr>(ctx_[name])
                       : std::nullopt;
      ctx_[name] = ty;
      TermPtr body = parse_app(false);
      if (saved) ctx_[name] = *saved; else ctx_.erase(name);
      return mk_lam(name, ty, body);
    }
    if (is_numeral(s)) {
      ++i_;
      return mk_num(Nat(s));
    }
    ++i_;
    if (s == "Omega")  // the top event, empty^c
      return mk_app(mk_const("compl"), mk_const("empty"));
    if (is_instance_const(s)) {
      expect("^");
      expect("[");
      std::vector<TypePtr> params;
      params.push_back(parse_type_expr());
      while (peek() == ",") {
        ++i_;
        params.push_back(parse_type_expr());
      }
      expect("]");
      if (s == "Kcomb" && params.size() == 2)
        return mk_kcomb(params[0], params[1]);
      if (s == "Scomb" && params.size() == 3)
        return mk_scomb(params[0], params[1], params[2]);
      if (s == "Id" && params.size() == 1) return mk_id(params[0]);
      if (s == "R" && params.size() == 1) return mk_rec(params[0]);
      err("bad instance parameters for " + s);
    }
    if (signature().count(s)) return mk_const(s);
    // a variable; an ascription introduces it, otherwise the context must
    if (peek() == "^") {
      TypePtr ty = parse_ascription();
      auto it = ctx_.find(s);
      if (it != ctx_.end() && !type_equal(it->second, ty))
        err("conflicting ascription for '" + s + "'");
      ctx_[s] = ty;
      return mk_var(s, ty);
    }
    auto it = ctx_.find(s);
    if (it == ctx_.end()) err("unbound identifier '" + s + "'");
    return mk_var(s, it->second);
  }

  // ---- formulas ----

  void tag(const FormulaPtr& f, const std::string& t) {
    if (keep_sugar_) const_cast<Formula*>(f.get())->sugar = t;
  }

  FormulaPtr parse_implication() {
    FormulaPtr lhs = parse_or();
    if (peek() == "->") {
      ++i_;
      return f_implies(lhs, parse_implication());
    }
    if (peek() == "<->") {
      ++i_;
      FormulaPtr f = f_iff(lhs, parse_or());
      tag(f, "iff");
      return f;
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (peek() == "or") {
      ++i_;
      f = f_or(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (peek() == "and") {
      ++i_;
      f = f_and(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    if (peek() == "not") {
      ++i_;
      return f_not(parse_unary());
    }
    if (peek() == "forall" || peek() == "exists") {
      bool universal = take() == "forall";
      struct Binder {
        std::string name;
        TypePtr type;
        TermPtr bound;  // bounded exists
        std::optional<TypePtr> shadowed;
        bool had_shadow;
      };
      std::vector<Binder> binders;
      do {
        std::string name = take();
        if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
          err("expected a binder name");
        TypePtr ty = parse_ascription();
        TermPtr bound;
        if (!universal && peek() == "<=") {
          ++i_;
          bound = parse_atom();
          if (!type_equal(bound->type, ty))
            err("bound term type mismatch in bounded exists");
        }
        Binder b{name, ty, bound, std::nullopt, false};
        auto it = ctx_.find(name);
        if (it != ctx_.end()) {
          b.shadowed = it->second;
          b.had_shadow = true;
        }
        ctx_[name] = ty;
        binders.push_back(std::move(b));
      } while (peek() != "(" && !done() && peek() != "not" &&
               (std::isalpha(static_cast<unsigned char>(peek()[0])) ||
                peek()[0] == '_') &&
               peek(1) == "^");
      FormulaPtr body = parse_unary();
      for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
        if (it->bound) {
          FormulaPtr guard = f_prime(PrimeOp::LeTy, mk_var(it->name, it->type),
                                     it->bound, it->type);
          body = f_exists(it->name, it->type, f_and(guard, body));
          tag(body, "bounded-exists");
        } else {
          body = universal ? f_forall(it->name, it->type, body)
                           : f_exists(it->name, it->type, body);
        }
        if (it->had_shadow)
          ctx_[it->name] = *it->shadowed;
        else
          ctx_.erase(it->name);
      }
      return body;
    }
    return parse_atom_or_paren();
  }

  // decide whether a leading "(" opens a formula or a term
  bool paren_is_term() const {
    size_t depth = 0, j = i_;
    for (; j < toks_.size(); ++j) {
      if (toks_[j].s == "(") ++depth;
      if (toks_[j].s == ")" && --depth == 0) break;
    }
    if (j >= toks_.size()) return false;
    ++j;
    if (j >= toks_.size()) return false;
    const std::string& after = toks_[j].s;
    if (is_rel_tok(after)) return true;
    if (after == "(" || after == "\\") return true;
    if (after == ")" || after == "and" || after == "or" || after == "->" ||
        after == "<->")
      return false;
    return is_numeral(after) ||
           (std::isalpha(static_cast<unsigned char>(after[0])) &&
            !is_formula_kw(after));
  }

  FormulaPtr parse_atom_or_paren() {
    if (peek() == "(" && !paren_is_term()) {
      ++i_;
      FormulaPtr f = parse_implication();
      expect(")");
      return f;
    }
    TermPtr lhs = parse_app(true);
    std::string rel = take();
    if (rel == "=0" || rel == "<=0" || rel == "=R" || rel == "<=R" ||
        rel == "<R") {
      PrimeOp op = rel == "=0"    ? PrimeOp::Eq0
                   : rel == "<=0" ? PrimeOp::Le0
                   : rel == "=R"  ? PrimeOp::EqR
                   : rel == "<=R" ? PrimeOp::LeR
                                  : PrimeOp::LtR;
      return f_prime(op, lhs, parse_app(true));
    }
    if (rel == "<=T") {
      TypePtr ty;
      if (peek() == "[") {
        ++i_;
        ty = parse_type_expr();
        expect("]");
      }
      TermPtr rhs = parse_app(true);
      return f_prime(PrimeOp::LeTy, lhs, rhs, ty ? ty : lhs->type);
    }
    if (rel == "In" || rel == "NotIn") {
      TermPtr rhs = parse_app(true);
      FormulaPtr in = f_prime(
          PrimeOp::Eq0, mk_app(mk_app(mk_const("In"), lhs), rhs), mk_num(0));
      tag(in, "In");
      if (rel == "In") return in;
      FormulaPtr f = f_not(in);
      tag(f, "NotIn");
      return f;
    }
    if (rel == "=Omega") {
      FormulaPtr f = f_prime(
          PrimeOp::Eq0, mk_app(mk_app(mk_const("eq"), lhs), parse_app(true)),
          mk_num(0));
      tag(f, "=Omega");
      return f;
    }
    if (rel == "=S" || rel == "subS") {
      TermPtr rhs = parse_app(true);
      std::string u = "u";
      int salt = 0;
      auto used = [&](const std::string& cand) {
        for (const auto& [n, _] : free_vars(lhs))
          if (n == cand) return true;
        for (const auto& [n, _] : free_vars(rhs))
          if (n == cand) return true;
        return false;
      };
      while (used(u)) u = "u_" + std::to_string(salt++);
      TermPtr uv = mk_var(u, ty_omega());
      auto member = [&](const TermPtr& set) {
        return f_prime(PrimeOp::Eq0, mk_app(mk_app(mk_const("In"), uv), set),
                       mk_num(0));
      };
      FormulaPtr body = rel == "=S" ? f_iff(member(lhs), member(rhs))
                                    : f_implies(member(lhs), member(rhs));
      FormulaPtr f = f_forall(u, ty_omega(), body);
      tag(f, rel);
      return f;
    }
    err("expected a relation, got '" + rel + "'");
  }
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  return Parser(text, {}, false).type_toplevel();
}

TermPtr parse_term(const std::string& text, const VarCtx& ctx) {
  return Parser(text, ctx, false).term_toplevel();
}

FormulaPtr parse_formula(const std::string& text, const ParseOpts& opts) {
  return Parser(text, opts.ctx, opts.keep_sugar).formula_toplevel();
}

}  // namespace probwb
