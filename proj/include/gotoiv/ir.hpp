#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gotoiv/machine.hpp"

namespace gotoiv {

// ---------------------------------------------------------------------------
// Syntax trees
// ---------------------------------------------------------------------------

struct Term {
  enum Kind { Var, Const } kind = Const;
  std::string var;
  int128 num = 0;  // literal value; typed during validation

  static Term make_var(std::string name) {
    Term t;
    t.kind = Var;
    t.var = std::move(name);
    return t;
  }
  static Term make_const(int128 v) {
    Term t;
    t.kind = Const;
    t.num = v;
    return t;
  }
  bool is_var() const { return kind == Var; }
  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.var == b.var && a.num == b.num;
  }
};

enum class BinOp { Add, Sub, Mul, Div, LAnd, Le, Shl, Shr, And, Or, Xor };

enum class ExprKind { Binary, Not, BitNot, Cast, TermE };

// Three-address expressions: operands are terms only.
struct Expr {
  ExprKind kind = ExprKind::TermE;
  BinOp op = BinOp::Add;
  Term a, b;
  MachType cast_to;
  MachType op_type;  // operand type, resolved by validation

  static Expr term(Term t) {
    Expr e;
    e.kind = ExprKind::TermE;
    e.a = std::move(t);
    return e;
  }
  static Expr binary(BinOp op, Term a, Term b) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = op;
    e.a = std::move(a);
    e.b = std::move(b);
    return e;
  }
  static Expr lnot(Term t) {
    Expr e;
    e.kind = ExprKind::Not;
    e.a = std::move(t);
    return e;
  }
  static Expr bnot(Term t) {
    Expr e;
    e.kind = ExprKind::BitNot;
    e.a = std::move(t);
    return e;
  }
  static Expr cast(MachType to, Term t) {
    Expr e;
    e.kind = ExprKind::Cast;
    e.cast_to = to;
    e.a = std::move(t);
    return e;
  }

  // Boolean-valued expressions yield 0/1 and may be stored into any type.
  bool boolean_valued() const {
    return kind == ExprKind::Not ||
           (kind == ExprKind::Binary && (op == BinOp::LAnd || op == BinOp::Le));
  }
  // Legal guard forms per the grammar: t&&t, !t, t<=t, plain term.
  bool condition_form() const {
    return kind == ExprKind::Not || kind == ExprKind::TermE ||
           (kind == ExprKind::Binary && (op == BinOp::LAnd || op == BinOp::Le));
  }

  friend bool operator==(const Expr& x, const Expr& y) {
    return x.kind == y.kind && x.op == y.op && x.a == y.a && x.b == y.b &&
           (x.kind != ExprKind::Cast || x.cast_to == y.cast_to);
  }
};

struct Stmt {
  enum Kind { Assign, Assume, Assert, IfGoto, Label, Skip } kind = Skip;
  std::string target;  // Assign: variable; IfGoto/Label: label
  Expr expr;
  bool goto_sugar = false;  // IfGoto written as plain `goto L`

  bool has_expr() const {
    return kind == Assign || kind == Assume || kind == Assert || kind == IfGoto;
  }
  friend bool operator==(const Stmt& a, const Stmt& b) {
    return a.kind == b.kind && a.target == b.target &&
           (!a.has_expr() || a.expr == b.expr);
  }
};

// Symbol table, flat statement list (1-based indices), label index map.
struct Program {
  std::map<std::string, MachType> symbols;
  std::vector<Stmt> stmts;
  std::map<std::string, size_t> label_index;

  size_t size() const { return stmts.size(); }
  const Stmt& at(size_t idx) const { return stmts.at(idx - 1); }
  Stmt& at(size_t idx) { return stmts.at(idx - 1); }

  friend bool operator==(const Program& a, const Program& b) {
    return a.symbols == b.symbols && a.stmts == b.stmts &&
           a.label_index == b.label_index;
  }
};

struct ParseError : std::runtime_error {
  size_t line;
  size_t column;
  ParseError(size_t ln, size_t col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ":" +
                           std::to_string(col) + ": " + msg),
        line(ln),
        column(col) {}
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct LineLexer {
  std::string_view s;
  size_t line;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size() || s[pos] == '#';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line, pos + 1, msg);
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s.substr(pos, tok.size()) == tok) {
      // identifiers must not run into each other
      if (std::isalpha((unsigned char)tok[0]) || tok[0] == '_') {
        size_t end = pos + tok.size();
        if (end < s.size() &&
            (std::isalnum((unsigned char)s[end]) || s[end] == '_'))
          return false;
      }
      pos += tok.size();
      return true;
    }
    return false;
  }

  std::optional<std::string> ident() {
    skip_ws();
    if (pos >= s.size()) return std::nullopt;
    if (!std::isalpha((unsigned char)s[pos]) && s[pos] != '_')
      return std::nullopt;
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
      ++pos;
    return std::string(s.substr(start, pos - start));
  }

  std::optional<int128> number() {
    skip_ws();
    size_t save = pos;
    bool neg = false;
    if (pos < s.size() && s[pos] == '-') {
      neg = true;
      ++pos;
    }
    if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) {
      pos = save;
      return std::nullopt;
    }
    int128 v = 0;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
      v = v * 10 + (s[pos] - '0');
      if (v > (int128{1} << 70)) fail("constant literal too large");
      ++pos;
    }
    return neg ? -v : v;
  }

  std::optional<MachType> type_name() {
    skip_ws();
    size_t save = pos;
    if (pos >= s.size() || (s[pos] != 's' && s[pos] != 'u'))
      return std::nullopt;
    bool sgn = s[pos] == 's';
    ++pos;
    auto w = number();
    if (!w || *w < 1 || *w > 64) {
      pos = save;
      return std::nullopt;
    }
    return MachType{sgn, unsigned(int64_t(*w))};
  }

  Term term() {
    if (auto n = number()) return Term::make_const(*n);
    if (auto id = ident()) return Term::make_var(*id);
    fail("expected a variable or constant");
  }

  std::optional<BinOp> binop() {
    skip_ws();
    struct Entry {
      std::string_view tok;
      BinOp op;
    };
    // longest-match order
    static constexpr Entry table[] = {
        {"&&", BinOp::LAnd}, {"<=", BinOp::Le},  {"<<", BinOp::Shl},
        {">>", BinOp::Shr},  {"+", BinOp::Add},  {"-", BinOp::Sub},
        {"*", BinOp::Mul},   {"/", BinOp::Div},  {"&", BinOp::And},
        {"|", BinOp::Or},    {"^", BinOp::Xor},
    };
    for (const auto& e : table)
      if (s.substr(pos, e.tok.size()) == e.tok) {
        pos += e.tok.size();
        return e.op;
      }
    return std::nullopt;
  }

  Expr expr() {
    skip_ws();
    if (eat("!")) return Expr::lnot(term());
    if (eat("~")) return Expr::bnot(term());
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      auto ty = type_name();
      if (!ty) fail("expected a type inside the cast");
      skip_ws();
      if (!eat(")")) fail("expected ')' after cast type");
      return Expr::cast(*ty, term());
    }
    Term lhs = term();
    skip_ws();
    if (done()) return Expr::term(std::move(lhs));
    auto op = binop();
    if (!op) fail("expected an operator or end of line");
    Term rhs = term();
    if (!done()) {
      if (binop())
        fail("nested expression; the language is three-address form");
      fail("trailing tokens after expression");
    }
    return Expr::binary(*op, std::move(lhs), std::move(rhs));
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline std::string int128_to_string(int128 v) {
  bool neg = v < 0;
  uint128 u = neg ? uint128(-v) : uint128(v);
  std::string s;
  do {
    s.insert(s.begin(), char('0' + int(u % 10)));
    u /= 10;
  } while (u != 0);
  return neg ? "-" + s : s;
}

// Resolves constant types, checks ranges, declarations and label targets.
// `lines` maps statement index -> source line for diagnostics (may be empty).
inline void validate_program(Program& p, const std::vector<size_t>& lines = {}) {
  auto line_of = [&](size_t idx) {
    return idx - 1 < lines.size() ? lines[idx - 1] : idx;
  };
  auto err = [&](size_t idx, const std::string& msg) {
    throw ParseError(line_of(idx), 1, msg);
  };

  static const MachType kDefaultConstType{true, 32};

  for (size_t idx = 1; idx <= p.size(); ++idx) {
    Stmt& s = p.at(idx);
    if (s.kind == Stmt::Label || s.kind == Stmt::IfGoto) {
      if (s.kind == Stmt::IfGoto && !p.label_index.count(s.target))
        err(idx, "unresolved goto target '" + s.target + "'");
    }
    if (s.kind == Stmt::Assign && !p.symbols.count(s.target))
      err(idx, "undeclared variable '" + s.target + "'");
    if (!s.has_expr()) continue;

    Expr& e = s.expr;
    auto type_of_var = [&](const Term& t) -> MachType {
      auto it = p.symbols.find(t.var);
      if (it == p.symbols.end())
        err(idx, "undeclared variable '" + t.var + "'");
      return it->second;
    };

    // Resolve the operand type: variable types win, then assignment
    // context, then the 32-bit signed default.
    std::optional<MachType> ty;
    for (const Term* t : {&e.a, &e.b}) {
      if (t == &e.b && e.kind != ExprKind::Binary) break;
      if (t->is_var()) {
        MachType vt = type_of_var(*t);
        if (ty && *ty != vt)
          err(idx, "operand types differ: " + ty->to_string() + " vs " +
                       vt.to_string());
        ty = vt;
      }
    }
    if (!ty) {
      if (s.kind == Stmt::Assign && e.kind != ExprKind::Cast)
        ty = p.symbols.at(s.target);
      else
        ty = kDefaultConstType;
    }
    e.op_type = *ty;

    auto check_term = [&](const Term& t) {
      if (!t.is_var() && !e.op_type.in_range(t.num))
        err(idx, "constant " + int128_to_string(t.num) +
                     " out of range for type " + e.op_type.to_string());
    };
    check_term(e.a);
    if (e.kind == ExprKind::Binary) check_term(e.b);

    if ((s.kind == Stmt::Assume || s.kind == Stmt::Assert ||
         s.kind == Stmt::IfGoto) &&
        !e.condition_form())
      err(idx, "guard must be a boolean expression");

    if (s.kind == Stmt::Assign) {
      MachType vt = p.symbols.at(s.target);
      MachType rt = e.kind == ExprKind::Cast ? e.cast_to : e.op_type;
      if (!e.boolean_valued() && e.kind != ExprKind::TermE && rt != vt)
        err(idx, "expression type " + rt.to_string() +
                     " does not match variable type " + vt.to_string());
      if (e.kind == ExprKind::TermE) {
        if (e.a.is_var() && rt != vt)
          err(idx, "expression type " + rt.to_string() +
                       " does not match variable type " + vt.to_string());
        e.op_type = e.a.is_var() ? rt : vt;
        if (!e.a.is_var() && !vt.in_range(e.a.num))
          err(idx, "constant " + int128_to_string(e.a.num) +
                       " out of range for type " + vt.to_string());
      }
    }
  }
}

inline Program parse_program(std::string_view text) {
  Program p;
  std::vector<size_t> stmt_lines;
  size_t lineno = 0;
  size_t start = 0;

  auto add_stmt = [&](Stmt s) {
    p.stmts.push_back(std::move(s));
    stmt_lines.push_back(lineno);
  };

  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    start = end + 1;

    detail::LineLexer lx{line, lineno};
    if (lx.done()) {
      if (end == text.size()) break;
      continue;
    }

    if (lx.eat("decl")) {
      auto name = lx.ident();
      if (!name) lx.fail("expected a variable name after 'decl'");
      if (!lx.eat(":")) lx.fail("expected ':' in declaration");
      auto ty = lx.type_name();
      if (!ty) lx.fail("expected a type such as s32 or u8");
      if (!lx.done()) lx.fail("trailing tokens after declaration");
      if (p.symbols.count(*name))
        lx.fail("variable '" + *name + "' declared twice");
      p.symbols.emplace(*name, *ty);
    } else if (lx.eat("skip")) {
      if (!lx.done()) lx.fail("trailing tokens after 'skip'");
      add_stmt(Stmt{Stmt::Skip});
    } else if (lx.eat("assume")) {
      Stmt s;
      s.kind = Stmt::Assume;
      s.expr = lx.expr();
      add_stmt(std::move(s));
    } else if (lx.eat("assert")) {
      Stmt s;
      s.kind = Stmt::Assert;
      s.expr = lx.expr();
      add_stmt(std::move(s));
    } else if (lx.eat("if")) {
      Stmt s;
      s.kind = Stmt::IfGoto;
      // condition runs up to the 'goto' keyword
      size_t gpos = line.find(" goto ");
      if (gpos == std::string_view::npos)
        lx.fail("expected 'goto <label>' in if statement");
      detail::LineLexer cond{line.substr(0, gpos), lineno};
      cond.pos = lx.pos;
      s.expr = cond.expr();
      lx.pos = gpos + 1;
      if (!lx.eat("goto")) lx.fail("expected 'goto'");
      auto lbl = lx.ident();
      if (!lbl) lx.fail("expected a label after 'goto'");
      if (!lx.done()) lx.fail("trailing tokens after goto target");
      s.target = *lbl;
      add_stmt(std::move(s));
    } else if (lx.eat("goto")) {
      auto lbl = lx.ident();
      if (!lbl) lx.fail("expected a label after 'goto'");
      if (!lx.done()) lx.fail("trailing tokens after goto target");
      Stmt s;
      s.kind = Stmt::IfGoto;
      s.target = *lbl;
      s.expr = Expr::term(Term::make_const(1));
      s.goto_sugar = true;
      add_stmt(std::move(s));
    } else {
      auto id = lx.ident();
      if (!id) lx.fail("expected a statement");
      if (lx.eat(":=")) {
        Stmt s;
        s.kind = Stmt::Assign;
        s.target = *id;
        s.expr = lx.expr();
        add_stmt(std::move(s));
      } else if (lx.eat(":")) {
        if (p.label_index.count(*id))
          lx.fail("label '" + *id + "' defined twice");
        Stmt s;
        s.kind = Stmt::Label;
        s.target = *id;
        add_stmt(std::move(s));
        p.label_index.emplace(*id, p.stmts.size());
        if (!lx.done()) lx.fail("a label must stand on its own line");
      } else {
        lx.fail("expected ':' or ':=' after identifier");
      }
    }
    if (end == text.size()) break;
  }

  validate_program(p, stmt_lines);
  return p;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::string emit_term(const Term& t) {
  return t.is_var() ? t.var : int128_to_string(t.num);
}

inline std::string emit_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::TermE:
      return emit_term(e.a);
    case ExprKind::Not:
      return "!" + emit_term(e.a);
    case ExprKind::BitNot:
      return "~" + emit_term(e.a);
    case ExprKind::Cast:
      return "(" + e.cast_to.to_string() + ") " + emit_term(e.a);
    case ExprKind::Binary: {
      static const std::map<BinOp, std::string> names = {
          {BinOp::Add, "+"},  {BinOp::Sub, "-"},   {BinOp::Mul, "*"},
          {BinOp::Div, "/"},  {BinOp::LAnd, "&&"}, {BinOp::Le, "<="},
          {BinOp::Shl, "<<"}, {BinOp::Shr, ">>"},  {BinOp::And, "&"},
          {BinOp::Or, "|"},   {BinOp::Xor, "^"},
      };
      return emit_term(e.a) + " " + names.at(e.op) + " " + emit_term(e.b);
    }
  }
  return {};
}

inline std::string emit_stmt(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Skip:
      return "skip";
    case Stmt::Label:
      return s.target + ":";
    case Stmt::Assign:
      return s.target + " := " + emit_expr(s.expr);
    case Stmt::Assume:
      return "assume " + emit_expr(s.expr);
    case Stmt::Assert:
      return "assert " + emit_expr(s.expr);
    case Stmt::IfGoto:
      if (s.goto_sugar) return "goto " + s.target;
      return "if " + emit_expr(s.expr) + " goto " + s.target;
  }
  return {};
}

inline std::string emit_program(const Program& p) {
  std::ostringstream out;
  for (const auto& [name, ty] : p.symbols)
    out << "decl " << name << " : " << ty.to_string() << "\n";
  for (const Stmt& s : p.stmts) out << emit_stmt(s) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Control flow
// ---------------------------------------------------------------------------

inline std::pair<std::vector<Stmt>, std::map<std::string, size_t>> flatten(
    const Program& p) {
  return {p.stmts, p.label_index};
}

inline std::vector<size_t> successors(const Program& p, size_t idx) {
  std::vector<size_t> out;
  const Stmt& s = p.at(idx);
  // an unconditional goto has no fall-through edge
  if (!(s.kind == Stmt::IfGoto && s.goto_sugar) && idx + 1 <= p.size())
    out.push_back(idx + 1);
  if (s.kind == Stmt::IfGoto) {
    size_t target = p.label_index.at(s.target);
    if (out.empty() || out[0] != target) out.push_back(target);
  }
  return out;
}

struct Loop {
  size_t head = 0;               // back-edge target
  size_t back_edge_source = 0;   // the branching statement
  std::set<size_t> body;         // includes head and source
};

inline std::vector<std::vector<size_t>> predecessor_table(const Program& p) {
  std::vector<std::vector<size_t>> preds(p.size() + 1);
  for (size_t i = 1; i <= p.size(); ++i)
    for (size_t to : successors(p, i)) preds[to].push_back(i);
  return preds;
}

// Natural loops, one per back edge (branch whose target precedes it).
inline std::vector<Loop> detect_loops(const Program& p) {
  auto preds = predecessor_table(p);
  std::vector<Loop> loops;
  for (size_t i = 1; i <= p.size(); ++i) {
    const Stmt& s = p.at(i);
    if (s.kind != Stmt::IfGoto) continue;
    size_t target = p.label_index.at(s.target);
    if (target >= i) continue;
    Loop loop;
    loop.head = target;
    loop.back_edge_source = i;
    loop.body = {target, i};
    std::vector<size_t> stack = {i};
    while (!stack.empty()) {
      size_t n = stack.back();
      stack.pop_back();
      if (n == target) continue;
      for (size_t pr : preds[n])
        if (loop.body.insert(pr).second) stack.push_back(pr);
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Iterative dominator sets over the statement CFG; index 0 unused.
inline std::vector<std::set<size_t>> dominator_sets(const Program& p) {
  size_t n = p.size();
  std::set<size_t> all;
  for (size_t i = 1; i <= n; ++i) all.insert(i);
  std::vector<std::set<size_t>> dom(n + 1, all);
  if (n == 0) return dom;
  dom[1] = {1};
  auto preds = predecessor_table(p);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 2; i <= n; ++i) {
      std::set<size_t> acc;
      bool first = true;
      for (size_t pr : preds[i]) {
        if (first) {
          acc = dom[pr];
          first = false;
        } else {
          std::set<size_t> inter;
          for (size_t d : acc)
            if (dom[pr].count(d)) inter.insert(d);
          acc = std::move(inter);
        }
      }
      if (first) acc.clear();  // unreachable
      acc.insert(i);
      if (acc != dom[i]) {
        dom[i] = std::move(acc);
        changed = true;
      }
    }
  }
  return dom;
}

// Variables read or written by a statement.
inline std::set<std::string> stmt_vars(const Stmt& s) {
  std::set<std::string> vars;
  if (s.kind == Stmt::Assign) vars.insert(s.target);
  if (s.has_expr()) {
    if (s.expr.a.is_var()) vars.insert(s.expr.a.var);
    if (s.expr.kind == ExprKind::Binary && s.expr.b.is_var())
      vars.insert(s.expr.b.var);
  }
  return vars;
}

}  // namespace gotoiv
