#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotoiv/absint.hpp"
#include "gotoiv/ir.hpp"

namespace gotoiv {

// Could evaluating e fault on some concrete state described by env?
// Folding such an expression would erase a RuntimeError.
template <class D>
bool expr_may_fault(const Expr& e, const AbstractEnv<D>& env) {
  if (e.kind != ExprKind::Binary) return false;
  if (e.op == BinOp::Div) {
    auto b = eval_abs_term<D>(e.b, e.op_type, env);
    return !D::is_bottom(b) && D::contains(b, MachInt(0, e.op_type));
  }
  if (e.op == BinOp::Shl || e.op == BinOp::Shr) {
    auto b = eval_abs_term<D>(e.b, e.op_type, env);
    if (D::is_bottom(b)) return false;
    ExtInt lo = D::lo_bound(b), hi = D::hi_bound(b);
    return !(lo.finite() && hi.finite() && lo.v >= 0 &&
             hi.v < int128(e.op_type.width));
  }
  return false;
}

// Replaces every whole expression whose abstract value at its
// statement's entry is a singleton with that constant. Guard positions
// fold to 0/1; a definitely-taken branch becomes a plain goto so label
// structure survives.
template <class D>
Program singleton_propagate(const Program& p, const AbsResult<D>& pa,
                            const DomainConfig& cfg) {
  Program out = p;
  for (size_t i = 1; i <= p.size(); ++i) {
    Stmt& s = out.at(i);
    if (!s.has_expr()) continue;
    const AbstractEnv<D>& env = pa.entry[i];
    if (env.is_bottom()) continue;
    if (expr_may_fault<D>(s.expr, env)) continue;
    if (s.kind == Stmt::Assign) {
      MachType vt = p.symbols.at(s.target);
      auto v = eval_abs_expr<D>(s.expr, vt, env, cfg);
      if (auto c = D::singleton(v))
        s.expr = Expr::term(Term::make_const(c->value()));
    } else {
      BoolInterval bv = eval_abs_bool<D>(s.expr, env, cfg);
      if (bv.definitely_true()) {
        s.expr = Expr::term(Term::make_const(1));
        if (s.kind == Stmt::IfGoto) s.goto_sugar = true;
      } else if (bv.definitely_false()) {
        s.expr = Expr::term(Term::make_const(0));
        s.goto_sugar = false;
      }
    }
  }
  validate_program(out);
  return out;
}

// Statements whose entry state is unreachable become Skip; labels stay
// so jump targets and statement indices are unchanged.
template <class D>
Program remove_dead_code(const Program& p, const AbsResult<D>& pa) {
  Program out = p;
  for (size_t i = 1; i <= p.size(); ++i) {
    if (p.at(i).kind == Stmt::Label) continue;
    if (pa.entry[i].is_bottom()) out.at(i) = Stmt{Stmt::Skip, {}, {}, false};
  }
  return out;
}

template <class D>
Program optimize(const Program& p, const AbsResult<D>& pa,
                 const DomainConfig& cfg) {
  return remove_dead_code<D>(singleton_propagate<D>(p, pa, cfg), pa);
}

struct InstrumentResult {
  Program program;
  std::vector<size_t> inserted;  // 1-based indices of added assumes
};

namespace detail {

// `assume c <= v` / `assume v <= c` for the finite, non-trivial bounds
// of v's interval. A wrapping interval whose value hull is the whole
// type range contributes nothing.
template <class D>
void push_bound_assumes(std::vector<Stmt>& out, const std::string& var,
                        MachType t, const typename D::Value& v) {
  if (D::is_bottom(v)) return;
  ExtInt lo = D::lo_bound(v), hi = D::hi_bound(v);
  if (lo.finite() && lo.v > t.min_value()) {
    Stmt s;
    s.kind = Stmt::Assume;
    s.expr =
        Expr::binary(BinOp::Le, Term::make_const(lo.v), Term::make_var(var));
    out.push_back(std::move(s));
  }
  if (hi.finite() && hi.v < t.max_value()) {
    Stmt s;
    s.kind = Stmt::Assume;
    s.expr =
        Expr::binary(BinOp::Le, Term::make_var(var), Term::make_const(hi.v));
    out.push_back(std::move(s));
  }
}

}  // namespace detail

// Inserts interval assumptions. Every inserted assume encodes the entry
// intervals of the statement it precedes, which makes it redundant on
// all concrete runs by soundness of pa.
template <class D>
InstrumentResult instrument(const Program& p, const AbsResult<D>& pa,
                            InstrumentMode mode) {
  std::map<size_t, std::vector<Stmt>> before;
  auto add_bounds = [&](size_t at, const std::set<std::string>& vars) {
    const AbstractEnv<D>& env = pa.entry[at];
    if (env.is_bottom()) return;
    for (const std::string& v : vars) {
      MachType t = p.symbols.at(v);
      detail::push_bound_assumes<D>(before[at], v, t, env.get(v, t));
    }
  };
  std::set<std::string> all_vars;
  for (const auto& [name, ty] : p.symbols) {
    (void)ty;
    all_vars.insert(name);
  }

  switch (mode) {
    case InstrumentMode::None:
      break;
    case InstrumentMode::Loop: {
      auto loops = detect_loops(p);
      auto doms = dominator_sets(p);
      for (const Loop& l : loops)
        if (!doms[l.back_edge_source].count(l.head))
          throw std::runtime_error(
              "irreducible control flow: statement " + std::to_string(l.head) +
              " does not dominate the back edge at statement " +
              std::to_string(l.back_edge_source));
      for (const Loop& l : loops) {
        std::set<std::string> assigned;
        for (size_t i : l.body)
          if (p.at(i).kind == Stmt::Assign) assigned.insert(p.at(i).target);
        add_bounds(l.head, assigned);
        std::set<size_t> exits;  // targets of edges leaving the body
        for (size_t i : l.body)
          for (size_t to : successors(p, i))
            if (!l.body.count(to)) exits.insert(to);
        for (size_t e : exits) add_bounds(e, assigned);
      }
      break;
    }
    case InstrumentMode::GuardFull:
    case InstrumentMode::GuardLocal:
      for (size_t i = 1; i <= p.size(); ++i) {
        Stmt::Kind k = p.at(i).kind;
        if (k != Stmt::Assume && k != Stmt::Assert && k != Stmt::IfGoto)
          continue;
        add_bounds(i, mode == InstrumentMode::GuardFull ? all_vars
                                                        : stmt_vars(p.at(i)));
      }
      break;
    case InstrumentMode::AllFull:
    case InstrumentMode::AllLocal:
      for (size_t i = 1; i <= p.size(); ++i)
        add_bounds(i, mode == InstrumentMode::AllFull ? all_vars
                                                      : stmt_vars(p.at(i)));
      break;
  }

  InstrumentResult r;
  r.program.symbols = p.symbols;
  for (size_t i = 1; i <= p.size(); ++i) {
    auto it = before.find(i);
    if (it != before.end())
      for (Stmt& s : it->second) {
        r.program.stmts.push_back(std::move(s));
        r.inserted.push_back(r.program.stmts.size());
      }
    const Stmt& s = p.at(i);
    r.program.stmts.push_back(s);
    if (s.kind == Stmt::Label)
      r.program.label_index[s.target] = r.program.stmts.size();
  }
  validate_program(r.program);
  return r;
}

struct AssertVerdict {
  size_t stmt = 0;
  CheckStatus status = CheckStatus::Unknown;
  std::map<std::string, std::string> witness;  // var -> interval text
};

// One verdict per assert. Unreachable asserts hold vacuously and are
// reported as proven; the status field keeps the distinction.
template <class D>
std::vector<AssertVerdict> assertion_report(const Program& p,
                                            const AbsResult<D>& pa,
                                            const DomainConfig& cfg) {
  std::vector<AssertVerdict> out;
  for (const AssertCheck& c : check_asserts<D>(p, pa, cfg)) {
    AssertVerdict v;
    v.stmt = c.stmt;
    v.status = c.status;
    const AbstractEnv<D>& env = pa.entry[c.stmt];
    if (!env.is_bottom())
      for (const std::string& name : stmt_vars(p.at(c.stmt))) {
        MachType t = p.symbols.at(name);
        v.witness[name] = env.get(name, t).to_string();
      }
    out.push_back(std::move(v));
  }
  return out;
}

inline const char* verdict_name(CheckStatus s) {
  // external three-way vocabulary; unreachable counts as proven
  return s == CheckStatus::Refuted  ? "refuted"
         : s == CheckStatus::Unknown ? "unknown"
                                     : "proven";
}

}  // namespace gotoiv
