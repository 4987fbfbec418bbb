#pragma once

#include <functional>
#include <map>
#include <optional>

#include "gotoiv/ir.hpp"
#include "gotoiv/machine.hpp"

namespace gotoiv {

// Total map variable -> machine integer.
using ConcreteEnv = std::map<std::string, MachInt>;

struct RunVerdict {
  enum Kind { Safe, AssertFail, StepLimit, RuntimeError } kind = Safe;
  size_t stmt = 0;       // failing / faulting statement index
  ConcreteEnv env;       // witness for AssertFail
  FaultKind fault = FaultKind::DivByZero;
};

inline MachInt eval_term(const Term& t, MachType ty, const ConcreteEnv& env) {
  if (t.is_var()) return env.at(t.var);
  return MachInt::from_value(t.num, ty);
}

// C99-style expression evaluation at the operand type; may throw EvalFault.
inline MachInt eval_expr(const Expr& e, const ConcreteEnv& env) {
  MachInt a = eval_term(e.a, e.op_type, env);
  switch (e.kind) {
    case ExprKind::TermE:
      return a;
    case ExprKind::Not:
      return machop::logical_not(a);
    case ExprKind::BitNot:
      return machop::bit_not(a);
    case ExprKind::Cast:
      return machop::cast(a, e.cast_to);
    case ExprKind::Binary: {
      MachInt b = eval_term(e.b, e.op_type, env);
      switch (e.op) {
        case BinOp::Add: return machop::add(a, b);
        case BinOp::Sub: return machop::sub(a, b);
        case BinOp::Mul: return machop::mul(a, b);
        case BinOp::Div: return machop::div(a, b);
        case BinOp::LAnd: return machop::logical_and(a, b);
        case BinOp::Le: return machop::le(a, b);
        case BinOp::Shl: return machop::shl(a, b);
        case BinOp::Shr: return machop::shr(a, b);
        case BinOp::And: return machop::bit_and(a, b);
        case BinOp::Or: return machop::bit_or(a, b);
        case BinOp::Xor: return machop::bit_xor(a, b);
      }
    }
  }
  return a;
}

// Assignments update one binding; every other statement is the identity.
inline ConcreteEnv eval_state(const Stmt& s, const ConcreteEnv& env) {
  if (s.kind != Stmt::Assign) return env;
  ConcreteEnv out = env;
  MachInt v = eval_expr(s.expr, env);
  MachType vt = out.at(s.target).type;
  // boolean results and plain constants adopt the variable's type
  out[s.target] = v.type == vt ? v : MachInt(v.bits, vt);
  return out;
}

// Invoked with the statement index and the environment on entry.
using TraceFn = std::function<void(size_t, const ConcreteEnv&)>;

// Direct interpretation of the program: a falsified assumption ends the
// run vacuously Safe, a falsified assertion is a failure.
inline RunVerdict eval(const ConcreteEnv& init, const Program& p,
                       uint64_t step_limit = 1000000,
                       const TraceFn& trace = nullptr) {
  ConcreteEnv env = init;
  size_t pc = 1;
  uint64_t steps = 0;
  while (pc <= p.size()) {
    if (++steps > step_limit) return {RunVerdict::StepLimit, pc, {}};
    const Stmt& s = p.at(pc);
    if (trace) trace(pc, env);
    try {
      if (s.kind == Stmt::Assume && !eval_expr(s.expr, env).truthy())
        return {RunVerdict::Safe};
      if (s.kind == Stmt::Assert && !eval_expr(s.expr, env).truthy())
        return {RunVerdict::AssertFail, pc, env};
      env = eval_state(s, env);
      size_t next = pc + 1;
      if (s.kind == Stmt::IfGoto && eval_expr(s.expr, env).truthy())
        next = p.label_index.at(s.target);
      pc = next;
    } catch (const EvalFault& f) {
      return {RunVerdict::RuntimeError, pc, {}, f.kind};
    }
  }
  return {RunVerdict::Safe};
}

struct ExhaustiveResult {
  enum Kind { AllSafe, Counterexample, Inconclusive, BudgetExceeded } kind;
  ConcreteEnv cex;            // for Counterexample
  size_t failed_at = 0;       // for Counterexample
  uint128 required = 0;       // for BudgetExceeded
};

// Enumerates every initial environment over the declared ranges, in
// lexicographic variable order with values ascending, so the first
// counterexample found is the canonical smallest one.
inline ExhaustiveResult exhaustive_check(const Program& p, unsigned width_cap,
                                         uint64_t step_limit = 1000000,
                                         uint128 budget = uint128{1} << 24) {
  uint128 total = 1;
  for (const auto& [name, ty] : p.symbols) {
    if (ty.width > width_cap)
      throw std::invalid_argument("variable '" + name + "' wider than cap");
    total *= ty.cardinality();
    if (total > budget) return {ExhaustiveResult::BudgetExceeded, {}, 0, total};
  }

  std::vector<std::pair<std::string, MachType>> vars(p.symbols.begin(),
                                                     p.symbols.end());
  ConcreteEnv env;
  for (const auto& [name, ty] : vars)
    env[name] = MachInt::from_value(ty.min_value(), ty);

  bool saw_inconclusive = false;
  size_t inconclusive_at = 0;
  for (uint128 i = 0; i < total; ++i) {
    RunVerdict v = eval(env, p, step_limit);
    if (v.kind == RunVerdict::AssertFail)
      return {ExhaustiveResult::Counterexample, env, v.stmt};
    if (v.kind != RunVerdict::Safe && !saw_inconclusive) {
      saw_inconclusive = true;
      inconclusive_at = v.stmt;
    }
    // odometer step, least-significant variable last in name order
    for (size_t k = vars.size(); k-- > 0;) {
      const auto& [name, ty] = vars[k];
      MachInt& slot = env[name];
      if (slot.value() < ty.max_value()) {
        slot = MachInt::from_value(slot.value() + 1, ty);
        break;
      }
      slot = MachInt::from_value(ty.min_value(), ty);
    }
  }
  if (saw_inconclusive)
    return {ExhaustiveResult::Inconclusive, {}, inconclusive_at};
  return {ExhaustiveResult::AllSafe};
}

}  // namespace gotoiv
