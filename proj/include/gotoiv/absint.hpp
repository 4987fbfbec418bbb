#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gotoiv/config.hpp"
#include "gotoiv/ir.hpp"

namespace gotoiv {

// ---------------------------------------------------------------------------
// Storage
// ---------------------------------------------------------------------------

// Owns every interval and variable table the analysis materializes and
// counts the allocations. full_copy allocates on every request;
// shared_interval interns intervals; shared_domain_cow additionally
// interns whole tables so equal environments share one record.
template <class D>
class Store {
 public:
  using Value = typename D::Value;
  using Ptr = std::shared_ptr<const Value>;
  using Table = std::map<std::string, Ptr>;
  using TablePtr = std::shared_ptr<const Table>;

  explicit Store(StorageMode mode = StorageMode::FullCopy) : mode_(mode) {}

  StorageMode mode() const { return mode_; }
  size_t intervals_allocated() const { return intervals_; }
  size_t tables_allocated() const { return tables_; }

  Ptr value(const Value& v) {
    if (mode_ == StorageMode::FullCopy) {
      ++intervals_;
      return std::make_shared<Value>(v);
    }
    std::string k = D::key(v);
    auto it = pool_.find(k);
    if (it != pool_.end()) return it->second;
    ++intervals_;
    return pool_[k] = std::make_shared<Value>(v);
  }

  TablePtr table(Table t) {
    if (mode_ != StorageMode::SharedDomainCow) {
      ++tables_;
      return std::make_shared<Table>(std::move(t));
    }
    std::string k;
    for (const auto& [name, p] : t) k += name + "=" + D::key(*p) + ";";
    auto it = table_pool_.find(k);
    if (it != table_pool_.end()) return it->second;
    ++tables_;
    return table_pool_[k] = std::make_shared<Table>(std::move(t));
  }

 private:
  StorageMode mode_;
  size_t intervals_ = 0;
  size_t tables_ = 0;
  std::map<std::string, Ptr> pool_;
  std::map<std::string, TablePtr> table_pool_;
};

// ---------------------------------------------------------------------------
// Abstract environments
// ---------------------------------------------------------------------------

// Partial map variable -> abstract value; untracked variables are at
// the domain's supremum. A dedicated bottom represents unreachability.
template <class D>
class AbstractEnv {
 public:
  using Value = typename D::Value;
  using Table = typename Store<D>::Table;

  static AbstractEnv top() { return {}; }
  static AbstractEnv bot() {
    AbstractEnv e;
    e.bottom_ = true;
    return e;
  }

  bool is_bottom() const { return bottom_; }
  const Table* entries() const { return table_.get(); }

  Value get(const std::string& name, MachType ty) const {
    if (bottom_) return D::bottom(ty);
    if (table_) {
      auto it = table_->find(name);
      if (it != table_->end()) return *it->second;
    }
    return D::init(ty);
  }

  // Binding to bottom collapses the whole environment; binding to the
  // supremum drops the entry so equal states have one representation.
  AbstractEnv set(Store<D>& st, const std::string& name, MachType ty,
                  const Value& v) const {
    if (bottom_) return *this;
    if (D::is_bottom(v)) return bot();
    Table t = table_ ? *table_ : Table{};
    if (v == D::init(ty)) {
      if (t.erase(name) == 0) return *this;
    } else {
      auto it = t.find(name);
      if (it != t.end() && *it->second == v) return *this;
      t[name] = st.value(v);
    }
    AbstractEnv out;
    if (!t.empty()) out.table_ = st.table(std::move(t));
    return out;
  }

  static AbstractEnv from_table(Store<D>& st, Table t) {
    AbstractEnv out;
    if (!t.empty()) out.table_ = st.table(std::move(t));
    return out;
  }

 private:
  std::shared_ptr<const Table> table_;
  bool bottom_ = false;
};

template <class D>
bool env_equal(const AbstractEnv<D>& a, const AbstractEnv<D>& b) {
  if (a.is_bottom() != b.is_bottom()) return false;
  if (a.is_bottom()) return true;
  const auto* ta = a.entries();
  const auto* tb = b.entries();
  if (ta == tb) return true;
  size_t na = ta ? ta->size() : 0, nb = tb ? tb->size() : 0;
  if (na != nb) return false;
  if (na == 0) return true;
  auto ia = ta->begin();
  auto ib = tb->begin();
  for (; ia != ta->end(); ++ia, ++ib)
    if (ia->first != ib->first || !(*ia->second == *ib->second)) return false;
  return true;
}

// Pointwise join; only variables tracked on both sides can stay below
// the supremum.
template <class D>
AbstractEnv<D> env_join(Store<D>& st, const AbstractEnv<D>& a,
                        const AbstractEnv<D>& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  typename Store<D>::Table t;
  if (a.entries() && b.entries()) {
    for (const auto& [name, pa] : *a.entries()) {
      auto it = b.entries()->find(name);
      if (it == b.entries()->end()) continue;
      auto j = D::join(*pa, *it->second);
      if (j == D::init(j.type)) continue;
      t[name] = st.value(j);
    }
  }
  return AbstractEnv<D>::from_table(st, std::move(t));
}

// Pointwise widening of prev against a grown merge.
template <class D>
AbstractEnv<D> env_widen(Store<D>& st, const AbstractEnv<D>& prev,
                         const AbstractEnv<D>& next) {
  if (prev.is_bottom()) return next;
  if (next.is_bottom()) return prev;
  typename Store<D>::Table t;
  if (prev.entries() && next.entries()) {
    for (const auto& [name, pp] : *prev.entries()) {
      auto it = next.entries()->find(name);
      if (it == next.entries()->end()) continue;
      auto w = D::widen(*pp, *it->second);
      if (w == D::init(w.type)) continue;
      t[name] = st.value(w);
    }
  }
  return AbstractEnv<D>::from_table(st, std::move(t));
}

// a covers b pointwise
template <class D>
bool env_leq(const AbstractEnv<D>& b, const AbstractEnv<D>& a) {
  if (b.is_bottom()) return true;
  if (a.is_bottom()) return false;
  if (!a.entries()) return true;
  for (const auto& [name, pa] : *a.entries()) {
    if (!b.entries()) return false;
    auto it = b.entries()->find(name);
    if (it == b.entries()->end()) return false;
    if (!D::contains_interval(*pa, *it->second)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Abstract evaluation
// ---------------------------------------------------------------------------

template <class D>
typename D::Value eval_abs_term(const Term& t, MachType ty,
                                const AbstractEnv<D>& env) {
  if (t.is_var()) return env.get(t.var, ty);
  return D::constant(MachInt::from_value(t.num, ty));
}

template <class D>
BoolInterval eval_abs_bool(const Expr& e, const AbstractEnv<D>& env,
                           const DomainConfig& cfg);

// Evaluation honoring the precision toggles: a disabled operator class
// degrades to the type's supremum instead of a precise transfer.
template <class D>
typename D::Value eval_abs_expr(const Expr& e, MachType result_ty,
                                const AbstractEnv<D>& env,
                                const DomainConfig& cfg) {
  if (e.boolean_valued())
    return D::from_bool(eval_abs_bool<D>(e, env, cfg), result_ty);
  auto a = eval_abs_term<D>(e.a, e.op_type, env);
  auto coarse = [&](const typename D::Value& x) {
    return D::is_bottom(x) ? x : D::init(x.type);
  };
  switch (e.kind) {
    case ExprKind::TermE:
      return a;
    case ExprKind::Not:
      return D::from_bool(!D::truth(a), result_ty);
    case ExprKind::BitNot:
      return cfg.bitwise ? D::bit_not(a) : coarse(a);
    case ExprKind::Cast: {
      auto c = D::cast(a, e.cast_to);
      return c;
    }
    case ExprKind::Binary: {
      auto b = eval_abs_term<D>(e.b, e.op_type, env);
      auto coarse2 = [&]() {
        if (D::is_bottom(a) || D::is_bottom(b)) return D::bottom(e.op_type);
        return D::init(e.op_type);
      };
      switch (e.op) {
        case BinOp::Add: return cfg.arithmetic ? D::add(a, b) : coarse2();
        case BinOp::Sub: return cfg.arithmetic ? D::sub(a, b) : coarse2();
        case BinOp::Mul: return cfg.arithmetic ? D::mul(a, b) : coarse2();
        case BinOp::Div: return cfg.arithmetic ? D::divide(a, b) : coarse2();
        case BinOp::Shl: return cfg.bitwise ? D::shl(a, b) : coarse2();
        case BinOp::Shr: return cfg.bitwise ? D::shr(a, b) : coarse2();
        case BinOp::And: return cfg.bitwise ? D::bit_and(a, b) : coarse2();
        case BinOp::Or: return cfg.bitwise ? D::bit_or(a, b) : coarse2();
        case BinOp::Xor: return cfg.bitwise ? D::bit_xor(a, b) : coarse2();
        case BinOp::LAnd:
        case BinOp::Le:
          return a;  // unreachable: boolean_valued handled above
      }
    }
  }
  return a;
}

// Comparisons stay precise regardless of the toggles; they are what
// guards are made of.
template <class D>
BoolInterval eval_abs_bool(const Expr& e, const AbstractEnv<D>& env,
                           const DomainConfig& cfg) {
  (void)cfg;
  switch (e.kind) {
    case ExprKind::TermE:
      return D::truth(eval_abs_term<D>(e.a, e.op_type, env));
    case ExprKind::Not:
      return !D::truth(eval_abs_term<D>(e.a, e.op_type, env));
    case ExprKind::Binary:
      if (e.op == BinOp::Le)
        return D::le(eval_abs_term<D>(e.a, e.op_type, env),
                     eval_abs_term<D>(e.b, e.op_type, env));
      if (e.op == BinOp::LAnd)
        return D::truth(eval_abs_term<D>(e.a, e.op_type, env)) &&
               D::truth(eval_abs_term<D>(e.b, e.op_type, env));
      [[fallthrough]];
    default:
      // non-boolean expression in boolean position: its truth value
      return D::truth(eval_abs_expr<D>(e, e.op_type, env, cfg));
  }
}

// ---------------------------------------------------------------------------
// Condition-directed restriction
// ---------------------------------------------------------------------------

template <class D>
AbstractEnv<D> restrict_env(const Expr& e, bool want, const AbstractEnv<D>& env,
                            const DomainConfig& cfg, Store<D>& st) {
  if (env.is_bottom()) return env;
  BoolInterval bv = eval_abs_bool<D>(e, env, cfg);
  if (want ? !bv.can_be_true() : !bv.can_be_false())
    return AbstractEnv<D>::bot();

  auto set_var = [&](AbstractEnv<D> cur, const Term& t,
                     const typename D::Value& v) {
    return t.is_var() ? cur.set(st, t.var, e.op_type, v) : cur;
  };

  switch (e.kind) {
    case ExprKind::TermE:
      if (!e.a.is_var()) return env;
      return set_var(env, e.a,
                     want ? D::without_zero(env.get(e.a.var, e.op_type))
                          : D::only_zero(env.get(e.a.var, e.op_type)));
    case ExprKind::Not: {
      if (!e.a.is_var()) return env;
      return set_var(env, e.a,
                     want ? D::only_zero(env.get(e.a.var, e.op_type))
                          : D::without_zero(env.get(e.a.var, e.op_type)));
    }
    case ExprKind::Binary: {
      if (e.op == BinOp::LAnd) {
        if (want) {
          AbstractEnv<D> cur = env;
          cur = set_var(cur, e.a,
                        D::without_zero(eval_abs_term<D>(e.a, e.op_type, cur)));
          if (cur.is_bottom()) return cur;
          cur = set_var(cur, e.b,
                        D::without_zero(eval_abs_term<D>(e.b, e.op_type, cur)));
          return cur;
        }
        // !(a && b): prune only when one conjunct is already settled true
        auto ta = D::truth(eval_abs_term<D>(e.a, e.op_type, env));
        auto tb = D::truth(eval_abs_term<D>(e.b, e.op_type, env));
        if (ta.definitely_true())
          return set_var(env, e.b,
                         D::only_zero(eval_abs_term<D>(e.b, e.op_type, env)));
        if (tb.definitely_true())
          return set_var(env, e.a,
                         D::only_zero(eval_abs_term<D>(e.a, e.op_type, env)));
        return env;
      }
      if (e.op == BinOp::Le) {
        AbstractEnv<D> cur = env;
        auto va = eval_abs_term<D>(e.a, e.op_type, cur);
        auto vb = eval_abs_term<D>(e.b, e.op_type, cur);
        if (want) {  // a <= b
          if (e.a.is_var() && D::hi_bound(vb).finite())
            cur = set_var(cur, e.a, D::bound_le(va, D::hi_bound(vb).v));
          if (cur.is_bottom()) return cur;
          va = eval_abs_term<D>(e.a, e.op_type, cur);
          if (e.b.is_var() && D::lo_bound(va).finite())
            cur = set_var(cur, e.b, D::bound_ge(vb, D::lo_bound(va).v));
        } else {  // a > b
          if (e.a.is_var() && D::lo_bound(vb).finite())
            cur = set_var(cur, e.a, D::bound_ge(va, D::lo_bound(vb).v + 1));
          if (cur.is_bottom()) return cur;
          va = eval_abs_term<D>(e.a, e.op_type, cur);
          if (e.b.is_var() && D::hi_bound(va).finite())
            cur = set_var(cur, e.b, D::bound_le(vb, D::hi_bound(va).v - 1));
        }
        return cur;
      }
      return env;
    }
    default:
      return env;
  }
}

// ---------------------------------------------------------------------------
// Fixpoint engine
// ---------------------------------------------------------------------------

// Abstract transformer of statement `idx` toward successor `succ`.
template <class D>
AbstractEnv<D> transform_stmt(const Program& p, size_t idx, size_t succ,
                              const AbstractEnv<D>& env,
                              const DomainConfig& cfg, Store<D>& st) {
  const Stmt& s = p.at(idx);
  if (env.is_bottom()) return env;
  switch (s.kind) {
    case Stmt::Skip:
    case Stmt::Label:
      return env;
    case Stmt::Assume:
    case Stmt::Assert:
      return restrict_env<D>(s.expr, true, env, cfg, st);
    case Stmt::Assign: {
      MachType vt = p.symbols.at(s.target);
      auto v = eval_abs_expr<D>(s.expr, vt, env, cfg);
      return env.set(st, s.target, vt, v);
    }
    case Stmt::IfGoto: {
      size_t target = p.label_index.at(s.target);
      if (target == idx + 1) return env;  // both edges coincide
      return restrict_env<D>(s.expr, succ == target, env, cfg, st);
    }
  }
  return env;
}

enum class Schedule { Fifo, Lifo };

template <class D>
struct AbsResult {
  std::vector<AbstractEnv<D>> entry;  // 1-based entry state per statement
  bool cap_hit = false;
  bool deadline_hit = false;
  uint64_t pops = 0;
  uint64_t iteration_cap = 0;
  size_t max_worklist = 0;
  size_t intervals_allocated = 0;
  size_t tables_allocated = 0;
};

// Worklist fixpoint over statement entry states. Widening, when
// enabled, is applied at every merge that grows a state. A conservative
// iteration cap turns a diverging run into an explicit failure.
template <class D>
AbsResult<D> compute_abs(const Program& p, const DomainConfig& cfg,
                         StorageMode mode = StorageMode::FullCopy,
                         Schedule sched = Schedule::Fifo,
                         uint64_t cap_override = 0,
                         uint64_t time_budget_ms = 0) {
  size_t n = p.size();
  AbsResult<D> r;
  r.entry.assign(n + 1, AbstractEnv<D>::bot());

  size_t nvars = p.symbols.size() ? p.symbols.size() : 1;
  unsigned maxw = 1;
  for (const auto& [name, ty] : p.symbols) {
    (void)name;
    maxw = std::max(maxw, ty.width);
  }
  r.iteration_cap =
      cap_override ? cap_override : uint64_t(10) * n * nvars * maxw;
  if (n == 0) return r;

  Store<D> st(mode);
  r.entry[1] = AbstractEnv<D>::top();
  std::deque<size_t> wl{1};
  std::vector<char> queued(n + 1, 0);
  queued[1] = 1;

  auto start = std::chrono::steady_clock::now();
  while (!wl.empty()) {
    if (r.pops >= r.iteration_cap) {
      r.cap_hit = true;
      break;
    }
    if (time_budget_ms != 0 && (r.pops & 0xfff) == 0 &&
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
                .count() >= int64_t(time_budget_ms)) {
      r.deadline_hit = true;
      break;
    }
    size_t idx;
    if (sched == Schedule::Fifo) {
      idx = wl.front();
      wl.pop_front();
    } else {
      idx = wl.back();
      wl.pop_back();
    }
    queued[idx] = 0;
    ++r.pops;
    AbstractEnv<D> in = r.entry[idx];
    if (in.is_bottom()) continue;
    for (size_t succ : successors(p, idx)) {
      auto out = transform_stmt<D>(p, idx, succ, in, cfg, st);
      if (out.is_bottom()) continue;
      auto merged = env_join<D>(st, r.entry[succ], out);
      if (env_equal<D>(merged, r.entry[succ])) continue;
      if (cfg.widening) merged = env_widen<D>(st, r.entry[succ], merged);
      if (env_equal<D>(merged, r.entry[succ])) continue;
      r.entry[succ] = merged;
      if (!queued[succ]) {
        queued[succ] = 1;
        wl.push_back(succ);
      }
      r.max_worklist = std::max(r.max_worklist, wl.size());
    }
  }
  r.intervals_allocated = st.intervals_allocated();
  r.tables_allocated = st.tables_allocated();
  return r;
}

// ---------------------------------------------------------------------------
// Assertion verdicts
// ---------------------------------------------------------------------------

enum class CheckStatus { Proven, Refuted, Unknown, Unreachable };

inline const char* check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Proven: return "proven";
    case CheckStatus::Refuted: return "refuted";
    case CheckStatus::Unknown: return "unknown";
    case CheckStatus::Unreachable: return "unreachable";
  }
  return {};
}

struct AssertCheck {
  size_t stmt = 0;
  CheckStatus status = CheckStatus::Unknown;
};

template <class D>
std::vector<AssertCheck> check_asserts(const Program& p, const AbsResult<D>& r,
                                       const DomainConfig& cfg) {
  std::vector<AssertCheck> out;
  for (size_t i = 1; i <= p.size(); ++i) {
    if (p.at(i).kind != Stmt::Assert) continue;
    const AbstractEnv<D>& env = r.entry[i];
    if (env.is_bottom()) {
      out.push_back({i, CheckStatus::Unreachable});
      continue;
    }
    BoolInterval bv = eval_abs_bool<D>(p.at(i).expr, env, cfg);
    CheckStatus s = bv.definitely_true()    ? CheckStatus::Proven
                    : bv.definitely_false() ? CheckStatus::Refuted
                                            : CheckStatus::Unknown;
    out.push_back({i, s});
  }
  return out;
}

}  // namespace gotoiv
