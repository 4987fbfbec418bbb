#include <catch2/catch_amalgamated.hpp>

#include "gotoiv/concrete.hpp"
#include "gotoiv/interval_int.hpp"
#include "gotoiv/interval_wrap.hpp"
#include "gotoiv/transform.hpp"
#include "helpers.hpp"

using namespace gotoiv;
using ID = IntegerDomain;
using WD = WrappedDomain;

namespace {

const DomainConfig kArith{DomainKind::Integer, true, false, false};

// keeps the per-test exhaustive replays at or below 2^16 environments
bool small_state_space(const Program& p) {
  unsigned bits = 0;
  for (const auto& [v, ty] : p.symbols) bits += ty.width;
  return bits <= 16;
}

Program optimized(const std::string& name, const DomainConfig& cfg = kArith) {
  Program p = testutil::corpus_program(name);
  auto pa = compute_abs<ID>(p, cfg);
  REQUIRE(!pa.cap_hit);
  return optimize<ID>(p, pa, cfg);
}

}  // namespace

TEST_CASE("a provable assertion folds to a constant") {
  Program o = optimized("choice.goto");
  CHECK(o.at(9).kind == Stmt::Assert);
  CHECK(o.at(9).expr == Expr::term(Term::make_const(1)));
  // the join [4,6] is not a singleton, so the assignments stay
  CHECK(o.at(8).expr == testutil::corpus_program("choice.goto").at(8).expr);
}

TEST_CASE("singleton expressions become constants") {
  Program p = parse_program("decl x : s8\ndecl t : s8\nt := x * 0\n");
  auto pa = compute_abs<ID>(p, kArith);
  Program o = singleton_propagate<ID>(p, pa, kArith);
  CHECK(o.at(1).expr == Expr::term(Term::make_const(0)));
}

TEST_CASE("a definitely-taken branch becomes a goto") {
  Program p = parse_program(
      "decl x : s8\n"
      "assume 1 <= x\n"
      "if 1 <= x goto E\n"
      "x := 0\n"
      "E:\n"
      "skip\n");
  auto pa = compute_abs<ID>(p, kArith);
  Program o = singleton_propagate<ID>(p, pa, kArith);
  CHECK(o.at(2).kind == Stmt::IfGoto);
  CHECK(o.at(2).goto_sugar);
  CHECK(emit_stmt(o.at(2)) == "goto E");
}

TEST_CASE("unreachable statements become skip, labels survive") {
  Program o = optimized("dead.goto");
  CHECK(o.at(3).kind == Stmt::Skip);
  CHECK(o.at(4).kind == Stmt::Label);
  CHECK(o.at(5).expr == Expr::term(Term::make_const(1)));  // assert x <= 1
  CHECK(o.label_index.at("L") == 4);
}

TEST_CASE("faultable expressions never fold") {
  // x is 0, so x << k is the singleton 0 -- but k may be 8, which faults
  Program p = parse_program(
      "decl x : s8\n"
      "decl k : s8\n"
      "decl t : s8\n"
      "x := 0\n"
      "assume 0 <= k\n"
      "assume k <= 8\n"
      "t := x << k\n");
  auto pa = compute_abs<ID>(p, kArith);
  DomainConfig full{DomainKind::Integer, true, true, false};
  auto pa2 = compute_abs<ID>(p, full);
  Program o = singleton_propagate<ID>(p, pa2, full);
  CHECK(o.at(4).expr == p.at(4).expr);  // unchanged
  // tightening the shift range makes the fold legal
  Program q = parse_program(
      "decl x : s8\n"
      "decl k : s8\n"
      "decl t : s8\n"
      "x := 0\n"
      "assume 0 <= k\n"
      "assume k <= 7\n"
      "t := x << k\n");
  auto qa = compute_abs<ID>(q, full);
  Program oq = singleton_propagate<ID>(q, qa, full);
  CHECK(oq.at(4).expr == Expr::term(Term::make_const(0)));
  (void)pa;
}

TEST_CASE("expr_may_fault tracks divisor and shift ranges") {
  Program p = parse_program("decl x : s8\ndecl y : s8\ndecl t : s8\nt := x / y\n");
  Store<ID> st;
  MachType s8{true, 8};
  auto env = AbstractEnv<ID>::top()
                 .set(st, "y", s8, ID::of_values(-1, 1, s8));
  CHECK(expr_may_fault<ID>(p.at(1).expr, env));
  env = env.set(st, "y", s8, ID::of_values(1, 2, s8));
  CHECK(!expr_may_fault<ID>(p.at(1).expr, env));
}

TEST_CASE("optimization is idempotent on the corpus") {
  for (const auto& name : testutil::corpus_names()) {
    // the big counting loops need widening to converge
    if (name == "count1000.goto" || name == "count1e6.goto") continue;
    CAPTURE(name);
    Program o1 = optimized(name);
    auto pa = compute_abs<ID>(o1, kArith);
    REQUIRE(!pa.cap_hit);
    Program o2 = optimize<ID>(o1, pa, kArith);
    CHECK(emit_program(o2) == emit_program(o1));
  }
}

TEST_CASE("loop instrumentation bounds the loop variables") {
  Program p = testutil::corpus_program("count100.goto");
  auto pa = compute_abs<ID>(p, kArith);
  auto r = instrument<ID>(p, pa, InstrumentMode::Loop);
  REQUIRE(r.inserted.size() == 4);
  std::string text = emit_program(r.program);
  // head bounds [0,100]; exit-edge bounds [100,100] before the assert
  CHECK(text.find("assume 0 <= x\nassume x <= 100\nL:") != std::string::npos);
  CHECK(text.find("assume 100 <= x\nassume x <= 100\nassert x <= 100") !=
        std::string::npos);
  for (size_t idx : r.inserted) CHECK(r.program.at(idx).kind == Stmt::Assume);
}

TEST_CASE("guard instrumentation scopes by mode") {
  Program p = testutil::corpus_program("straight.goto");
  auto pa = compute_abs<ID>(p, kArith);
  auto local = instrument<ID>(p, pa, InstrumentMode::GuardLocal);
  auto full = instrument<ID>(p, pa, InstrumentMode::GuardFull);
  // local mentions only the guarded variable; full bounds a, b and t
  CHECK(local.inserted.size() < full.inserted.size());
  for (size_t idx : local.inserted) {
    auto vars = stmt_vars(local.program.at(idx));
    REQUIRE(vars.size() == 1);
  }
  auto all = instrument<ID>(p, pa, InstrumentMode::AllFull);
  CHECK(all.inserted.size() >= full.inserted.size());
  auto none = instrument<ID>(p, pa, InstrumentMode::None);
  CHECK(none.inserted.empty());
  CHECK(emit_program(none.program) == emit_program(p));
}

TEST_CASE("inserted assumes are redundant on every concrete run") {
  std::vector<InstrumentMode> modes = {
      InstrumentMode::Loop, InstrumentMode::GuardFull,
      InstrumentMode::GuardLocal, InstrumentMode::AllFull,
      InstrumentMode::AllLocal};
  for (const auto& name : testutil::enumerable_corpus()) {
    CAPTURE(name);
    Program p = testutil::corpus_program(name);
    if (!small_state_space(p)) continue;
    unsigned width = 0;
    for (const auto& [v, ty] : p.symbols) width = std::max(width, ty.width);
    auto base = exhaustive_check(p, width);
    DomainConfig cfg{DomainKind::Integer, true, true, false};
    auto pa = compute_abs<ID>(p, cfg);
    REQUIRE(!pa.cap_hit);
    for (InstrumentMode m : modes) {
      CAPTURE(instrument_mode_name(m));
      auto r = instrument<ID>(p, pa, m);
      auto after = exhaustive_check(r.program, width);
      CHECK(after.kind == base.kind);
      if (base.kind == ExhaustiveResult::Counterexample) {
        REQUIRE(after.cex.size() == base.cex.size());
        for (const auto& [v, val] : base.cex)
          CHECK(after.cex.at(v).value() == val.value());
      }
    }
  }
}

TEST_CASE("optimization preserves the verdict class") {
  for (const auto& name : testutil::enumerable_corpus()) {
    CAPTURE(name);
    Program p = testutil::corpus_program(name);
    if (!small_state_space(p)) continue;
    unsigned width = 0;
    for (const auto& [v, ty] : p.symbols) width = std::max(width, ty.width);
    auto base = exhaustive_check(p, width);
    for (DomainConfig cfg : testutil::all_configs()) {
      Program o;
      if (cfg.domain == DomainKind::Integer) {
        auto pa = compute_abs<ID>(p, cfg);
        if (pa.cap_hit) continue;
        o = optimize<ID>(p, pa, cfg);
      } else {
        auto pa = compute_abs<WD>(p, cfg);
        if (pa.cap_hit) continue;
        o = optimize<WD>(p, pa, cfg);
      }
      auto after = exhaustive_check(o, width);
      CAPTURE(domain_kind_name(cfg.domain), cfg.arithmetic, cfg.bitwise,
              cfg.widening);
      CHECK(after.kind == base.kind);
      if (base.kind == ExhaustiveResult::Counterexample)
        CHECK(after.failed_at == base.failed_at);
    }
  }
}

TEST_CASE("irreducible control flow is rejected by loop instrumentation") {
  Program p = parse_program(
      "decl x : s4\n"
      "if x <= 0 goto M\n"
      "L:\n"
      "x := x + 1\n"
      "M:\n"
      "skip\n"
      "if x <= 2 goto L\n");
  auto pa = compute_abs<ID>(p, kArith);
  CHECK_THROWS_AS(instrument<ID>(p, pa, InstrumentMode::Loop),
                  std::runtime_error);
  // other modes do not care about loop structure
  CHECK_NOTHROW(instrument<ID>(p, pa, InstrumentMode::AllLocal));
}

TEST_CASE("assertion report vocabulary") {
  Program p = testutil::corpus_program("contradict.goto");
  auto pa = compute_abs<ID>(p, kArith);
  auto rep = assertion_report<ID>(p, pa, kArith);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].status == CheckStatus::Unreachable);
  CHECK(std::string(verdict_name(rep[0].status)) == "proven");

  Program q = testutil::corpus_program("refute.goto");
  auto qa = compute_abs<ID>(q, kArith);
  auto qr = assertion_report<ID>(q, qa, kArith);
  REQUIRE(qr.size() == 1);
  CHECK(std::string(verdict_name(qr[0].status)) == "refuted");
  CHECK(qr[0].witness.at("x") == "[6, +inf]");
}
