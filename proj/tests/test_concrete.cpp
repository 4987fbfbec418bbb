#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "gotoiv/concrete.hpp"
#include "helpers.hpp"

using namespace gotoiv;

namespace {

// Independent value-level reference: compute in wide integers, reduce
// into the type's window. Deliberately avoids machop's bit masking.
int128 ref_wrap(int128 v, MachType t) {
  int128 card = int128(uint128{1} << t.width);
  int128 r = (v - t.min_value()) % card;
  if (r < 0) r += card;
  return r + t.min_value();
}

}  // namespace

TEST_CASE("machine ops agree with a wide-integer reference") {
  std::mt19937_64 rng(7);
  std::vector<MachType> types = {{true, 4}, {false, 4}, {true, 8}, {false, 8},
                                 {true, 2}, {false, 2}};
  for (MachType t : types) {
    for (int iter = 0; iter < 4000; ++iter) {
      int128 span = t.max_value() - t.min_value() + 1;
      int128 xv = t.min_value() + int128(rng() % uint64_t(span));
      int128 yv = t.min_value() + int128(rng() % uint64_t(span));
      MachInt x = MachInt::from_value(xv, t), y = MachInt::from_value(yv, t);
      CHECK(machop::add(x, y).value() == ref_wrap(xv + yv, t));
      CHECK(machop::sub(x, y).value() == ref_wrap(xv - yv, t));
      CHECK(machop::mul(x, y).value() == ref_wrap(xv * yv, t));
      if (yv != 0) CHECK(machop::div(x, y).value() == ref_wrap(xv / yv, t));
      CHECK(machop::le(x, y).value() == (xv <= yv ? 1 : 0));
      CHECK(machop::logical_and(x, y).value() ==
            ((xv != 0 && yv != 0) ? 1 : 0));
      CHECK(machop::logical_not(x).value() == (xv == 0 ? 1 : 0));
      CHECK(machop::bit_not(x).value() == ref_wrap(-xv - 1, t));
      if (yv >= 0 && yv < int128(t.width)) {
        int k = int(int64_t(yv));
        CHECK(machop::shl(x, y).value() ==
              ref_wrap(xv * (int128{1} << k), t));
        int128 q = xv >> k;  // floor division for negatives
        if (!t.is_signed) q = int128(uint128(xv) >> k);
        CHECK(machop::shr(x, y).value() == q);
      }
    }
  }
}

TEST_CASE("faults") {
  MachType s8{true, 8};
  MachInt a = MachInt::from_value(5, s8);
  CHECK_THROWS_AS(machop::div(a, MachInt::from_value(0, s8)), EvalFault);
  CHECK_THROWS_AS(machop::shl(a, MachInt::from_value(8, s8)), EvalFault);
  CHECK_THROWS_AS(machop::shr(a, MachInt::from_value(-1, s8)), EvalFault);
}

TEST_CASE("expression examples") {
  MachType s4{true, 4};
  ConcreteEnv env{{"x", MachInt::from_value(7, s4)}};
  Program p = parse_program("decl x : s4\nx := x + 1\n");
  CHECK(eval_expr(p.at(1).expr, env).value() == -8);  // wraps

  MachType s8{true, 8};
  ConcreteEnv env2{{"x", MachInt::from_value(3, s8)},
                   {"y", MachInt::from_value(3, s8)}};
  Program q = parse_program("decl x : s8\ndecl y : s8\nassume x <= y\n");
  CHECK(eval_expr(q.at(1).expr, env2).value() == 1);

  Program r = parse_program("decl x : s8\ndecl u : u8\nu := (u8) x\n");
  ConcreteEnv env3{{"x", MachInt::from_value(-1, s8)},
                   {"u", MachInt(0, {false, 8})}};
  CHECK(eval_expr(r.at(1).expr, env3).value() == 255);
}

TEST_CASE("eval follows control flow") {
  Program p = testutil::corpus_program("count100.goto");
  ConcreteEnv env{{"x", MachInt::from_value(42, {true, 32})}};
  size_t at_assert = 0;
  int128 x_at_assert = -1;
  RunVerdict v = eval(env, p, 100000, [&](size_t idx, const ConcreteEnv& e) {
    if (p.at(idx).kind == Stmt::Assert) {
      at_assert = idx;
      x_at_assert = e.at("x").value();
    }
  });
  CHECK(v.kind == RunVerdict::Safe);
  CHECK(at_assert == 5);
  CHECK(x_at_assert == 100);  // the loop exits exactly at 100
}

TEST_CASE("falsified assume ends the run safe") {
  Program p = parse_program("decl x : s8\nassume 0 <= x\nassert x <= 5\n");
  ConcreteEnv env{{"x", MachInt::from_value(-3, {true, 8})}};
  CHECK(eval(env, p).kind == RunVerdict::Safe);
  env["x"] = MachInt::from_value(6, {true, 8});
  RunVerdict v = eval(env, p);
  CHECK(v.kind == RunVerdict::AssertFail);
  CHECK(v.stmt == 2);
  CHECK(v.env.at("x").value() == 6);
}

TEST_CASE("step limit") {
  Program p = parse_program("L:\ngoto L\n");
  RunVerdict v = eval({}, p, 50);
  CHECK(v.kind == RunVerdict::StepLimit);
}

TEST_CASE("exhaustive check verdicts") {
  SECTION("wraparound counterexample is the canonical smallest") {
    Program p = testutil::corpus_program("wrap_s4.goto");
    auto r = exhaustive_check(p, 4);
    REQUIRE(r.kind == ExhaustiveResult::Counterexample);
    CHECK(r.cex.at("x").value() == 7);
    CHECK(r.cex.at("t").value() == -8);  // first env in enumeration order
    CHECK(r.failed_at == 3);
  }
  SECTION("count100 at 8 bits is all-safe") {
    Program p = testutil::corpus_program("count100_s8.goto");
    CHECK(exhaustive_check(p, 8).kind == ExhaustiveResult::AllSafe);
  }
  SECTION("infinite loop is inconclusive") {
    Program p = parse_program("decl x : s2\nL:\ngoto L\n");
    CHECK(exhaustive_check(p, 2, 100).kind == ExhaustiveResult::Inconclusive);
  }
  SECTION("width cap is enforced") {
    Program p = parse_program("decl x : s8\nskip\n");
    CHECK_THROWS_AS(exhaustive_check(p, 4), std::invalid_argument);
  }
  SECTION("budget refusal reports the required size") {
    Program p = parse_program("decl x : u8\ndecl y : u8\nskip\n");
    auto r = exhaustive_check(p, 8, 1000, 1000);
    REQUIRE(r.kind == ExhaustiveResult::BudgetExceeded);
    CHECK(r.required == uint128(65536));
  }
}

TEST_CASE("all-safe implies random samples are safe") {
  Program p = testutil::corpus_program("loop_s4.goto");
  REQUIRE(exhaustive_check(p, 4).kind == ExhaustiveResult::AllSafe);
  std::mt19937_64 rng(11);
  MachType s4{true, 4};
  for (int i = 0; i < 1000; ++i) {
    ConcreteEnv env{{"i", MachInt(uint64_t(rng()), s4)}};
    CHECK(eval(env, p).kind == RunVerdict::Safe);
  }
}
