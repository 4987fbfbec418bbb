#pragma once

#include <sstream>
#include <string>

#include "gotoiv/json_io.hpp"
#include "gotoiv/transform.hpp"

namespace gotoiv {

struct RunConfig {
  std::string source;  // program text
  DomainConfig domain;
  StorageMode storage = StorageMode::FullCopy;
  InstrumentMode instrument = InstrumentMode::None;
  bool optimize = false;
  bool emit_annotated = false;
  bool emit_optimized = false;
  bool emit_report = false;
  bool oracle_exhaustive = false;
  unsigned width_cap = 8;
  uint64_t step_limit = 1000000;
  uint64_t iteration_cap = 0;  // 0 = derived from program size
};

// 0 ok; 1 parse/validation; 2 iteration cap; 3 oracle discrepancy;
// 4 refuted assertion / counterexample found.
enum ExitCode {
  kExitOk = 0,
  kExitParse = 1,
  kExitCap = 2,
  kExitDiscrepancy = 3,
  kExitRefuted = 4,
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string annotated;
  std::string optimized;
  std::string report;
  std::string message;  // diagnostics / counterexample, human-oriented
};

// Program text with entry intervals appended as trailing comments.
template <class D>
std::string annotate_program(const Program& p, const AbsResult<D>& pa) {
  std::ostringstream out;
  for (const auto& [name, ty] : p.symbols)
    out << "decl " << name << " : " << ty.to_string() << "\n";
  for (size_t i = 1; i <= p.size(); ++i) {
    out << emit_stmt(p.at(i));
    const AbstractEnv<D>& env = pa.entry[i];
    if (env.is_bottom()) {
      out << "  # unreachable";
    } else if (env.entries() && !env.entries()->empty()) {
      out << "  #";
      bool first = true;
      for (const auto& [name, ptr] : *env.entries()) {
        out << (first ? " " : ", ") << name << " : " << ptr->to_string();
        first = false;
      }
    }
    out << "\n";
  }
  return out.str();
}

template <class D>
size_t tracked_intervals(const AbsResult<D>& pa) {
  size_t n = 0;
  for (const auto& env : pa.entry)
    if (!env.is_bottom() && env.entries()) n += env.entries()->size();
  return n;
}

template <class D>
RunOutcome run_pipeline_with(const RunConfig& rc) {
  RunOutcome out;
  Program p;
  try {
    p = parse_program(rc.source);
  } catch (const ParseError& e) {
    out.exit_code = kExitParse;
    out.message = e.what();
    return out;
  }

  auto pa = compute_abs<D>(p, rc.domain, rc.storage, Schedule::Fifo,
                           rc.iteration_cap);
  if (pa.cap_hit) {
    out.exit_code = kExitCap;
    out.message = "analysis exceeded the iteration cap (" +
                  std::to_string(pa.iteration_cap) +
                  " pops); consider --widening";
    return out;
  }

  if (rc.emit_annotated) out.annotated = annotate_program<D>(p, pa);

  auto checks = check_asserts<D>(p, pa, rc.domain);

  // transformation pipeline: optimize, re-analyze, instrument
  Program work = p;
  AbsResult<D> work_pa = pa;
  InstrumentResult ins;
  if (rc.optimize) {
    work = optimize<D>(work, work_pa, rc.domain);
    work_pa = compute_abs<D>(work, rc.domain, rc.storage, Schedule::Fifo,
                             rc.iteration_cap);
    if (work_pa.cap_hit) {
      out.exit_code = kExitCap;
      out.message = "re-analysis exceeded the iteration cap";
      return out;
    }
  }
  if (rc.instrument != InstrumentMode::None) {
    try {
      ins = instrument<D>(work, work_pa, rc.instrument);
      work = ins.program;
    } catch (const std::runtime_error& e) {
      out.exit_code = kExitParse;
      out.message = e.what();
      return out;
    }
  }
  if (rc.emit_optimized) out.optimized = emit_program(work);

  bool refuted = false;
  for (const auto& c : checks)
    if (c.status == CheckStatus::Refuted) refuted = true;

  bool discrepancy = false;
  bool oracle_cex = false;
  ExhaustiveResult ex{ExhaustiveResult::AllSafe, {}, 0, 0};
  std::string oracle_note;
  if (rc.oracle_exhaustive) {
    unsigned maxw = 0;
    for (const auto& [name, ty] : p.symbols) {
      (void)name;
      maxw = std::max(maxw, ty.width);
    }
    if (maxw > rc.width_cap) {
      oracle_note = "oracle skipped: widths exceed cap";
    } else {
      ex = exhaustive_check(p, rc.width_cap, rc.step_limit);
      if (ex.kind == ExhaustiveResult::BudgetExceeded) {
        oracle_note = "oracle skipped: enumeration budget exceeded";
      } else if (ex.kind == ExhaustiveResult::Counterexample) {
        oracle_cex = true;
        for (const auto& c : checks)
          if (c.stmt == ex.failed_at &&
              (c.status == CheckStatus::Proven ||
               c.status == CheckStatus::Unreachable))
            discrepancy = true;
        out.message = counterexample_json(ex.cex, ex.failed_at).dump();
      } else if (ex.kind == ExhaustiveResult::AllSafe && refuted) {
        discrepancy = true;
        out.message = "oracle discrepancy: refuted assertion but all "
                      "environments are safe";
      }
    }
  }

  if (rc.emit_report) {
    nlohmann::json j;
    j["schema"] = 1;
    j["domain_map"] = domain_map_json<D>(p, pa);
    j["asserts"] = assert_report_json<D>(p, pa, rc.domain);
    j["stats"] = {{"iterations", pa.pops},
                  {"iteration_cap", pa.iteration_cap},
                  {"max_worklist", pa.max_worklist},
                  {"tracked_intervals", tracked_intervals<D>(pa)},
                  {"intervals_allocated", pa.intervals_allocated},
                  {"tables_allocated", pa.tables_allocated},
                  {"storage", storage_mode_name(rc.storage)}};
    if (!oracle_note.empty()) j["oracle_note"] = oracle_note;
    out.report = j.dump(2);
  }

  if (discrepancy)
    out.exit_code = kExitDiscrepancy;
  else if (refuted || oracle_cex)
    out.exit_code = kExitRefuted;
  return out;
}

inline RunOutcome run_pipeline(const RunConfig& rc) {
  if (rc.domain.domain == DomainKind::Wrapped)
    return run_pipeline_with<WrappedDomain>(rc);
  return run_pipeline_with<IntegerDomain>(rc);
}

}  // namespace gotoiv
