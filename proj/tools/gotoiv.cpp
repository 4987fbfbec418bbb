#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gotoiv/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Interval analysis for a mini GOTO language"};

  std::string input;
  std::string domain = "integer";
  std::string storage = "full-copy";
  std::string instrument = "none";
  std::string oracle = "none";
  std::vector<std::string> emits;
  gotoiv::RunConfig rc;
  bool arithmetic = false, bitwise = false, widening = false, optimize = false;

  app.add_option("input", input, "GOTO program file")->required();
  app.add_option("--domain", domain, "integer | wrapped")
      ->check(CLI::IsMember({"integer", "wrapped"}));
  app.add_flag("--arithmetic", arithmetic, "precise arithmetic transfer");
  app.add_flag("--bitwise", bitwise, "precise bitwise transfer");
  app.add_flag("--widening", widening, "extrapolation widening");
  app.add_option("--storage", storage,
                 "full-copy | shared-interval | shared-domain-cow")
      ->check(CLI::IsMember({"full-copy", "shared-interval",
                             "shared-domain-cow"}));
  app.add_option("--instrument", instrument,
                 "none | loop | guard-full | guard-local | all-full | "
                 "all-local")
      ->check(CLI::IsMember({"none", "loop", "guard-full", "guard-local",
                             "all-full", "all-local"}));
  app.add_flag("--optimize", optimize,
               "singleton propagation + dead-code removal");
  app.add_option("--emit", emits, "annotated | optimized | report-json")
      ->check(CLI::IsMember({"annotated", "optimized", "report-json"}));
  app.add_option("--oracle", oracle, "none | exhaustive")
      ->check(CLI::IsMember({"none", "exhaustive"}));
  app.add_option("--width-cap", rc.width_cap, "oracle enumeration width cap");
  app.add_option("--step-limit", rc.step_limit, "concrete run step limit");
  app.add_option("--iteration-cap", rc.iteration_cap,
                 "work-list pop cap (0 = derived)");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input);
  if (!in) {
    std::cerr << "error: cannot open '" << input << "'\n";
    return gotoiv::kExitParse;
  }
  std::ostringstream src;
  src << in.rdbuf();
  rc.source = src.str();

  rc.domain.domain = domain == "wrapped" ? gotoiv::DomainKind::Wrapped
                                         : gotoiv::DomainKind::Integer;
  rc.domain.arithmetic = arithmetic;
  rc.domain.bitwise = bitwise;
  rc.domain.widening = widening;
  rc.optimize = optimize;
  rc.storage = storage == "shared-interval"
                   ? gotoiv::StorageMode::SharedInterval
               : storage == "shared-domain-cow"
                   ? gotoiv::StorageMode::SharedDomainCow
                   : gotoiv::StorageMode::FullCopy;
  rc.instrument = instrument == "loop"         ? gotoiv::InstrumentMode::Loop
                  : instrument == "guard-full" ? gotoiv::InstrumentMode::GuardFull
                  : instrument == "guard-local"
                      ? gotoiv::InstrumentMode::GuardLocal
                  : instrument == "all-full"  ? gotoiv::InstrumentMode::AllFull
                  : instrument == "all-local" ? gotoiv::InstrumentMode::AllLocal
                                              : gotoiv::InstrumentMode::None;
  for (const std::string& e : emits) {
    if (e == "annotated") rc.emit_annotated = true;
    if (e == "optimized") rc.emit_optimized = true;
    if (e == "report-json") rc.emit_report = true;
  }
  rc.oracle_exhaustive = oracle == "exhaustive";

  gotoiv::RunOutcome out = gotoiv::run_pipeline(rc);
  if (!out.annotated.empty()) std::cout << out.annotated;
  if (!out.optimized.empty()) std::cout << out.optimized;
  if (!out.report.empty()) std::cout << out.report << "\n";
  if (!out.message.empty()) std::cerr << out.message << "\n";
  return out.exit_code;
}
