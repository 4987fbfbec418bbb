#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotoiv/config.hpp"
#include "gotoiv/ir.hpp"

namespace testutil {

inline std::string corpus_text(const std::string& name) {
  std::string path = std::string(GOTOIV_CORPUS_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline gotoiv::Program corpus_program(const std::string& name) {
  return gotoiv::parse_program(corpus_text(name));
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "count100.goto",      "count100_s8.goto", "count1000.goto", "count1e6.goto",
      "choice.goto",      "choice_s4.goto", "wrap_s4.goto",    "straight.goto",
      "two_loops.goto", "dead.goto",    "contradict.goto", "refute.goto",
      "bitwise_s4.goto", "join_paths.goto", "loop_s4.goto", "guards.goto"};
  return names;
}

// Corpus programs whose state space fits the exhaustive oracle.
inline const std::vector<std::string>& enumerable_corpus() {
  static const std::vector<std::string> names = {
      "count100_s8.goto",    "choice_s4.goto",    "wrap_s4.goto", "straight.goto",
      "two_loops.goto",  "dead.goto",       "contradict.goto",
      "refute.goto",     "bitwise_s4.goto", "join_paths.goto",
      "loop_s4.goto",    "guards.goto"};
  return names;
}

// The 16 precision configurations for one domain kind are generated by
// the three boolean toggles; callers iterate both kinds.
inline std::vector<gotoiv::DomainConfig> all_configs() {
  std::vector<gotoiv::DomainConfig> out;
  for (int dom = 0; dom < 2; ++dom)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int w = 0; w < 2; ++w)
          out.push_back({dom ? gotoiv::DomainKind::Wrapped
                             : gotoiv::DomainKind::Integer,
                         a != 0, b != 0, w != 0});
  return out;
}

}  // namespace testutil
