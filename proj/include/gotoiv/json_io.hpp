#pragma once

#include <string>

#include "gotoiv/absint.hpp"
#include "gotoiv/concrete.hpp"
#include "gotoiv/interval_int.hpp"
#include "gotoiv/interval_wrap.hpp"
#include "gotoiv/transform.hpp"
#include "json.hpp"

namespace gotoiv {

// Machine values fit either int64 or uint64; pick whichever represents
// the value exactly.
inline nlohmann::json json_int(int128 v) {
  if (v >= 0 && uint128(v) > uint128(INT64_MAX)) return uint64_t(v);
  return int64_t(v);
}

inline nlohmann::json to_json(const IntInterval& v) {
  nlohmann::json j;
  j["dom"] = "int";
  j["bottom"] = v.bottom;
  if (!v.bottom) {
    j["lo"] = v.lo.finite() ? json_int(v.lo.v) : nlohmann::json("-inf");
    j["hi"] = v.hi.finite() ? json_int(v.hi.v) : nlohmann::json("+inf");
  }
  return j;
}

inline nlohmann::json to_json(const WrapInterval& v) {
  nlohmann::json j;
  j["dom"] = "wrap";
  j["bottom"] = v.bottom;
  if (!v.bottom) {
    j["lo"] = json_int(v.type.value_of(v.start));
    j["hi"] = json_int(v.type.value_of(v.end));
  }
  return j;
}

template <class D>
nlohmann::json domain_map_json(const Program& p, const AbsResult<D>& pa) {
  nlohmann::json arr = nlohmann::json::array();
  for (size_t i = 1; i <= p.size(); ++i) {
    const AbstractEnv<D>& env = pa.entry[i];
    if (env.is_bottom()) continue;  // unreachable: no entry
    nlohmann::json e;
    e["stmt"] = i;
    e["bottom"] = false;
    e["env"] = nlohmann::json::object();
    if (env.entries())
      for (const auto& [name, ptr] : *env.entries())
        e["env"][name] = to_json(*ptr);
    arr.push_back(std::move(e));
  }
  return arr;
}

template <class D>
nlohmann::json assert_report_json(const Program& p, const AbsResult<D>& pa,
                                  const DomainConfig& cfg) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AssertVerdict& v : assertion_report<D>(p, pa, cfg)) {
    nlohmann::json e;
    e["stmt"] = v.stmt;
    e["verdict"] = verdict_name(v.status);
    e["witness"] = nlohmann::json::object();
    const AbstractEnv<D>& env = pa.entry[v.stmt];
    if (!env.is_bottom())
      for (const std::string& name : stmt_vars(p.at(v.stmt))) {
        MachType t = p.symbols.at(name);
        e["witness"][name] = to_json(env.get(name, t));
      }
    arr.push_back(std::move(e));
  }
  return arr;
}

inline nlohmann::json counterexample_json(const ConcreteEnv& env,
                                          size_t failed_at) {
  nlohmann::json j;
  j["verdict"] = "counterexample";
  j["failed_at"] = failed_at;
  j["env"] = nlohmann::json::object();
  for (const auto& [name, v] : env) j["env"][name] = json_int(v.value());
  return j;
}

}  // namespace gotoiv
