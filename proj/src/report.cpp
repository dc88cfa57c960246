#include "pqe/report.hpp"

#include <cstdio>
#include <sstream>

namespace pqe {

ExitCode exit_code_for(VerdictStatus s) {
  switch (s) {
  case VerdictStatus::correct:
    return ExitCode::ok;
  case VerdictStatus::not_implied:
  case VerdictStatus::not_redundant:
    return ExitCode::refuted;
  case VerdictStatus::resource_out:
    return ExitCode::resource_out;
  }
  return ExitCode::usage;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_point(const Assignment &point) {
  std::ostringstream os;
  bool first = true;
  for (auto [v, value] : point) {
    if (!first)
      os << ' ';
    first = false;
    os << v.id << '=' << (value ? 1 : 0);
  }
  return os.str();
}

nlohmann::ordered_json to_json(const RunReport &r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["status"] = to_string(r.status);
  j["exit_code"] = static_cast<int>(exit_code_for(r.status));
  j["resource_limit"] =
      r.tripped ? nlohmann::ordered_json(to_string(*r.tripped)) : nullptr;
  if (r.witness) {
    nlohmann::ordered_json w;
    w["kind"] = r.status == VerdictStatus::not_implied ? "solution_clause"
                                                       : "target_clause";
    w["clause_ordinal"] = r.witness->clause_index + 1;
    if (r.witness_clause)
      w["clause"] = r.witness_clause->to_dimacs();
    auto point = nlohmann::ordered_json::array();
    for (auto [v, value] : r.witness->point)
      point.push_back({{"var", v.id}, {"value", value ? 1 : 0}});
    w["point"] = std::move(point);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["stats"] = {
      {"sat_calls_implication", r.stats.sat_calls_implication},
      {"sat_calls_redundancy", r.stats.sat_calls_redundancy},
      {"boundary_points_examined", r.stats.boundary_points_examined},
      {"plugging_clauses_added", r.stats.plugging_clauses_added},
      {"shortened_literal_drops", r.stats.shortened_literal_drops},
  };
  j["problem"] = {
      {"clauses", r.num_clauses},
      {"vars", r.num_vars},
      {"free_vars", r.free_vars},
      {"solution_clauses", r.solution_clauses},
  };
  j["options"] = {{"shorten", r.shorten}};
  j["inputs"] = {{"problem_fnv1a64", r.problem_digest},
                 {"solution_fnv1a64", r.solution_digest}};
  j["wall_time_sec"] = r.wall_time_sec;
  return j;
}

} // namespace pqe
