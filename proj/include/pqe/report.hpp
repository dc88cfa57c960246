#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pqe/formula.hpp"
#include "pqe/verifier.hpp"

namespace pqe {

inline constexpr std::string_view kToolName = "pqeverify";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Process exit codes.
enum class ExitCode : int {
  ok = 0,
  refuted = 1,
  resource_out = 2,
  usage = 3,
};

ExitCode exit_code_for(VerdictStatus s);

/// FNV-1a 64-bit digest of `bytes`, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Machine-readable record of one verify run. Identical inputs and flags give
/// identical reports except for wall_time_sec.
struct RunReport {
  VerdictStatus status = VerdictStatus::correct;
  std::optional<Witness> witness;
  std::optional<Clause> witness_clause;
  VerifyStats stats;
  std::optional<ResourceLimit> tripped;
  double wall_time_sec = 0;
  std::string problem_digest;
  std::string solution_digest;
  std::size_t num_clauses = 0;
  std::size_t num_vars = 0;
  std::size_t free_vars = 0;
  std::size_t solution_clauses = 0;
  bool shorten = true;
};

nlohmann::ordered_json to_json(const RunReport &report);

/// "1=0 2=1 ..." in ascending variable order.
std::string format_point(const Assignment &point);

} // namespace pqe
