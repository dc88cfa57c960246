#pragma once

// Scaling benchmark over random problem families.
//
// Random problems at 70-85 variables are far beyond the brute-force solver,
// so each instance first gets a correct solution from derive_solution(),
// then that solution is verified and timed.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqe/formula.hpp"
#include "pqe/problem_gen.hpp"
#include "pqe/verifier.hpp"

namespace pqe {

struct DerivedSolution {
  std::optional<Solution> solution; // absent when the budget ran out
  std::optional<ResourceLimit> tripped;
};

/// Builds a solution by enumerating the boundary points of each clause of G
/// once. A Y-removable point (x, y) adds the clause over Y negating a
/// minimized assumption core of the unsatisfiable F|y, so every added clause
/// is implied by F; a Y-unremovable one is plugged as in the verifier.
DerivedSolution derive_solution(const PqeProblem &problem,
                                const VerifyOptions &options = {});

enum class BenchOutcome { verified, refuted, derive_timeout, verify_timeout };
const char *to_string(BenchOutcome o);

struct BenchRecord {
  std::uint32_t instance = 0;
  std::uint32_t size = 0;
  std::uint64_t seed = 0;
  std::size_t num_clauses = 0;
  std::size_t num_vars = 0;
  std::size_t free_vars = 0;
  std::size_t solution_clauses = 0;
  BenchOutcome outcome = BenchOutcome::verified;
  double derive_seconds = 0;
  double verify_seconds = 0;
  VerifyStats stats;
};

struct BenchOptions {
  std::vector<std::uint32_t> sizes{70, 75, 80, 85};
  std::uint32_t per_size = 25;
  GenParams base;
  double time_limit_sec = 600; // per verification
  double derive_time_limit_sec = 2400;
  unsigned threads = 1;
  bool shorten = true;
  /// Called after each instance finishes, from the worker thread.
  std::function<void(const BenchRecord &)> on_record;
};

/// Runs the benchmark; records are sorted by instance id.
std::vector<BenchRecord> run_bench(const BenchOptions &options);

std::string bench_csv(const std::vector<BenchRecord> &records);

struct SizeSummary {
  std::uint32_t size = 0;
  std::size_t instances = 0;
  std::size_t timeouts = 0;
  /// Instances that reached verification; derive timeouts are not timed.
  std::size_t timed = 0;
  /// Over the timed instances; a verify timeout counts its elapsed time.
  double mean_verify_seconds = 0;
  double mean_solution_clauses = 0;
};
std::vector<SizeSummary> summarize(const std::vector<BenchRecord> &records);

} // namespace pqe
