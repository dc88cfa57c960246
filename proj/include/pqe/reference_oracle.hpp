#pragma once

// Brute-force ground truth for small PQE problems.
//
// Everything here enumerates full assignments to Y in lexicographic order
// (ascending variable ids, lowest id most significant, 0 before 1) and
// decides satisfiability over X by exhaustive enumeration, falling back to
// the SAT engine only when X is too large to enumerate. Caps are hard errors.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pqe/formula.hpp"

namespace pqe {

class OracleCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OracleCaps {
  /// Maximum |Y| for brute_equiv and naive_pqe_solve.
  std::size_t max_free = 20;
  /// Maximum |X| decided by enumeration; larger X goes to the SAT engine.
  std::size_t max_exhaustive_quantified = 20;
  /// Maximum |vars(F) ∪ vars(H)| for the boundary-point census.
  std::size_t max_census_vars = 24;
  /// Number of boundary points kept as samples by the census.
  std::size_t census_samples = 8;
};

struct EquivalenceReport {
  bool equivalent = true;
  /// Lexicographically smallest y where the two sides differ.
  std::optional<Assignment> first_divergence;
  /// (∃X[F], H ∧ ∃X[F \ G]) evaluated at first_divergence.
  std::pair<bool, bool> side_values{false, false};
};

struct BoundaryCensus {
  std::uint64_t total = 0;
  std::uint64_t removable = 0;
  std::uint64_t unremovable = 0;
  std::vector<Assignment> sample_points;
};

/// Decides ∃X[F] ≡ H ∧ ∃X[F \ G] by enumerating every full y.
EquivalenceReport brute_equiv(const PqeProblem &problem, const Solution &h,
                              const OracleCaps &caps = {});

/// Counts the G-boundary points of F (or of F ∧ H when `extra` is given) and
/// splits them into Y-removable and Y-unremovable.
BoundaryCensus enumerate_boundary_points(const PqeProblem &problem,
                                         const Solution *extra = nullptr,
                                         const OracleCaps &caps = {});

/// H = the conjunction, over every y with F|y unsatisfiable and (F \ G)|y
/// satisfiable, of the full-length clause over Y falsified by y.
Solution naive_pqe_solve(const PqeProblem &problem,
                         const OracleCaps &caps = {});

} // namespace pqe
