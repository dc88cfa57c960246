#pragma once

// Verification of PQE solutions.
//
// H is a correct solution for taking G out of ∃X[F] iff (a) F implies every
// clause of H and (b) G is redundant in ∃X[F ∧ H]. Part (a) is one SAT query
// per clause of H. Part (b) checks each clause C of G in turn by enumerating
// C-boundary points of F ∧ H: a Y-removable point refutes redundancy, a
// Y-unremovable one is excluded with a plugging clause over Y and the search
// continues. A redundant C is removed from the working formula before the
// next clause of G is checked.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pqe/formula.hpp"
#include "pqe/sat_oracle.hpp"

namespace pqe {

/// Thrown when a SAT query needed by a formula-level predicate runs out of
/// budget.
class ResourceExhausted : public std::runtime_error {
public:
  ResourceExhausted(ResourceLimit which)
      : std::runtime_error(std::string("resource limit reached: ") +
                           to_string(which)),
        which(which) {}
  ResourceLimit which;
};

enum class BoundaryKind { y_removable, y_unremovable };

/// Classifies a boundary point (x, y) of `f` by the satisfiability of f|y.
/// `p` must be a boundary point of f w.r.t. `targets` (FormulaError
/// otherwise). Throws ResourceExhausted when the SAT query runs out of budget.
BoundaryKind classify_boundary_point(const CnfFormula &f,
                                     std::span<const std::size_t> targets,
                                     const VarSet &quantified,
                                     const Assignment &p,
                                     const SatLimits &limits = {});
BoundaryKind classify_boundary_point(const PqeProblem &problem,
                                     const Assignment &p,
                                     const SatLimits &limits = {});

struct VerifyOptions {
  SatLimits limits;
  bool shorten = true;
  std::uint64_t iteration_cap = 10'000'000;
  SatOptions sat;
  /// When set, receives the oracle's clause database (guards included) at
  /// the end of ver_pqe.
  CnfFormula *database_out = nullptr;
};

struct VerifyStats {
  std::uint64_t sat_calls_implication = 0;
  std::uint64_t sat_calls_redundancy = 0;
  std::uint64_t boundary_points_examined = 0;
  std::uint64_t plugging_clauses_added = 0;
  std::uint64_t shortened_literal_drops = 0;
};

enum class VerdictStatus { correct, not_implied, not_redundant, resource_out };
const char *to_string(VerdictStatus s);

struct Witness {
  /// Index into H for not_implied, into F (a member of G) for not_redundant.
  std::size_t clause_index = 0;
  /// Full over vars(F) ∪ vars(H).
  Assignment point;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::correct;
  std::optional<Witness> witness;
  VerifyStats stats;
  std::optional<ResourceLimit> tripped;
};

/// The formula F ∧ H held by one SAT oracle for a whole verification run.
///
/// Clauses that may later be removed (the members of G) are guarded by a
/// fresh activation variable, so "removing" a clause only changes which
/// guards are assumed; the oracle's database and its learned clauses persist.
class WorkingFormula {
public:
  WorkingFormula(const CnfFormula &base,
                 std::span<const std::size_t> removable,
                 const VarSet &quantified, const VerifyOptions &options = {});

  /// Appends clauses that stay for the rest of the run.
  void append(const CnfFormula &clauses);
  /// Drops a removable clause from the working formula, permanently.
  void remove(std::size_t index);

  bool is_live(std::size_t index) const { return live_.at(index); }
  bool is_removable(std::size_t index) const;
  const Clause &clause(std::size_t index) const { return clauses_.at(index); }
  std::size_t size() const { return clauses_.size(); }

  /// Live clauses as a formula; `index_map[i]` is the original index of
  /// clause i of the result.
  CnfFormula snapshot(std::vector<std::size_t> *index_map = nullptr) const;

  /// Guard literals enabling every live removable clause except `skip`.
  std::vector<Lit> guards(std::optional<std::size_t> skip = {}) const;

  const VarSet &quantified() const { return quantified_; }
  /// Variables of the formula outside X (guard variables excluded).
  const VarSet &free_vars() const { return free_; }
  /// Variables of the formula proper (guard variables excluded).
  const VarSet &formula_vars() const { return vars_; }

  SatOracle &oracle() { return oracle_; }
  const VerifyOptions &options() const { return options_; }

private:
  std::vector<Clause> clauses_;
  std::vector<bool> live_;
  std::vector<std::optional<Var>> guard_;
  VarSet quantified_;
  VarSet free_;
  VarSet vars_;
  VerifyOptions options_;
  SatOracle oracle_;
};

struct ImplicationResult {
  SatStatus status = SatStatus::unsat; // unsat: every clause implied
  std::optional<Witness> witness;      // present iff status == sat
  std::optional<ResourceLimit> tripped;
};

/// Checks F ⇒ C for every clause C of H, in order, stopping at the first
/// failure. `formula` must hold F (and not yet H).
ImplicationResult check_implication(WorkingFormula &formula,
                                    const CnfFormula &h, VerifyStats &stats);
/// One-shot form: nullopt iff every clause of h is implied by f. Throws
/// ResourceExhausted if the limits are hit.
std::optional<Witness> check_implication(const CnfFormula &f,
                                         const CnfFormula &h,
                                         const SatLimits &limits = {});

enum class RedundancyStatus { redundant, not_redundant, resource_out };

struct RedundancyResult {
  RedundancyStatus status = RedundancyStatus::redundant;
  /// A Y-removable C-boundary point; present iff not_redundant.
  std::optional<Assignment> point;
  std::optional<ResourceLimit> tripped;
};

/// Decides whether the clause at `c_index` is redundant in ∃X[formula],
/// where `formula` is the live part of F ∧ H. The plugging set is local to
/// this call.
RedundancyResult check_red(WorkingFormula &formula, std::size_t c_index,
                           VerifyStats &stats);
/// One-shot form over an explicit F ∧ H.
RedundancyResult check_red(const CnfFormula &f_and_h, const VarSet &quantified,
                           std::size_t c_index,
                           const VerifyOptions &options = {},
                           VerifyStats *stats = nullptr);

/// Builds a plugging clause over Y falsified by `y_part`.
///
/// `x_star` is an assignment to X satisfying (f_and_h)|y_part. With
/// `shorten`, the variables of y_part are visited in ascending id order and a
/// variable is dropped when x_star still satisfies the cofactor of f_and_h by
/// the reduced y assignment. Without it the full-length clause is returned.
Clause plug_clause(const Assignment &y_part, const Assignment &x_star,
                   const CnfFormula &f_and_h, bool shorten);

/// Decides whether H is a solution of the PQE problem.
Verdict ver_pqe(const PqeProblem &problem, const Solution &h,
                const VerifyOptions &options = {});

} // namespace pqe
