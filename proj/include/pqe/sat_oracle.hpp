#pragma once

// Incremental CDCL SAT solver used as the oracle for every satisfiability
// query the verifier issues.
//
// Two-literal watching, first-UIP learning with basic minimization, VSIDS
// branching with a false default polarity. Assumptions are taken as the first
// decisions, so the clause database and learned clauses persist between calls.
// Restarts are available but off by default. Resource limits (conflict count
// and wall-clock time) are armed by set_limits() and checked on solve entry
// and at every conflict.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pqe/formula.hpp"

namespace pqe {

enum class SatStatus { sat, unsat, resource_out };
enum class ResourceLimit { conflicts, time, iterations };

const char *to_string(SatStatus s);
const char *to_string(ResourceLimit l);

struct SatLimits {
  std::optional<std::uint64_t> max_conflicts;
  std::optional<double> time_budget_sec;
};

struct SatOutcome {
  SatStatus status = SatStatus::unsat;
  /// Full assignment to every solver variable; present iff status == sat.
  std::optional<Assignment> model;
  /// On unsat: a subset of the assumptions that is already inconsistent with
  /// the database (empty when the database itself is unsatisfiable).
  std::vector<Lit> failed_assumptions;
  /// On resource_out: which budget tripped.
  std::optional<ResourceLimit> tripped;

  bool is_sat() const { return status == SatStatus::sat; }
  bool is_unsat() const { return status == SatStatus::unsat; }
};

struct SatStats {
  std::uint64_t total_calls = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t learned_deleted = 0;
};

struct SatOptions {
  bool restarts = false;
  /// Nonzero seeds perturb the initial variable activities deterministically.
  std::uint64_t seed = 0;
};

class SatOracle {
public:
  explicit SatOracle(SatOptions options = {});

  /// Allocates a fresh variable with id num_vars()+1.
  Var new_var();
  /// Makes variables 1..n known to the solver.
  void reserve_vars(std::uint32_t n);
  std::uint32_t num_vars() const { return num_vars_; }

  /// Adds a clause permanently. Variables beyond num_vars() are allocated.
  void add_clause(const Clause &c);
  void add_formula(const CnfFormula &f);

  /// Decides the database under the given assumption literals. Every
  /// assumption must be over a known variable (std::invalid_argument
  /// otherwise).
  SatOutcome solve(std::span<const Lit> assumptions = {});
  SatOutcome solve(const Assignment &assumptions);

  /// Arms budgets relative to the current conflict count and time. Limits
  /// stay armed for all subsequent calls.
  void set_limits(const SatLimits &limits);

  const SatStats &stats() const { return stats_; }

  /// The clauses added through add_clause, in insertion order (learned
  /// clauses are not included).
  CnfFormula database() const { return CnfFormula(original_); }

private:
  using LitIdx = std::uint32_t; // 2 * (id - 1) + negative
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = UINT32_MAX;

  struct ClauseRec {
    std::uint32_t begin = 0; // into arena_
    std::uint32_t size = 0;
    double activity = 0;
    bool learnt = false;
    bool removed = false;
  };
  struct Watcher {
    CRef cref;
    LitIdx blocker;
  };

  static LitIdx index_of(Lit l) {
    return 2 * (l.var().id - 1) + (l.negative() ? 1 : 0);
  }
  static Lit lit_of(LitIdx i) { return Lit(Var(i / 2 + 1), i & 1); }
  static std::uint32_t var_of(LitIdx i) { return i >> 1; }

  // 1 = true, -1 = false, 0 = unassigned
  std::int8_t value(LitIdx l) const {
    std::int8_t v = assigns_[var_of(l)];
    return (l & 1) ? static_cast<std::int8_t>(-v) : v;
  }
  std::uint32_t level() const {
    return static_cast<std::uint32_t>(trail_lim_.size());
  }

  void grow_to(std::uint32_t n);
  void enqueue(LitIdx l, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<LitIdx> &learnt,
               std::uint32_t &backtrack_level);
  bool literal_redundant(LitIdx l);
  void analyze_final(LitIdx failed, std::vector<Lit> &out);
  void cancel_until(std::uint32_t lvl);
  CRef attach(std::vector<LitIdx> lits, bool learnt);
  void reduce_learnts();
  void simplify();
  void purge_removed();
  bool locked(CRef cr) const;

  void bump_var(std::uint32_t v);
  void bump_clause(ClauseRec &c);
  void decay_activities();

  // Activity-ordered max-heap over unassigned variables.
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  std::uint32_t heap_pop();
  bool heap_contains(std::uint32_t v) const { return heap_pos_[v] >= 0; }

  bool limit_hit(std::optional<ResourceLimit> &which) const;
  void check_model(const std::vector<std::int8_t> &model,
                   std::span<const Lit> assumptions);

  SatOptions options_;
  SatStats stats_;
  std::uint32_t num_vars_ = 0;
  bool ok_ = true;

  std::vector<Clause> original_;
  // Clauses still re-checked against each model, one entry per array.
  std::vector<LitIdx> check_lits_;
  std::vector<LitIdx> check_witness_;
  std::vector<std::uint32_t> check_begin_, check_size_, check_id_;
  std::vector<ClauseRec> clauses_;
  std::vector<LitIdx> arena_;
  std::size_t garbage_ = 0;
  std::size_t simplified_at_ = 0;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<std::int8_t> assigns_;
  std::vector<std::uint32_t> levels_;
  std::vector<CRef> reasons_;
  std::vector<LitIdx> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_pos_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;

  mutable std::vector<std::uint8_t> seen_;
  std::vector<LitIdx> analyze_stack_;

  std::optional<std::uint64_t> conflict_cap_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

/// One-shot solve of f with a fresh oracle.
SatOutcome solve_formula(const CnfFormula &f, const SatLimits &limits = {});

} // namespace pqe
