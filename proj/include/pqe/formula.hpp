#pragma once

// CNF formulas, assignments and the PQE problem structure.
//
// Literals use the DIMACS convention: variable ids start at 1, a literal is
// +id or -id, and 0 is reserved as a terminator. Clauses are deduplicated on
// construction and tautologies are rejected. Everything here is immutable
// once built and safe to share between threads.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqe {

class FormulaError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Var {
  std::uint32_t id = 0;

  constexpr Var() = default;
  constexpr explicit Var(std::uint32_t id) : id(id) {}

  friend constexpr auto operator<=>(Var, Var) = default;
};

using VarSet = std::set<Var>;

class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negative)
      : code_(negative ? -static_cast<std::int32_t>(v.id)
                       : static_cast<std::int32_t>(v.id)) {}

  /// Builds a literal from a signed DIMACS integer. Throws on 0.
  static Lit from_dimacs(std::int64_t value);

  constexpr std::int32_t dimacs() const { return code_; }
  constexpr Var var() const {
    return Var(static_cast<std::uint32_t>(code_ < 0 ? -code_ : code_));
  }
  constexpr bool negative() const { return code_ < 0; }
  constexpr Lit operator~() const { return Lit(var(), !negative()); }

  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  std::int32_t code_ = 0;
};

class Clause {
public:
  Clause() = default;
  /// Deduplicates literals (keeping first occurrence order). Throws
  /// FormulaError if the literal set contains both v and -v.
  explicit Clause(std::vector<Lit> lits);
  Clause(std::initializer_list<std::int32_t> dimacs);

  static Clause from_dimacs(std::span<const std::int32_t> dimacs);

  std::span<const Lit> literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool mentions(Var v) const;
  std::vector<std::int32_t> to_dimacs() const;
  std::string to_string() const;

  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  friend bool operator==(const Clause &, const Clause &) = default;

private:
  std::vector<Lit> lits_;
};

class Assignment {
public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::uint32_t, bool>> init);

  void set(Var v, bool value) { bindings_[v] = value; }
  void erase(Var v) { bindings_.erase(v); }
  std::optional<bool> value(Var v) const;
  bool assigns(Var v) const { return bindings_.count(v) != 0; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// Value of a literal, or nullopt when its variable is unassigned.
  std::optional<bool> value(Lit l) const;

  VarSet assigned_vars() const;
  bool is_full_over(const VarSet &vars) const;
  /// q ⊆ r: every variable assigned here has the same value in `other`.
  bool contained_in(const Assignment &other) const;
  /// Restriction to `vars` (variables outside are dropped).
  Assignment restricted_to(const VarSet &vars) const;
  /// Union of two assignments; throws FormulaError on a conflicting variable.
  Assignment merged_with(const Assignment &other) const;

  std::string to_string() const;

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const Assignment &, const Assignment &) = default;

private:
  std::map<Var, bool> bindings_;
};

class CnfFormula {
public:
  CnfFormula() = default;
  explicit CnfFormula(std::vector<Clause> clauses);
  CnfFormula(std::initializer_list<Clause> clauses);

  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const Clause &operator[](std::size_t i) const { return clauses_.at(i); }
  std::span<const Clause> clauses() const { return clauses_; }
  const VarSet &vars() const { return vars_; }
  /// Largest variable id mentioned, 0 for a formula without literals.
  std::uint32_t var_span() const { return var_span_; }

  /// Copy without the clauses at the given indices.
  CnfFormula without(std::span<const std::size_t> indices) const;
  /// Clauses of this formula followed by the clauses of `other`.
  CnfFormula conjoined_with(const CnfFormula &other) const;

  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  friend bool operator==(const CnfFormula &a, const CnfFormula &b) {
    return a.clauses_ == b.clauses_;
  }

private:
  std::vector<Clause> clauses_;
  VarSet vars_;
  std::uint32_t var_span_ = 0;
};

enum class ClauseValue { satisfied, falsified, undecided };

ClauseValue eval_clause(const Clause &c, const Assignment &q);
/// True iff every clause is satisfied by q.
bool satisfies(const Assignment &q, const CnfFormula &f);
/// True iff some clause is falsified by q.
bool falsifies(const Assignment &q, const CnfFormula &f);

/// f|q: drops clauses satisfied by q and removes q-falsified literals from the
/// rest. The result may contain the empty clause.
CnfFormula cofactor(const CnfFormula &f, const Assignment &q);

/// True iff p falsifies every clause indexed by g and satisfies all other
/// clauses of f. Throws FormulaError if p is not full over vars(f) or an index
/// is out of range.
bool is_boundary_point(const CnfFormula &f, std::span<const std::size_t> g,
                       const Assignment &p);

/// ∃X[F] together with the clause subset G (tracked by index) to be taken out
/// of the quantifier scope.
class PqeProblem {
public:
  /// Validates: X ⊆ vars(F), G nonempty, indices in range and distinct, every
  /// G clause shares a variable with X. Throws FormulaError otherwise.
  PqeProblem(CnfFormula formula, VarSet quantified,
             std::vector<std::size_t> targets);

  const CnfFormula &formula() const { return formula_; }
  const VarSet &quantified_vars() const { return quantified_; }
  /// Y = vars(F) \ X.
  const VarSet &free_vars() const { return free_; }
  /// G as indices into formula(), in declared order.
  const std::vector<std::size_t> &targets() const { return targets_; }
  bool is_target(std::size_t index) const;
  /// F \ G.
  CnfFormula remainder() const { return formula_.without(targets_); }

  friend bool operator==(const PqeProblem &, const PqeProblem &) = default;

private:
  CnfFormula formula_;
  VarSet quantified_;
  VarSet free_;
  std::vector<std::size_t> targets_;
};

/// A candidate H(Y). Construction rejects any variable outside Y.
class Solution {
public:
  Solution(CnfFormula clauses, const PqeProblem &problem);

  const CnfFormula &formula() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  friend bool operator==(const Solution &, const Solution &) = default;

private:
  CnfFormula clauses_;
};

/// Splits a full assignment into its X part and its Y part.
struct PointParts {
  Assignment x;
  Assignment y;
};
PointParts split_point(const Assignment &p, const VarSet &quantified);

} // namespace pqe
