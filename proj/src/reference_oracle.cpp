#include "pqe/reference_oracle.hpp"

#include <algorithm>
#include <string>

#include "pqe/sat_oracle.hpp"

namespace pqe {
namespace {

using Mask = std::uint64_t;

// A clause split into bit masks over the Y and X enumeration orders.
struct MaskedClause {
  Mask y_pos = 0, y_neg = 0, x_pos = 0, x_neg = 0;
  const Clause *source = nullptr;

  bool satisfied_by_y(Mask y) const {
    return ((y & y_pos) | (~y & y_neg)) != 0;
  }
  bool satisfied_by_x(Mask x) const {
    return ((x & x_pos) | (~x & x_neg)) != 0;
  }
  bool has_x() const { return (x_pos | x_neg) != 0; }
};

// Y variables get bit (n-1-i) for the i-th smallest id so that counting
// upwards enumerates y lexicographically; X variables get bit i.
class BitLayout {
public:
  BitLayout(const VarSet &free, const VarSet &quantified)
      : free_(free.begin(), free.end()),
        quantified_(quantified.begin(), quantified.end()) {}

  std::size_t free_count() const { return free_.size(); }
  std::size_t quantified_count() const { return quantified_.size(); }

  MaskedClause mask(const Clause &c) const {
    MaskedClause m;
    m.source = &c;
    for (Lit l : c) {
      Mask bit = 0;
      bool is_x = false;
      if (auto i = find(free_, l.var())) {
        bit = Mask{1} << (free_.size() - 1 - *i);
      } else if (auto j = find(quantified_, l.var())) {
        bit = Mask{1} << *j;
        is_x = true;
      } else {
        throw FormulaError("variable " + std::to_string(l.var().id) +
                           " outside X and Y");
      }
      if (is_x)
        (l.negative() ? m.x_neg : m.x_pos) |= bit;
      else
        (l.negative() ? m.y_neg : m.y_pos) |= bit;
    }
    return m;
  }

  Assignment free_assignment(Mask y) const {
    Assignment a;
    for (std::size_t i = 0; i < free_.size(); ++i)
      a.set(free_[i], (y >> (free_.size() - 1 - i)) & 1);
    return a;
  }

  Assignment full_assignment(Mask x, Mask y) const {
    Assignment a = free_assignment(y);
    for (std::size_t j = 0; j < quantified_.size(); ++j)
      a.set(quantified_[j], (x >> j) & 1);
    return a;
  }

  Lit free_literal_falsified_by(std::size_t i, Mask y) const {
    bool value = (y >> (free_.size() - 1 - i)) & 1;
    return Lit(free_[i], value);
  }

private:
  static std::optional<std::size_t> find(const std::vector<Var> &vs, Var v) {
    auto it = std::lower_bound(vs.begin(), vs.end(), v);
    if (it == vs.end() || *it != v)
      return std::nullopt;
    return static_cast<std::size_t>(it - vs.begin());
  }

  std::vector<Var> free_;
  std::vector<Var> quantified_;
};

// Decides satisfiability over X of the clauses not satisfied by y.
class SubspaceSolver {
public:
  SubspaceSolver(const BitLayout &layout, const OracleCaps &caps)
      : layout_(layout), caps_(caps) {}

  bool satisfiable(const std::vector<const MaskedClause *> &clauses,
                   Mask y) const {
    reduced_.clear();
    for (auto *c : clauses) {
      if (c->satisfied_by_y(y))
        continue;
      if (!c->has_x())
        return false;
      reduced_.push_back(c);
    }
    if (reduced_.empty())
      return true;
    if (layout_.quantified_count() > caps_.max_exhaustive_quantified)
      return satisfiable_by_sat(y);
    const Mask end = Mask{1} << layout_.quantified_count();
    for (Mask x = 0; x < end; ++x) {
      bool all = true;
      for (auto *c : reduced_)
        if (!c->satisfied_by_x(x)) {
          all = false;
          break;
        }
      if (all)
        return true;
    }
    return false;
  }

private:
  bool satisfiable_by_sat(Mask y) const {
    std::vector<Clause> clauses;
    for (auto *c : reduced_)
      clauses.push_back(*c->source);
    auto outcome =
        solve_formula(cofactor(CnfFormula(std::move(clauses)),
                               layout_.free_assignment(y)));
    return outcome.is_sat();
  }

  const BitLayout &layout_;
  const OracleCaps &caps_;
  mutable std::vector<const MaskedClause *> reduced_;
};

void check_free_cap(const PqeProblem &problem, const OracleCaps &caps) {
  if (problem.free_vars().size() > caps.max_free ||
      problem.free_vars().size() > 62)
    throw OracleCapExceeded("|Y| = " +
                            std::to_string(problem.free_vars().size()) +
                            " exceeds the brute-force cap of " +
                            std::to_string(caps.max_free));
}

struct MaskedProblem {
  std::vector<MaskedClause> clauses;
  std::vector<const MaskedClause *> all;
  std::vector<const MaskedClause *> rest; // F \ G
  std::vector<const MaskedClause *> targets;
};

MaskedProblem mask_problem(const PqeProblem &problem,
                           const BitLayout &layout) {
  MaskedProblem m;
  const CnfFormula &f = problem.formula();
  m.clauses.reserve(f.size());
  for (auto &c : f)
    m.clauses.push_back(layout.mask(c));
  for (std::size_t i = 0; i < f.size(); ++i) {
    m.all.push_back(&m.clauses[i]);
    (problem.is_target(i) ? m.targets : m.rest).push_back(&m.clauses[i]);
  }
  return m;
}

} // namespace

EquivalenceReport brute_equiv(const PqeProblem &problem, const Solution &h,
                              const OracleCaps &caps) {
  check_free_cap(problem, caps);
  BitLayout layout(problem.free_vars(), problem.quantified_vars());
  MaskedProblem m = mask_problem(problem, layout);
  std::vector<MaskedClause> h_masks;
  for (auto &c : h.formula())
    h_masks.push_back(layout.mask(c));
  SubspaceSolver solver(layout, caps);

  EquivalenceReport report;
  const Mask end = Mask{1} << layout.free_count();
  for (Mask y = 0; y < end; ++y) {
    bool whole = solver.satisfiable(m.all, y);
    bool rest = whole || solver.satisfiable(m.rest, y);
    bool h_true = std::all_of(h_masks.begin(), h_masks.end(),
                              [y](const MaskedClause &c) {
                                return c.satisfied_by_y(y);
                              });
    bool right = h_true && rest;
    if (whole != right) {
      report.equivalent = false;
      report.first_divergence = layout.free_assignment(y);
      report.side_values = {whole, right};
      return report;
    }
  }
  return report;
}

BoundaryCensus enumerate_boundary_points(const PqeProblem &problem,
                                         const Solution *extra,
                                         const OracleCaps &caps) {
  const std::size_t nvars =
      problem.free_vars().size() + problem.quantified_vars().size();
  if (nvars > caps.max_census_vars || nvars > 62)
    throw OracleCapExceeded("census over " + std::to_string(nvars) +
                            " variables exceeds the cap of " +
                            std::to_string(caps.max_census_vars));
  BitLayout layout(problem.free_vars(), problem.quantified_vars());
  MaskedProblem m = mask_problem(problem, layout);
  std::vector<MaskedClause> h_masks;
  if (extra)
    for (auto &c : extra->formula())
      h_masks.push_back(layout.mask(c));
  std::vector<const MaskedClause *> whole = m.all;
  std::vector<const MaskedClause *> others = m.rest;
  for (auto &c : h_masks) {
    whole.push_back(&c);
    others.push_back(&c);
  }

  BoundaryCensus census;
  const Mask y_end = Mask{1} << layout.free_count();
  const Mask x_end = Mask{1} << layout.quantified_count();
  std::vector<const MaskedClause *> others_left, targets_left;
  for (Mask y = 0; y < y_end; ++y) {
    // G must be falsifiable and F \ G ∧ H satisfiable inside y.
    bool possible = true;
    targets_left.clear();
    for (auto *c : m.targets) {
      if (c->satisfied_by_y(y)) {
        possible = false;
        break;
      }
      targets_left.push_back(c);
    }
    if (!possible)
      continue;
    others_left.clear();
    for (auto *c : others) {
      if (c->satisfied_by_y(y))
        continue;
      if (!c->has_x()) {
        possible = false;
        break;
      }
      others_left.push_back(c);
    }
    if (!possible)
      continue;

    std::uint64_t points = 0;
    std::vector<Mask> first_xs;
    for (Mask x = 0; x < x_end; ++x) {
      bool boundary = true;
      for (auto *c : targets_left)
        if (c->satisfied_by_x(x)) {
          boundary = false;
          break;
        }
      if (!boundary)
        continue;
      for (auto *c : others_left)
        if (!c->satisfied_by_x(x)) {
          boundary = false;
          break;
        }
      if (!boundary)
        continue;
      ++points;
      if (census.sample_points.size() + first_xs.size() < caps.census_samples)
        first_xs.push_back(x);
    }
    if (points == 0)
      continue;

    bool subspace_sat = false;
    for (Mask x = 0; x < x_end && !subspace_sat; ++x) {
      bool all = true;
      for (auto *c : whole)
        if (!c->satisfied_by_y(y) && !c->satisfied_by_x(x)) {
          all = false;
          break;
        }
      subspace_sat = all;
    }
    census.total += points;
    (subspace_sat ? census.unremovable : census.removable) += points;
    for (Mask x : first_xs)
      census.sample_points.push_back(layout.full_assignment(x, y));
  }
  return census;
}

Solution naive_pqe_solve(const PqeProblem &problem, const OracleCaps &caps) {
  check_free_cap(problem, caps);
  BitLayout layout(problem.free_vars(), problem.quantified_vars());
  MaskedProblem m = mask_problem(problem, layout);
  SubspaceSolver solver(layout, caps);

  std::vector<Clause> h;
  const Mask end = Mask{1} << layout.free_count();
  for (Mask y = 0; y < end; ++y) {
    if (solver.satisfiable(m.all, y) || !solver.satisfiable(m.rest, y))
      continue;
    std::vector<Lit> lits;
    for (std::size_t i = 0; i < layout.free_count(); ++i)
      lits.push_back(layout.free_literal_falsified_by(i, y));
    h.emplace_back(std::move(lits));
  }
  return Solution(CnfFormula(std::move(h)), problem);
}

} // namespace pqe
