#include "pqe/verifier.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace pqe {

const char *to_string(VerdictStatus s) {
  switch (s) {
  case VerdictStatus::correct:
    return "correct";
  case VerdictStatus::not_implied:
    return "not_implied";
  case VerdictStatus::not_redundant:
    return "not_redundant";
  case VerdictStatus::resource_out:
    return "resource_out";
  }
  return "?";
}

BoundaryKind classify_boundary_point(const CnfFormula &f,
                                     std::span<const std::size_t> targets,
                                     const VarSet &quantified,
                                     const Assignment &p,
                                     const SatLimits &limits) {
  if (!is_boundary_point(f, targets, p))
    throw FormulaError("assignment " + p.to_string() +
                       " is not a boundary point");
  auto parts = split_point(p, quantified);
  auto outcome = solve_formula(cofactor(f, parts.y), limits);
  if (outcome.status == SatStatus::resource_out)
    throw ResourceExhausted(*outcome.tripped);
  return outcome.is_unsat() ? BoundaryKind::y_removable
                            : BoundaryKind::y_unremovable;
}

BoundaryKind classify_boundary_point(const PqeProblem &problem,
                                     const Assignment &p,
                                     const SatLimits &limits) {
  return classify_boundary_point(problem.formula(), problem.targets(),
                                 problem.quantified_vars(), p, limits);
}

WorkingFormula::WorkingFormula(const CnfFormula &base,
                               std::span<const std::size_t> removable,
                               const VarSet &quantified,
                               const VerifyOptions &options)
    : clauses_(base.begin(), base.end()), live_(base.size(), true),
      guard_(base.size()), quantified_(quantified), vars_(base.vars()),
      options_(options), oracle_(options.sat) {
  for (Var v : vars_)
    if (!quantified_.count(v))
      free_.insert(free_.end(), v);
  oracle_.reserve_vars(base.var_span());
  for (auto i : removable) {
    if (i >= clauses_.size())
      throw FormulaError("clause index " + std::to_string(i) +
                         " out of range");
    if (!guard_[i])
      guard_[i] = oracle_.new_var();
  }
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (!guard_[i]) {
      oracle_.add_clause(clauses_[i]);
      continue;
    }
    std::vector<Lit> lits(clauses_[i].begin(), clauses_[i].end());
    lits.emplace_back(*guard_[i], true);
    oracle_.add_clause(Clause(std::move(lits)));
  }
  oracle_.set_limits(options.limits);
}

void WorkingFormula::append(const CnfFormula &clauses) {
  for (Var v : clauses.vars())
    if (!vars_.count(v))
      throw FormulaError("appended clause mentions variable " +
                         std::to_string(v.id) + " outside the formula");
  for (auto &c : clauses) {
    clauses_.push_back(c);
    live_.push_back(true);
    guard_.emplace_back();
    oracle_.add_clause(c);
  }
}

bool WorkingFormula::is_removable(std::size_t index) const {
  return guard_.at(index).has_value();
}

void WorkingFormula::remove(std::size_t index) {
  if (!is_removable(index))
    throw FormulaError("clause " + std::to_string(index) +
                       " is not removable");
  if (!live_[index])
    return;
  live_[index] = false;
  oracle_.add_clause(Clause({Lit(*guard_[index], true)}));
}

CnfFormula WorkingFormula::snapshot(std::vector<std::size_t> *index_map) const {
  std::vector<Clause> out;
  if (index_map)
    index_map->clear();
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (!live_[i])
      continue;
    out.push_back(clauses_[i]);
    if (index_map)
      index_map->push_back(i);
  }
  return CnfFormula(std::move(out));
}

std::vector<Lit> WorkingFormula::guards(std::optional<std::size_t> skip) const {
  std::vector<Lit> out;
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (guard_[i] && live_[i] && (!skip || *skip != i))
      out.emplace_back(*guard_[i], false);
  return out;
}

ImplicationResult check_implication(WorkingFormula &formula,
                                    const CnfFormula &h, VerifyStats &stats) {
  ImplicationResult result;
  auto base = formula.guards();
  for (std::size_t k = 0; k < h.size(); ++k) {
    auto assumptions = base;
    for (Lit l : h[k])
      assumptions.push_back(~l);
    auto outcome = formula.oracle().solve(assumptions);
    ++stats.sat_calls_implication;
    if (outcome.status == SatStatus::resource_out) {
      result.status = SatStatus::resource_out;
      result.tripped = outcome.tripped;
      return result;
    }
    if (outcome.is_sat()) {
      Witness w{k, outcome.model->restricted_to(formula.formula_vars())};
      if (!satisfies(w.point, formula.snapshot()) ||
          eval_clause(h[k], w.point) != ClauseValue::falsified)
        throw std::logic_error("implication witness failed re-evaluation");
      result.status = SatStatus::sat;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

std::optional<Witness> check_implication(const CnfFormula &f,
                                         const CnfFormula &h,
                                         const SatLimits &limits) {
  VerifyOptions options;
  options.limits = limits;
  WorkingFormula formula(f, {}, {}, options);
  VerifyStats stats;
  auto result = check_implication(formula, h, stats);
  if (result.status == SatStatus::resource_out)
    throw ResourceExhausted(*result.tripped);
  return result.witness;
}

Clause plug_clause(const Assignment &y_part, const Assignment &x_star,
                   const CnfFormula &f_and_h, bool shorten) {
  std::map<Var, bool> kept(y_part.begin(), y_part.end());
  if (shorten && kept.size() > 1) {
    // support[i]: literals of clause i made true by the kept y variables, for
    // the clauses x_star alone does not satisfy.
    std::vector<int> support(f_and_h.size(), 0);
    std::map<Var, std::vector<std::size_t>> supported_by;
    for (std::size_t i = 0; i < f_and_h.size(); ++i) {
      const Clause &c = f_and_h[i];
      bool by_x = std::any_of(c.begin(), c.end(), [&](Lit l) {
        return x_star.value(l).value_or(false);
      });
      if (by_x)
        continue;
      for (Lit l : c)
        if (y_part.value(l).value_or(false)) {
          ++support[i];
          supported_by[l.var()].push_back(i);
        }
      if (support[i] == 0)
        throw std::invalid_argument("x assignment does not satisfy the "
                                    "formula in the y subspace");
    }
    for (auto it = kept.begin(); it != kept.end();) {
      auto &dependents = supported_by[it->first];
      bool droppable = std::all_of(
          dependents.begin(), dependents.end(),
          [&](std::size_t i) { return support[i] >= 2; });
      if (!droppable) {
        ++it;
        continue;
      }
      for (auto i : dependents)
        --support[i];
      it = kept.erase(it);
    }
  }
  std::vector<Lit> lits;
  lits.reserve(kept.size());
  for (auto [v, value] : kept)
    lits.emplace_back(v, value); // falsified by y: negative iff y(v) = 1
  return Clause(std::move(lits));
}

RedundancyResult check_red(WorkingFormula &formula, std::size_t c_index,
                           VerifyStats &stats) {
  if (!formula.is_removable(c_index) || !formula.is_live(c_index))
    throw FormulaError("clause " + std::to_string(c_index) +
                       " is not a live target clause");
  const Clause &target = formula.clause(c_index);
  if (std::none_of(target.begin(), target.end(), [&](Lit l) {
        return formula.quantified().count(l.var()) != 0;
      }))
    throw FormulaError("clause " + target.to_string() +
                       " has no quantified variable");

  SatOracle &oracle = formula.oracle();
  const Var plugging = oracle.new_var();
  const CnfFormula current = formula.snapshot();

  auto boundary_query = formula.guards(c_index);
  boundary_query.emplace_back(plugging, false);
  for (Lit l : target)
    boundary_query.push_back(~l);
  auto subspace_base = formula.guards();
  subspace_base.emplace_back(plugging, true);

  RedundancyResult result;
  std::uint64_t iterations = 0;
  for (;;) {
    if (++iterations > formula.options().iteration_cap) {
      result.status = RedundancyStatus::resource_out;
      result.tripped = ResourceLimit::iterations;
      break;
    }
    auto found = oracle.solve(boundary_query);
    ++stats.sat_calls_redundancy;
    if (found.status == SatStatus::resource_out) {
      result.status = RedundancyStatus::resource_out;
      result.tripped = found.tripped;
      break;
    }
    if (found.is_unsat()) {
      result.status = RedundancyStatus::redundant;
      break;
    }
    ++stats.boundary_points_examined;
    Assignment point = found.model->restricted_to(formula.formula_vars());
    Assignment y = point.restricted_to(formula.free_vars());

    auto subspace_query = subspace_base;
    for (auto [v, value] : y)
      subspace_query.emplace_back(v, !value);
    auto inside = oracle.solve(subspace_query);
    ++stats.sat_calls_redundancy;
    if (inside.status == SatStatus::resource_out) {
      result.status = RedundancyStatus::resource_out;
      result.tripped = inside.tripped;
      break;
    }
    if (inside.is_unsat()) {
      result.status = RedundancyStatus::not_redundant;
      result.point = std::move(point);
      break;
    }

    Assignment x_star = inside.model->restricted_to(formula.quantified());
    Clause plug =
        plug_clause(y, x_star, current, formula.options().shorten);
    ++stats.plugging_clauses_added;
    stats.shortened_literal_drops += y.size() - plug.size();
    std::vector<Lit> guarded(plug.begin(), plug.end());
    guarded.emplace_back(plugging, true);
    oracle.add_clause(Clause(std::move(guarded)));
  }
  oracle.add_clause(Clause({Lit(plugging, true)}));
  return result;
}

RedundancyResult check_red(const CnfFormula &f_and_h, const VarSet &quantified,
                           std::size_t c_index, const VerifyOptions &options,
                           VerifyStats *stats) {
  std::size_t removable[] = {c_index};
  WorkingFormula formula(f_and_h, removable, quantified, options);
  VerifyStats local;
  return check_red(formula, c_index, stats ? *stats : local);
}

namespace {

void recheck_redundancy_witness(const WorkingFormula &formula,
                                std::size_t c_index, const Assignment &point) {
  std::vector<std::size_t> index_map;
  CnfFormula current = formula.snapshot(&index_map);
  auto pos = static_cast<std::size_t>(
      std::find(index_map.begin(), index_map.end(), c_index) -
      index_map.begin());
  std::size_t targets[] = {pos};
  if (!is_boundary_point(current, targets, point))
    throw std::logic_error("redundancy witness is not a boundary point");
  if (classify_boundary_point(current, targets, formula.quantified(), point) !=
      BoundaryKind::y_removable)
    throw std::logic_error("redundancy witness is not Y-removable");
}

} // namespace

Verdict ver_pqe(const PqeProblem &problem, const Solution &h,
                const VerifyOptions &options) {
  WorkingFormula formula(problem.formula(), problem.targets(),
                         problem.quantified_vars(), options);
  Verdict verdict;
  auto finish = [&]() {
    if (options.database_out)
      *options.database_out = formula.oracle().database();
    return verdict;
  };

  auto implied = check_implication(formula, h.formula(), verdict.stats);
  if (implied.status == SatStatus::resource_out) {
    verdict.status = VerdictStatus::resource_out;
    verdict.tripped = implied.tripped;
    return finish();
  }
  if (implied.status == SatStatus::sat) {
    verdict.status = VerdictStatus::not_implied;
    verdict.witness = std::move(implied.witness);
    return finish();
  }

  formula.append(h.formula());
  for (auto c : problem.targets()) {
    auto result = check_red(formula, c, verdict.stats);
    switch (result.status) {
    case RedundancyStatus::redundant:
      formula.remove(c);
      break;
    case RedundancyStatus::not_redundant:
      recheck_redundancy_witness(formula, c, *result.point);
      verdict.status = VerdictStatus::not_redundant;
      verdict.witness = Witness{c, std::move(*result.point)};
      return finish();
    case RedundancyStatus::resource_out:
      verdict.status = VerdictStatus::resource_out;
      verdict.tripped = result.tripped;
      return finish();
    }
  }
  verdict.status = VerdictStatus::correct;
  return finish();
}

} // namespace pqe
