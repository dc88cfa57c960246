#include "pqe/formula.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pqe {

Lit Lit::from_dimacs(std::int64_t value) {
  if (value == 0)
    throw FormulaError("literal 0 is reserved as a terminator");
  if (value > std::numeric_limits<std::int32_t>::max() ||
      value < -std::numeric_limits<std::int32_t>::max())
    throw FormulaError("literal " + std::to_string(value) + " out of range");
  auto id = static_cast<std::uint32_t>(value < 0 ? -value : value);
  return Lit(Var(id), value < 0);
}

Clause::Clause(std::vector<Lit> lits) {
  lits_.reserve(lits.size());
  for (Lit l : lits) {
    if (l.var().id == 0)
      throw FormulaError("literal over variable 0");
    if (std::find(lits_.begin(), lits_.end(), ~l) != lits_.end())
      throw FormulaError("tautological clause: contains both " +
                         std::to_string(l.var().id) + " and its negation");
    if (std::find(lits_.begin(), lits_.end(), l) == lits_.end())
      lits_.push_back(l);
  }
}

Clause::Clause(std::initializer_list<std::int32_t> dimacs)
    : Clause(from_dimacs(std::span<const std::int32_t>(dimacs.begin(),
                                                       dimacs.size()))) {}

Clause Clause::from_dimacs(std::span<const std::int32_t> dimacs) {
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (auto v : dimacs)
    lits.push_back(Lit::from_dimacs(v));
  return Clause(std::move(lits));
}

bool Clause::mentions(Var v) const {
  return std::any_of(lits_.begin(), lits_.end(),
                     [v](Lit l) { return l.var() == v; });
}

std::vector<std::int32_t> Clause::to_dimacs() const {
  std::vector<std::int32_t> out;
  out.reserve(lits_.size());
  for (Lit l : lits_)
    out.push_back(l.dimacs());
  return out;
}

std::string Clause::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < lits_.size(); ++i) {
    if (i)
      os << ' ';
    os << lits_[i].dimacs();
  }
  os << ')';
  return os.str();
}

Assignment::Assignment(
    std::initializer_list<std::pair<const std::uint32_t, bool>> init) {
  for (auto [id, value] : init)
    bindings_[Var(id)] = value;
}

std::optional<bool> Assignment::value(Var v) const {
  auto it = bindings_.find(v);
  if (it == bindings_.end())
    return std::nullopt;
  return it->second;
}

std::optional<bool> Assignment::value(Lit l) const {
  auto v = value(l.var());
  if (!v)
    return std::nullopt;
  return *v != l.negative();
}

VarSet Assignment::assigned_vars() const {
  VarSet out;
  for (auto &[v, _] : bindings_)
    out.insert(out.end(), v);
  return out;
}

bool Assignment::is_full_over(const VarSet &vars) const {
  return std::all_of(vars.begin(), vars.end(),
                     [this](Var v) { return assigns(v); });
}

bool Assignment::contained_in(const Assignment &other) const {
  for (auto &[v, value] : bindings_) {
    auto o = other.value(v);
    if (!o || *o != value)
      return false;
  }
  return true;
}

Assignment Assignment::restricted_to(const VarSet &vars) const {
  Assignment out;
  for (auto &[v, value] : bindings_)
    if (vars.count(v))
      out.bindings_.emplace_hint(out.bindings_.end(), v, value);
  return out;
}

Assignment Assignment::merged_with(const Assignment &other) const {
  Assignment out = *this;
  for (auto &[v, value] : other.bindings_) {
    auto [it, inserted] = out.bindings_.emplace(v, value);
    if (!inserted && it->second != value)
      throw FormulaError("conflicting values for variable " +
                         std::to_string(v.id));
  }
  return out;
}

std::string Assignment::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto &[v, value] : bindings_) {
    if (!first)
      os << ", ";
    first = false;
    os << v.id << '=' << (value ? 1 : 0);
  }
  os << '}';
  return os.str();
}

CnfFormula::CnfFormula(std::vector<Clause> clauses)
    : clauses_(std::move(clauses)) {
  for (auto &c : clauses_)
    for (Lit l : c) {
      vars_.insert(l.var());
      var_span_ = std::max(var_span_, l.var().id);
    }
}

CnfFormula::CnfFormula(std::initializer_list<Clause> clauses)
    : CnfFormula(std::vector<Clause>(clauses)) {}

CnfFormula CnfFormula::without(std::span<const std::size_t> indices) const {
  std::vector<bool> drop(clauses_.size(), false);
  for (auto i : indices) {
    if (i >= clauses_.size())
      throw FormulaError("clause index " + std::to_string(i) +
                         " out of range");
    drop[i] = true;
  }
  std::vector<Clause> kept;
  kept.reserve(clauses_.size());
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (!drop[i])
      kept.push_back(clauses_[i]);
  return CnfFormula(std::move(kept));
}

CnfFormula CnfFormula::conjoined_with(const CnfFormula &other) const {
  std::vector<Clause> all = clauses_;
  all.insert(all.end(), other.clauses_.begin(), other.clauses_.end());
  return CnfFormula(std::move(all));
}

ClauseValue eval_clause(const Clause &c, const Assignment &q) {
  bool undecided = false;
  for (Lit l : c) {
    auto v = q.value(l);
    if (!v)
      undecided = true;
    else if (*v)
      return ClauseValue::satisfied;
  }
  return undecided ? ClauseValue::undecided : ClauseValue::falsified;
}

bool satisfies(const Assignment &q, const CnfFormula &f) {
  return std::all_of(f.begin(), f.end(), [&](const Clause &c) {
    return eval_clause(c, q) == ClauseValue::satisfied;
  });
}

bool falsifies(const Assignment &q, const CnfFormula &f) {
  return std::any_of(f.begin(), f.end(), [&](const Clause &c) {
    return eval_clause(c, q) == ClauseValue::falsified;
  });
}

CnfFormula cofactor(const CnfFormula &f, const Assignment &q) {
  std::vector<Clause> out;
  out.reserve(f.size());
  for (auto &c : f) {
    if (eval_clause(c, q) == ClauseValue::satisfied)
      continue;
    std::vector<Lit> rest;
    for (Lit l : c)
      if (!q.assigns(l.var()))
        rest.push_back(l);
    out.emplace_back(std::move(rest));
  }
  return CnfFormula(std::move(out));
}

bool is_boundary_point(const CnfFormula &f, std::span<const std::size_t> g,
                       const Assignment &p) {
  if (!p.is_full_over(f.vars()))
    throw FormulaError("boundary-point test needs a full assignment to vars(F)");
  std::vector<bool> in_g(f.size(), false);
  for (auto i : g) {
    if (i >= f.size())
      throw FormulaError("clause index " + std::to_string(i) +
                         " out of range");
    in_g[i] = true;
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto value = eval_clause(f[i], p);
    if (in_g[i] ? value != ClauseValue::falsified
                : value != ClauseValue::satisfied)
      return false;
  }
  return true;
}

PqeProblem::PqeProblem(CnfFormula formula, VarSet quantified,
                       std::vector<std::size_t> targets)
    : formula_(std::move(formula)), quantified_(std::move(quantified)),
      targets_(std::move(targets)) {
  for (Var v : quantified_)
    if (!formula_.vars().count(v))
      throw FormulaError("quantified variable " + std::to_string(v.id) +
                         " does not occur in F");
  for (Var v : formula_.vars())
    if (!quantified_.count(v))
      free_.insert(free_.end(), v);
  if (targets_.empty())
    throw FormulaError("the target clause set G is empty");
  std::vector<bool> seen(formula_.size(), false);
  for (auto i : targets_) {
    if (i >= formula_.size())
      throw FormulaError("target clause index " + std::to_string(i + 1) +
                         " out of range");
    if (seen[i])
      throw FormulaError("target clause " + std::to_string(i + 1) +
                         " listed twice");
    seen[i] = true;
    const Clause &c = formula_[i];
    bool quantified_clause = std::any_of(c.begin(), c.end(), [&](Lit l) {
      return quantified_.count(l.var()) != 0;
    });
    if (!quantified_clause)
      throw FormulaError("target clause " + std::to_string(i + 1) +
                         " has no quantified variable");
  }
}

bool PqeProblem::is_target(std::size_t index) const {
  return std::find(targets_.begin(), targets_.end(), index) != targets_.end();
}

Solution::Solution(CnfFormula clauses, const PqeProblem &problem)
    : clauses_(std::move(clauses)) {
  for (Var v : clauses_.vars()) {
    if (problem.quantified_vars().count(v))
      throw FormulaError("solution mentions quantified variable " +
                         std::to_string(v.id));
    if (!problem.free_vars().count(v))
      throw FormulaError("solution mentions variable " + std::to_string(v.id) +
                         " which does not occur in F");
  }
}

PointParts split_point(const Assignment &p, const VarSet &quantified) {
  PointParts parts;
  for (auto [v, value] : p)
    (quantified.count(v) ? parts.x : parts.y).set(v, value);
  return parts;
}

} // namespace pqe
