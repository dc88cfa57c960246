#include "pqe/problem_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pqe {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0)
    throw std::invalid_argument("SplitMix64::below needs a nonzero bound");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold)
      return r % bound;
  }
}

double SplitMix64::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint32_t GenParams::free_count() const {
  return static_cast<std::uint32_t>(
      std::lround(y_fraction * static_cast<double>(num_vars)));
}

void GenParams::validate() const {
  if (num_vars < 2)
    throw std::invalid_argument("num_vars must be at least 2");
  if (num_clauses < 1)
    throw std::invalid_argument("num_clauses must be at least 1");
  if (!(y_fraction > 0 && y_fraction < 1))
    throw std::invalid_argument("y_fraction must lie in (0, 1)");
  if (!(two_lit_fraction >= 0 && two_lit_fraction <= 1))
    throw std::invalid_argument("two_lit_fraction must lie in [0, 1]");
  auto ny = free_count();
  if (ny < 1 || ny >= num_vars)
    throw std::invalid_argument("y_fraction leaves Y or X empty");
  if (num_targets < 1 || num_targets > num_clauses)
    throw std::invalid_argument("num_targets must lie in [1, num_clauses]");
}

PqeProblem generate(const GenParams &params) {
  params.validate();
  SplitMix64 rng(params.seed);
  const std::uint32_t n = params.num_vars;

  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 1u);
  for (std::uint32_t i = n - 1; i >= 1; --i)
    std::swap(ids[i], ids[rng.below(i + 1)]);
  VarSet quantified;
  for (std::uint32_t i = params.free_count(); i < n; ++i)
    quantified.insert(Var(ids[i]));

  std::vector<Clause> clauses;
  clauses.reserve(params.num_clauses);
  for (std::uint32_t k = 0; k < params.num_clauses; ++k) {
    std::uint32_t width = rng.unit() < params.two_lit_fraction ? 2 : 3;
    width = std::min(width, n);
    std::vector<Lit> lits;
    while (lits.size() < width) {
      Var v(static_cast<std::uint32_t>(rng.below(n)) + 1);
      if (std::any_of(lits.begin(), lits.end(),
                      [v](Lit l) { return l.var() == v; }))
        continue;
      lits.emplace_back(v, (rng.next() >> 63) != 0);
    }
    clauses.emplace_back(std::move(lits));
  }
  CnfFormula formula(std::move(clauses));

  // X variables that happen not to occur in F are dropped.
  VarSet occurring;
  for (Var v : quantified)
    if (formula.vars().count(v))
      occurring.insert(v);

  std::vector<std::size_t> targets;
  const std::uint64_t max_draws = 1000ull * params.num_targets;
  for (std::uint64_t draw = 0;
       draw < max_draws && targets.size() < params.num_targets; ++draw) {
    auto i = static_cast<std::size_t>(rng.below(formula.size()));
    if (std::find(targets.begin(), targets.end(), i) != targets.end())
      continue;
    const Clause &c = formula[i];
    if (std::any_of(c.begin(), c.end(),
                    [&](Lit l) { return occurring.count(l.var()) != 0; }))
      targets.push_back(i);
  }
  if (targets.size() < params.num_targets)
    throw GenerationError("no quantified target clause found after " +
                          std::to_string(max_draws) + " draws (seed " +
                          std::to_string(params.seed) + ")");
  return PqeProblem(std::move(formula), std::move(occurring),
                    std::move(targets));
}

std::uint64_t family_seed(std::uint64_t base_seed, std::uint32_t num_vars,
                          std::uint32_t index) {
  std::uint64_t key = (static_cast<std::uint64_t>(num_vars) << 32) | index;
  return SplitMix64(base_seed ^ SplitMix64(key).next()).next();
}

std::vector<PqeProblem> generate_family(const GenParams &base,
                                        const std::vector<std::uint32_t> &sizes,
                                        std::uint32_t per_size) {
  std::vector<PqeProblem> out;
  out.reserve(sizes.size() * per_size);
  for (auto n : sizes)
    for (std::uint32_t i = 0; i < per_size; ++i) {
      GenParams p = base;
      p.num_vars = n;
      p.num_clauses = 2 * n;
      p.seed = family_seed(base.seed, n, i);
      out.push_back(generate(p));
    }
  return out;
}

} // namespace pqe
