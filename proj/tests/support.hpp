#pragma once

// Test-only helpers: the running example problem and a truth-table evaluator
// that works on raw DIMACS integers, independent of the library code paths.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <vector>

#include "pqe/formula.hpp"
#include "pqe/problem_gen.hpp"

namespace pqe::test {

using RawCnf = std::vector<std::vector<int>>;

// F = (¬x3 ∨ x4)(y1 ∨ x3)(y1 ∨ ¬x4)(y2 ∨ x4), X = {3, 4}, G = {C1}.
inline RawCnf example1_raw() { return {{-3, 4}, {1, 3}, {1, -4}, {2, 4}}; }

inline CnfFormula to_formula(const RawCnf &raw) {
  std::vector<Clause> clauses;
  for (auto &c : raw)
    clauses.push_back(Clause::from_dimacs(
        std::vector<std::int32_t>(c.begin(), c.end())));
  return CnfFormula(std::move(clauses));
}

inline PqeProblem example1() {
  return PqeProblem(to_formula(example1_raw()), {Var(3), Var(4)}, {0});
}

inline Solution solution_of(const PqeProblem &p, const RawCnf &raw) {
  return Solution(to_formula(raw), p);
}

// Bit (v-1) of `bits` is the value of variable v.
inline bool raw_clause_true(const std::vector<int> &c, std::uint64_t bits) {
  for (int l : c) {
    bool value = (bits >> (std::abs(l) - 1)) & 1;
    if ((l > 0) == value)
      return true;
  }
  return false;
}

inline bool raw_all_true(const RawCnf &f, std::uint64_t bits) {
  for (auto &c : f)
    if (!raw_clause_true(c, bits))
      return false;
  return true;
}

inline std::uint64_t bits_of(const Assignment &a) {
  std::uint64_t bits = 0;
  for (auto [v, value] : a)
    if (value)
      bits |= std::uint64_t{1} << (v.id - 1);
  return bits;
}

// Is there an assignment to variables 1..n agreeing with `fixed` that
// satisfies f?
inline bool raw_sat(const RawCnf &f, unsigned n,
                    const std::map<int, bool> &fixed = {}) {
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    bool consistent = true;
    for (auto [v, value] : fixed)
      if ((((bits >> (v - 1)) & 1) != 0) != value) {
        consistent = false;
        break;
      }
    if (consistent && raw_all_true(f, bits))
      return true;
  }
  return false;
}

inline RawCnf raw_of(const CnfFormula &f) {
  RawCnf out;
  for (auto &c : f) {
    auto d = c.to_dimacs();
    out.emplace_back(d.begin(), d.end());
  }
  return out;
}

// Random CNF over variables 1..n with clause widths 1..max_width.
inline RawCnf random_raw_cnf(SplitMix64 &rng, unsigned n, unsigned clauses,
                             unsigned max_width) {
  RawCnf f;
  for (unsigned k = 0; k < clauses; ++k) {
    unsigned width = 1 + static_cast<unsigned>(rng.below(max_width));
    std::vector<int> c;
    while (c.size() < width && c.size() < n) {
      int v = 1 + static_cast<int>(rng.below(n));
      bool dup = false;
      for (int l : c)
        dup |= std::abs(l) == v;
      if (!dup)
        c.push_back(rng.next() & 1 ? -v : v);
    }
    f.push_back(c);
  }
  return f;
}

// ∃X[F] ≡ H ∧ ∃X[F \ G] by a full truth table over variables 1..n.
// `x_mask` has bit (v-1) set for each quantified v; H must avoid X.
inline bool raw_pqe_holds(const RawCnf &f, const std::vector<std::size_t> &g,
                          const RawCnf &h, unsigned n, std::uint64_t x_mask) {
  RawCnf rest;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::find(g.begin(), g.end(), i) == g.end())
      rest.push_back(f[i]);
  std::map<std::uint64_t, std::array<bool, 3>> by_y; // lhs, rest, h
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    auto &e = by_y[bits & ~x_mask];
    e[0] = e[0] || raw_all_true(f, bits);
    e[1] = e[1] || raw_all_true(rest, bits);
    e[2] = raw_all_true(h, bits);
  }
  for (auto &[y, e] : by_y)
    if (e[0] != (e[2] && e[1]))
      return false;
  return true;
}

inline std::uint64_t mask_of(const VarSet &vars) {
  std::uint64_t m = 0;
  for (Var v : vars)
    m |= std::uint64_t{1} << (v.id - 1);
  return m;
}

} // namespace pqe::test
