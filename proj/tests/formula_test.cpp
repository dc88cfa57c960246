#include <gtest/gtest.h>

#include <algorithm>

#include "pqe/formula.hpp"
#include "support.hpp"

using namespace pqe;
using namespace pqe::test;

namespace {

Assignment full_from_bits(std::uint64_t bits, unsigned n) {
  Assignment a;
  for (unsigned v = 1; v <= n; ++v)
    a.set(Var(v), (bits >> (v - 1)) & 1);
  return a;
}

std::vector<std::vector<std::int32_t>> sorted_clauses(const CnfFormula &f) {
  std::vector<std::vector<std::int32_t>> out;
  for (auto &c : f) {
    auto d = c.to_dimacs();
    std::sort(d.begin(), d.end());
    out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST(ClauseTest, DeduplicatesLiterals) {
  Clause c{1, -2, 1, -2, 3};
  EXPECT_EQ(c.to_dimacs(), (std::vector<std::int32_t>{1, -2, 3}));
}

TEST(ClauseTest, RejectsTautology) {
  EXPECT_THROW((Clause{1, 2, -1}), FormulaError);
}

TEST(ClauseTest, RejectsZeroLiteral) {
  EXPECT_THROW((Clause{1, 0}), FormulaError);
}

TEST(ClauseTest, EmptyClauseIsFalsifiedByAnything) {
  Clause empty;
  EXPECT_TRUE(empty.empty());
  EXPECT_EQ(eval_clause(empty, {}), ClauseValue::falsified);
  EXPECT_FALSE(satisfies(Assignment{{1, true}}, CnfFormula{Clause{1}, empty}));
}

TEST(LitTest, DimacsEncoding) {
  Lit l = Lit::from_dimacs(-7);
  EXPECT_EQ(l.var(), Var(7));
  EXPECT_TRUE(l.negative());
  EXPECT_EQ((~l).dimacs(), 7);
  EXPECT_THROW(Lit::from_dimacs(0), FormulaError);
}

TEST(CnfFormulaTest, TracksVarsAndSpan) {
  CnfFormula f = to_formula(example1_raw());
  EXPECT_EQ(f.var_span(), 4u);
  EXPECT_EQ(f.vars(), (VarSet{Var(1), Var(2), Var(3), Var(4)}));
  std::size_t drop[] = {0};
  CnfFormula rest = f.without(drop);
  EXPECT_EQ(rest.size(), 3u);
  EXPECT_EQ(rest[0], (Clause{1, 3}));
}

TEST(AssignmentTest, Containment) {
  Assignment q{{1, true}};
  Assignment r{{1, true}, {2, false}};
  EXPECT_TRUE(q.contained_in(r));
  EXPECT_FALSE(r.contained_in(q));
  EXPECT_FALSE((Assignment{{1, false}}).contained_in(r));
  EXPECT_TRUE(Assignment{}.contained_in(q));
}

TEST(AssignmentTest, MergeRejectsConflicts) {
  Assignment q{{1, true}};
  EXPECT_EQ(q.merged_with(Assignment{{2, false}}).size(), 2u);
  EXPECT_THROW(q.merged_with(Assignment{{1, false}}), FormulaError);
}

TEST(EvalClauseTest, ThreeValues) {
  Clause c{1, 3};
  EXPECT_EQ(eval_clause(c, {{1, true}}), ClauseValue::satisfied);
  EXPECT_EQ(eval_clause(c, {{1, false}, {3, false}}), ClauseValue::falsified);
  EXPECT_EQ(eval_clause(c, {{1, false}}), ClauseValue::undecided);
}

TEST(CofactorTest, RemovesFalsifiedLiterals) {
  CnfFormula f{Clause{-3, 4}};
  EXPECT_EQ(cofactor(f, {{3, true}}), CnfFormula{Clause{4}});
}

TEST(CofactorTest, DropsSatisfiedClauses) {
  CnfFormula f{Clause{-3, 4}};
  EXPECT_TRUE(cofactor(f, {{4, true}}).empty());
}

TEST(CofactorTest, ExampleOneUnderY) {
  // Truth table over x3, x4 confirms F|y is unsatisfiable for y = (0, 1);
  // the clause-by-clause cofactor is frozen below.
  ASSERT_FALSE(raw_sat(example1_raw(), 4, {{1, false}, {2, true}}));
  CnfFormula f = to_formula(example1_raw());
  CnfFormula expected{Clause{-3, 4}, Clause{3}, Clause{-4}};
  EXPECT_EQ(cofactor(f, {{1, false}, {2, true}}), expected);
}

TEST(CofactorTest, MayProduceEmptyClause) {
  CnfFormula f{Clause{1, 2}};
  auto g = cofactor(f, {{1, false}, {2, false}});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_TRUE(g[0].empty());
}

TEST(BoundaryPointTest, ExampleOne) {
  CnfFormula f = to_formula(example1_raw());
  std::size_t g[] = {0};
  // Raw truth table: boundary points falsify C1 and satisfy C2..C4.
  std::vector<std::uint64_t> expected;
  RawCnf raw = example1_raw();
  RawCnf rest(raw.begin() + 1, raw.end());
  for (std::uint64_t bits = 0; bits < 16; ++bits)
    if (!raw_clause_true(raw[0], bits) && raw_all_true(rest, bits))
      expected.push_back(bits);
  // (x3=1, x4=0, y2=1) with y1 either way.
  ASSERT_EQ(expected, (std::vector<std::uint64_t>{0b0110, 0b0111}));

  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    bool want = std::find(expected.begin(), expected.end(), bits) !=
                expected.end();
    EXPECT_EQ(is_boundary_point(f, g, full_from_bits(bits, 4)), want) << bits;
  }
  EXPECT_TRUE(
      is_boundary_point(f, g, {{3, true}, {4, false}, {1, true}, {2, true}}));
  EXPECT_FALSE(
      is_boundary_point(f, g, {{3, false}, {4, false}, {1, true}, {2, true}}));
}

TEST(BoundaryPointTest, SatisfyingPointIsNeverBoundary) {
  CnfFormula f = to_formula(example1_raw());
  std::size_t g[] = {0};
  Assignment model{{1, true}, {2, true}, {3, false}, {4, false}};
  ASSERT_TRUE(satisfies(model, f));
  EXPECT_FALSE(is_boundary_point(f, g, model));
}

TEST(BoundaryPointTest, RejectsPartialPoint) {
  CnfFormula f = to_formula(example1_raw());
  std::size_t g[] = {0};
  EXPECT_THROW(is_boundary_point(f, g, {{1, true}}), FormulaError);
}

TEST(PqeProblemTest, ComputesFreeVariables) {
  PqeProblem p = example1();
  EXPECT_EQ(p.free_vars(), (VarSet{Var(1), Var(2)}));
  EXPECT_TRUE(p.is_target(0));
  EXPECT_FALSE(p.is_target(1));
  EXPECT_EQ(p.remainder().size(), 3u);
}

TEST(PqeProblemTest, RejectsStructuralViolations) {
  CnfFormula f = to_formula(example1_raw());
  EXPECT_THROW(PqeProblem(f, {Var(3), Var(4)}, {}), FormulaError);
  EXPECT_THROW(PqeProblem(f, {Var(3), Var(4)}, {4}), FormulaError);
  EXPECT_THROW(PqeProblem(f, {Var(3), Var(4)}, {0, 0}), FormulaError);
  // (y2 ∨ x4) is quantified, but a Y-only clause is not.
  CnfFormula g = f.conjoined_with(CnfFormula{Clause{1, 2}});
  EXPECT_THROW(PqeProblem(g, {Var(3), Var(4)}, {4}), FormulaError);
  EXPECT_THROW(PqeProblem(f, {Var(3), Var(9)}, {0}), FormulaError);
}

TEST(SolutionTest, RejectsNonFreeVariables) {
  PqeProblem p = example1();
  EXPECT_NO_THROW(Solution(CnfFormula{Clause{1}}, p));
  EXPECT_THROW(Solution(CnfFormula{Clause{3}}, p), FormulaError);
  EXPECT_THROW(Solution(CnfFormula{Clause{5}}, p), FormulaError);
}

TEST(SplitPointTest, SeparatesXAndY) {
  auto parts =
      split_point({{1, false}, {2, true}, {3, true}, {4, false}}, {Var(3), Var(4)});
  EXPECT_EQ(parts.x, (Assignment{{3, true}, {4, false}}));
  EXPECT_EQ(parts.y, (Assignment{{1, false}, {2, true}}));
}

// Properties over random formulas with up to 12 variables.

TEST(CofactorProperty, SoundAgainstTruthTable) {
  SplitMix64 rng(7);
  for (int round = 0; round < 60; ++round) {
    unsigned n = 2 + static_cast<unsigned>(rng.below(11));
    RawCnf raw = random_raw_cnf(rng, n, 2 + static_cast<unsigned>(rng.below(3 * n)), 3);
    CnfFormula f = to_formula(raw);
    Assignment q;
    for (unsigned v = 1; v <= n; ++v)
      if (rng.below(3) == 0)
        q.set(Var(v), rng.next() & 1);
    RawCnf reduced = raw_of(cofactor(f, q));
    std::uint64_t qbits = bits_of(q);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      bool consistent = true;
      for (auto [v, value] : q)
        consistent &= (((bits >> (v.id - 1)) & 1) != 0) == value;
      if (!consistent)
        continue;
      ASSERT_EQ(raw_all_true(reduced, bits), raw_all_true(raw, bits))
          << "round " << round << " q " << q.to_string() << " " << qbits;
    }
  }
}

TEST(CofactorProperty, Composes) {
  SplitMix64 rng(11);
  for (int round = 0; round < 100; ++round) {
    unsigned n = 3 + static_cast<unsigned>(rng.below(10));
    CnfFormula f = to_formula(random_raw_cnf(rng, n, 3 * n, 3));
    Assignment q, r;
    for (unsigned v = 1; v <= n; ++v) {
      auto pick = rng.below(3);
      if (pick == 1)
        q.set(Var(v), rng.next() & 1);
      else if (pick == 2)
        r.set(Var(v), rng.next() & 1);
    }
    EXPECT_EQ(sorted_clauses(cofactor(cofactor(f, q), r)),
              sorted_clauses(cofactor(f, q.merged_with(r))));
  }
}

TEST(BoundaryPointProperty, BoundaryPointsFalsifyF) {
  SplitMix64 rng(5);
  for (int round = 0; round < 60; ++round) {
    unsigned n = 3 + static_cast<unsigned>(rng.below(6));
    CnfFormula f = to_formula(random_raw_cnf(rng, n, 2 * n, 3));
    if (f.vars().size() != n)
      continue;
    std::size_t g[] = {static_cast<std::size_t>(rng.below(f.size()))};
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      Assignment p = full_from_bits(bits, n);
      if (is_boundary_point(f, g, p)) {
        EXPECT_TRUE(falsifies(p, f));
        EXPECT_FALSE(satisfies(p, f));
      }
    }
  }
}
