#include <gtest/gtest.h>

#include "pqe/bench.hpp"
#include "pqe/problem_gen.hpp"
#include "pqe/verifier.hpp"
#include "support.hpp"

using namespace pqe;
using namespace pqe::test;

namespace {

const Assignment kRefutingPoint{{1, false}, {2, true}, {3, true}, {4, false}};

bool raw_correct(const PqeProblem &p, const Solution &h) {
  return raw_pqe_holds(raw_of(p.formula()), p.targets(), raw_of(h.formula()),
                       p.formula().var_span(), mask_of(p.quantified_vars()));
}

} // namespace

TEST(VerPqeExample, SolutionY1IsCorrect) {
  PqeProblem p = example1();
  Solution h = solution_of(p, {{1}});
  ASSERT_TRUE(raw_correct(p, h));
  auto v = ver_pqe(p, h);
  EXPECT_EQ(v.status, VerdictStatus::correct);
  EXPECT_FALSE(v.witness);
  EXPECT_EQ(v.stats.sat_calls_implication, 1u);
  // One Y-unremovable point (y1=1, y2=1) is plugged before the search dries up.
  EXPECT_EQ(v.stats.boundary_points_examined, 1u);
  EXPECT_EQ(v.stats.plugging_clauses_added, 1u);
  EXPECT_EQ(v.stats.sat_calls_redundancy, 3u);
}

TEST(VerPqeExample, EmptySolutionIsRefutedWithExactWitness) {
  PqeProblem p = example1();
  Solution h = solution_of(p, {});
  ASSERT_FALSE(raw_correct(p, h));
  auto v = ver_pqe(p, h);
  ASSERT_EQ(v.status, VerdictStatus::not_redundant);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->clause_index, 0u);
  EXPECT_EQ(v.witness->point, kRefutingPoint);
  EXPECT_EQ(v.stats.sat_calls_implication, 0u);
}

TEST(VerPqeExample, Y2IsNotImplied) {
  PqeProblem p = example1();
  Solution h = solution_of(p, {{2}});
  auto v = ver_pqe(p, h);
  ASSERT_EQ(v.status, VerdictStatus::not_implied);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->clause_index, 0u);
  EXPECT_TRUE(satisfies(v.witness->point, p.formula()));
  EXPECT_EQ(v.witness->point.value(Var(2)), false);
  EXPECT_EQ(v.stats.sat_calls_redundancy, 0u);
}

TEST(VerPqeExample, WeakerSolutionIsAlsoCorrect) {
  PqeProblem p = example1();
  Solution h = solution_of(p, {{1, -2}});
  ASSERT_TRUE(raw_correct(p, h));
  EXPECT_EQ(ver_pqe(p, h).status, VerdictStatus::correct);
}

TEST(VerPqeExample, ZeroTimeBudgetIsResourceOut) {
  PqeProblem p = example1();
  VerifyOptions o;
  o.limits.time_budget_sec = 0;
  auto v = ver_pqe(p, solution_of(p, {{1}}), o);
  EXPECT_EQ(v.status, VerdictStatus::resource_out);
  EXPECT_EQ(v.tripped, ResourceLimit::time);
  EXPECT_FALSE(v.witness);
}

TEST(VerPqeExample, IterationCapIsResourceOut) {
  PqeProblem p = example1();
  VerifyOptions o;
  o.iteration_cap = 1;
  auto v = ver_pqe(p, solution_of(p, {{1}}), o);
  EXPECT_EQ(v.status, VerdictStatus::resource_out);
  EXPECT_EQ(v.tripped, ResourceLimit::iterations);
}

TEST(VerPqeExample, DatabaseHoldsFAndH) {
  PqeProblem p = example1();
  CnfFormula db;
  VerifyOptions o;
  o.database_out = &db;
  ver_pqe(p, solution_of(p, {{1}}), o);
  std::set<std::vector<std::int32_t>> present;
  for (auto &c : db)
    present.insert(c.to_dimacs());
  EXPECT_TRUE(present.count({1}));
  EXPECT_TRUE(present.count({1, 3}));
  EXPECT_TRUE(present.count({2, 4}));
}

TEST(ClassifyTest, ExampleOnePoints) {
  PqeProblem p = example1();
  EXPECT_EQ(classify_boundary_point(p, kRefutingPoint),
            BoundaryKind::y_removable);
  EXPECT_EQ(classify_boundary_point(
                p, {{1, true}, {2, true}, {3, true}, {4, false}}),
            BoundaryKind::y_unremovable);
  EXPECT_THROW(classify_boundary_point(
                   p, {{1, true}, {2, true}, {3, false}, {4, false}}),
               FormulaError);
}

TEST(CheckImplicationTest, OneShot) {
  CnfFormula f = to_formula(example1_raw());
  EXPECT_FALSE(check_implication(f, CnfFormula{Clause{1}}));
  auto w = check_implication(f, CnfFormula{Clause{1}, Clause{2}});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->clause_index, 1u);
}

TEST(CheckRedTest, OneShotOnExample) {
  CnfFormula f = to_formula(example1_raw());
  VarSet x{Var(3), Var(4)};
  auto r = check_red(f, x, 0);
  ASSERT_EQ(r.status, RedundancyStatus::not_redundant);
  EXPECT_EQ(*r.point, kRefutingPoint);
  VerifyStats st;
  auto r2 = check_red(f.conjoined_with(CnfFormula{Clause{1}}), x, 0, {}, &st);
  EXPECT_EQ(r2.status, RedundancyStatus::redundant);
  EXPECT_EQ(st.plugging_clauses_added, 1u);
}

TEST(CheckRedTest, RejectsUnquantifiedClause) {
  CnfFormula f = to_formula(example1_raw()).conjoined_with(CnfFormula{Clause{1, 2}});
  EXPECT_THROW(check_red(f, {Var(3), Var(4)}, 4), FormulaError);
}

TEST(PlugClauseTest, ShorteningExample) {
  // F ∧ y1 at y = (1, 1) with x* = (x3=0, x4=0). Direct evaluation:
  // dropping y1 leaves the unit (y1) unsatisfied by x*, dropping y2 leaves
  // (y2 ∨ x4) unsatisfied, so nothing can go.
  CnfFormula fh = to_formula(example1_raw()).conjoined_with(CnfFormula{Clause{1}});
  Assignment y{{1, true}, {2, true}};
  Assignment x{{3, false}, {4, false}};
  ASSERT_TRUE(satisfies(x, cofactor(fh, y)));
  ASSERT_FALSE(satisfies(x, cofactor(fh, {{2, true}})));
  ASSERT_FALSE(satisfies(x, cofactor(fh, {{1, true}})));
  EXPECT_EQ(plug_clause(y, x, fh, true), (Clause{-1, -2}));
  EXPECT_EQ(plug_clause(y, x, fh, false), (Clause{-1, -2}));
}

TEST(PlugClauseTest, DropsUnneededLiterals) {
  // Only (y2 ∨ x4) needs y; x* = (x3=1, x4=1) satisfies everything else.
  CnfFormula f{Clause{-3, 4}, Clause{1, 3}, Clause{2, 4}, Clause{2, -4}};
  Assignment y{{1, false}, {2, true}};
  Assignment x{{3, true}, {4, true}};
  EXPECT_EQ(plug_clause(y, x, f, true), (Clause{-2}));
  EXPECT_EQ(plug_clause(y, x, f, false), (Clause{1, -2}));
}

TEST(WorkingFormulaTest, RemoveAndGuards) {
  PqeProblem p = example1();
  WorkingFormula w(p.formula(), p.targets(), p.quantified_vars());
  EXPECT_EQ(w.guards().size(), 1u);
  EXPECT_TRUE(w.guards(0).empty());
  EXPECT_TRUE(w.is_removable(0));
  EXPECT_FALSE(w.is_removable(1));
  w.remove(0);
  EXPECT_FALSE(w.is_live(0));
  EXPECT_TRUE(w.guards().empty());
  EXPECT_EQ(w.snapshot().size(), 3u);
  EXPECT_THROW(w.append(CnfFormula{Clause{9}}), FormulaError);
}

// Verdicts agree with a truth-table check of the defining equivalence, and
// every witness is re-validated by evaluation.
TEST(VerPqeProperty, AgreesWithTruthTable) {
  SplitMix64 rng(99);
  int correct_seen = 0, refuted_seen = 0;
  for (int round = 0; round < 150; ++round) {
    GenParams gp;
    gp.num_vars = 5 + static_cast<std::uint32_t>(rng.below(6));
    gp.num_clauses = gp.num_vars + static_cast<std::uint32_t>(rng.below(gp.num_vars + 1));
    gp.seed = rng.next();
    gp.num_targets = 1 + static_cast<std::uint32_t>(rng.below(2));
    PqeProblem p = generate(gp);

    // Candidate H: a random handful of short clauses over Y, sometimes none.
    std::vector<Var> ys(p.free_vars().begin(), p.free_vars().end());
    RawCnf hraw;
    unsigned k = ys.empty() ? 0 : static_cast<unsigned>(rng.below(3));
    for (unsigned i = 0; i < k; ++i) {
      std::vector<int> c;
      for (unsigned j = 0; j < 1 + rng.below(2) && j < ys.size(); ++j) {
        int v = static_cast<int>(ys[rng.below(ys.size())].id);
        if (std::none_of(c.begin(), c.end(), [&](int l) { return std::abs(l) == v; }))
          c.push_back(rng.next() & 1 ? v : -v);
      }
      hraw.push_back(c);
    }
    Solution h = solution_of(p, hraw);
    bool expected = raw_correct(p, h);
    auto v = ver_pqe(p, h);
    ASSERT_NE(v.status, VerdictStatus::resource_out);
    ASSERT_EQ(v.status == VerdictStatus::correct, expected) << "round " << round;
    (expected ? correct_seen : refuted_seen)++;
    if (v.status == VerdictStatus::not_implied) {
      EXPECT_TRUE(satisfies(v.witness->point, p.formula()));
      EXPECT_EQ(eval_clause(h.formula()[v.witness->clause_index], v.witness->point),
                ClauseValue::falsified);
    }
    if (v.status == VerdictStatus::not_redundant) {
      EXPECT_TRUE(p.is_target(v.witness->clause_index));
      EXPECT_EQ(eval_clause(p.formula()[v.witness->clause_index], v.witness->point),
                ClauseValue::falsified);
      EXPECT_TRUE(satisfies(v.witness->point, h.formula()));
    }
  }
  EXPECT_GT(correct_seen, 10);
  EXPECT_GT(refuted_seen, 10);
}

TEST(VerPqeProperty, ShorteningDoesNotChangeVerdicts) {
  SplitMix64 rng(3);
  for (int round = 0; round < 60; ++round) {
    GenParams gp;
    gp.num_vars = 8 + static_cast<std::uint32_t>(rng.below(5));
    gp.num_clauses = 2 * gp.num_vars;
    gp.seed = rng.next();
    PqeProblem p = generate(gp);
    Solution h = solution_of(p, {});
    VerifyOptions full;
    full.shorten = false;
    auto a = ver_pqe(p, h);
    auto b = ver_pqe(p, h, full);
    EXPECT_EQ(a.status, b.status);
    EXPECT_LE(a.stats.plugging_clauses_added, b.stats.plugging_clauses_added);
  }
}

TEST(DeriveSolutionTest, ProducesVerifiedSolutions) {
  SplitMix64 rng(17);
  for (int round = 0; round < 60; ++round) {
    GenParams gp;
    gp.num_vars = 6 + static_cast<std::uint32_t>(rng.below(7));
    gp.num_clauses = 2 * gp.num_vars;
    gp.seed = rng.next();
    gp.num_targets = 1 + static_cast<std::uint32_t>(rng.below(2));
    PqeProblem p = generate(gp);
    auto d = derive_solution(p);
    ASSERT_TRUE(d.solution);
    EXPECT_TRUE(raw_correct(p, *d.solution)) << "round " << round;
    EXPECT_EQ(ver_pqe(p, *d.solution).status, VerdictStatus::correct);
  }
}
