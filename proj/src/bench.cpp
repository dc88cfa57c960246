#include "pqe/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <sstream>
#include <thread>

namespace pqe {

const char *to_string(BenchOutcome o) {
  switch (o) {
  case BenchOutcome::verified:
    return "verified";
  case BenchOutcome::refuted:
    return "refuted";
  case BenchOutcome::derive_timeout:
    return "derive_timeout";
  case BenchOutcome::verify_timeout:
    return "verify_timeout";
  }
  return "?";
}

namespace {

struct Stop {
  std::optional<ResourceLimit> tripped;
};

SatOutcome must_solve(SatOracle &oracle, std::span<const Lit> assumptions) {
  auto r = oracle.solve(assumptions);
  if (r.status == SatStatus::resource_out)
    throw Stop{r.tripped};
  return r;
}

// Shrinks an unsatisfiable set of Y literals, keeping `fixed` assumed.
std::vector<Lit> minimize_core(SatOracle &oracle, const std::vector<Lit> &fixed,
                               std::vector<Lit> core, const VarSet &free) {
  for (std::size_t i = 0; i < core.size();) {
    std::vector<Lit> trial = fixed;
    for (std::size_t j = 0; j < core.size(); ++j)
      if (j != i)
        trial.push_back(core[j]);
    auto r = must_solve(oracle, trial);
    if (r.is_sat()) {
      ++i;
      continue;
    }
    std::set<Lit> failed(r.failed_assumptions.begin(),
                         r.failed_assumptions.end());
    std::vector<Lit> kept;
    for (std::size_t j = 0; j < core.size(); ++j)
      if (j != i && (j < i || failed.count(core[j])))
        kept.push_back(core[j]);
    core = std::move(kept);
  }
  std::erase_if(core, [&](Lit l) { return free.count(l.var()) == 0; });
  return core;
}

} // namespace

DerivedSolution derive_solution(const PqeProblem &problem,
                                const VerifyOptions &options) {
  WorkingFormula formula(problem.formula(), problem.targets(),
                         problem.quantified_vars(), options);
  SatOracle &oracle = formula.oracle();
  const VarSet &free = problem.free_vars();
  std::vector<Clause> h;
  DerivedSolution out;
  try {
    for (auto c : problem.targets()) {
      const Var plugging = oracle.new_var();
      auto boundary_query = formula.guards(c);
      boundary_query.emplace_back(plugging, false);
      for (Lit l : formula.clause(c))
        boundary_query.push_back(~l);

      for (;;) {
        auto found = must_solve(oracle, boundary_query);
        if (found.is_unsat())
          break;
        auto y = found.model->restricted_to(free);
        auto fixed = formula.guards();
        std::vector<Lit> y_lits;
        for (auto [v, value] : y)
          y_lits.emplace_back(v, !value);
        auto query = fixed;
        query.insert(query.end(), y_lits.begin(), y_lits.end());
        auto inside = must_solve(oracle, query);
        if (inside.is_sat()) {
          // F|y is satisfiable, so every point over y is Y-unremovable.
          auto x_star = inside.model->restricted_to(problem.quantified_vars());
          Clause plug =
              plug_clause(y, x_star, formula.snapshot(), options.shorten);
          std::vector<Lit> guarded(plug.begin(), plug.end());
          guarded.emplace_back(plugging, true);
          oracle.add_clause(Clause(std::move(guarded)));
          continue;
        }
        std::vector<Lit> core;
        for (Lit l : inside.failed_assumptions)
          if (free.count(l.var()))
            core.push_back(l);
        core = minimize_core(oracle, fixed, std::move(core), free);
        std::vector<Lit> lits;
        for (Lit l : core)
          lits.push_back(~l);
        Clause blocking(std::move(lits));
        formula.append(CnfFormula({blocking}));
        h.push_back(std::move(blocking));
      }
      oracle.add_clause(Clause({Lit(plugging, true)}));
      formula.remove(c);
    }
  } catch (const Stop &stop) {
    out.tripped = stop.tripped;
    return out;
  }
  out.solution.emplace(CnfFormula(std::move(h)), problem);
  return out;
}

namespace {

BenchRecord run_instance(const BenchOptions &options, std::uint32_t instance,
                         std::uint32_t size, std::uint32_t index) {
  GenParams params = options.base;
  params.num_vars = size;
  params.num_clauses = 2 * size;
  params.seed = family_seed(options.base.seed, size, index);
  PqeProblem problem = generate(params);

  BenchRecord r;
  r.instance = instance;
  r.size = size;
  r.seed = params.seed;
  r.num_clauses = problem.formula().size();
  r.num_vars = problem.formula().vars().size();
  r.free_vars = problem.free_vars().size();

  VerifyOptions vo;
  vo.shorten = options.shorten;
  vo.limits.time_budget_sec = options.time_limit_sec;
  VerifyOptions derive_options = vo;
  derive_options.limits.time_budget_sec = options.derive_time_limit_sec;

  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  auto derived = derive_solution(problem, derive_options);
  auto t1 = Clock::now();
  r.derive_seconds = std::chrono::duration<double>(t1 - t0).count();
  if (!derived.solution) {
    r.outcome = BenchOutcome::derive_timeout;
    return r;
  }
  r.solution_clauses = derived.solution->size();

  auto verdict = ver_pqe(problem, *derived.solution, vo);
  r.verify_seconds =
      std::chrono::duration<double>(Clock::now() - t1).count();
  r.stats = verdict.stats;
  switch (verdict.status) {
  case VerdictStatus::correct:
    r.outcome = BenchOutcome::verified;
    break;
  case VerdictStatus::resource_out:
    r.outcome = BenchOutcome::verify_timeout;
    break;
  default:
    r.outcome = BenchOutcome::refuted;
    break;
  }
  return r;
}

} // namespace

std::vector<BenchRecord> run_bench(const BenchOptions &options) {
  struct Job {
    std::uint32_t instance, size, index;
  };
  std::vector<Job> jobs;
  for (auto size : options.sizes)
    for (std::uint32_t i = 0; i < options.per_size; ++i)
      jobs.push_back({static_cast<std::uint32_t>(jobs.size()), size, i});

  std::vector<BenchRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&]() {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      records[k] =
          run_instance(options, jobs[k].instance, jobs[k].size, jobs[k].index);
      if (options.on_record) {
        std::lock_guard lock(report);
        options.on_record(records[k]);
      }
    }
  };
  unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  std::sort(records.begin(), records.end(),
            [](const BenchRecord &a, const BenchRecord &b) {
              return a.instance < b.instance;
            });
  return records;
}

std::string bench_csv(const std::vector<BenchRecord> &records) {
  std::ostringstream os;
  os << "instance,seed,num_clauses,num_vars,free_vars,solution_clauses,"
        "outcome,derive_time_sec,verify_time_sec,sat_calls_implication,"
        "sat_calls_redundancy,boundary_points,plugging_clauses\n";
  for (auto &r : records)
    os << r.instance << ',' << r.seed << ',' << r.num_clauses << ','
       << r.num_vars << ',' << r.free_vars << ',' << r.solution_clauses << ','
       << to_string(r.outcome) << ',' << r.derive_seconds << ','
       << r.verify_seconds << ',' << r.stats.sat_calls_implication << ','
       << r.stats.sat_calls_redundancy << ','
       << r.stats.boundary_points_examined << ','
       << r.stats.plugging_clauses_added << '\n';
  return os.str();
}

std::vector<SizeSummary> summarize(const std::vector<BenchRecord> &records) {
  std::map<std::uint32_t, SizeSummary> by_size;
  for (auto &r : records) {
    auto &s = by_size[r.size];
    s.size = r.size;
    ++s.instances;
    s.mean_solution_clauses += static_cast<double>(r.solution_clauses);
    if (r.outcome == BenchOutcome::derive_timeout) {
      ++s.timeouts;
      continue;
    }
    if (r.outcome == BenchOutcome::verify_timeout)
      ++s.timeouts;
    ++s.timed;
    s.mean_verify_seconds += r.verify_seconds;
  }
  std::vector<SizeSummary> out;
  for (auto &[_, s] : by_size) {
    if (s.timed)
      s.mean_verify_seconds /= static_cast<double>(s.timed);
    s.mean_solution_clauses /= static_cast<double>(s.instances);
    out.push_back(s);
  }
  return out;
}

} // namespace pqe
