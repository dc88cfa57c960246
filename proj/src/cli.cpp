#include "pqe/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pqe/bench.hpp"
#include "pqe/dimacs.hpp"
#include "pqe/problem_gen.hpp"
#include "pqe/reference_oracle.hpp"
#include "pqe/report.hpp"
#include "pqe/verifier.hpp"

namespace pqe {
namespace {

constexpr std::uint64_t kDefaultBenchSeed = 20240601;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content))
    throw UsageError("cannot write '" + path + "'");
}

void emit(const std::string &path, const std::string &content,
          std::ostream &out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_file(path, content);
}

int code(ExitCode c) { return static_cast<int>(c); }

struct VerifyArgs {
  std::string problem, solution, json, dump;
  std::optional<double> time_limit;
  std::optional<std::uint64_t> conflict_limit;
  std::uint64_t iteration_cap = 10'000'000;
  bool no_shorten = false;
};

int run_verify(const VerifyArgs &a, std::ostream &out) {
  std::string problem_text = read_file(a.problem);
  std::string solution_text = read_file(a.solution);
  PqeProblem problem = parse_problem(problem_text);
  Solution h = parse_solution(solution_text, problem);

  VerifyOptions options;
  options.shorten = !a.no_shorten;
  options.iteration_cap = a.iteration_cap;
  options.limits.time_budget_sec = a.time_limit;
  options.limits.max_conflicts = a.conflict_limit;
  CnfFormula database;
  if (!a.dump.empty())
    options.database_out = &database;

  auto start = std::chrono::steady_clock::now();
  Verdict verdict = ver_pqe(problem, h, options);
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  RunReport report;
  report.status = verdict.status;
  report.witness = verdict.witness;
  if (verdict.witness)
    report.witness_clause = verdict.status == VerdictStatus::not_implied
                                ? h.formula()[verdict.witness->clause_index]
                                : problem.formula()[verdict.witness->clause_index];
  report.stats = verdict.stats;
  report.tripped = verdict.tripped;
  report.wall_time_sec = seconds;
  report.problem_digest = fnv1a64_hex(problem_text);
  report.solution_digest = fnv1a64_hex(solution_text);
  report.num_clauses = problem.formula().size();
  report.num_vars = problem.formula().vars().size();
  report.free_vars = problem.free_vars().size();
  report.solution_clauses = h.size();
  report.shorten = options.shorten;

  std::string status = to_string(verdict.status);
  std::transform(status.begin(), status.end(), status.begin(), ::toupper);
  out << "s " << status << '\n';
  if (verdict.tripped)
    out << "c resource limit: " << to_string(*verdict.tripped) << '\n';
  if (verdict.witness) {
    out << "c witness "
        << (verdict.status == VerdictStatus::not_implied ? "solution clause "
                                                         : "target clause ")
        << verdict.witness->clause_index + 1 << ' '
        << report.witness_clause->to_string() << '\n';
    out << "w " << format_point(verdict.witness->point) << '\n';
  }
  auto &st = verdict.stats;
  out << "c sat_calls_implication " << st.sat_calls_implication << '\n'
      << "c sat_calls_redundancy " << st.sat_calls_redundancy << '\n'
      << "c boundary_points_examined " << st.boundary_points_examined << '\n'
      << "c plugging_clauses_added " << st.plugging_clauses_added << '\n'
      << "c shortened_literal_drops " << st.shortened_literal_drops << '\n'
      << "c wall_time_sec " << seconds << '\n';

  if (!a.json.empty())
    write_file(a.json, to_json(report).dump(2) + "\n");
  if (!a.dump.empty())
    write_file(a.dump, write_cnf(database));
  return code(exit_code_for(verdict.status));
}

int run_check_equiv(const std::string &problem_path,
                    const std::string &solution_path, const OracleCaps &caps,
                    std::ostream &out) {
  PqeProblem problem = parse_problem(read_file(problem_path));
  Solution h = parse_solution(read_file(solution_path), problem);
  auto report = brute_equiv(problem, h, caps);
  out << "s " << (report.equivalent ? "EQUIVALENT" : "NOT_EQUIVALENT") << '\n';
  if (report.first_divergence)
    out << "c divergence " << format_point(*report.first_divergence)
        << " exists_F=" << report.side_values.first
        << " H_and_exists_rest=" << report.side_values.second << '\n';
  return code(report.equivalent ? ExitCode::ok : ExitCode::refuted);
}

int run_census(const std::string &problem_path,
               const std::string &solution_path, const OracleCaps &caps,
               std::ostream &out) {
  PqeProblem problem = parse_problem(read_file(problem_path));
  std::optional<Solution> h;
  if (!solution_path.empty())
    h.emplace(parse_solution(read_file(solution_path), problem));
  auto census = enumerate_boundary_points(problem, h ? &*h : nullptr, caps);
  out << "c boundary points total " << census.total << '\n'
      << "c boundary points removable " << census.removable << '\n'
      << "c boundary points unremovable " << census.unremovable << '\n';
  for (auto &p : census.sample_points)
    out << "b " << format_point(p) << '\n';
  return code(ExitCode::ok);
}

int run_solve_ref(const std::string &problem_path, const std::string &output,
                  const OracleCaps &caps, std::ostream &out) {
  PqeProblem problem = parse_problem(read_file(problem_path));
  Solution h = naive_pqe_solve(problem, caps);
  emit(output, write_solution(h, problem), out);
  return code(ExitCode::ok);
}

std::uint64_t default_bench_seed() {
  if (const char *env = std::getenv("PQEVERIFY_SEED")) {
    try {
      std::size_t used = 0;
      auto value = std::stoull(env, &used, 0);
      if (used == std::string(env).size())
        return value;
    } catch (const std::exception &) {
    }
    throw UsageError("PQEVERIFY_SEED is not an unsigned integer");
  }
  return kDefaultBenchSeed;
}

int run_bench_cmd(BenchOptions options, const std::string &csv_path,
                  std::ostream &out, std::ostream &err) {
  options.on_record = [&err](const BenchRecord &r) {
    err << "c instance " << r.instance << " vars " << r.size << ' '
        << to_string(r.outcome) << " derive " << r.derive_seconds
        << " verify " << r.verify_seconds << " |H| " << r.solution_clauses
        << std::endl;
  };
  auto records = run_bench(options);
  std::ostream &summary = csv_path.empty() ? err : out;
  emit(csv_path, bench_csv(records), out);
  bool timeout = false, refuted = false;
  for (auto &r : records) {
    timeout |= r.outcome == BenchOutcome::derive_timeout ||
               r.outcome == BenchOutcome::verify_timeout;
    refuted |= r.outcome == BenchOutcome::refuted;
  }
  for (auto &s : summarize(records))
    summary << "c vars " << s.size << " instances " << s.instances
            << " timeouts " << s.timeouts << " mean_solution_clauses "
            << s.mean_solution_clauses << " mean_verify_sec "
            << s.mean_verify_seconds << '\n';
  if (timeout)
    return code(ExitCode::resource_out);
  return code(refuted ? ExitCode::refuted : ExitCode::ok);
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Verification toolkit for partial quantifier elimination",
               std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  VerifyArgs verify;
  auto *verify_cmd =
      app.add_subcommand("verify", "Check a solution H of a PQE problem");
  verify_cmd->add_option("-f,--problem", verify.problem, "PQE-DIMACS problem")
      ->required();
  verify_cmd->add_option("-s,--solution", verify.solution, "DIMACS solution")
      ->required();
  verify_cmd->add_option("--time-limit", verify.time_limit, "seconds");
  verify_cmd->add_option("--conflict-limit", verify.conflict_limit,
                         "total SAT conflicts");
  verify_cmd->add_option("--iteration-cap", verify.iteration_cap,
                         "boundary-point iterations per target clause");
  verify_cmd->add_flag("--no-shorten", verify.no_shorten,
                       "use full-length plugging clauses");
  verify_cmd->add_option("--json", verify.json, "write a JSON report here");
  verify_cmd->add_option("--dump-cnf", verify.dump,
                         "write the SAT clause database here (DIMACS)");

  std::string problem_path, solution_path, output_path;
  OracleCaps caps;
  auto *equiv_cmd = app.add_subcommand(
      "check-equiv", "Brute-force equivalence check of a solution");
  equiv_cmd->add_option("-f,--problem", problem_path)->required();
  equiv_cmd->add_option("-s,--solution", solution_path)->required();
  equiv_cmd->add_option("--y-cap", caps.max_free, "maximum |Y|");

  auto *census_cmd = app.add_subcommand(
      "census", "Count removable and unremovable G-boundary points");
  census_cmd->add_option("-f,--problem", problem_path)->required();
  census_cmd->add_option("-s,--solution", solution_path,
                         "census over F and H");
  census_cmd->add_option("--var-cap", caps.max_census_vars);

  auto *solve_cmd = app.add_subcommand(
      "solve-ref", "Brute-force reference solver (writes DIMACS)");
  solve_cmd->add_option("-f,--problem", problem_path)->required();
  solve_cmd->add_option("-o,--output", output_path, "default: stdout");
  solve_cmd->add_option("--y-cap", caps.max_free, "maximum |Y|");

  GenParams gen;
  auto *gen_cmd =
      app.add_subcommand("gen", "Generate a random PQE-DIMACS problem");
  gen_cmd->add_option("--vars", gen.num_vars)->capture_default_str();
  gen_cmd->add_option("--clauses", gen.num_clauses)->capture_default_str();
  gen_cmd->add_option("--y-fraction", gen.y_fraction)->capture_default_str();
  gen_cmd->add_option("--two-lit-fraction", gen.two_lit_fraction)
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--targets", gen.num_targets, "|G|")
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", output_path, "default: stdout");

  BenchOptions bench;
  std::optional<std::uint64_t> bench_seed;
  std::string csv_path;
  auto *bench_cmd = app.add_subcommand(
      "bench", "Generate problem families, derive and verify solutions");
  bench_cmd->add_option("--sizes", bench.sizes, "numbers of variables")
      ->delimiter(',');
  bench_cmd->add_option("--per-size", bench.per_size)->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed,
                        "default: $PQEVERIFY_SEED or built-in");
  bench_cmd->add_option("--y-fraction", bench.base.y_fraction)
      ->capture_default_str();
  bench_cmd->add_option("--two-lit-fraction", bench.base.two_lit_fraction)
      ->capture_default_str();
  bench_cmd->add_option("--time-limit", bench.time_limit_sec,
                        "seconds per verification")
      ->capture_default_str();
  bench_cmd->add_option("--derive-time-limit", bench.derive_time_limit_sec,
                        "seconds per derivation")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads)->capture_default_str();
  bench_cmd->add_flag("--no-shorten", [&](std::int64_t) {
    bench.shorten = false;
  });
  bench_cmd->add_option("--csv", csv_path, "default: stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : code(ExitCode::usage);
  }

  try {
    if (verify_cmd->parsed())
      return run_verify(verify, out);
    if (equiv_cmd->parsed())
      return run_check_equiv(problem_path, solution_path, caps, out);
    if (census_cmd->parsed())
      return run_census(problem_path, solution_path, caps, out);
    if (solve_cmd->parsed())
      return run_solve_ref(problem_path, output_path, caps, out);
    if (gen_cmd->parsed()) {
      emit(output_path, write_problem(generate(gen)), out);
      return code(ExitCode::ok);
    }
    if (bench_cmd->parsed()) {
      bench.base.seed = bench_seed ? *bench_seed : default_bench_seed();
      return run_bench_cmd(bench, csv_path, out, err);
    }
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const FormulaError &e) {
    err << "invalid input: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const std::invalid_argument &e) {
    err << "invalid parameters: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const GenerationError &e) {
    err << "generation failed: " << e.what() << '\n';
    return code(ExitCode::usage);
  } catch (const OracleCapExceeded &e) {
    err << "oracle cap exceeded: " << e.what() << '\n';
    return code(ExitCode::resource_out);
  } catch (const ResourceExhausted &e) {
    err << e.what() << '\n';
    return code(ExitCode::resource_out);
  }
  return code(ExitCode::usage);
}

} // namespace pqe
