#pragma once

// PQE-DIMACS problems and DIMACS CNF solutions.
//
// A problem file looks like
//
//   c comment
//   p pqe <V> <C>
//   x <quantified variables> 0
//   g <1-based clause ordinals forming G> 0
//   <C clauses, each a list of nonzero literals terminated by 0>
//
// The x and g lines must precede the clauses. Y is vars(F) \ X.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pqe/formula.hpp"

namespace pqe {

enum class ParseErrorKind {
  malformed_header,
  missing_header,
  malformed_line,
  misplaced_line,
  duplicate_line,
  missing_quantifier_line,
  missing_target_line,
  variable_out_of_range,
  ordinal_out_of_range,
  duplicate_ordinal,
  empty_target_set,
  unquantified_target,
  quantified_variable_unused,
  tautological_clause,
  unterminated_clause,
  clause_count_mismatch,
  quantified_variable_in_solution,
  foreign_variable_in_solution,
};

const char *to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string &what);

  ParseErrorKind kind() const { return kind_; }
  /// 1-based line number, 0 when the error concerns the whole input.
  std::size_t line() const { return line_; }

private:
  ParseErrorKind kind_;
  std::size_t line_;
};

PqeProblem parse_problem(std::string_view text);
Solution parse_solution(std::string_view text, const PqeProblem &problem);

std::string write_problem(const PqeProblem &problem);
/// Writes H as "p cnf V C" with V = max(var_span of the problem, of H).
std::string write_solution(const Solution &h, const PqeProblem &problem);
std::string write_cnf(const CnfFormula &f);

} // namespace pqe
