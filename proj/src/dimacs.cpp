#include "pqe/dimacs.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <vector>

namespace pqe {

const char *to_string(ParseErrorKind kind) {
  switch (kind) {
  case ParseErrorKind::malformed_header:
    return "malformed header";
  case ParseErrorKind::missing_header:
    return "missing header";
  case ParseErrorKind::malformed_line:
    return "malformed line";
  case ParseErrorKind::misplaced_line:
    return "misplaced line";
  case ParseErrorKind::duplicate_line:
    return "duplicate line";
  case ParseErrorKind::missing_quantifier_line:
    return "missing x line";
  case ParseErrorKind::missing_target_line:
    return "missing g line";
  case ParseErrorKind::variable_out_of_range:
    return "variable out of range";
  case ParseErrorKind::ordinal_out_of_range:
    return "ordinal out of range";
  case ParseErrorKind::duplicate_ordinal:
    return "duplicate ordinal";
  case ParseErrorKind::empty_target_set:
    return "empty G";
  case ParseErrorKind::unquantified_target:
    return "unquantified G clause";
  case ParseErrorKind::quantified_variable_unused:
    return "quantified variable not in F";
  case ParseErrorKind::tautological_clause:
    return "tautological clause";
  case ParseErrorKind::unterminated_clause:
    return "unterminated clause";
  case ParseErrorKind::clause_count_mismatch:
    return "clause count mismatch";
  case ParseErrorKind::quantified_variable_in_solution:
    return "quantified variable in solution";
  case ParseErrorKind::foreign_variable_in_solution:
    return "solution variable not in F";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line,
                       const std::string &what)
    : std::runtime_error((line ? "line " + std::to_string(line) + ": " : "") +
                         to_string(kind) + ": " + what),
      kind_(kind), line_(line) {}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start)
      out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<std::int64_t> to_int(std::string_view token) {
  std::int64_t value = 0;
  const char *first = token.data();
  if (!token.empty() && token.front() == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    return std::nullopt;
  return value;
}

std::int64_t expect_int(std::string_view token, std::size_t line,
                        ParseErrorKind kind = ParseErrorKind::malformed_line) {
  auto v = to_int(token);
  if (!v)
    throw ParseError(kind, line,
                     "expected an integer, got '" + std::string(token) + "'");
  return *v;
}

struct Header {
  std::int64_t vars = 0;
  std::int64_t clauses = 0;
};

Header parse_header(const std::vector<std::string_view> &tokens,
                    std::string_view format, std::size_t line) {
  if (tokens.size() != 4 || tokens[1] != format)
    throw ParseError(ParseErrorKind::malformed_header, line,
                     "expected 'p " + std::string(format) + " <vars> <clauses>'");
  Header h;
  h.vars = expect_int(tokens[2], line, ParseErrorKind::malformed_header);
  h.clauses = expect_int(tokens[3], line, ParseErrorKind::malformed_header);
  if (h.vars < 0 || h.clauses < 0 || h.vars > INT32_MAX)
    throw ParseError(ParseErrorKind::malformed_header, line,
                     "counts must be nonnegative");
  return h;
}

// Zero-terminated integer list after a leading keyword ("x ... 0").
std::vector<std::int64_t> parse_list(const std::vector<std::string_view> &tokens,
                                     std::size_t line) {
  std::vector<std::int64_t> values;
  if (tokens.size() < 2 || expect_int(tokens.back(), line) != 0)
    throw ParseError(ParseErrorKind::malformed_line, line,
                     "list must be terminated by 0");
  for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
    auto v = expect_int(tokens[i], line);
    if (v <= 0)
      throw ParseError(ParseErrorKind::malformed_line, line,
                       "list entries must be positive");
    values.push_back(v);
  }
  return values;
}

// Accumulates clause literals across lines.
class ClauseReader {
public:
  ClauseReader(Header header) : header_(header) {}

  bool started() const { return started_; }

  void feed(const std::vector<std::string_view> &tokens, std::size_t line) {
    started_ = true;
    for (auto token : tokens) {
      auto v = expect_int(token, line);
      if (pending_.empty())
        pending_line_ = line;
      if (v != 0) {
        if (v > header_.vars || -v > header_.vars)
          throw ParseError(ParseErrorKind::variable_out_of_range, line,
                           "literal " + std::to_string(v) + " exceeds " +
                               std::to_string(header_.vars) + " variables");
        pending_.push_back(static_cast<std::int32_t>(v));
        continue;
      }
      try {
        clauses_.push_back(Clause::from_dimacs(pending_));
        lines_.push_back(pending_line_ ? pending_line_ : line);
      } catch (const FormulaError &e) {
        throw ParseError(ParseErrorKind::tautological_clause,
                         pending_line_ ? pending_line_ : line, e.what());
      }
      pending_.clear();
      pending_line_ = 0;
      if (static_cast<std::int64_t>(clauses_.size()) > header_.clauses)
        throw ParseError(ParseErrorKind::clause_count_mismatch, line,
                         "more than " + std::to_string(header_.clauses) +
                             " clauses");
    }
  }

  std::vector<Clause> finish() {
    if (!pending_.empty())
      throw ParseError(ParseErrorKind::unterminated_clause, pending_line_,
                       "clause not terminated by 0");
    if (static_cast<std::int64_t>(clauses_.size()) != header_.clauses)
      throw ParseError(ParseErrorKind::clause_count_mismatch, 0,
                       "header declares " + std::to_string(header_.clauses) +
                           " clauses, found " +
                           std::to_string(clauses_.size()));
    return std::move(clauses_);
  }

  std::size_t line_of(std::size_t clause) const { return lines_.at(clause); }

private:
  Header header_;
  bool started_ = false;
  std::vector<std::int32_t> pending_;
  std::size_t pending_line_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::size_t> lines_;
};

template <typename Fn> void for_each_line(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    ++line_no;
    auto tokens = tokenize(text.substr(pos, end - pos));
    if (!tokens.empty() && tokens[0].front() != 'c')
      fn(tokens, line_no);
    if (end == text.size())
      break;
    pos = end + 1;
  }
}

} // namespace

PqeProblem parse_problem(std::string_view text) {
  std::optional<Header> header;
  std::optional<ClauseReader> reader;
  std::optional<std::vector<std::int64_t>> x_vars, g_ordinals;
  std::size_t x_line = 0, g_line = 0;

  for_each_line(text, [&](const std::vector<std::string_view> &tokens,
                          std::size_t line) {
    if (tokens[0] == "p") {
      if (header)
        throw ParseError(ParseErrorKind::duplicate_line, line,
                         "second header line");
      header = parse_header(tokens, "pqe", line);
      reader.emplace(*header);
      return;
    }
    if (!header)
      throw ParseError(ParseErrorKind::missing_header, line,
                       "'p pqe' header must come first");
    if (tokens[0] == "x" || tokens[0] == "g") {
      bool is_x = tokens[0] == "x";
      if (reader->started())
        throw ParseError(ParseErrorKind::misplaced_line, line,
                         std::string(tokens[0]) + " line after clauses");
      if (is_x ? x_vars.has_value() : g_ordinals.has_value())
        throw ParseError(ParseErrorKind::duplicate_line, line,
                         "second " + std::string(tokens[0]) + " line");
      auto values = parse_list(tokens, line);
      if (is_x) {
        for (auto v : values)
          if (v > header->vars)
            throw ParseError(ParseErrorKind::variable_out_of_range, line,
                             "variable " + std::to_string(v) + " exceeds " +
                                 std::to_string(header->vars));
        x_vars = std::move(values);
        x_line = line;
      } else {
        if (values.empty())
          throw ParseError(ParseErrorKind::empty_target_set, line,
                           "G must contain at least one clause");
        std::vector<std::int64_t> seen;
        for (auto v : values) {
          if (v > header->clauses)
            throw ParseError(ParseErrorKind::ordinal_out_of_range, line,
                             "clause ordinal " + std::to_string(v) +
                                 " but only " +
                                 std::to_string(header->clauses) +
                                 " clauses");
          if (std::find(seen.begin(), seen.end(), v) != seen.end())
            throw ParseError(ParseErrorKind::duplicate_ordinal, line,
                             "clause ordinal " + std::to_string(v) +
                                 " listed twice");
          seen.push_back(v);
        }
        g_ordinals = std::move(values);
        g_line = line;
      }
      return;
    }
    reader->feed(tokens, line);
  });

  if (!header)
    throw ParseError(ParseErrorKind::missing_header, 0, "no 'p pqe' header");
  auto clauses = reader->finish();
  if (!x_vars)
    throw ParseError(ParseErrorKind::missing_quantifier_line, 0,
                     "no x line");
  if (!g_ordinals)
    throw ParseError(ParseErrorKind::missing_target_line, 0, "no g line");

  CnfFormula formula(std::move(clauses));
  VarSet quantified;
  for (auto v : *x_vars) {
    Var var(static_cast<std::uint32_t>(v));
    if (!formula.vars().count(var))
      throw ParseError(ParseErrorKind::quantified_variable_unused, x_line,
                       "variable " + std::to_string(v) +
                           " does not occur in any clause");
    quantified.insert(var);
  }
  std::vector<std::size_t> targets;
  for (auto ordinal : *g_ordinals) {
    auto index = static_cast<std::size_t>(ordinal - 1);
    const Clause &c = formula[index];
    if (std::none_of(c.begin(), c.end(), [&](Lit l) {
          return quantified.count(l.var()) != 0;
        }))
      throw ParseError(ParseErrorKind::unquantified_target, g_line,
                       "clause " + std::to_string(ordinal) + " " +
                           c.to_string() + " has no quantified variable");
    targets.push_back(index);
  }
  return PqeProblem(std::move(formula), std::move(quantified),
                    std::move(targets));
}

Solution parse_solution(std::string_view text, const PqeProblem &problem) {
  std::optional<Header> header;
  std::optional<ClauseReader> reader;
  for_each_line(text, [&](const std::vector<std::string_view> &tokens,
                          std::size_t line) {
    if (tokens[0] == "p") {
      if (header)
        throw ParseError(ParseErrorKind::duplicate_line, line,
                         "second header line");
      header = parse_header(tokens, "cnf", line);
      reader.emplace(*header);
      return;
    }
    if (!header)
      throw ParseError(ParseErrorKind::missing_header, line,
                       "'p cnf' header must come first");
    reader->feed(tokens, line);
  });
  if (!header)
    throw ParseError(ParseErrorKind::missing_header, 0, "no 'p cnf' header");
  auto clauses = reader->finish();
  for (std::size_t i = 0; i < clauses.size(); ++i)
    for (Lit l : clauses[i]) {
      if (problem.quantified_vars().count(l.var()))
        throw ParseError(ParseErrorKind::quantified_variable_in_solution,
                         reader->line_of(i),
                         "variable " + std::to_string(l.var().id) +
                             " is quantified");
      if (!problem.free_vars().count(l.var()))
        throw ParseError(ParseErrorKind::foreign_variable_in_solution,
                         reader->line_of(i),
                         "variable " + std::to_string(l.var().id) +
                             " does not occur in F");
    }
  return Solution(CnfFormula(std::move(clauses)), problem);
}

namespace {

void write_clauses(std::ostream &os, const CnfFormula &f) {
  for (auto &c : f) {
    for (Lit l : c)
      os << l.dimacs() << ' ';
    os << "0\n";
  }
}

} // namespace

std::string write_problem(const PqeProblem &problem) {
  std::ostringstream os;
  const CnfFormula &f = problem.formula();
  os << "p pqe " << f.var_span() << ' ' << f.size() << '\n';
  os << 'x';
  for (Var v : problem.quantified_vars())
    os << ' ' << v.id;
  os << " 0\ng";
  for (auto i : problem.targets())
    os << ' ' << i + 1;
  os << " 0\n";
  write_clauses(os, f);
  return os.str();
}

std::string write_solution(const Solution &h, const PqeProblem &problem) {
  std::ostringstream os;
  os << "p cnf "
     << std::max(problem.formula().var_span(), h.formula().var_span()) << ' '
     << h.size() << '\n';
  write_clauses(os, h.formula());
  return os.str();
}

std::string write_cnf(const CnfFormula &f) {
  std::ostringstream os;
  os << "p cnf " << f.var_span() << ' ' << f.size() << '\n';
  write_clauses(os, f);
  return os.str();
}

} // namespace pqe
