#include "pqe/sat_oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pqe {

const char *to_string(SatStatus s) {
  switch (s) {
  case SatStatus::sat:
    return "sat";
  case SatStatus::unsat:
    return "unsat";
  case SatStatus::resource_out:
    return "resource_out";
  }
  return "?";
}

const char *to_string(ResourceLimit l) {
  switch (l) {
  case ResourceLimit::conflicts:
    return "conflicts";
  case ResourceLimit::time:
    return "time";
  case ResourceLimit::iterations:
    return "iterations";
  }
  return "?";
}

namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr std::uint64_t kRestartBase = 100;

double luby(double y, int x) {
  int size = 1, seq = 0;
  for (; size < x + 1; seq++, size = 2 * size + 1)
    ;
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i)
    r *= y;
  return r;
}

std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace

SatOracle::SatOracle(SatOptions options) : options_(options) {}

Var SatOracle::new_var() {
  grow_to(num_vars_ + 1);
  return Var(num_vars_);
}

void SatOracle::reserve_vars(std::uint32_t n) { grow_to(n); }

void SatOracle::grow_to(std::uint32_t n) {
  if (n <= num_vars_)
    return;
  assigns_.resize(n, 0);
  levels_.resize(n, 0);
  reasons_.resize(n, kNoReason);
  activity_.resize(n, 0.0);
  heap_pos_.resize(n, -1);
  seen_.resize(n, 0);
  watches_.resize(2 * static_cast<std::size_t>(n));
  for (std::uint32_t v = num_vars_; v < n; ++v) {
    if (options_.seed != 0)
      activity_[v] = 1e-5 * static_cast<double>(mix(options_.seed ^ v) >> 11) *
                     0x1.0p-53;
    heap_insert(v);
  }
  num_vars_ = n;
}

void SatOracle::add_clause(const Clause &c) {
  if (!c.empty())
    grow_to(std::max_element(c.begin(), c.end(), [](Lit a, Lit b) {
              return a.var() < b.var();
            })->var().id);
  if (!c.empty()) {
    check_witness_.push_back(index_of(*c.begin()));
    check_begin_.push_back(static_cast<std::uint32_t>(check_lits_.size()));
    check_size_.push_back(static_cast<std::uint32_t>(c.size()));
    check_id_.push_back(static_cast<std::uint32_t>(original_.size()));
    for (Lit l : c)
      check_lits_.push_back(index_of(l));
  }
  original_.push_back(c);
  if (!ok_)
    return;
  std::vector<LitIdx> lits;
  lits.reserve(c.size());
  for (Lit l : c) {
    LitIdx i = index_of(l);
    if (value(i) == 1)
      return; // satisfied at the root
    if (value(i) == 0)
      lits.push_back(i);
  }
  if (lits.empty()) {
    ok_ = false;
  } else if (lits.size() == 1) {
    enqueue(lits[0], kNoReason);
    if (propagate() != kNoReason)
      ok_ = false;
  } else {
    attach(std::move(lits), false);
  }
}

void SatOracle::add_formula(const CnfFormula &f) {
  grow_to(f.var_span());
  for (auto &c : f)
    add_clause(c);
}

void SatOracle::set_limits(const SatLimits &limits) {
  conflict_cap_.reset();
  deadline_.reset();
  if (limits.max_conflicts)
    conflict_cap_ = stats_.conflicts + *limits.max_conflicts;
  if (limits.time_budget_sec) {
    auto budget = std::chrono::duration<double>(
        std::max(0.0, *limits.time_budget_sec));
    deadline_ = std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    budget);
  }
}

bool SatOracle::limit_hit(std::optional<ResourceLimit> &which) const {
  if (conflict_cap_ && stats_.conflicts >= *conflict_cap_) {
    which = ResourceLimit::conflicts;
    return true;
  }
  if (deadline_ && std::chrono::steady_clock::now() >= *deadline_) {
    which = ResourceLimit::time;
    return true;
  }
  return false;
}

SatOracle::CRef SatOracle::attach(std::vector<LitIdx> lits, bool learnt) {
  CRef cr = static_cast<CRef>(clauses_.size());
  ClauseRec rec;
  rec.begin = static_cast<std::uint32_t>(arena_.size());
  rec.size = static_cast<std::uint32_t>(lits.size());
  rec.learnt = learnt;
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  watches_[lits[0]].push_back({cr, lits[1]});
  watches_[lits[1]].push_back({cr, lits[0]});
  clauses_.push_back(rec);
  if (learnt) {
    learnts_.push_back(cr);
    bump_clause(clauses_.back());
  }
  return cr;
}

void SatOracle::enqueue(LitIdx l, CRef reason) {
  std::uint32_t v = var_of(l);
  assigns_[v] = (l & 1) ? -1 : 1;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back(l);
}

SatOracle::CRef SatOracle::propagate() {
  while (qhead_ < trail_.size()) {
    LitIdx p = trail_[qhead_++];
    LitIdx false_lit = p ^ 1;
    ++stats_.propagations;
    auto &ws = watches_[false_lit];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseRec &c = clauses_[w.cref];
      if (c.removed) {
        ++i;
        continue;
      }
      LitIdx *lits = arena_.data() + c.begin;
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      ++i;
      LitIdx first = lits[0];
      Watcher kept{w.cref, first};
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = kept;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size; ++k) {
        if (value(lits[k]) != -1) {
          std::swap(lits[1], lits[k]);
          watches_[lits[1]].push_back(kept);
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = kept;
      if (value(first) == -1) {
        while (i < ws.size())
          ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return kNoReason;
}

void SatOracle::analyze(CRef conflict, std::vector<LitIdx> &learnt,
                        std::uint32_t &backtrack_level) {
  learnt.clear();
  learnt.push_back(0); // asserting literal goes here
  int path = 0;
  bool first_clause = true;
  LitIdx p = 0;
  std::size_t index = trail_.size();
  CRef cr = conflict;
  do {
    ClauseRec &c = clauses_[cr];
    if (c.learnt)
      bump_clause(c);
    const LitIdx *lits = arena_.data() + c.begin;
    for (std::size_t j = first_clause ? 0 : 1; j < c.size; ++j) {
      LitIdx q = lits[j];
      std::uint32_t v = var_of(q);
      if (!seen_[v] && levels_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (levels_[v] >= level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    first_clause = false;
    while (!seen_[var_of(trail_[--index])])
      ;
    p = trail_[index];
    cr = reasons_[var_of(p)];
    seen_[var_of(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = p ^ 1;

  analyze_stack_.assign(learnt.begin(), learnt.end());
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    std::uint32_t v = var_of(learnt[i]);
    if (reasons_[v] == kNoReason || !literal_redundant(learnt[i]))
      learnt[keep++] = learnt[i];
  }
  learnt.resize(keep);
  for (LitIdx l : analyze_stack_)
    seen_[var_of(l)] = 0;

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (levels_[var_of(learnt[i])] > levels_[var_of(learnt[max_i])])
        max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = levels_[var_of(learnt[1])];
  }
}

// A literal of the learnt clause is redundant when every path through its
// implication graph ends in literals already in the clause (or at level 0).
bool SatOracle::literal_redundant(LitIdx l) {
  auto &toclear = analyze_stack_;
  std::size_t top = toclear.size();
  std::vector<LitIdx> stack{l};
  while (!stack.empty()) {
    const ClauseRec &c = clauses_[reasons_[var_of(stack.back())]];
    stack.pop_back();
    const LitIdx *lits = arena_.data() + c.begin;
    for (std::size_t i = 1; i < c.size; ++i) {
      LitIdx q = lits[i];
      std::uint32_t v = var_of(q);
      if (seen_[v] || levels_[v] == 0)
        continue;
      if (reasons_[v] != kNoReason) {
        seen_[v] = 1;
        stack.push_back(q);
        toclear.push_back(q);
      } else {
        for (std::size_t k = top; k < toclear.size(); ++k)
          seen_[var_of(toclear[k])] = 0;
        toclear.resize(top);
        return false;
      }
    }
  }
  return true;
}

void SatOracle::analyze_final(LitIdx failed, std::vector<Lit> &out) {
  out.clear();
  out.push_back(lit_of(failed));
  if (level() == 0)
    return;
  seen_[var_of(failed)] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    std::uint32_t v = var_of(trail_[i]);
    if (!seen_[v])
      continue;
    if (reasons_[v] == kNoReason) {
      if (levels_[v] > 0)
        out.push_back(lit_of(trail_[i]));
    } else {
      const ClauseRec &c = clauses_[reasons_[v]];
      const LitIdx *lits = arena_.data() + c.begin;
      for (std::size_t j = 1; j < c.size; ++j)
        if (levels_[var_of(lits[j])] > 0)
          seen_[var_of(lits[j])] = 1;
    }
    seen_[v] = 0;
  }
  seen_[var_of(failed)] = 0;
  std::sort(out.begin(), out.end(), [](Lit a, Lit b) {
    return a.var() < b.var();
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

void SatOracle::cancel_until(std::uint32_t lvl) {
  if (level() <= lvl)
    return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    std::uint32_t v = var_of(trail_[i]);
    assigns_[v] = 0;
    reasons_[v] = kNoReason;
    if (!heap_contains(v))
      heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

bool SatOracle::locked(CRef cr) const {
  const ClauseRec &c = clauses_[cr];
  LitIdx first = arena_[c.begin];
  return value(first) == 1 && reasons_[var_of(first)] == cr;
}

void SatOracle::reduce_learnts() {
  std::sort(learnts_.begin(), learnts_.end(), [this](CRef a, CRef b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  std::size_t half = learnts_.size() / 2;
  std::vector<CRef> kept;
  kept.reserve(learnts_.size());
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    CRef cr = learnts_[i];
    ClauseRec &c = clauses_[cr];
    if (i < half && c.size > 2 && !locked(cr)) {
      c.removed = true;
      garbage_ += c.size;
      ++stats_.learned_deleted;
    } else {
      kept.push_back(cr);
    }
  }
  learnts_ = std::move(kept);
  purge_removed();
  max_learnts_ *= 1.1;
}

// Drops clauses satisfied at the root. Only called at level 0.
void SatOracle::simplify() {
  for (CRef cr = 0; cr < clauses_.size(); ++cr) {
    ClauseRec &c = clauses_[cr];
    if (c.removed)
      continue;
    const LitIdx *lits = arena_.data() + c.begin;
    if (std::any_of(lits, lits + c.size,
                    [this](LitIdx l) { return value(l) == 1; })) {
      c.removed = true;
      garbage_ += c.size;
    }
  }
  std::erase_if(learnts_, [this](CRef cr) { return clauses_[cr].removed; });
  purge_removed();
  simplified_at_ = trail_.size();
}

void SatOracle::purge_removed() {
  for (auto &ws : watches_)
    std::erase_if(ws, [this](const Watcher &w) {
      return clauses_[w.cref].removed;
    });
  if (garbage_ * 2 <= arena_.size())
    return;
  std::vector<LitIdx> compact;
  compact.reserve(arena_.size() - garbage_);
  for (auto &c : clauses_) {
    std::uint32_t begin = static_cast<std::uint32_t>(compact.size());
    if (!c.removed)
      compact.insert(compact.end(), arena_.begin() + c.begin,
                     arena_.begin() + c.begin + c.size);
    else
      c.size = 0;
    c.begin = begin;
  }
  arena_ = std::move(compact);
  garbage_ = 0;
}

void SatOracle::bump_var(std::uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto &a : activity_)
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v))
    heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void SatOracle::bump_clause(ClauseRec &c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (CRef cr : learnts_)
      clauses_[cr].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void SatOracle::decay_activities() {
  var_inc_ /= kVarDecay;
  clause_inc_ /= kClauseDecay;
}

void SatOracle::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void SatOracle::heap_up(std::size_t pos) {
  std::uint32_t v = heap_[pos];
  auto before = [this](std::uint32_t a, std::uint32_t b) {
    return activity_[a] > activity_[b] ||
           (activity_[a] == activity_[b] && a < b);
  };
  while (pos > 0) {
    std::size_t parent = (pos - 1) / 2;
    if (!before(v, heap_[parent]))
      break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

void SatOracle::heap_down(std::size_t pos) {
  std::uint32_t v = heap_[pos];
  auto before = [this](std::uint32_t a, std::uint32_t b) {
    return activity_[a] > activity_[b] ||
           (activity_[a] == activity_[b] && a < b);
  };
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size())
      break;
    if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child]))
      ++child;
    if (!before(heap_[child], v))
      break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

std::uint32_t SatOracle::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

void SatOracle::check_model(const std::vector<std::int8_t> &model,
                            std::span<const Lit> assumptions) {
  auto idx_true = [&](LitIdx i) {
    std::int8_t v = model[var_of(i)];
    return (i & 1) ? v < 0 : v > 0;
  };
  // The literal that satisfied a clause last time is tried first. Clauses
  // satisfied by a level-0 literal stay satisfied in every later model and
  // are dropped from the list.
  std::size_t kept = 0, n = check_witness_.size();
  for (std::size_t k = 0; k < n; ++k) {
    LitIdx w = check_witness_[k];
    if (!idx_true(w)) {
      auto first = check_lits_.begin() + check_begin_[k];
      auto last = check_lits_.begin() + check_begin_[k] + check_size_[k];
      auto it = std::find_if(first, last, idx_true);
      if (it == last)
        throw std::logic_error("SAT model falsifies database clause " +
                               original_[check_id_[k]].to_string());
      w = *it;
    }
    if (levels_[var_of(w)] != 0) {
      check_witness_[kept] = w;
      check_begin_[kept] = check_begin_[k];
      check_size_[kept] = check_size_[k];
      check_id_[kept] = check_id_[k];
      ++kept;
    }
  }
  check_witness_.resize(kept);
  check_begin_.resize(kept);
  check_size_.resize(kept);
  check_id_.resize(kept);
  for (Lit a : assumptions)
    if (!idx_true(index_of(a)))
      throw std::logic_error("SAT model violates assumption " +
                             std::to_string(a.dimacs()));
}

SatOutcome SatOracle::solve(const Assignment &assumptions) {
  std::vector<Lit> lits;
  lits.reserve(assumptions.size());
  for (auto [v, value] : assumptions)
    lits.emplace_back(v, !value);
  return solve(lits);
}

SatOutcome SatOracle::solve(std::span<const Lit> assumptions) {
  ++stats_.total_calls;
  for (Lit a : assumptions)
    if (a.var().id == 0 || a.var().id > num_vars_)
      throw std::invalid_argument("assumption over unknown variable " +
                                  std::to_string(a.var().id));

  SatOutcome out;
  std::optional<ResourceLimit> which;
  if (limit_hit(which)) {
    out.status = SatStatus::resource_out;
    out.tripped = which;
    return out;
  }
  if (!ok_) {
    out.status = SatStatus::unsat;
    return out;
  }

  std::vector<LitIdx> assumed;
  assumed.reserve(assumptions.size());
  for (Lit a : assumptions)
    assumed.push_back(index_of(a));

  if (trail_.size() > simplified_at_)
    simplify();
  if (max_learnts_ == 0)
    max_learnts_ = std::max(2000.0, static_cast<double>(original_.size()) / 3);

  int restart_round = 0;
  std::uint64_t restart_budget =
      static_cast<std::uint64_t>(luby(2, restart_round) * kRestartBase);
  std::uint64_t since_restart = 0;
  std::vector<LitIdx> learnt;

  for (;;) {
    CRef conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++since_restart;
      if (level() == 0) {
        ok_ = false;
        out.status = SatStatus::unsat;
        return out;
      }
      std::uint32_t backtrack = 0;
      analyze(conflict, learnt, backtrack);
      cancel_until(backtrack);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        CRef cr = attach(learnt, true);
        enqueue(learnt[0], cr);
      }
      decay_activities();
      if (limit_hit(which)) {
        cancel_until(0);
        out.status = SatStatus::resource_out;
        out.tripped = which;
        return out;
      }
      continue;
    }

    if (options_.restarts && since_restart >= restart_budget) {
      cancel_until(0);
      since_restart = 0;
      restart_budget =
          static_cast<std::uint64_t>(luby(2, ++restart_round) * kRestartBase);
    }
    if (static_cast<double>(learnts_.size()) >= max_learnts_)
      reduce_learnts();

    std::optional<LitIdx> next;
    while (level() < assumed.size()) {
      LitIdx a = assumed[level()];
      if (value(a) == 1) {
        trail_lim_.push_back(trail_.size()); // already holds: empty level
      } else if (value(a) == -1) {
        analyze_final(a, out.failed_assumptions);
        cancel_until(0);
        out.status = SatStatus::unsat;
        return out;
      } else {
        next = a;
        break;
      }
    }
    if (!next) {
      while (!heap_.empty()) {
        std::uint32_t v = heap_pop();
        if (assigns_[v] == 0) {
          next = 2 * v + 1; // default polarity: false
          break;
        }
      }
      if (!next) {
        std::vector<std::int8_t> model = assigns_;
        check_model(model, assumptions);
        Assignment m;
        for (std::uint32_t v = 0; v < num_vars_; ++v)
          m.set(Var(v + 1), model[v] > 0);
        cancel_until(0);
        out.status = SatStatus::sat;
        out.model = std::move(m);
        return out;
      }
      ++stats_.decisions;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(*next, kNoReason);
  }
}

SatOutcome solve_formula(const CnfFormula &f, const SatLimits &limits) {
  SatOracle oracle;
  oracle.add_formula(f);
  oracle.set_limits(limits);
  return oracle.solve();
}

} // namespace pqe
