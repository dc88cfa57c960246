#pragma once

// Seeded random PQE problems.
//
// All randomness comes from SplitMix64 so that corpora can be reproduced
// bit-exactly by other implementations. The draw order is documented in
// README.md and must not change.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pqe/formula.hpp"

namespace pqe {

class GenerationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64: state += 0x9E3779B97F4A7C15, then the standard output mix.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound) by rejection sampling; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) from the top 53 bits of next().
  double unit();

private:
  std::uint64_t state_;
};

struct GenParams {
  std::uint32_t num_vars = 70;
  std::uint32_t num_clauses = 140;
  double y_fraction = 0.5;
  double two_lit_fraction = 0.20;
  std::uint64_t seed = 1;
  /// |G|; clauses of G are distinct quantified clauses.
  std::uint32_t num_targets = 1;

  std::uint32_t free_count() const;
  /// Throws std::invalid_argument when the parameters are unusable.
  void validate() const;
};

PqeProblem generate(const GenParams &params);

/// Seed of member `index` of the family for `num_vars`.
std::uint64_t family_seed(std::uint64_t base_seed, std::uint32_t num_vars,
                          std::uint32_t index);

/// `per_size` problems for each entry of `sizes`, in order; member i for size
/// n uses num_vars = n, num_clauses = 2n and seed family_seed(base.seed, n, i).
std::vector<PqeProblem> generate_family(const GenParams &base,
                                        const std::vector<std::uint32_t> &sizes,
                                        std::uint32_t per_size);

} // namespace pqe
