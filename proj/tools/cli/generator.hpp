#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "abelroot/group.hpp"
#include "abelroot/root_extraction.hpp"
#include "cli/instance.hpp"

namespace abelroot::cli {

struct StructureLimits {
  std::vector<unsigned long> primes = {2, 3, 5, 7, 11};
  std::size_t max_rank = 6;
  unsigned long max_exponent = 5;
  std::size_t max_distinct_primes = 3;
};

// Deterministic instance source. The same seed and call sequence always
// produce the same instances.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(unsigned long seed);

  Integer uniform(const Integer& bound);  // [0, bound)
  Integer unit(const Integer& p, const Integer& modulus);
  Element random_element(const GroupPtr& group);

  // Random basis change that is upper triangular within each prime block:
  // P_i = u_i Q_i + sum_{j > i} p^(e_j - e_i) t_ij Q_j with u_i a unit.
  // Checked with verify_basis.
  BasisCandidate random_basis(const GroupPtr& group);

  // K = sum m_i P_i for a random basis P and uniform m. Solvable by
  // construction; `witness` receives P when non-null.
  ExtractionProblem solvable(const GroupPtr& group, BasisCandidate* witness = nullptr);

  // K and m uniform.
  ExtractionProblem random(const GroupPtr& group);

  GroupPtr random_structure(const StructureLimits& limits = {});

 private:
  gmp_randclass rng_;
};

InstanceFile to_instance(const ExtractionProblem& problem);

}  // namespace abelroot::cli
