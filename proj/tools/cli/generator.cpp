#include "cli/generator.hpp"

#include <algorithm>

#include "abelroot/errors.hpp"

namespace abelroot::cli {

InstanceGenerator::InstanceGenerator(unsigned long seed) : rng_(gmp_randinit_mt) { rng_.seed(seed); }

Integer InstanceGenerator::uniform(const Integer& bound) {
  if (bound <= 0) throw InvalidArgument("uniform: bound must be positive");
  return rng_.get_z_range(bound);
}

Integer InstanceGenerator::unit(const Integer& p, const Integer& modulus) {
  while (true) {
    Integer u = uniform(modulus);
    if (u % p != 0) return u;
  }
}

Element InstanceGenerator::random_element(const GroupPtr& group) {
  std::vector<Integer> coords;
  for (std::size_t i = 0; i < group->rank(); ++i) coords.push_back(uniform(group->modulus(i)));
  return Element(group, std::move(coords));
}

BasisCandidate InstanceGenerator::random_basis(const GroupPtr& group) {
  std::vector<Element> elements;
  for (const auto& block : group->prime_blocks()) {
    for (std::size_t i = block.begin; i < block.end; ++i) {
      std::vector<Integer> coords(group->rank(), 0);
      coords[i] = unit(block.p, group->modulus(i));
      for (std::size_t j = i + 1; j < block.end; ++j) {
        const Integer step = pow(block.p, group->exponent(j) - group->exponent(i));
        coords[j] = step * uniform(group->modulus(i));
      }
      elements.emplace_back(group, std::move(coords));
    }
  }
  BasisCandidate basis(group, std::move(elements));
  if (!verify_basis(basis)) throw InternalError("random_basis produced a non-basis");
  return basis;
}

ExtractionProblem InstanceGenerator::solvable(const GroupPtr& group, BasisCandidate* witness) {
  BasisCandidate basis = random_basis(group);
  std::vector<Integer> m;
  for (std::size_t i = 0; i < group->rank(); ++i) m.push_back(uniform(group->modulus(i)));
  Element k = Element::identity(group);
  for (std::size_t i = 0; i < group->rank(); ++i) k = k + m[i] * basis[i];
  if (witness) *witness = basis;
  return ExtractionProblem(std::move(k), Multipliers(group, std::move(m)));
}

ExtractionProblem InstanceGenerator::random(const GroupPtr& group) {
  Element k = random_element(group);
  return ExtractionProblem(std::move(k), Multipliers(group, random_element(group).coords()));
}

GroupPtr InstanceGenerator::random_structure(const StructureLimits& limits) {
  if (limits.primes.empty() || limits.max_rank == 0 || limits.max_exponent == 0 ||
      limits.max_distinct_primes == 0) {
    throw InvalidArgument("random_structure: empty limits");
  }
  std::vector<unsigned long> pool = limits.primes;
  const std::size_t distinct =
      1 + uniform(std::min(limits.max_distinct_primes, pool.size())).get_ui();
  std::vector<unsigned long> chosen;
  for (std::size_t i = 0; i < distinct; ++i) {
    const std::size_t at = uniform(pool.size()).get_ui();
    chosen.push_back(pool[at]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
  }
  const std::size_t rank =
      distinct + uniform(limits.max_rank - std::min(limits.max_rank, distinct) + 1).get_ui();
  std::vector<PrimePower> factors;
  for (std::size_t i = 0; i < rank; ++i) {
    const unsigned long p = i < distinct ? chosen[i] : chosen[uniform(distinct).get_ui()];
    factors.emplace_back(Integer(p), 1 + uniform(limits.max_exponent).get_ui());
  }
  return std::make_shared<const GroupStructure>(GroupStructure::canonicalize(factors).first);
}

InstanceFile to_instance(const ExtractionProblem& problem) {
  const auto& g = *problem.group();
  InstanceFile out;
  for (std::size_t i = 0; i < g.rank(); ++i) out.factors.push_back(g.factor(i));
  out.element = problem.k.coords();
  out.multipliers = problem.m.coeffs();
  return out;
}

}  // namespace abelroot::cli
