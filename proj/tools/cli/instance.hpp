#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abelroot/group.hpp"
#include "abelroot/root_extraction.hpp"

namespace abelroot::cli {

// On-disk problem instance. Factors and coordinates are kept in the order the
// user wrote them; normalize() maps them onto the canonical (sorted) group.
struct InstanceFile {
  std::vector<PrimePower> factors;
  std::vector<Integer> element;
  std::vector<Integer> multipliers;
  std::optional<std::vector<std::vector<Integer>>> claimed_basis;

  bool operator==(const InstanceFile&) const = default;
};

// Throws InvalidArgument on malformed JSON, missing fields, bad integers,
// composite "primes" and length mismatches. Integers may be decimal strings or
// JSON numbers. Empty "element"/"multipliers" arrays stand for all zeros.
InstanceFile parse_instance(std::string_view json_text);
InstanceFile read_instance(const std::string& path);

// Integers are emitted as decimal strings.
std::string emit_instance(const InstanceFile& instance);

// "2^1,2^3,2^4", "Z/2xZ/8xZ/16", "Z/12" (factored by trial division up to
// 10^6). Returns factors in the order written.
std::vector<PrimePower> parse_factor_spec(std::string_view spec);

struct NormalizedInstance {
  GroupPtr group;
  // position[u] = canonical index of the user's u-th factor.
  std::vector<std::size_t> position;
  ExtractionProblem problem;
  std::optional<BasisCandidate> claimed_basis;
  std::vector<std::string> warnings;

  bool reordered() const;
  // Canonical basis -> rows and columns in the user's factor order.
  std::vector<std::vector<Integer>> to_user_order(const BasisCandidate& basis) const;
};

// Sorts factors, permutes coordinates accordingly and reduces out-of-range
// coordinates modulo p_i^e_i (recording a warning for each).
NormalizedInstance normalize(const InstanceFile& instance);

}  // namespace abelroot::cli
