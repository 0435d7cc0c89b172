#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abelroot/group.hpp"
#include "abelroot/op_counter.hpp"

namespace abelroot {

// Find a basis P_1..P_N of G with K = m_1 P_1 + ... + m_N P_N, where
// |P_i| = p_i^e_i.
struct ExtractionProblem {
  ExtractionProblem(Element k, Multipliers m);

  const GroupPtr& group() const { return k.group_ptr(); }

  Element k;
  Multipliers m;
};

// Ordered candidate basis. Shape is checked on construction; being an actual
// basis is not (see verify_basis).
struct BasisCandidate {
  BasisCandidate(GroupPtr group, std::vector<Element> elements);
  static BasisCandidate canonical(const GroupPtr& group);

  const Element& operator[](std::size_t i) const { return elements[i]; }
  std::size_t size() const { return elements.size(); }

  GroupPtr group;
  std::vector<Element> elements;
};

enum class FailureCondition {
  kCoefficientMismatchZero,  // exactly one of K, sum m_i Q_i is the identity
  kOrderMismatch,            // |K| != |sum m_i Q_i|
  kValuationMismatch,        // nu_p(p^j K) != nu_p(p^j sum m_i Q_i)
};

std::string to_string(FailureCondition condition);

struct NoSolution {
  FailureCondition condition;
  Integer prime;                       // prime of the failing Sylow block
  std::optional<unsigned long> j;      // smallest failing j, valuation failures only

  bool operator==(const NoSolution&) const = default;
};

class ExtractionOutcome {
 public:
  ExtractionOutcome(BasisCandidate basis) : value_(std::move(basis)) {}
  ExtractionOutcome(NoSolution failure) : value_(std::move(failure)) {}

  bool has_solution() const { return std::holds_alternative<BasisCandidate>(value_); }
  const BasisCandidate& basis() const { return std::get<BasisCandidate>(value_); }
  const NoSolution& failure() const { return std::get<NoSolution>(value_); }

 private:
  std::variant<BasisCandidate, NoSolution> value_;
};

// Optional instrumentation shared by the solvers. All pointers may be null.
struct SolveContext {
  OpCounter* ops = nullptr;
  std::vector<std::string>* trace = nullptr;
};

// Bookkeeping of the p-group loop: the current coefficients of K and of the
// multipliers with respect to the working basis W, the still-active index
// sets, the last pivot and the power removed by the last reduction.
//
// W_i = Q_{slot_map[i]}. slot_map only ever exchanges slots of equal
// exponent, so W is a sorted basis and every slot keeps its prescribed order.
struct ReductionState {
  static ReductionState initial(const ExtractionProblem& problem);

  std::vector<Integer> q;
  std::vector<Integer> m;
  std::vector<std::size_t> active_q;  // ascending
  std::vector<std::size_t> active_m;  // ascending
  std::optional<std::size_t> pivot;
  unsigned long r = 0;
  std::vector<std::size_t> slot_map;
};

// sum_{i in indices} coeffs_i W_i with W_i = Q_{slot_map[i]}, counted.
Element combine_working(const GroupPtr& group, const std::vector<Integer>& coeffs,
                        const std::vector<std::size_t>& indices,
                        const std::vector<std::size_t>& slot_map, OpCounter* ops = nullptr);

// Divides the active q and m coefficients by p^r, r the largest power dividing
// every active q_i (zeros do not constrain r). Returns the new K, or `k`
// untouched when r = 0. Throws PreconditionViolation if some active m_i is not
// divisible by p^r.
Element reduce(const GroupPtr& group, const Element& k, ReductionState& state,
               OpCounter* ops = nullptr);

// Decision procedure for a p-group (single prime block); on success runs
// extract_p_group and returns its verified witness. Throws
// PreconditionViolation on a group with more than one prime.
ExtractionOutcome check_existence(const ExtractionProblem& problem, const SolveContext& ctx = {});

// The decision half of check_existence alone: no witness is built.
std::optional<NoSolution> existence_failure(const ExtractionProblem& problem,
                                            const SolveContext& ctx = {});

// Root extraction in a p-group whose existence conditions hold. Throws
// PreconditionViolation if they do not.
BasisCandidate extract_p_group(const ExtractionProblem& problem, const SolveContext& ctx = {});

struct BlockReport {
  Integer prime;
  std::size_t offset;
  std::optional<NoSolution> failure;
  OpCounter ops;
};

// General finite Abelian groups: split into Sylow blocks, solve each block,
// concatenate. Reports the first failing block in ascending prime order. When
// `blocks` is non-null every block is evaluated and reported.
ExtractionOutcome extract(const ExtractionProblem& problem, const SolveContext& ctx = {},
                          std::vector<BlockReport>* blocks = nullptr);

// Basis test by linear algebra: every P_i has order p_i^e_i and, within each
// prime block, the coefficient matrix reduced mod p is invertible over F_p
// (an endomorphism of a finite Abelian p-group is an automorphism iff its
// matrix is invertible mod p). The brute-force closure test lives in oracle.hpp.
bool verify_basis(const BasisCandidate& candidate);

// verify_basis and sum m_i P_i = K.
bool verify_solution(const ExtractionProblem& problem, const BasisCandidate& candidate);

}  // namespace abelroot
