#include "abelroot/root_extraction.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "abelroot/errors.hpp"

namespace abelroot {

ExtractionProblem::ExtractionProblem(Element k_in, Multipliers m_in)
    : k(std::move(k_in)), m(std::move(m_in)) {
  if (!same_group(k.group_ptr(), m.group_ptr())) {
    throw StructureMismatch("ExtractionProblem: element and multipliers use different groups");
  }
}

BasisCandidate::BasisCandidate(GroupPtr g, std::vector<Element> e)
    : group(std::move(g)), elements(std::move(e)) {
  if (elements.size() != group->rank()) {
    throw StructureMismatch("BasisCandidate: expected " + std::to_string(group->rank()) +
                            " elements, got " + std::to_string(elements.size()));
  }
  for (const auto& el : elements) {
    if (!same_group(el.group_ptr(), group)) {
      throw StructureMismatch("BasisCandidate: element from a different group");
    }
  }
}

BasisCandidate BasisCandidate::canonical(const GroupPtr& group) {
  std::vector<Element> elements;
  for (std::size_t i = 0; i < group->rank(); ++i) elements.push_back(Element::unit(group, i));
  return BasisCandidate(group, std::move(elements));
}

std::string to_string(FailureCondition condition) {
  switch (condition) {
    case FailureCondition::kCoefficientMismatchZero:
      return "coefficient_mismatch_zero";
    case FailureCondition::kOrderMismatch:
      return "order_mismatch";
    case FailureCondition::kValuationMismatch:
      return "valuation_mismatch";
  }
  return "unknown";
}

namespace {

using Indices = std::vector<std::size_t>;

bool contains(const Indices& set, std::size_t i) {
  return std::binary_search(set.begin(), set.end(), i);
}

void insert(Indices& set, std::size_t i) {
  auto it = std::lower_bound(set.begin(), set.end(), i);
  if (it == set.end() || *it != i) set.insert(it, i);
}

void erase(Indices& set, std::size_t i) {
  auto it = std::lower_bound(set.begin(), set.end(), i);
  if (it != set.end() && *it == i) set.erase(it);
}

Indices difference(const Indices& a, const Indices& b) {
  Indices out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool divisible(const Integer& value, const Integer& p) {
  return mpz_divisible_p(value.get_mpz_t(), p.get_mpz_t()) != 0;
}

// p^{e_k} * value * Q_i == 0 in Z/p^{e_i}.
bool killed_by(const GroupStructure& g, const Integer& value, std::size_t i, unsigned long e_k) {
  if (value == 0 || e_k >= g.exponent(i)) return true;
  return padic_valuation(value, g.prime(i)) >= g.exponent(i) - e_k;
}

std::optional<std::size_t> last_unit(const std::vector<Integer>& values, const Indices& active,
                                     const Integer& p) {
  for (auto it = active.rbegin(); it != active.rend(); ++it) {
    if (!divisible(values[*it], p)) return *it;
  }
  return std::nullopt;
}

std::string join(const std::vector<Integer>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += values[i].get_str();
  }
  return out + ")";
}

void note(const SolveContext& ctx, const std::string& line) {
  if (ctx.trace) ctx.trace->push_back(line);
}

void require_p_group(const GroupStructure& g, const char* what) {
  if (!g.is_p_group()) {
    throw PreconditionViolation(std::string(what) + ": " + g.to_string() +
                                " has more than one prime; split it into Sylow blocks first");
  }
}

// Order of sum_{i in active} q_i Q_i from its coefficients alone.
Integer coefficient_order(const GroupStructure& g, const std::vector<Integer>& q,
                          const Indices& active) {
  Integer best = 1;
  for (std::size_t i : active) {
    Integer d;
    mpz_gcd(d.get_mpz_t(), g.modulus(i).get_mpz_t(), q[i].get_mpz_t());
    const Integer o = g.modulus(i) / d;
    if (o > best) best = o;
  }
  return best;
}

// Removes p^r from the active coefficients. Returns r.
unsigned long reduce_coefficients(const GroupStructure& g, ReductionState& state) {
  const Integer& p = g.prime(0);
  std::optional<unsigned long> r;
  for (std::size_t i : state.active_q) {
    if (state.q[i] == 0) continue;
    const unsigned long v = padic_valuation(state.q[i], p);
    if (!r || v < *r) r = v;
  }
  state.r = r.value_or(0);
  if (state.r == 0) return 0;
  const Integer divisor = pow(p, state.r);
  for (std::size_t i : state.active_m) {
    if (!mpz_divisible_p(state.m[i].get_mpz_t(), divisor.get_mpz_t())) {
      throw PreconditionViolation("reduce: multiplier m_" + std::to_string(i + 1) + " = " +
                                  state.m[i].get_str() + " is not divisible by " +
                                  divisor.get_str() + "; the existence conditions do not hold");
    }
  }
  for (std::size_t i : state.active_q) mpz_divexact(state.q[i].get_mpz_t(), state.q[i].get_mpz_t(), divisor.get_mpz_t());
  for (std::size_t i : state.active_m) mpz_divexact(state.m[i].get_mpz_t(), state.m[i].get_mpz_t(), divisor.get_mpz_t());
  return state.r;
}

// The pivot: largest active index with a unit multiplier.
std::size_t multiplier_pivot(const ReductionState& state, const Integer& p) {
  auto k = last_unit(state.m, state.active_m, p);
  if (!k) {
    throw PreconditionViolation(
        "extract_p_group: no active multiplier is a unit after reduction; the existence "
        "conditions do not hold");
  }
  return *k;
}

// Equal-order exchange partner for the pivot slot k when q_k is not a unit.
// Prefers slots whose multiplier is nonzero, so that P_j = Q_j survives for
// zero multipliers whenever the instance allows it.
std::optional<std::size_t> exchange_partner(const GroupStructure& g, const ReductionState& state,
                                            std::size_t k) {
  const Integer& p = g.prime(0);
  std::optional<std::size_t> fallback;
  for (auto it = state.active_q.rbegin(); it != state.active_q.rend(); ++it) {
    const std::size_t j = *it;
    if (j == k || g.exponent(j) != g.exponent(k) || divisible(state.q[j], p)) continue;
    if (state.m[j] != 0) return j;
    if (!fallback) fallback = j;
  }
  return fallback;
}

void exchange_slots(ReductionState& state, std::size_t a, std::size_t b) {
  std::swap(state.slot_map[a], state.slot_map[b]);
  std::swap(state.q[a], state.q[b]);
  const bool a_in = contains(state.active_q, a);
  const bool b_in = contains(state.active_q, b);
  if (a_in != b_in) {
    if (a_in) {
      erase(state.active_q, a);
      insert(state.active_q, b);
    } else {
      erase(state.active_q, b);
      insert(state.active_q, a);
    }
  }
}

struct Split {
  Indices done_m;
  Indices done_q;
};

Split split_at(const GroupStructure& g, const ReductionState& state, std::size_t k) {
  Split s;
  const unsigned long e_k = g.exponent(k);
  for (std::size_t j : state.active_m) {
    if (killed_by(g, state.m[j], j, e_k)) s.done_m.push_back(j);
  }
  for (std::size_t j : state.active_q) {
    if (killed_by(g, state.q[j], j, e_k)) s.done_q.push_back(j);
  }
  return s;
}

// Runs the loop on coefficients only and records the equal-order slot
// exchanges that make every pivot's q-coefficient a unit. Exchanges at one
// iteration only touch slots of exponent e_k, which is larger than every
// earlier pivot's exponent, so replaying them from the start leaves all
// earlier decisions unchanged.
std::vector<std::size_t> plan_slot_exchanges(const ExtractionProblem& problem,
                                             const SolveContext& ctx) {
  const auto& g = *problem.group();
  const Integer& p = g.prime(0);
  ReductionState state = ReductionState::initial(problem);
  for (std::size_t iteration = 0; iteration < g.rank(); ++iteration) {
    reduce_coefficients(g, state);
    const std::size_t k = multiplier_pivot(state, p);
    const bool q_unit = contains(state.active_q, k) && !divisible(state.q[k], p);
    if (!q_unit) {
      auto partner = exchange_partner(g, state, k);
      if (!partner) {
        throw PreconditionViolation(
            "extract_p_group: no unit coefficient of K at exponent " +
            std::to_string(g.exponent(k)) + "; the existence conditions do not hold");
      }
      note(ctx, "exchange working slots " + std::to_string(k + 1) + " and " +
                    std::to_string(*partner + 1) + " (equal exponent " +
                    std::to_string(g.exponent(k)) + ")");
      exchange_slots(state, k, *partner);
    }
    if (coefficient_order(g, state.q, state.active_q) == g.modulus(k)) return state.slot_map;
    const Split s = split_at(g, state, k);
    state.active_m = difference(state.active_m, s.done_m);
    state.active_q = difference(state.active_q, s.done_q);
  }
  throw PreconditionViolation("extract_p_group: loop did not terminate within N iterations");
}

}  // namespace

ReductionState ReductionState::initial(const ExtractionProblem& problem) {
  const std::size_t n = problem.group()->rank();
  ReductionState s;
  s.q = problem.k.coords();
  s.m = problem.m.coeffs();
  s.active_q.resize(n);
  std::iota(s.active_q.begin(), s.active_q.end(), 0);
  s.active_m = s.active_q;
  s.slot_map = s.active_q;
  return s;
}

Element combine_working(const GroupPtr& group, const std::vector<Integer>& coeffs,
                        const std::vector<std::size_t>& indices,
                        const std::vector<std::size_t>& slot_map, OpCounter* ops) {
  Element acc = Element::identity(group);
  bool first = true;
  for (std::size_t i : indices) {
    if (coeffs.at(i) == 0) continue;
    Element term = scalar_mul(coeffs[i], Element::unit(group, slot_map.at(i)), ops);
    acc = first ? std::move(term) : add(acc, term, ops);
    first = false;
  }
  return acc;
}

Element reduce(const GroupPtr& group, const Element& k, ReductionState& state, OpCounter* ops) {
  require_p_group(*group, "reduce");
  if (reduce_coefficients(*group, state) == 0) return k;
  return combine_working(group, state.q, state.active_q, state.slot_map, ops);
}

BasisCandidate extract_p_group(const ExtractionProblem& problem, const SolveContext& ctx) {
  const GroupPtr& group = problem.group();
  const auto& g = *group;
  require_p_group(g, "extract_p_group");
  const Integer& p = g.prime(0);
  const std::size_t n = g.rank();

  ReductionState state = ReductionState::initial(problem);
  state.slot_map = plan_slot_exchanges(problem, ctx);
  for (std::size_t i = 0; i < n; ++i) state.q[i] = problem.k[state.slot_map[i]];

  std::vector<Element> basis;
  for (std::size_t i = 0; i < n; ++i) basis.push_back(Element::unit(group, state.slot_map[i]));

  Element k = problem.k;
  for (std::size_t iteration = 0; iteration < n; ++iteration) {
    k = reduce(group, k, state, ctx.ops);
    note(ctx, "reduce: r=" + std::to_string(state.r) + " K=" + k.to_string() +
                  " m=" + join(state.m));

    const std::size_t pivot = multiplier_pivot(state, p);
    state.pivot = pivot;
    const auto q_pivot = last_unit(state.q, state.active_q, p);
    if (!q_pivot || g.exponent(*q_pivot) != g.exponent(pivot)) {
      throw PreconditionViolation(
          "extract_p_group: the unit coefficients of K and of the multipliers sit at different "
          "exponents; the existence conditions do not hold");
    }
    if (!contains(state.active_q, pivot) || divisible(state.q[pivot], p)) {
      throw InternalError("extract_p_group: planned slot exchange did not align the pivot");
    }

    const Integer inverse = mod_inverse(state.m[pivot], g.modulus(pivot));
    const bool last = order(k, ctx.ops) == g.modulus(pivot);

    Indices used_m = state.active_m;
    Element part = k;
    if (!last) {
      const Split s = split_at(g, state, pivot);
      used_m = s.done_m;
      part = combine_working(group, state.q, s.done_q, state.slot_map, ctx.ops);
      state.active_m = difference(state.active_m, s.done_m);
      state.active_q = difference(state.active_q, s.done_q);
    }
    erase(used_m, pivot);
    const Element others = combine_working(group, state.m, used_m, state.slot_map, ctx.ops);
    const Element target = others.is_identity() ? part : add(part, negate(others, ctx.ops), ctx.ops);
    basis[pivot] = scalar_mul(inverse, target, ctx.ops);
    note(ctx, "pivot k=" + std::to_string(pivot + 1) + ": P_" + std::to_string(pivot + 1) +
                  " = " + basis[pivot].to_string() + (last ? " (final)" : ""));

    if (last) return BasisCandidate(group, std::move(basis));
    k = add(k, negate(part, ctx.ops), ctx.ops);
  }
  throw InternalError("extract_p_group: loop did not terminate within N iterations");
}

std::optional<NoSolution> existence_failure(const ExtractionProblem& problem,
                                            const SolveContext& ctx) {
  const auto& g = *problem.group();
  require_p_group(g, "check_existence");
  const Integer& p = g.prime(0);

  const bool k_zero = problem.k.is_identity();
  const bool m_zero = problem.m.is_zero();
  if (k_zero && m_zero) return std::nullopt;
  if (k_zero != m_zero) return NoSolution{FailureCondition::kCoefficientMismatchZero, p, {}};

  Indices all(g.rank());
  std::iota(all.begin(), all.end(), 0);
  Element m_sum = combine_canonical(problem.group(), problem.m.coeffs(), all, ctx.ops);

  const Integer k_order = order(problem.k, ctx.ops);
  const Integer m_order = order(m_sum, ctx.ops);
  if (k_order != m_order) {
    note(ctx, "order mismatch: |K|=" + k_order.get_str() + " |M|=" + m_order.get_str());
    return NoSolution{FailureCondition::kOrderMismatch, p, {}};
  }

  // |K| = p^e; compare nu_p(p^j K) with nu_p(p^j M) for 0 <= j < e.
  Element k_j = problem.k;
  Element m_j = m_sum;
  for (unsigned long j = 0; Integer(pow(p, j)) < k_order; ++j) {
    if (j > 0) {
      k_j = scalar_mul(p, k_j, ctx.ops);
      m_j = scalar_mul(p, m_j, ctx.ops);
    }
    const Valuation vk = valuation(k_j, p);
    const Valuation vm = valuation(m_j, p);
    if (vk != vm) {
      note(ctx, "valuation mismatch at j=" + std::to_string(j) + ": " + vk.to_string() +
                    " vs " + vm.to_string());
      return NoSolution{FailureCondition::kValuationMismatch, p, j};
    }
  }
  return std::nullopt;
}

ExtractionOutcome check_existence(const ExtractionProblem& problem, const SolveContext& ctx) {
  if (auto failure = existence_failure(problem, ctx)) return *failure;
  if (problem.k.is_identity()) return BasisCandidate::canonical(problem.group());
  BasisCandidate basis = extract_p_group(problem, ctx);
  if (!verify_solution(problem, basis)) {
    throw InternalError("check_existence: extracted basis failed verification for K=" +
                        problem.k.to_string());
  }
  return basis;
}

ExtractionOutcome extract(const ExtractionProblem& problem, const SolveContext& ctx,
                          std::vector<BlockReport>* blocks) {
  const GroupPtr& group = problem.group();
  std::vector<Element> elements(group->rank(), Element::identity(group));
  std::optional<NoSolution> first_failure;

  for (const auto& block : sylow_split(problem.k, problem.m)) {
    OpCounter block_ops;
    SolveContext block_ctx{&block_ops, ctx.trace};
    note(ctx, "block p=" + block.prime.get_str() + ": " + block.group->to_string() +
                  " K=" + block.k.to_string() + " m=" + join(block.m.coeffs()));
    ExtractionOutcome outcome = check_existence(ExtractionProblem(block.k, block.m), block_ctx);
    if (ctx.ops) *ctx.ops += block_ops;
    if (blocks) {
      blocks->push_back(BlockReport{
          block.prime, block.offset,
          outcome.has_solution() ? std::nullopt : std::optional<NoSolution>(outcome.failure()),
          block_ops});
    }
    if (!outcome.has_solution()) {
      if (!first_failure) first_failure = outcome.failure();
      if (!blocks) break;
      continue;
    }
    for (std::size_t i = 0; i < outcome.basis().size(); ++i) {
      elements[block.offset + i] = embed(outcome.basis()[i], group, block.offset);
    }
  }
  if (first_failure) return *first_failure;

  BasisCandidate basis(group, std::move(elements));
  if (!verify_solution(problem, basis)) {
    throw InternalError("extract: assembled basis failed verification");
  }
  return basis;
}

namespace {

// Rank of a square matrix over F_p by Gaussian elimination.
std::size_t rank_mod_p(std::vector<std::vector<Integer>> a, const Integer& p) {
  const std::size_t n = a.size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) continue;
    std::swap(a[pivot], a[rank]);
    const Integer inv = mod_inverse(a[rank][col], p);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == rank || a[row][col] == 0) continue;
      const Integer factor = mod(a[row][col] * inv, p);
      for (std::size_t c = col; c < n; ++c) a[row][c] = mod(a[row][c] - factor * a[rank][c], p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool verify_basis(const BasisCandidate& candidate) {
  const auto& g = *candidate.group;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    if (order(candidate[i]) != g.modulus(i)) return false;
  }
  for (const auto& block : g.prime_blocks()) {
    std::vector<std::vector<Integer>> matrix;
    for (std::size_t i = block.begin; i < block.end; ++i) {
      std::vector<Integer> row;
      for (std::size_t j = block.begin; j < block.end; ++j) row.push_back(mod(candidate[i][j], block.p));
      matrix.push_back(std::move(row));
    }
    if (rank_mod_p(std::move(matrix), block.p) != block.size()) return false;
  }
  return true;
}

bool verify_solution(const ExtractionProblem& problem, const BasisCandidate& candidate) {
  if (!same_group(problem.group(), candidate.group)) return false;
  if (!verify_basis(candidate)) return false;
  Element sum = Element::identity(problem.group());
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    sum = add(sum, scalar_mul(problem.m[i], candidate[i]));
  }
  return sum == problem.k;
}

}  // namespace abelroot
