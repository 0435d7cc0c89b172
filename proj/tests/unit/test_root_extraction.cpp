#include <gtest/gtest.h>

#include <map>
#include <set>

#include "abelroot/errors.hpp"
#include "abelroot/oracle.hpp"
#include "abelroot/root_extraction.hpp"
#include "cli/generator.hpp"

using namespace abelroot;

namespace {

Element el(const GroupPtr& g, std::vector<Integer> c) { return Element(g, std::move(c)); }

ExtractionProblem problem(const GroupPtr& g, std::vector<Integer> k, std::vector<Integer> m) {
  return ExtractionProblem(el(g, std::move(k)), Multipliers(g, std::move(m)));
}

BasisCandidate basis(const GroupPtr& g, std::vector<std::vector<Integer>> rows) {
  std::vector<Element> elements;
  for (auto& r : rows) elements.push_back(el(g, std::move(r)));
  return BasisCandidate(g, std::move(elements));
}

GroupPtr z2_z8_z16() { return make_group({{2, 1}, {2, 3}, {2, 4}}); }
GroupPtr z4_z16_z32_z64() { return make_group({{2, 2}, {2, 4}, {2, 5}, {2, 6}}); }

// Index of a coefficient vector in lexicographic order.
std::uint64_t key(const GroupPtr& g, const std::vector<Integer>& v) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < v.size(); ++i) idx = idx * g->modulus(i).get_ui() + v[i].get_ui();
  return idx;
}

// solvable[key(m)][key(K)] from the full list of bases.
std::vector<std::vector<char>> solvable_table(const GroupPtr& g) {
  const auto n = g->cardinality().get_ui();
  std::vector<std::vector<char>> table(n, std::vector<char>(n, 0));
  const auto bases = oracle::enumerate_bases(g, {.max_group_size = 128});
  std::vector<Element> all;
  for (const auto& a : oracle::enumerate_elements(g, {.max_group_size = 128})) all.push_back(a);
  for (const auto& b : bases) {
    for (const auto& m : all) {
      Element k = Element::identity(g);
      for (std::size_t i = 0; i < g->rank(); ++i) k = k + m[i] * b[i];
      table[key(g, m.coords())][key(g, k.coords())] = 1;
    }
  }
  return table;
}

}  // namespace

TEST(CheckExistence, ReducibleInstanceHasSolution) {
  auto p = problem(z2_z8_z16(), {0, 2, 8}, {0, 6, 4});
  EXPECT_FALSE(existence_failure(p).has_value());
  const auto out = check_existence(p);
  ASSERT_TRUE(out.has_solution());
  EXPECT_TRUE(verify_solution(p, out.basis()));
}

TEST(CheckExistence, ValuationMismatchAtZero) {
  auto g = make_group({{2, 2}, {2, 4}});
  const auto out = check_existence(problem(g, {1, 0}, {0, 4}));
  ASSERT_FALSE(out.has_solution());
  EXPECT_EQ(out.failure(), (NoSolution{FailureCondition::kValuationMismatch, 2, 0ul}));
}

TEST(CheckExistence, ValuationMismatchAtTwo) {
  auto g = make_group({{2, 1}, {2, 2}, {2, 5}, {2, 6}});
  auto p = problem(g, {0, 1, 2, 0}, {1, 1, 4, 4});
  // Orders agree, so the failure is in the valuation ladder.
  EXPECT_EQ(order(p.k), order(p.m.as_element()));
  const auto out = check_existence(p);
  ASSERT_FALSE(out.has_solution());
  EXPECT_EQ(out.failure(), (NoSolution{FailureCondition::kValuationMismatch, 2, 2ul}));
  EXPECT_NE(valuation(Integer(4) * p.k, 2), valuation(Integer(4) * p.m.as_element(), 2));
}

TEST(CheckExistence, AllZeroGivesCanonicalBasis) {
  auto g = z2_z8_z16();
  const auto out = check_existence(ExtractionProblem(Element::identity(g), Multipliers::zero(g)));
  ASSERT_TRUE(out.has_solution());
  for (std::size_t i = 0; i < g->rank(); ++i) EXPECT_EQ(out.basis()[i], Element::unit(g, i));
}

TEST(CheckExistence, OneSideZero) {
  auto g = z2_z8_z16();
  EXPECT_EQ(check_existence(problem(g, {0, 0, 0}, {0, 1, 0})).failure().condition,
            FailureCondition::kCoefficientMismatchZero);
  EXPECT_EQ(check_existence(problem(g, {0, 1, 0}, {0, 0, 0})).failure().condition,
            FailureCondition::kCoefficientMismatchZero);
}

TEST(CheckExistence, OrderMismatch) {
  auto g = z2_z8_z16();
  const auto out = check_existence(problem(g, {0, 1, 0}, {0, 0, 1}));
  ASSERT_FALSE(out.has_solution());
  EXPECT_EQ(out.failure().condition, FailureCondition::kOrderMismatch);
  EXPECT_FALSE(out.failure().j.has_value());
}

TEST(CheckExistence, RejectsMixedGroups) {
  auto g = make_group({{2, 2}, {3, 1}});
  EXPECT_THROW(check_existence(problem(g, {1, 1}, {1, 1})), PreconditionViolation);
}

TEST(Reduce, DividesOutCommonPower) {
  auto g = z2_z8_z16();
  auto p = problem(g, {0, 2, 8}, {0, 6, 4});
  auto state = ReductionState::initial(p);
  const Element k = reduce(g, p.k, state);
  EXPECT_EQ(state.r, 1u);
  EXPECT_EQ(k, el(g, {0, 1, 4}));
  EXPECT_EQ(state.q, (std::vector<Integer>{0, 1, 4}));
  EXPECT_EQ(state.m, (std::vector<Integer>{0, 3, 2}));
}

TEST(Reduce, AlreadyReducedIsUntouched) {
  auto g = z2_z8_z16();
  auto p = problem(g, {1, 2, 2}, {1, 6, 10});
  auto state = ReductionState::initial(p);
  OpCounter ops;
  const Element k = reduce(g, p.k, state, &ops);
  EXPECT_EQ(state.r, 0u);
  EXPECT_EQ(k, p.k);
  EXPECT_EQ(state.m, (std::vector<Integer>{1, 6, 10}));
  EXPECT_EQ(ops.total(), 0u);
}

TEST(Reduce, SingleTrailingSlot) {
  auto g = z4_z16_z32_z64();
  auto p = problem(g, {0, 0, 0, 2}, {0, 0, 0, 6});
  auto state = ReductionState::initial(p);
  const Element k = reduce(g, p.k, state);
  EXPECT_EQ(state.r, 1u);
  EXPECT_EQ(k, el(g, {0, 0, 0, 1}));
  EXPECT_EQ(state.m, (std::vector<Integer>{0, 0, 0, 3}));
}

TEST(Reduce, ZerosStayZero) {
  auto g = z4_z16_z32_z64();
  auto p = problem(g, {0, 4, 0, 12}, {0, 8, 4, 0});
  auto state = ReductionState::initial(p);
  reduce(g, p.k, state);
  EXPECT_EQ(state.r, 2u);
  EXPECT_EQ(state.q, (std::vector<Integer>{0, 1, 0, 3}));
  EXPECT_EQ(state.m, (std::vector<Integer>{0, 2, 1, 0}));
}

TEST(Reduce, ThrowsWhenMultipliersNotDivisible) {
  auto g = z2_z8_z16();
  auto p = problem(g, {0, 2, 8}, {0, 3, 4});
  auto state = ReductionState::initial(p);
  EXPECT_THROW(reduce(g, p.k, state), PreconditionViolation);
}

TEST(ExtractPGroup, ReducibleInstance) {
  auto p = problem(z2_z8_z16(), {0, 2, 8}, {0, 6, 4});
  const auto b = extract_p_group(p);
  EXPECT_TRUE(verify_solution(p, b));
  EXPECT_TRUE(oracle::is_basis_by_closure(b));
}

TEST(ExtractPGroup, ReducedInstanceLastSlot) {
  auto g = z2_z8_z16();
  auto p = problem(g, {1, 2, 2}, {1, 6, 10});
  const auto b = extract_p_group(p);
  EXPECT_TRUE(verify_solution(p, b));
  EXPECT_EQ(b[2], el(g, {0, 6, 13}));
}

TEST(ExtractPGroup, FourSlots) {
  auto g = z4_z16_z32_z64();
  auto p = problem(g, {3, 2, 8, 4}, {1, 6, 4, 12});
  const auto b = extract_p_group(p);
  EXPECT_TRUE(verify_solution(p, b));
  EXPECT_EQ(b[0], el(g, {3, 0, 8, 0}));
  EXPECT_EQ(b[3], el(g, {0, 0, 0, 43}));
}

TEST(ExtractPGroup, ThrowsWhenConditionsFail) {
  auto g = make_group({{2, 2}, {2, 4}});
  EXPECT_THROW(extract_p_group(problem(g, {1, 0}, {0, 4})), PreconditionViolation);
}

TEST(ExtractPGroup, EqualExponentSlotsNeedExchange) {
  auto g = make_group({{2, 1}, {2, 1}});
  auto p = problem(g, {1, 0}, {0, 1});
  std::vector<std::string> trace;
  const auto b = extract_p_group(p, {nullptr, &trace});
  EXPECT_TRUE(verify_solution(p, b));
  bool exchanged = false;
  for (const auto& line : trace) exchanged |= line.rfind("exchange", 0) == 0;
  EXPECT_TRUE(exchanged);
}

TEST(ExtractPGroup, ExchangeInsideLongerChain) {
  auto g = make_group({{2, 1}, {2, 3}, {2, 3}});
  auto p = problem(g, {1, 2, 0}, {1, 4, 2});
  EXPECT_TRUE(verify_solution(p, extract_p_group(p)));
}

TEST(ReferenceWitnesses, Verify) {
  auto g1 = z2_z8_z16();
  EXPECT_TRUE(verify_solution(problem(g1, {0, 2, 8}, {0, 6, 4}),
                              basis(g1, {{1, 0, 0}, {0, 3, 6}, {0, 0, 1}})));
  EXPECT_TRUE(verify_solution(problem(g1, {1, 2, 2}, {1, 6, 10}),
                              basis(g1, {{1, 0, 0}, {0, 1, 0}, {0, 6, 13}})));
  auto g3 = z4_z16_z32_z64();
  EXPECT_TRUE(verify_solution(problem(g3, {3, 2, 8, 4}, {1, 6, 4, 12}),
                              basis(g3, {{3, 0, 8, 0}, {0, 11, 26, 0}, {0, 0, 1, 0}, {0, 0, 0, 43}})));
  // The witness extract() returns differs in P_2 and is equally valid.
  EXPECT_TRUE(verify_solution(problem(g3, {3, 2, 8, 4}, {1, 6, 4, 12}),
                              basis(g3, {{3, 0, 8, 0}, {0, 11, 10, 0}, {0, 0, 1, 0}, {0, 0, 0, 43}})));
}

TEST(VerifySolution, CanonicalBasisDoesNotSolveReducibleInstance) {
  auto g = z2_z8_z16();
  EXPECT_TRUE(verify_basis(BasisCandidate::canonical(g)));
  EXPECT_FALSE(verify_solution(problem(g, {0, 2, 8}, {0, 6, 4}), BasisCandidate::canonical(g)));
}

TEST(VerifyBasis, RejectsPrimitiveNonExtendable) {
  auto g = make_group({{2, 1}, {2, 2}, {2, 3}});
  EXPECT_FALSE(verify_basis(basis(g, {{1, 0, 2}, {0, 1, 0}, {0, 0, 1}})));
  EXPECT_FALSE(verify_basis(basis(g, {{1, 0, 0}, {1, 0, 2}, {0, 0, 1}})));
  EXPECT_FALSE(verify_basis(basis(g, {{1, 0, 0}, {0, 1, 0}, {1, 0, 2}})));
}

TEST(VerifyBasis, AgreesWithClosureOnAllTuples) {
  for (const auto& g : {make_group({{2, 1}, {2, 2}}), make_group({{2, 1}, {2, 1}, {2, 1}}),
                        make_group({{3, 1}, {3, 2}}), make_group({{2, 1}, {3, 1}}),
                        make_group({{2, 2}, {3, 1}})}) {
    std::vector<Element> all;
    for (const auto& a : oracle::enumerate_elements(g)) all.push_back(a);
    std::vector<std::size_t> pos(g->rank(), 0);
    std::size_t agree = 0, bases = 0;
    while (true) {
      std::vector<Element> tuple;
      for (auto i : pos) tuple.push_back(all[i]);
      BasisCandidate c(g, tuple);
      const bool fast = verify_basis(c);
      EXPECT_EQ(fast, oracle::is_basis_by_closure(c)) << g->to_string();
      ++agree;
      bases += fast;
      std::size_t i = pos.size();
      while (i-- > 0 && ++pos[i] == all.size()) pos[i] = 0;
      if (i == static_cast<std::size_t>(-1)) break;
    }
    EXPECT_GT(bases, 0u);
  }
}

TEST(Extract, MixedGroupSolution) {
  auto g = make_group({{2, 2}, {3, 1}});
  auto p = problem(g, {1, 1}, {1, 1});
  const auto out = extract(p);
  ASSERT_TRUE(out.has_solution());
  EXPECT_EQ(out.basis()[0], el(g, {1, 0}));
  EXPECT_EQ(out.basis()[1], el(g, {0, 1}));
  const auto witness = oracle::brute_force_extract(p);
  ASSERT_TRUE(witness.has_value());
  EXPECT_TRUE(verify_solution(p, *witness));
}

TEST(Extract, MixedGroupReportsFirstFailingBlock) {
  // Z/4 block: |K| = 2 but |m_1 Q_1| = 4. Z/3 block: K = 0 but m = 1.
  auto g = make_group({{2, 2}, {3, 1}});
  auto p = problem(g, {2, 0}, {1, 1});
  std::vector<BlockReport> blocks;
  const auto out = extract(p, {}, &blocks);
  ASSERT_FALSE(out.has_solution());
  EXPECT_EQ(out.failure().prime, 2);
  EXPECT_EQ(out.failure().condition, FailureCondition::kOrderMismatch);
  ASSERT_EQ(blocks.size(), 2u);
  ASSERT_TRUE(blocks[1].failure.has_value());
  EXPECT_EQ(blocks[1].failure->condition, FailureCondition::kCoefficientMismatchZero);
  EXPECT_EQ(blocks[1].prime, 3);
  EXPECT_FALSE(oracle::brute_force_extract(p).has_value());
}

TEST(Extract, SinglePrimeMatchesCheckExistence) {
  auto g = z2_z8_z16();
  for (const auto& k : oracle::enumerate_elements(g)) {
    auto p = ExtractionProblem(k, Multipliers(g, {1, 6, 10}));
    const auto a = extract(p), b = check_existence(p);
    ASSERT_EQ(a.has_solution(), b.has_solution());
    if (a.has_solution()) {
      EXPECT_EQ(a.basis().elements, b.basis().elements);
    } else {
      EXPECT_EQ(a.failure(), b.failure());
    }
  }
}

TEST(Extract, CountsOperationsPerBlock) {
  auto g = make_group({{2, 1}, {2, 3}, {3, 2}});
  auto p = problem(g, {1, 2, 4}, {1, 6, 2});
  OpCounter total;
  std::vector<BlockReport> blocks;
  const auto out = extract(p, {&total, nullptr}, &blocks);
  ASSERT_TRUE(out.has_solution());
  OpCounter sum;
  for (const auto& b : blocks) sum += b.ops;
  EXPECT_EQ(sum.total(), total.total());
  EXPECT_GT(total.total(), 0u);
}

// Exhaustive agreement with the set of all bases, for every (K, m).
TEST(OracleAgreement, ExhaustiveSmallGroups) {
  const std::vector<GroupPtr> groups = {
      make_group({{2, 1}, {2, 1}}),         make_group({{2, 2}}),
      make_group({{2, 1}, {2, 2}}),         make_group({{2, 3}}),
      make_group({{2, 1}, {2, 1}, {2, 1}}), make_group({{3, 2}}),
      make_group({{3, 1}, {3, 2}}),         make_group({{2, 1}, {2, 3}}),
      make_group({{2, 2}, {2, 2}}),         make_group({{2, 1}, {3, 1}}),
      make_group({{2, 2}, {3, 1}}),         make_group({{2, 1}, {2, 2}, {2, 3}}),
      make_group({{2, 1}, {2, 1}, {2, 2}}), make_group({{2, 2}, {2, 3}}),
      make_group({{3, 1}, {3, 3}}),         make_group({{5, 1}, {5, 2}}),
      make_group({{2, 1}, {2, 6}}),         make_group({{2, 1}, {2, 1}, {2, 1}, {2, 1}}),
      make_group({{2, 1}, {2, 2}, {3, 1}}), make_group({{2, 2}, {3, 1}, {5, 1}}),
  };
  for (const auto& g : groups) {
    ASSERT_LE(g->cardinality(), 128);
    const auto table = solvable_table(g);
    std::vector<Element> all;
    for (const auto& a : oracle::enumerate_elements(g, {.max_group_size = 128})) all.push_back(a);
    std::size_t mismatches = 0, solvable = 0;
    for (const auto& m : all) {
      const Multipliers mult(g, m.coords());
      for (const auto& k : all) {
        const ExtractionProblem p(k, mult);
        const auto out = extract(p);
        const bool expected = table[key(g, m.coords())][key(g, k.coords())];
        if (out.has_solution() != expected) ++mismatches;
        if (out.has_solution()) {
          ++solvable;
          ASSERT_TRUE(verify_solution(p, out.basis())) << g->to_string() << " K=" << k.to_string();
        }
      }
    }
    EXPECT_EQ(mismatches, 0u) << g->to_string();
    EXPECT_GT(solvable, 0u);
  }
}

TEST(Soundness, RandomSolvableInstances) {
  cli::InstanceGenerator gen(4242);
  for (int t = 0; t < 10000; ++t) {
    auto g = gen.random_structure();
    auto p = gen.solvable(g);
    const auto out = extract(p);
    ASSERT_TRUE(out.has_solution()) << g->to_string() << " K=" << p.k.to_string();
    ASSERT_TRUE(verify_solution(p, out.basis()));
  }
}

TEST(Soundness, LargePrimesAndExponents) {
  cli::InstanceGenerator gen(99);
  const GroupPtr g = make_group({PrimePower(Integer("1000000007"), 3), PrimePower(Integer("1000000007"), 9),
                                 PrimePower(Integer("1000000007"), 9), PrimePower(Integer("18446744073709551557"), 2)});
  for (int t = 0; t < 50; ++t) {
    auto p = gen.solvable(g);
    const auto out = extract(p);
    ASSERT_TRUE(out.has_solution());
    EXPECT_TRUE(verify_solution(p, out.basis()));
  }
}

// A witness for the reduced problem is a witness for the original one.
TEST(ReducedForm, WitnessLiftsToOriginal) {
  cli::InstanceGenerator gen(17);
  for (int t = 0; t < 2000; ++t) {
    auto g = gen.random_structure({.primes = {2, 3, 5}, .max_rank = 4, .max_exponent = 4, .max_distinct_primes = 1});
    auto p = gen.solvable(g);
    auto state = ReductionState::initial(p);
    const Element k = reduce(g, p.k, state);
    if (state.r == 0 || k.is_identity()) continue;
    const ExtractionProblem reduced(k, Multipliers(g, state.m));
    const auto b = extract_p_group(reduced);
    EXPECT_TRUE(verify_solution(reduced, b));
    EXPECT_TRUE(verify_solution(p, b));
  }
}

TEST(ZeroPreservation, HoldsOnGeneratedInstances) {
  cli::InstanceGenerator gen(2024);
  std::size_t zero_slots = 0;
  for (int t = 0; t < 5000; ++t) {
    auto g = gen.random_structure();
    auto p = gen.solvable(g);
    const auto out = extract(p);
    ASSERT_TRUE(out.has_solution());
    for (std::size_t i = 0; i < g->rank(); ++i) {
      if (p.m[i] != 0) continue;
      ++zero_slots;
      EXPECT_EQ(out.basis()[i], Element::unit(g, i)) << g->to_string() << " K=" << p.k.to_string();
    }
  }
  EXPECT_GT(zero_slots, 0u);
}

// m_1 = 0 forces P_2 = K = Q_1, so P_1 cannot stay Q_1.
TEST(ZeroPreservation, NotAlwaysPossible) {
  auto g = make_group({{2, 1}, {2, 1}});
  auto p = problem(g, {1, 0}, {0, 1});
  const auto out = extract(p);
  ASSERT_TRUE(out.has_solution());
  EXPECT_NE(out.basis()[0], Element::unit(g, 0));
  for (const auto& b : oracle::enumerate_bases(g)) {
    if (b[0] == Element::unit(g, 0)) {
      EXPECT_NE(b[1], p.k);
    }
  }
}

namespace {

// Explicit rank-2 construction: reduce, exchange equal-exponent slots if the
// unit coordinates of K and m disagree, then apply the case formulas.
std::optional<BasisCandidate> rank2_cases(const ExtractionProblem& original) {
  const auto g = original.group();
  const Integer p = g->prime(0);
  const unsigned long e1 = g->exponent(0), e2 = g->exponent(1);
  auto state = ReductionState::initial(original);
  reduce(g, original.k, state);
  Integer q1 = state.q[0], q2 = state.q[1], m1 = state.m[0], m2 = state.m[1];
  auto unit_at = [&](const Integer& a, const Integer& b) { return b % p != 0 ? 2 : (a % p != 0 ? 1 : 0); };
  const bool swapped = e1 == e2 && unit_at(q1, q2) != unit_at(m1, m2);
  if (swapped) std::swap(q1, q2);

  const Integer n1 = g->modulus(0), n2 = g->modulus(1);
  Element Q1 = Element::unit(g, 0), Q2 = Element::unit(g, 1);
  Element K = Element::reduced(g, {q1, q2});
  std::vector<Element> P;
  if (m2 % p != 0) {
    P = {Q1, mod_inverse(m2, n2) * (K - m1 * Q1)};
  } else if (m1 % p != 0 && m2 % pow(p, e2 - e1) == 0 && order(K) == n1) {
    P = {mod_inverse(m1, n1) * (K - m2 * Q2), Q2};
  } else if (m1 % p != 0) {
    const unsigned long v = padic_valuation(m2, p);
    const Integer scale = pow(p, v);
    const Integer m2p = m2 / scale, q2p = q2 / scale;
    P = {(mod_inverse(m1, n1) * q1) * Q1, (mod_inverse(m2p, n2) * q2p) * Q2};
  } else {
    return std::nullopt;
  }
  if (swapped) {
    for (auto& x : P) x = Element::reduced(g, {x[1], x[0]});
  }
  return BasisCandidate(g, std::move(P));
}

}  // namespace

TEST(Rank2, CaseConstructionAgreesWithExtraction) {
  std::size_t checked = 0;
  for (const auto& g : {make_group({{2, 1}, {2, 3}}), make_group({{2, 2}, {2, 2}}),
                        make_group({{2, 1}, {2, 4}}), make_group({{3, 1}, {3, 3}}),
                        make_group({{2, 2}, {2, 5}})}) {
    for (const auto& m : oracle::enumerate_elements(g, {.max_group_size = 1024})) {
      const Multipliers mult(g, m.coords());
      for (const auto& k : oracle::enumerate_elements(g, {.max_group_size = 1024})) {
        const ExtractionProblem p(k, mult);
        if (existence_failure(p) || (k.is_identity() && mult.is_zero())) continue;
        const auto ours = extract_p_group(p);
        ASSERT_TRUE(verify_solution(p, ours));
        const auto cases = rank2_cases(p);
        ASSERT_TRUE(cases.has_value()) << g->to_string() << " K=" << k.to_string();
        EXPECT_TRUE(verify_solution(p, *cases))
            << g->to_string() << " K=" << k.to_string() << " m=" << m.to_string();
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}
