#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abelroot/integer.hpp"
#include "abelroot/op_counter.hpp"

namespace abelroot {

// One cyclic factor Z/p^e.
class PrimePower {
 public:
  // Throws InvalidArgument unless p is prime and e >= 1.
  PrimePower(Integer p, unsigned long e);

  const Integer& p() const { return p_; }
  unsigned long e() const { return e_; }
  const Integer& modulus() const { return modulus_; }

  bool operator==(const PrimePower& other) const { return p_ == other.p_ && e_ == other.e_; }
  // Orders by (p, e), the canonical factor order.
  std::strong_ordering operator<=>(const PrimePower& other) const;

 private:
  Integer p_;
  unsigned long e_;
  Integer modulus_;
};

// G = Z/p_1^e_1 x ... x Z/p_N^e_N with factors sorted by (p, e). Equal primes
// therefore form contiguous blocks (the Sylow subgroups).
class GroupStructure {
 public:
  struct PrimeBlock {
    Integer p;
    std::size_t begin;
    std::size_t end;  // one past the last index
    std::size_t size() const { return end - begin; }
  };

  // Throws InvalidArgument if factors is empty or not sorted.
  explicit GroupStructure(std::vector<PrimePower> factors);

  // Sorts arbitrary factors. Returns the structure and a map with
  // position[i] = canonical index of the caller's i-th factor.
  static std::pair<GroupStructure, std::vector<std::size_t>> canonicalize(
      std::vector<PrimePower> factors);

  std::size_t rank() const { return factors_.size(); }
  const std::vector<PrimePower>& factors() const { return factors_; }
  const PrimePower& factor(std::size_t i) const { return factors_.at(i); }
  const Integer& prime(std::size_t i) const { return factors_.at(i).p(); }
  unsigned long exponent(std::size_t i) const { return factors_.at(i).e(); }
  const Integer& modulus(std::size_t i) const { return factors_.at(i).modulus(); }

  const std::vector<PrimeBlock>& prime_blocks() const { return blocks_; }
  bool is_p_group() const { return blocks_.size() == 1; }

  // lcm of the factor moduli; annihilates every element.
  const Integer& exponent_of_group() const { return group_exponent_; }
  // |G|, the product of the moduli.
  const Integer& cardinality() const { return cardinality_; }

  std::string to_string() const;

  bool operator==(const GroupStructure& other) const { return factors_ == other.factors_; }

 private:
  std::vector<PrimePower> factors_;
  std::vector<PrimeBlock> blocks_;
  Integer group_exponent_;
  Integer cardinality_;
};

using GroupPtr = std::shared_ptr<const GroupStructure>;

GroupPtr make_group(std::vector<PrimePower> factors);

// Convenience for tests and tools: make_group({{2,1},{2,3},{2,4}}).
GroupPtr make_group(std::initializer_list<std::pair<long, unsigned long>> factors);

bool same_group(const GroupPtr& a, const GroupPtr& b);

// Coordinates of an element with respect to the canonical basis Q_i
// (unit vectors). Always canonical representatives in [0, p_i^e_i).
class Element {
 public:
  // Throws StructureMismatch on a length mismatch and InvalidArgument on an
  // out-of-range coordinate.
  Element(GroupPtr group, std::vector<Integer> coords);

  // Reduces every coordinate into range instead of rejecting it.
  static Element reduced(GroupPtr group, std::vector<Integer> coords);
  static Element identity(GroupPtr group);
  // Q_i.
  static Element unit(GroupPtr group, std::size_t i);

  const GroupStructure& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<Integer>& coords() const { return coords_; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }
  bool is_identity() const;

  std::string to_string() const;

  bool operator==(const Element& other) const;

 private:
  GroupPtr group_;
  std::vector<Integer> coords_;
};

// The multiplier vector (m_1, ..., m_N), m_i in Z/p_i^e_i.
class Multipliers {
 public:
  Multipliers(GroupPtr group, std::vector<Integer> coeffs);
  static Multipliers reduced(GroupPtr group, std::vector<Integer> coeffs);
  static Multipliers zero(GroupPtr group);

  const GroupStructure& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  const Integer& operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const;

  // sum m_i Q_i, read off directly (no group operations).
  Element as_element() const { return Element(group_, coeffs_); }

  bool operator==(const Multipliers& other) const;

 private:
  GroupPtr group_;
  std::vector<Integer> coeffs_;
};

// nu_p value: a non-negative integer, or infinity for the identity.
class Valuation {
 public:
  explicit Valuation(unsigned long value) : value_(value) {}
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !value_.has_value(); }
  // Throws PreconditionViolation on infinity.
  unsigned long value() const;

  std::string to_string() const;

  bool operator==(const Valuation& other) const = default;
  std::strong_ordering operator<=>(const Valuation& other) const;

 private:
  Valuation() = default;
  std::optional<unsigned long> value_;
};

Element add(const Element& a, const Element& b, OpCounter* ops = nullptr);
Element negate(const Element& a, OpCounter* ops = nullptr);

// Double-and-add. n is first reduced modulo the group exponent; negative n
// goes through negate. Every doubling and addition is charged.
Element scalar_mul(const Integer& n, const Element& a, OpCounter* ops = nullptr);

// Closed form: lcm_i p_i^e_i / gcd(p_i^e_i, a_i).
Integer order(const Element& a, OpCounter* ops = nullptr);

// The following require a p-group whose single prime is p; otherwise they
// throw PreconditionViolation.
Valuation valuation(const Element& a, const Integer& p);
bool is_primitive(const Element& a, const Integer& p);
// Sufficient condition for extension: primitive and |a| = p^e_k, k the
// largest index with p not dividing a_k. Throws on the identity.
bool can_extend_to_basis(const Element& a, const Integer& p);
// {Q_1, ..., Q_{k-1}, a, Q_{k+1}, ..., Q_N}. Throws PreconditionViolation
// when can_extend_to_basis is false.
std::vector<Element> extend_to_basis(const Element& a, const Integer& p);

// sum c_i Q_i over the given indices, built with counted group operations.
Element combine_canonical(const GroupPtr& group, const std::vector<Integer>& coeffs,
                          const std::vector<std::size_t>& indices, OpCounter* ops = nullptr);

struct SylowBlock {
  Integer prime;
  std::size_t offset;  // index of the block's first factor in the parent
  GroupPtr group;
  Element k;
  Multipliers m;
};

// One block per distinct prime, ascending. Throws StructureMismatch when k
// and m live in different groups.
std::vector<SylowBlock> sylow_split(const Element& k, const Multipliers& m);

// Inverse of slicing: places a block element at `offset` inside `parent`.
Element embed(const Element& block_element, const GroupPtr& parent, std::size_t offset);

inline Element operator+(const Element& a, const Element& b) { return add(a, b); }
inline Element operator-(const Element& a) { return negate(a); }
inline Element operator-(const Element& a, const Element& b) { return add(a, negate(b)); }
inline Element operator*(const Integer& n, const Element& a) { return scalar_mul(n, a); }

}  // namespace abelroot
