#include "abelroot/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "abelroot/errors.hpp"

namespace abelroot {

PrimePower::PrimePower(Integer p, unsigned long e) : p_(std::move(p)), e_(e) {
  if (e_ < 1) throw InvalidArgument("factor exponent must be >= 1");
  if (!is_prime(p_)) throw InvalidArgument("factor base " + p_.get_str() + " is not prime");
  modulus_ = pow(p_, e_);
}

std::strong_ordering PrimePower::operator<=>(const PrimePower& other) const {
  const int c = cmp(p_, other.p_);
  if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return e_ <=> other.e_;
}

GroupStructure::GroupStructure(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("a group needs at least one cyclic factor");
  if (!std::is_sorted(factors_.begin(), factors_.end())) {
    throw InvalidArgument("factors must be sorted by (p, e): " + to_string());
  }
  group_exponent_ = 1;
  cardinality_ = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& f = factors_[i];
    cardinality_ *= f.modulus();
    mpz_lcm(group_exponent_.get_mpz_t(), group_exponent_.get_mpz_t(), f.modulus().get_mpz_t());
    if (blocks_.empty() || blocks_.back().p != f.p()) {
      blocks_.push_back(PrimeBlock{f.p(), i, i + 1});
    } else {
      blocks_.back().end = i + 1;
    }
  }
}

std::pair<GroupStructure, std::vector<std::size_t>> GroupStructure::canonicalize(
    std::vector<PrimePower> factors) {
  std::vector<std::size_t> order(factors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return factors[a] < factors[b]; });
  std::vector<PrimePower> sorted;
  sorted.reserve(factors.size());
  std::vector<std::size_t> position(factors.size());
  for (std::size_t c = 0; c < order.size(); ++c) {
    sorted.push_back(factors[order[c]]);
    position[order[c]] = c;
  }
  return {GroupStructure(std::move(sorted)), std::move(position)};
}

std::string GroupStructure::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out << " x ";
    out << "Z/" << factors_[i].modulus().get_str();
  }
  return out.str();
}

GroupPtr make_group(std::vector<PrimePower> factors) {
  return std::make_shared<const GroupStructure>(std::move(factors));
}

GroupPtr make_group(std::initializer_list<std::pair<long, unsigned long>> factors) {
  std::vector<PrimePower> out;
  for (const auto& [p, e] : factors) out.emplace_back(Integer(p), e);
  return make_group(std::move(out));
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a == b || (a && b && *a == *b);
}

namespace {

void check_shape(const GroupPtr& group, const std::vector<Integer>& values, const char* what) {
  if (!group) throw InvalidArgument(std::string(what) + ": null group");
  if (values.size() != group->rank()) {
    throw StructureMismatch(std::string(what) + ": expected " + std::to_string(group->rank()) +
                            " coordinates, got " + std::to_string(values.size()));
  }
}

void check_range(const GroupPtr& group, const std::vector<Integer>& values, const char* what) {
  check_shape(group, values, what);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] >= group->modulus(i)) {
      throw InvalidArgument(std::string(what) + ": coordinate " + std::to_string(i) + " = " +
                            values[i].get_str() + " is outside [0, " +
                            group->modulus(i).get_str() + ")");
    }
  }
}

std::vector<Integer> reduce_all(const GroupPtr& group, std::vector<Integer> values,
                                const char* what) {
  check_shape(group, values, what);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = mod(values[i], group->modulus(i));
  return values;
}

std::string vector_string(const std::vector<Integer>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + ")";
}

void require_same(const GroupPtr& a, const GroupPtr& b, const char* what) {
  if (!same_group(a, b)) {
    throw StructureMismatch(std::string(what) + ": operands belong to different groups");
  }
}

void require_p_group(const GroupStructure& g, const Integer& p, const char* what) {
  if (!g.is_p_group() || g.prime(0) != p) {
    throw PreconditionViolation(std::string(what) + ": " + g.to_string() + " is not a " +
                                p.get_str() + "-group");
  }
}

}  // namespace

Element::Element(GroupPtr group, std::vector<Integer> coords)
    : group_(std::move(group)), coords_(std::move(coords)) {
  check_range(group_, coords_, "Element");
}

Element Element::reduced(GroupPtr group, std::vector<Integer> coords) {
  auto values = reduce_all(group, std::move(coords), "Element");
  return Element(std::move(group), std::move(values));
}

Element Element::identity(GroupPtr group) {
  const std::size_t n = group->rank();
  return Element(std::move(group), std::vector<Integer>(n, 0));
}

Element Element::unit(GroupPtr group, std::size_t i) {
  std::vector<Integer> coords(group->rank(), 0);
  coords.at(i) = 1;
  return Element(std::move(group), std::move(coords));
}

bool Element::is_identity() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Integer& c) { return c == 0; });
}

std::string Element::to_string() const { return vector_string(coords_); }

bool Element::operator==(const Element& other) const {
  return coords_ == other.coords_ && same_group(group_, other.group_);
}

Multipliers::Multipliers(GroupPtr group, std::vector<Integer> coeffs)
    : group_(std::move(group)), coeffs_(std::move(coeffs)) {
  check_range(group_, coeffs_, "Multipliers");
}

Multipliers Multipliers::reduced(GroupPtr group, std::vector<Integer> coeffs) {
  auto values = reduce_all(group, std::move(coeffs), "Multipliers");
  return Multipliers(std::move(group), std::move(values));
}

Multipliers Multipliers::zero(GroupPtr group) {
  const std::size_t n = group->rank();
  return Multipliers(std::move(group), std::vector<Integer>(n, 0));
}

bool Multipliers::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
}

bool Multipliers::operator==(const Multipliers& other) const {
  return coeffs_ == other.coeffs_ && same_group(group_, other.group_);
}

unsigned long Valuation::value() const {
  if (!value_) throw PreconditionViolation("Valuation::value on infinity");
  return *value_;
}

std::string Valuation::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("inf");
}

std::strong_ordering Valuation::operator<=>(const Valuation& other) const {
  if (is_infinite() || other.is_infinite()) {
    return is_infinite() == other.is_infinite()
               ? std::strong_ordering::equal
               : (is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less);
  }
  return *value_ <=> *other.value_;
}

Element add(const Element& a, const Element& b, OpCounter* ops) {
  require_same(a.group_ptr(), b.group_ptr(), "add");
  const auto& g = a.group();
  std::vector<Integer> out(g.rank());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] + b[i];
    if (out[i] >= g.modulus(i)) out[i] -= g.modulus(i);
  }
  if (ops) ++ops->additions;
  return Element(a.group_ptr(), std::move(out));
}

Element negate(const Element& a, OpCounter* ops) {
  const auto& g = a.group();
  std::vector<Integer> out(g.rank());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] == 0 ? Integer(0) : g.modulus(i) - a[i];
  if (ops) ++ops->negations;
  return Element(a.group_ptr(), std::move(out));
}

namespace {

Element doubled(const Element& a, OpCounter* ops) {
  const auto& g = a.group();
  std::vector<Integer> out(g.rank());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] << 1;
    if (out[i] >= g.modulus(i)) out[i] -= g.modulus(i);
  }
  if (ops) ++ops->doublings;
  return Element(a.group_ptr(), std::move(out));
}

}  // namespace

Element scalar_mul(const Integer& n, const Element& a, OpCounter* ops) {
  if (n < 0) return negate(scalar_mul(Integer(-n), a, ops), ops);
  const Integer k = mod(n, a.group().exponent_of_group());
  if (k == 0 || a.is_identity()) return Element::identity(a.group_ptr());
  Element acc = a;
  const std::size_t bits = bit_length(k);
  for (std::size_t i = bits - 1; i-- > 0;) {
    acc = doubled(acc, ops);
    if (mpz_tstbit(k.get_mpz_t(), i)) acc = add(acc, a, ops);
  }
  return acc;
}

Integer order(const Element& a, OpCounter* ops) {
  const auto& g = a.group();
  Integer result = 1;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    Integer d;
    mpz_gcd(d.get_mpz_t(), g.modulus(i).get_mpz_t(), a[i].get_mpz_t());
    const Integer component = g.modulus(i) / d;
    mpz_lcm(result.get_mpz_t(), result.get_mpz_t(), component.get_mpz_t());
  }
  if (ops) {
    const Integer& exp = g.exponent_of_group();
    ops->order_charges += std::max<std::size_t>(1, bit_length(exp - 1));
  }
  return result;
}

Valuation valuation(const Element& a, const Integer& p) {
  require_p_group(a.group(), p, "valuation");
  std::optional<unsigned long> best;
  for (const auto& c : a.coords()) {
    if (c == 0) continue;
    const unsigned long v = padic_valuation(c, p);
    if (!best || v < *best) best = v;
  }
  return best ? Valuation(*best) : Valuation::infinity();
}

bool is_primitive(const Element& a, const Integer& p) {
  return valuation(a, p) == Valuation(0);
}

namespace {

// Largest index whose coordinate is a unit mod p, if any.
std::optional<std::size_t> last_unit_index(const Element& a, const Integer& p) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (!mpz_divisible_p(a[i].get_mpz_t(), p.get_mpz_t())) return i;
  }
  return std::nullopt;
}

}  // namespace

bool can_extend_to_basis(const Element& a, const Integer& p) {
  require_p_group(a.group(), p, "can_extend_to_basis");
  if (a.is_identity()) throw PreconditionViolation("can_extend_to_basis: identity element");
  const auto k = last_unit_index(a, p);
  if (!k) return false;
  return order(a) == a.group().modulus(*k);
}

std::vector<Element> extend_to_basis(const Element& a, const Integer& p) {
  if (!can_extend_to_basis(a, p)) {
    throw PreconditionViolation("extend_to_basis: " + a.to_string() +
                                " does not satisfy the extension condition");
  }
  const std::size_t k = *last_unit_index(a, p);
  std::vector<Element> basis;
  basis.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    basis.push_back(i == k ? a : Element::unit(a.group_ptr(), i));
  }
  return basis;
}

Element combine_canonical(const GroupPtr& group, const std::vector<Integer>& coeffs,
                          const std::vector<std::size_t>& indices, OpCounter* ops) {
  Element acc = Element::identity(group);
  bool first = true;
  for (std::size_t i : indices) {
    if (coeffs.at(i) == 0) continue;
    Element term = scalar_mul(coeffs[i], Element::unit(group, i), ops);
    if (first) {
      acc = std::move(term);
      first = false;
    } else {
      acc = add(acc, term, ops);
    }
  }
  return acc;
}

std::vector<SylowBlock> sylow_split(const Element& k, const Multipliers& m) {
  require_same(k.group_ptr(), m.group_ptr(), "sylow_split");
  const auto& g = k.group();
  if (g.is_p_group()) {
    return {SylowBlock{g.prime(0), 0, k.group_ptr(), k, m}};
  }
  std::vector<SylowBlock> out;
  for (const auto& block : g.prime_blocks()) {
    std::vector<PrimePower> factors(g.factors().begin() + block.begin,
                                    g.factors().begin() + block.end);
    auto sub = make_group(std::move(factors));
    std::vector<Integer> kc(k.coords().begin() + block.begin, k.coords().begin() + block.end);
    std::vector<Integer> mc(m.coeffs().begin() + block.begin, m.coeffs().begin() + block.end);
    out.push_back(SylowBlock{block.p, block.begin, sub, Element(sub, std::move(kc)),
                             Multipliers(sub, std::move(mc))});
  }
  return out;
}

Element embed(const Element& block_element, const GroupPtr& parent, std::size_t offset) {
  std::vector<Integer> coords(parent->rank(), 0);
  for (std::size_t i = 0; i < block_element.size(); ++i) {
    if (!(parent->factor(offset + i) == block_element.group().factor(i))) {
      throw StructureMismatch("embed: block does not match the parent factors");
    }
    coords[offset + i] = block_element[i];
  }
  return Element(parent, std::move(coords));
}

}  // namespace abelroot
