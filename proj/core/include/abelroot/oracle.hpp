#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

#include "abelroot/group.hpp"
#include "abelroot/root_extraction.hpp"

// Exhaustive ground truth for desk-sized groups. Nothing here shares code
// with the extraction path beyond the Element type: arithmetic runs on plain
// machine integers and basis tests are subgroup closures.
namespace abelroot::oracle {

struct EnumerationBudget {
  std::uint64_t max_group_size = 256;
  std::uint64_t max_candidates = 50'000'000;  // tuples examined by brute_force_extract
};

// All elements of G in lexicographic coordinate order (last coordinate
// varies fastest). Single pass.
class ElementRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Element;
    using difference_type = std::ptrdiff_t;
    using pointer = const Element*;
    using reference = Element;

    iterator() = default;
    Element operator*() const;
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator& other) const { return done_ == other.done_; }

   private:
    friend class ElementRange;
    iterator(GroupPtr group, bool done);

    GroupPtr group_;
    std::vector<std::uint64_t> digits_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(group_, false); }
  iterator end() const { return iterator(group_, true); }
  std::uint64_t size() const { return size_; }

 private:
  friend ElementRange enumerate_elements(const GroupPtr&, const EnumerationBudget&);
  ElementRange(GroupPtr group, std::uint64_t size) : group_(std::move(group)), size_(size) {}

  GroupPtr group_;
  std::uint64_t size_;
};

// Throws BudgetExceeded when |G| > budget.max_group_size.
ElementRange enumerate_elements(const GroupPtr& group, const EnumerationBudget& budget = {});

// Size of <elements> by breadth-first closure under addition and negation.
std::uint64_t closure_size(const GroupPtr& group, std::span<const Element> elements,
                           const EnumerationBudget& budget = {});

// Slot orders match and the closure is all of G.
bool is_basis_by_closure(const BasisCandidate& candidate, const EnumerationBudget& budget = {});

// First basis (P_1, ..., P_N) in lexicographic order with |P_i| = p_i^e_i and
// sum m_i P_i = K, or nullopt. Throws BudgetExceeded past either limit.
std::optional<BasisCandidate> brute_force_extract(const ExtractionProblem& problem,
                                                  const EnumerationBudget& budget = {});

// Every ordered basis of G, lexicographic.
std::vector<BasisCandidate> enumerate_bases(const GroupPtr& group,
                                            const EnumerationBudget& budget = {});

}  // namespace abelroot::oracle
