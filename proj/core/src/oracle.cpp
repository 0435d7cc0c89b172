#include "abelroot/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "abelroot/errors.hpp"

namespace abelroot::oracle {
namespace {

using Digits = std::vector<std::uint64_t>;

// Machine-integer view of a small group.
struct SmallGroup {
  GroupPtr group;
  Digits moduli;
  std::uint64_t size = 1;

  SmallGroup(const GroupPtr& g, const EnumerationBudget& budget) : group(g) {
    if (budget.max_group_size < 2) throw InvalidArgument("EnumerationBudget: max_group_size must be >= 2");
    if (g->cardinality() > Integer(static_cast<unsigned long>(budget.max_group_size))) {
      throw BudgetExceeded("group " + g->to_string() + " has " + g->cardinality().get_str() +
                           " elements, over the budget of " +
                           std::to_string(budget.max_group_size));
    }
    for (std::size_t i = 0; i < g->rank(); ++i) {
      moduli.push_back(g->modulus(i).get_ui());
      size *= moduli.back();
    }
  }

  Digits digits(const Element& e) const {
    Digits out;
    for (const auto& c : e.coords()) out.push_back(c.get_ui());
    return out;
  }

  Element element(const Digits& d) const {
    std::vector<Integer> coords;
    for (auto v : d) coords.emplace_back(static_cast<unsigned long>(v));
    return Element(group, std::move(coords));
  }

  std::uint64_t index(const Digits& d) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < d.size(); ++i) idx = idx * moduli[i] + d[i];
    return idx;
  }

  void add_into(Digits& acc, const Digits& x, std::uint64_t times = 1) const {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (acc[i] + (x[i] * times) % moduli[i]) % moduli[i];
  }

  // Smallest n >= 1 with n x = 0, by repeated addition.
  std::uint64_t order(const Digits& x) const {
    Digits acc = x;
    std::uint64_t n = 1;
    while (std::any_of(acc.begin(), acc.end(), [](std::uint64_t v) { return v != 0; })) {
      add_into(acc, x);
      ++n;
    }
    return n;
  }

  std::vector<Digits> all() const {
    std::vector<Digits> out;
    out.reserve(size);
    Digits d(moduli.size(), 0);
    for (std::uint64_t k = 0; k < size; ++k) {
      out.push_back(d);
      for (std::size_t i = d.size(); i-- > 0;) {
        if (++d[i] < moduli[i]) break;
        d[i] = 0;
      }
    }
    return out;
  }

  std::uint64_t closure(const std::vector<Digits>& gens) const {
    std::vector<char> seen(size, 0);
    std::deque<Digits> queue;
    Digits zero(moduli.size(), 0);
    seen[index(zero)] = 1;
    queue.push_back(zero);
    std::uint64_t count = 1;
    while (!queue.empty()) {
      Digits x = std::move(queue.front());
      queue.pop_front();
      for (const auto& g : gens) {
        for (int sign : {1, -1}) {
          Digits y = x;
          for (std::size_t i = 0; i < y.size(); ++i) {
            const std::uint64_t step = sign > 0 ? g[i] : (moduli[i] - g[i]) % moduli[i];
            y[i] = (y[i] + step) % moduli[i];
          }
          const auto idx = index(y);
          if (!seen[idx]) {
            seen[idx] = 1;
            ++count;
            queue.push_back(std::move(y));
          }
        }
      }
    }
    return count;
  }

  std::vector<std::vector<Digits>> slot_candidates() const {
    std::vector<std::vector<Digits>> out(moduli.size());
    for (const auto& d : all()) {
      const std::uint64_t o = order(d);
      for (std::size_t i = 0; i < moduli.size(); ++i) {
        if (o == moduli[i]) out[i].push_back(d);
      }
    }
    return out;
  }
};

// Visits candidate tuples in lexicographic order until `visit` returns true.
template <typename Visit>
void for_each_tuple(const std::vector<std::vector<Digits>>& candidates,
                    const EnumerationBudget& budget, Visit visit) {
  const std::size_t n = candidates.size();
  for (const auto& c : candidates) {
    if (c.empty()) return;
  }
  std::vector<std::size_t> pos(n, 0);
  std::vector<const Digits*> tuple(n);
  std::uint64_t examined = 0;
  while (true) {
    if (++examined > budget.max_candidates) {
      throw BudgetExceeded("oracle examined more than " + std::to_string(budget.max_candidates) +
                           " candidate tuples");
    }
    for (std::size_t i = 0; i < n; ++i) tuple[i] = &candidates[i][pos[i]];
    if (visit(tuple)) return;
    std::size_t i = n;
    while (i-- > 0) {
      if (++pos[i] < candidates[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

}  // namespace

ElementRange::iterator::iterator(GroupPtr group, bool done)
    : group_(std::move(group)), digits_(group_->rank(), 0), done_(done) {}

Element ElementRange::iterator::operator*() const {
  std::vector<Integer> coords;
  for (auto v : digits_) coords.emplace_back(static_cast<unsigned long>(v));
  return Element(group_, std::move(coords));
}

ElementRange::iterator& ElementRange::iterator::operator++() {
  for (std::size_t i = digits_.size(); i-- > 0;) {
    if (++digits_[i] < group_->modulus(i).get_ui()) return *this;
    digits_[i] = 0;
  }
  done_ = true;
  return *this;
}

ElementRange enumerate_elements(const GroupPtr& group, const EnumerationBudget& budget) {
  SmallGroup small(group, budget);
  return ElementRange(group, small.size);
}

std::uint64_t closure_size(const GroupPtr& group, std::span<const Element> elements,
                           const EnumerationBudget& budget) {
  SmallGroup small(group, budget);
  std::vector<Digits> gens;
  for (const auto& e : elements) {
    if (!same_group(e.group_ptr(), group)) throw StructureMismatch("closure_size: foreign element");
    gens.push_back(small.digits(e));
  }
  return small.closure(gens);
}

bool is_basis_by_closure(const BasisCandidate& candidate, const EnumerationBudget& budget) {
  SmallGroup small(candidate.group, budget);
  std::vector<Digits> gens;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    gens.push_back(small.digits(candidate[i]));
    if (small.order(gens.back()) != small.moduli[i]) return false;
  }
  return small.closure(gens) == small.size;
}

std::optional<BasisCandidate> brute_force_extract(const ExtractionProblem& problem,
                                                  const EnumerationBudget& budget) {
  SmallGroup small(problem.group(), budget);
  const Digits target = small.digits(problem.k);
  Digits m;
  for (const auto& c : problem.m.coeffs()) m.push_back(c.get_ui());

  std::optional<BasisCandidate> found;
  for_each_tuple(small.slot_candidates(), budget, [&](const std::vector<const Digits*>& tuple) {
    Digits sum(small.moduli.size(), 0);
    for (std::size_t i = 0; i < tuple.size(); ++i) small.add_into(sum, *tuple[i], m[i]);
    if (sum != target) return false;
    std::vector<Digits> gens;
    for (const auto* d : tuple) gens.push_back(*d);
    if (small.closure(gens) != small.size) return false;
    std::vector<Element> elements;
    for (const auto* d : tuple) elements.push_back(small.element(*d));
    found.emplace(problem.group(), std::move(elements));
    return true;
  });
  return found;
}

std::vector<BasisCandidate> enumerate_bases(const GroupPtr& group, const EnumerationBudget& budget) {
  SmallGroup small(group, budget);
  std::vector<BasisCandidate> out;
  for_each_tuple(small.slot_candidates(), budget, [&](const std::vector<const Digits*>& tuple) {
    std::vector<Digits> gens;
    for (const auto* d : tuple) gens.push_back(*d);
    if (small.closure(gens) == small.size) {
      std::vector<Element> elements;
      for (const auto* d : tuple) elements.push_back(small.element(*d));
      out.emplace_back(group, std::move(elements));
    }
    return false;
  });
  return out;
}

}  // namespace abelroot::oracle
