#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "primeset/error.hpp"

namespace primeset {

/// Dense index handed out by a codebook interner.
struct ElementId {
  std::uint32_t index = 0;

  friend auto operator<=>(const ElementId&, const ElementId&) = default;
};

using Multiplicity = std::uint64_t;

inline constexpr Multiplicity kDefaultMultiplicityLimit =
    std::numeric_limits<std::uint32_t>::max();

/// Finite multiset (S, m) stored sparsely; no zero multiplicities are kept.
class Multiset {
 public:
  using Entries = std::map<ElementId, Multiplicity>;
  using const_iterator = Entries::const_iterator;

  Multiset() = default;

  Multiset(std::initializer_list<std::pair<ElementId, Multiplicity>> entries,
           Multiplicity limit = kDefaultMultiplicityLimit) {
    for (const auto& [x, k] : entries) add(x, k, limit);
  }

  /// Adds k copies of x in place.
  void add(ElementId x, Multiplicity k,
           Multiplicity limit = kDefaultMultiplicityLimit) {
    if (k == 0) {
      throw Error(ErrorKind::invalid_argument,
                  "invalid multiplicity: must be at least 1");
    }
    Multiplicity current = multiplicity(x);
    if (k > limit || current > limit - k) {
      throw Error(ErrorKind::resource_limit,
                  "multiplicity of element " + std::to_string(x.index) +
                      " exceeds limit " + std::to_string(limit));
    }
    entries_[x] = current + k;
    size_ += k;
  }

  Multiplicity multiplicity(ElementId x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0 : it->second;
  }

  bool contains(ElementId x) const { return entries_.count(x) != 0; }

  /// Sum of multiplicities.
  Multiplicity size() const noexcept { return size_; }

  /// Number of distinct elements, |S|.
  std::size_t support_size() const noexcept { return entries_.size(); }

  bool empty() const noexcept { return entries_.empty(); }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  const Entries& entries() const noexcept { return entries_; }

  friend bool operator==(const Multiset& a, const Multiset& b) {
    return a.entries_ == b.entries_;
  }

  friend bool operator<(const Multiset& a, const Multiset& b) {
    return a.entries_ < b.entries_;
  }

 private:
  Entries entries_;
  Multiplicity size_ = 0;
};

inline Multiset insert(Multiset x, ElementId e, Multiplicity k,
                       Multiplicity limit = kDefaultMultiplicityLimit) {
  x.add(e, k, limit);
  return x;
}

/// Multiset sum: multiplicities add pointwise.
inline Multiset multiset_union(const Multiset& x, const Multiset& y,
                               Multiplicity limit = kDefaultMultiplicityLimit) {
  Multiset result = x;
  for (const auto& [e, k] : y) result.add(e, k, limit);
  return result;
}

inline Multiplicity size(const Multiset& x) noexcept { return x.size(); }

/// Calls fn for every multiset over ids [0, alphabet_size) with size at most
/// max_size. Multisets come out grouped by size, each exactly once.
inline void for_each_multiset(std::uint32_t alphabet_size,
                              Multiplicity max_size,
                              const std::function<void(const Multiset&)>& fn) {
  std::vector<Multiplicity> counts(alphabet_size, 0);

  std::function<void(std::uint32_t, Multiplicity)> fill =
      [&](std::uint32_t pos, Multiplicity remaining) {
        if (pos + 1 >= alphabet_size) {
          if (alphabet_size > 0) counts[alphabet_size - 1] = remaining;
          Multiset m;
          for (std::uint32_t i = 0; i < alphabet_size; ++i) {
            if (counts[i] != 0) m.add(ElementId{i}, counts[i]);
          }
          fn(m);
          return;
        }
        for (Multiplicity k = remaining + 1; k-- > 0;) {
          counts[pos] = k;
          fill(pos + 1, remaining - k);
        }
      };

  for (Multiplicity t = 0; t <= max_size; ++t) {
    if (alphabet_size == 0) {
      if (t == 0) fn(Multiset{});
      continue;
    }
    fill(0, t);
  }
}

inline std::vector<Multiset> enumerate_multisets(std::uint32_t alphabet_size,
                                                 Multiplicity max_size) {
  std::vector<Multiset> out;
  for_each_multiset(alphabet_size, max_size,
                    [&](const Multiset& m) { out.push_back(m); });
  return out;
}

}  // namespace primeset
