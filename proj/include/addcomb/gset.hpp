#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "addcomb/group.hpp"

namespace addcomb {

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr share(Group g) { return std::make_shared<const Group>(std::move(g)); }

// Dense indicator set over a finite abelian group. Immutable once built.
class GSet {
 public:
  explicit GSet(GroupPtr group);
  // Bits past |G| are cleared; the cardinality is recomputed.
  GSet(GroupPtr group, std::vector<std::uint64_t> words);

  static GSet of(GroupPtr group, std::span<const Elem> elements);
  static GSet of(GroupPtr group, std::initializer_list<Elem> elements) {
    return of(std::move(group), std::span<const Elem>(elements.begin(), elements.size()));
  }
  static GSet full(GroupPtr group);
  // Only for |G| <= 64: bit i of mask is element i.
  static GSet from_mask(GroupPtr group, std::uint64_t mask);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::uint64_t card() const { return card_; }
  bool empty() const { return card_ == 0; }
  bool contains(Elem x) const { return x < group_->size() && ((words_[x >> 6] >> (x & 63)) & 1U); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<Elem> elements() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(static_cast<Elem>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
        bits &= bits - 1;
      }
    }
  }

  // Same group (by orders) and same members.
  bool operator==(const GSet& other) const;

 private:
  GroupPtr group_;
  std::vector<std::uint64_t> words_;
  std::uint64_t card_ = 0;
};

inline std::size_t word_count_for(std::uint64_t n) { return static_cast<std::size_t>((n + 63) / 64); }

// Sorted, duplicate-free finite set of integers.
using IntSet = std::vector<std::int64_t>;
IntSet make_int_set(std::vector<std::int64_t> values);

// {d*a + c : a in A}. In Z_p any d != 0 mod p; in other groups only d = +-1.
GSet affine_map(const GSet& a, std::int64_t d, Elem c);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SetValue = std::variant<GSet, IntSet>;

// Set literals:  "p=13: 0,1,3"   "G=4x4: (0,0),(1,2)"   "G=12: 0,3"   "Z: 0,1,2,4"
SetValue parse_set_literal(std::string_view text, std::uint64_t element_cap = kDefaultElementCap);
GSet parse_gset(std::string_view text, std::uint64_t element_cap = kDefaultElementCap);
std::string format_set(const GSet& a);
std::string format_set(const IntSet& a);
std::string format_elem(const Group& g, Elem x);

}  // namespace addcomb
