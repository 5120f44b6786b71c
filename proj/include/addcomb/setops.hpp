#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "addcomb/gset.hpp"

namespace addcomb {

// fast: bitset shifts and pair counting.  naive: direct double loops over
// elements, used as the independent oracle path.
enum class Backend { fast, naive };

enum class Kind { sum, diff };
std::string_view to_string(Kind k);
Kind parse_kind(std::string_view s);

class SetOpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

GSet translate(const GSet& a, Elem x);  // A + x
GSet negate(const GSet& a);             // -A
GSet intersect(const GSet& a, const GSet& b);
std::uint64_t intersection_size(const GSet& a, const GSet& b);
bool is_subset(const GSet& a, const GSet& b);

// Both operands must be nonempty and live in the same group.
GSet sumset(const GSet& a, const GSet& b, Backend backend = Backend::fast);
GSet diffset(const GSet& a, const GSet& b, Backend backend = Backend::fast);
inline GSet sum_or_diff(const GSet& a, const GSet& b, Kind k, Backend backend = Backend::fast) {
  return k == Kind::sum ? sumset(a, b, backend) : diffset(a, b, backend);
}

// A_x = A ∩ (A + x).
GSet layer(const GSet& a, Elem x);

// x -> |A_x| over the whole group.
struct RepProfile {
  GroupPtr group;
  std::uint64_t base_card = 0;
  std::vector<std::uint32_t> counts;
  GSet support;  // = A - A
};

// fast: counts every difference a - a' of pairs; naive: |layer(A, x)| per x.
RepProfile rep_profile(const GSet& a, Backend backend = Backend::fast);

// Returns (A_x - A ⊆ (A-A)_x, A_x + A ⊆ (A+A)_x). Both must always hold.
std::pair<bool, bool> katz_koester_verify(const GSet& a, Elem x);

IntSet int_sumset(const IntSet& a, const IntSet& b);
IntSet int_diffset(const IntSet& a, const IntSet& b);
inline IntSet int_sum_or_diff(const IntSet& a, const IntSet& b, Kind k) {
  return k == Kind::sum ? int_sumset(a, b) : int_diffset(a, b);
}

}  // namespace addcomb
