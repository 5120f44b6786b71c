#include "addcomb/setops.hpp"

#include <stdexcept>

#include "bitops.hpp"

namespace addcomb {

std::string_view to_string(Kind k) { return k == Kind::sum ? "sum" : "diff"; }

Kind parse_kind(std::string_view s) {
  if (s == "sum") return Kind::sum;
  if (s == "diff") return Kind::diff;
  throw std::invalid_argument("kind must be 'sum' or 'diff', got '" + std::string(s) + "'");
}

namespace {

void require_same_group(const GSet& a, const GSet& b) {
  if (a.group_ptr() != b.group_ptr() && !(a.group() == b.group())) {
    throw SetOpError("operands live in different groups: " + a.group().descriptor() + " vs " +
                     b.group().descriptor());
  }
}

void require_nonempty(const GSet& a, const GSet& b) {
  if (a.empty() || b.empty()) throw SetOpError("sumset/diffset of an empty set");
}

// Out-of-place element-wise translate into an accumulator.
void or_translated(std::vector<std::uint64_t>& acc, const GSet& s, Elem x) {
  const Group& g = s.group();
  if (g.is_cyclic()) {
    bits::or_rotated(acc, s.words(), g.size(), x);
    return;
  }
  s.for_each([&](Elem y) {
    const Elem z = g.add(y, x);
    acc[z >> 6] |= std::uint64_t{1} << (z & 63);
  });
}

void cauchy_davenport_self_check(const GSet& a, const GSet& b, const GSet& result) {
  const Group& g = a.group();
  if (!g.is_prime_cyclic()) return;
  const std::uint64_t bound = std::min(a.card() + b.card() - 1, g.size());
  if (result.card() < bound) throw std::logic_error("Cauchy-Davenport violated by computed sumset: set algebra bug");
}

GSet naive_combine(const GSet& a, const GSet& b, bool subtract) {
  const Group& g = a.group();
  std::vector<std::uint64_t> acc(word_count_for(g.size()), 0);
  a.for_each([&](Elem x) {
    b.for_each([&](Elem y) {
      const Elem z = subtract ? g.sub(x, y) : g.add(x, y);
      acc[z >> 6] |= std::uint64_t{1} << (z & 63);
    });
  });
  return GSet(a.group_ptr(), std::move(acc));
}

}  // namespace

GSet translate(const GSet& a, Elem x) {
  if (x >= a.group().size()) throw SetOpError("translation element outside the group");
  std::vector<std::uint64_t> acc(a.words().size(), 0);
  or_translated(acc, a, x);
  return GSet(a.group_ptr(), std::move(acc));
}

GSet negate(const GSet& a) {
  const Group& g = a.group();
  std::vector<std::uint64_t> acc(a.words().size(), 0);
  a.for_each([&](Elem x) {
    const Elem z = g.neg(x);
    acc[z >> 6] |= std::uint64_t{1} << (z & 63);
  });
  return GSet(a.group_ptr(), std::move(acc));
}

GSet intersect(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  std::vector<std::uint64_t> w(a.words().begin(), a.words().end());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] &= b.words()[i];
  return GSet(a.group_ptr(), std::move(w));
}

std::uint64_t intersection_size(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  return bits::and_popcount(a.words(), b.words());
}

bool is_subset(const GSet& a, const GSet& b) {
  require_same_group(a, b);
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    if (a.words()[i] & ~b.words()[i]) return false;
  }
  return true;
}

GSet sumset(const GSet& a, const GSet& b, Backend backend) {
  require_same_group(a, b);
  require_nonempty(a, b);
  GSet result = [&] {
    if (backend == Backend::naive) return naive_combine(a, b, false);
    // Union of |small| shifted copies of the larger operand.
    const GSet& small = a.card() <= b.card() ? a : b;
    const GSet& large = a.card() <= b.card() ? b : a;
    std::vector<std::uint64_t> acc(large.words().size(), 0);
    small.for_each([&](Elem x) { or_translated(acc, large, x); });
    return GSet(a.group_ptr(), std::move(acc));
  }();
  cauchy_davenport_self_check(a, b, result);
  return result;
}

GSet diffset(const GSet& a, const GSet& b, Backend backend) {
  require_same_group(a, b);
  require_nonempty(a, b);
  if (backend == Backend::naive) return naive_combine(a, b, true);
  return sumset(a, negate(b), Backend::fast);
}

GSet layer(const GSet& a, Elem x) {
  std::vector<std::uint64_t> acc(a.words().size(), 0);
  or_translated(acc, a, x);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] &= a.words()[i];
  return GSet(a.group_ptr(), std::move(acc));
}

RepProfile rep_profile(const GSet& a, Backend backend) {
  if (a.empty()) throw SetOpError("representation profile of an empty set");
  const Group& g = a.group();
  const std::uint64_t n = g.size();
  RepProfile prof{a.group_ptr(), a.card(), std::vector<std::uint32_t>(n, 0), GSet(a.group_ptr())};

  if (backend == Backend::naive) {
    for (Elem x = 0; x < n; ++x) {
      std::uint32_t c = 0;
      a.for_each([&](Elem y) { c += a.contains(g.sub(y, x)) ? 1 : 0; });
      prof.counts[x] = c;
    }
  } else if (g.is_cyclic() && a.card() * a.card() > n * a.words().size()) {
    // Dense sets: |A ∩ (A+x)| by rotation and popcount.
    std::vector<std::uint64_t> rot(a.words().size());
    for (Elem x = 0; x < n; ++x) {
      std::fill(rot.begin(), rot.end(), 0);
      bits::or_rotated(rot, a.words(), n, x);
      prof.counts[x] = static_cast<std::uint32_t>(bits::and_popcount(rot, a.words()));
    }
  } else {
    const auto elems = a.elements();
    if (g.is_cyclic()) {
      for (Elem x : elems) {
        for (Elem y : elems) ++prof.counts[x >= y ? x - y : x + n - y];
      }
    } else {
      for (Elem x : elems) {
        for (Elem y : elems) ++prof.counts[g.sub(x, y)];
      }
    }
  }

  std::vector<std::uint64_t> sup(word_count_for(n), 0);
  for (Elem x = 0; x < n; ++x) {
    if (prof.counts[x]) sup[x >> 6] |= std::uint64_t{1} << (x & 63);
  }
  prof.support = GSet(a.group_ptr(), std::move(sup));
  return prof;
}

std::pair<bool, bool> katz_koester_verify(const GSet& a, Elem x) {
  const GSet ax = layer(a, x);
  if (ax.empty() || a.empty()) return {true, true};
  const GSet d = diffset(a, a);
  const GSet s = sumset(a, a);
  const bool diff_ok = is_subset(diffset(ax, a), layer(d, x));
  const bool sum_ok = is_subset(sumset(ax, a), layer(s, x));
  return {diff_ok, sum_ok};
}

namespace {

IntSet int_combine(const IntSet& a, const IntSet& b, bool subtract) {
  if (a.empty() || b.empty()) throw SetOpError("integer sumset/diffset of an empty set");
  const std::int64_t lo = subtract ? a.front() - b.back() : a.front() + b.front();
  const std::int64_t hi = subtract ? a.back() - b.front() : a.back() + b.back();
  std::vector<bool> hit(static_cast<std::size_t>(hi - lo + 1), false);
  for (auto x : a) {
    for (auto y : b) hit[static_cast<std::size_t>((subtract ? x - y : x + y) - lo)] = true;
  }
  IntSet out;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(lo + static_cast<std::int64_t>(i));
  }
  return out;
}

}  // namespace

IntSet int_sumset(const IntSet& a, const IntSet& b) { return int_combine(a, b, false); }
IntSet int_diffset(const IntSet& a, const IntSet& b) { return int_combine(a, b, true); }

}  // namespace addcomb
