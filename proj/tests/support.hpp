#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "addcomb/gset.hpp"
#include "addcomb/verdict.hpp"

namespace testing {

inline addcomb::GroupPtr zp(std::uint64_t p) { return addcomb::share(addcomb::make_group({p})); }
inline addcomb::GroupPtr grp(std::vector<std::uint64_t> orders) {
  return addcomb::share(addcomb::make_group(std::move(orders)));
}
inline addcomb::GSet gs(const std::string& literal) { return addcomb::parse_gset(literal); }

// Uniform random subset of the given size (or a random size in [1, |G|] when size == 0).
inline addcomb::GSet random_set(const addcomb::GroupPtr& g, std::mt19937_64& rng, std::uint64_t size = 0) {
  const std::uint64_t n = g->size();
  if (size == 0) size = 1 + rng() % n;
  std::vector<addcomb::Elem> all(n);
  for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
  for (std::uint64_t i = 0; i < size; ++i) std::swap(all[i], all[i + rng() % (n - i)]);
  all.resize(size);
  return addcomb::GSet::of(g, all);
}

inline addcomb::GSet interval(const addcomb::GroupPtr& g, std::int64_t lo, std::int64_t hi) {
  std::vector<addcomb::Elem> e;
  for (std::int64_t v = lo; v <= hi; ++v) e.push_back(addcomb::reduce_mod(v, g->size()));
  return addcomb::GSet::of(g, e);
}

inline bool passed(const addcomb::Verdict& v) { return v.pass == addcomb::Outcome::pass; }
inline bool na(const addcomb::Verdict& v) { return v.pass == addcomb::Outcome::not_applicable; }

inline std::string param_or(const addcomb::Verdict& v, std::string_view key, std::string fallback = "") {
  const std::string* s = v.param(key);
  return s ? *s : fallback;
}

}  // namespace testing
