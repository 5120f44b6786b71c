#pragma once

// Word-level helpers for dense bitsets. Private to the library.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace addcomb::bits {

// 64 bits of `w` starting at bit `off`; bits past the end read as zero.
inline std::uint64_t load64(std::span<const std::uint64_t> w, std::size_t off) {
  const std::size_t wi = off >> 6;
  const unsigned b = off & 63;
  if (wi >= w.size()) return 0;
  std::uint64_t lo = w[wi] >> b;
  if (b != 0 && wi + 1 < w.size()) lo |= w[wi + 1] << (64 - b);
  return lo;
}

// dst[doff, doff+len) |= src[soff, soff+len)
inline void or_range(std::span<std::uint64_t> dst, std::size_t doff, std::span<const std::uint64_t> src,
                     std::size_t soff, std::size_t len) {
  while (len > 0) {
    const std::size_t take = std::min<std::size_t>(len, 64 - (doff & 63));
    std::uint64_t chunk = load64(src, soff);
    if (take < 64) chunk &= (std::uint64_t{1} << take) - 1;
    dst[doff >> 6] |= chunk << (doff & 63);
    doff += take;
    soff += take;
    len -= take;
  }
}

// dst |= src rotated by `shift` inside a cyclic universe of n bits (bit i -> i+shift mod n).
inline void or_rotated(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src, std::uint64_t n,
                       std::uint64_t shift) {
  if (n <= 64) {
    const std::uint64_t x = src[0];
    const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    dst[0] |= shift == 0 ? x : ((x << shift) | (x >> (n - shift))) & mask;
    return;
  }
  or_range(dst, shift, src, 0, n - shift);
  if (shift) or_range(dst, 0, src, n - shift, shift);
}

inline std::uint64_t popcount(std::span<const std::uint64_t> w) {
  std::uint64_t c = 0;
  for (auto x : w) c += static_cast<std::uint64_t>(std::popcount(x));
  return c;
}

inline std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return c;
}

}  // namespace addcomb::bits
