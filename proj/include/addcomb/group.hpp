#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace addcomb {

inline constexpr std::uint64_t kDefaultElementCap = std::uint64_t{1} << 26;

// Group elements are mixed-radix indices into [0, |G|), row-major in the
// order of Group::orders(): the last coordinate varies fastest.
using Elem = std::uint64_t;

class GroupError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(std::uint64_t n);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
// Throws GroupError if gcd(a, m) != 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);
// Representative of v in [0, m).
std::uint64_t reduce_mod(std::int64_t v, std::uint64_t m);

// Z_{n1} x ... x Z_{nk}. Immutable after construction.
class Group {
 public:
  const std::vector<std::uint64_t>& orders() const { return orders_; }
  std::uint64_t size() const { return size_; }
  std::size_t rank() const { return orders_.size(); }
  bool is_cyclic() const { return orders_.size() == 1; }
  bool is_prime_cyclic() const { return prime_cyclic_; }
  // The modulus p; throws unless the group is Z_p with p prime.
  std::uint64_t prime() const;

  Elem zero() const { return 0; }
  Elem add(Elem x, Elem y) const;
  Elem sub(Elem x, Elem y) const;
  Elem neg(Elem x) const;
  // k * x for an integer k (negative allowed).
  Elem scale(std::int64_t k, Elem x) const;

  std::vector<std::uint64_t> coords(Elem x) const;
  // Coordinates are reduced modulo the orders.
  Elem index(std::span<const std::int64_t> coords) const;

  // "p=13" for Z_p with p prime, "G=12" or "G=4x4" otherwise.
  std::string descriptor() const;

  bool operator==(const Group& other) const { return orders_ == other.orders_; }

 private:
  friend Group make_group(std::vector<std::uint64_t> orders, std::uint64_t element_cap);
  Group() = default;

  std::vector<std::uint64_t> orders_;
  std::uint64_t size_ = 0;
  bool prime_cyclic_ = false;
};

Group make_group(std::vector<std::uint64_t> orders, std::uint64_t element_cap = kDefaultElementCap);

}  // namespace addcomb
