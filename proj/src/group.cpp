#include "addcomb/group.hpp"

#include <numeric>
#include <utility>

namespace addcomb {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin; this witness set is exact for all n < 2^64.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw GroupError("element " + std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  return reduce_mod(t, m);
}

std::uint64_t reduce_mod(std::int64_t v, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  std::int64_t r = v % mm;
  if (r < 0) r += mm;
  return static_cast<std::uint64_t>(r);
}

Group make_group(std::vector<std::uint64_t> orders, std::uint64_t element_cap) {
  if (orders.empty()) throw GroupError("a group needs at least one cyclic factor");
  std::uint64_t size = 1;
  for (std::uint64_t n : orders) {
    if (n < 2) throw GroupError("cyclic order " + std::to_string(n) + " < 2");
    if (size > element_cap / n) {
      throw GroupError("group size exceeds the element cap of " + std::to_string(element_cap));
    }
    size *= n;
  }
  if (size > element_cap) throw GroupError("group size exceeds the element cap of " + std::to_string(element_cap));
  Group g;
  g.prime_cyclic_ = orders.size() == 1 && is_prime(orders[0]);
  g.orders_ = std::move(orders);
  g.size_ = size;
  return g;
}

std::uint64_t Group::prime() const {
  if (!prime_cyclic_) throw GroupError("group " + descriptor() + " is not of prime order");
  return orders_[0];
}

Elem Group::add(Elem x, Elem y) const {
  if (orders_.size() == 1) {
    const Elem s = x + y;
    return s >= size_ ? s - size_ : s;
  }
  Elem result = 0, stride = 1;
  for (std::size_t k = orders_.size(); k-- > 0;) {
    const std::uint64_t n = orders_[k];
    std::uint64_t d = x % n + y % n;
    if (d >= n) d -= n;
    result += d * stride;
    stride *= n;
    x /= n;
    y /= n;
  }
  return result;
}

Elem Group::neg(Elem x) const {
  if (orders_.size() == 1) return x == 0 ? 0 : size_ - x;
  Elem result = 0, stride = 1;
  for (std::size_t k = orders_.size(); k-- > 0;) {
    const std::uint64_t n = orders_[k];
    const std::uint64_t d = x % n;
    result += (d == 0 ? 0 : n - d) * stride;
    stride *= n;
    x /= n;
  }
  return result;
}

Elem Group::sub(Elem x, Elem y) const { return add(x, neg(y)); }

Elem Group::scale(std::int64_t k, Elem x) const {
  Elem result = 0, stride = 1;
  for (std::size_t i = orders_.size(); i-- > 0;) {
    const std::uint64_t n = orders_[i];
    result += mul_mod(reduce_mod(k, n), x % n, n) * stride;
    stride *= n;
    x /= n;
  }
  return result;
}

std::vector<std::uint64_t> Group::coords(Elem x) const {
  std::vector<std::uint64_t> c(orders_.size());
  for (std::size_t k = orders_.size(); k-- > 0;) {
    c[k] = x % orders_[k];
    x /= orders_[k];
  }
  return c;
}

Elem Group::index(std::span<const std::int64_t> coords) const {
  if (coords.size() != orders_.size()) {
    throw GroupError("expected " + std::to_string(orders_.size()) + " coordinates, got " +
                     std::to_string(coords.size()));
  }
  Elem result = 0;
  for (std::size_t k = 0; k < orders_.size(); ++k) result = result * orders_[k] + reduce_mod(coords[k], orders_[k]);
  return result;
}

std::string Group::descriptor() const {
  if (prime_cyclic_) return "p=" + std::to_string(orders_[0]);
  std::string s = "G=";
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    if (k) s += 'x';
    s += std::to_string(orders_[k]);
  }
  return s;
}

}  // namespace addcomb
