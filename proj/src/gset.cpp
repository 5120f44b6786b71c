#include "addcomb/gset.hpp"

#include <algorithm>
#include <charconv>

namespace addcomb {

GSet::GSet(GroupPtr group) : group_(std::move(group)), words_(word_count_for(group_->size()), 0) {}

GSet::GSet(GroupPtr group, std::vector<std::uint64_t> words) : group_(std::move(group)), words_(std::move(words)) {
  const std::size_t need = word_count_for(group_->size());
  words_.resize(need, 0);
  if (const unsigned tail = group_->size() % 64; tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
  for (std::uint64_t w : words_) card_ += static_cast<std::uint64_t>(std::popcount(w));
}

GSet GSet::of(GroupPtr group, std::span<const Elem> elements) {
  std::vector<std::uint64_t> words(word_count_for(group->size()), 0);
  for (Elem x : elements) {
    if (x >= group->size()) throw GroupError("element index " + std::to_string(x) + " outside " + group->descriptor());
    words[x >> 6] |= std::uint64_t{1} << (x & 63);
  }
  return GSet(std::move(group), std::move(words));
}

GSet GSet::full(GroupPtr group) {
  std::vector<std::uint64_t> words(word_count_for(group->size()), ~std::uint64_t{0});
  return GSet(std::move(group), std::move(words));
}

GSet GSet::from_mask(GroupPtr group, std::uint64_t mask) {
  if (group->size() > 64) throw GroupError("from_mask needs |G| <= 64");
  return GSet(std::move(group), std::vector<std::uint64_t>{mask});
}

std::vector<Elem> GSet::elements() const {
  std::vector<Elem> out;
  out.reserve(card_);
  for_each([&](Elem x) { out.push_back(x); });
  return out;
}

bool GSet::operator==(const GSet& other) const {
  return (group_ == other.group_ || *group_ == *other.group_) && words_ == other.words_;
}

IntSet make_int_set(std::vector<std::int64_t> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

GSet affine_map(const GSet& a, std::int64_t d, Elem c) {
  const Group& g = a.group();
  if (c >= g.size()) throw GroupError("translation element outside the group");
  if (g.is_prime_cyclic()) {
    if (reduce_mod(d, g.size()) == 0) throw GroupError("dilation by 0 is not invertible in " + g.descriptor());
  } else {
    const bool unit = g.is_cyclic() ? reduce_mod(d, g.size()) == 1 || reduce_mod(d, g.size()) == g.size() - 1
                                    : d == 1 || d == -1;
    if (!unit) throw GroupError("only dilation by +-1 is supported in " + g.descriptor());
  }
  std::vector<Elem> image;
  image.reserve(a.card());
  a.for_each([&](Elem x) { image.push_back(g.add(g.scale(d, x), c)); });
  return GSet::of(a.group_ptr(), image);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_orders(std::string_view s) {
  std::vector<std::uint64_t> orders;
  std::size_t start = 0;
  while (true) {
    const std::size_t x = s.find('x', start);
    const std::int64_t n = parse_int(s.substr(start, x == std::string_view::npos ? s.npos : x - start));
    if (n < 2) throw ParseError("cyclic order must be >= 2, got " + std::to_string(n));
    orders.push_back(static_cast<std::uint64_t>(n));
    if (x == std::string_view::npos) break;
    start = x + 1;
  }
  return orders;
}

// Splits "a,b,(c,d),e" at top-level commas.
std::vector<std::string_view> split_items(std::string_view s) {
  std::vector<std::string_view> items;
  s = trim(s);
  if (s.empty()) return items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')'");
    }
    if (s[i] == ',' && depth == 0) {
      items.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('");
  items.push_back(trim(s.substr(start)));
  for (auto item : items) {
    if (item.empty()) throw ParseError("empty element in set literal");
  }
  return items;
}

}  // namespace

SetValue parse_set_literal(std::string_view text, std::uint64_t element_cap) {
  text = trim(text);
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("missing ':' in set literal '" + std::string(text) + "'");
  const std::string_view head = trim(text.substr(0, colon));
  const auto items = split_items(text.substr(colon + 1));

  if (head == "Z") {
    std::vector<std::int64_t> values;
    for (auto item : items) values.push_back(parse_int(item));
    return make_int_set(std::move(values));
  }

  if (head.size() < 3 || head[1] != '=' || (head[0] != 'p' && head[0] != 'G')) {
    throw ParseError("set literal must start with 'p=', 'G=' or 'Z', got '" + std::string(head) + "'");
  }
  std::vector<std::uint64_t> orders = parse_orders(trim(head.substr(2)));
  if (head[0] == 'p' && orders.size() != 1) throw ParseError("'p=' takes a single modulus");
  if (head[0] == 'p' && !is_prime(orders[0])) {
    throw ParseError("'p=' needs a prime modulus, got " + std::to_string(orders[0]) + "; use 'G=' for Z_n");
  }
  GroupPtr group;
  try {
    group = share(make_group(orders, element_cap));
  } catch (const GroupError& e) {
    throw ParseError(e.what());
  }

  std::vector<Elem> elems;
  elems.reserve(items.size());
  std::vector<std::int64_t> coords;
  for (auto item : items) {
    coords.clear();
    if (item.front() == '(') {
      if (item.back() != ')') throw ParseError("malformed tuple '" + std::string(item) + "'");
      std::string_view inner = item.substr(1, item.size() - 2);
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = inner.find(',', start);
        coords.push_back(parse_int(inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else {
      coords.push_back(parse_int(item));
    }
    if (coords.size() != orders.size()) {
      throw ParseError("element '" + std::string(item) + "' has " + std::to_string(coords.size()) +
                       " coordinates, group has rank " + std::to_string(orders.size()));
    }
    elems.push_back(group->index(coords));
  }
  return GSet::of(group, elems);
}

GSet parse_gset(std::string_view text, std::uint64_t element_cap) {
  SetValue v = parse_set_literal(text, element_cap);
  if (auto* g = std::get_if<GSet>(&v)) return std::move(*g);
  throw ParseError("expected a group set literal, got an integer set");
}

std::string format_elem(const Group& g, Elem x) {
  if (g.is_cyclic()) return std::to_string(x);
  std::string s = "(";
  const auto c = g.coords(x);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(c[k]);
  }
  return s + ")";
}

std::string format_set(const GSet& a) {
  std::string s = a.group().descriptor() + ":";
  bool first = true;
  a.for_each([&](Elem x) {
    s += first ? " " : ",";
    first = false;
    s += format_elem(a.group(), x);
  });
  return s;
}

std::string format_set(const IntSet& a) {
  std::string s = "Z:";
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += i ? "," : " ";
    s += std::to_string(a[i]);
  }
  return s;
}

}  // namespace addcomb
