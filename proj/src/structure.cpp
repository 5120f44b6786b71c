#include "addcomb/structure.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "addcomb/fourier.hpp"

namespace addcomb {

std::string to_string(const APCover& c) {
  return "d=" + std::to_string(c.difference) + ", start=" + std::to_string(c.start) + ", L=" + std::to_string(c.length);
}

namespace {

void require_prime_group(const GSet& a, const char* what) {
  if (!a.group().is_prime_cyclic()) throw std::invalid_argument(std::string(what) + " needs a group of prime order");
}

bool cover_less(const APCover& x, const APCover& y) {
  return std::tie(x.length, x.difference, x.start) < std::tie(y.length, y.difference, y.start);
}

// Covers of A with difference u^{-1}: dilate by u, take the largest circular
// gap. Reports the best candidate under the tie-break order.
APCover covers_for_multiplier(const std::vector<Elem>& elems, std::uint64_t p, std::uint64_t u,
                              std::vector<std::uint64_t>& scratch) {
  scratch.clear();
  for (Elem a : elems) scratch.push_back(mul_mod(u, a, p));
  std::sort(scratch.begin(), scratch.end());
  const std::size_t m = scratch.size();
  std::uint64_t gap = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t next = i + 1 < m ? scratch[i + 1] : scratch[0] + p;
    gap = std::max(gap, next - scratch[i]);
  }
  const std::uint64_t len = p - gap + 1;
  const std::uint64_t dprime = mod_inverse(u, p);
  APCover best{0, 0, 0};
  for (std::size_t i = 0; i < m; ++i) {
    const std::uint64_t next = i + 1 < m ? scratch[i + 1] : scratch[0] + p;
    if (next - scratch[i] != gap) continue;
    const std::uint64_t img_start = next % p;
    std::uint64_t start = mul_mod(dprime, img_start, p);
    std::uint64_t d = dprime;
    if (d > (p - 1) / 2) {
      start = (start + mul_mod((len - 1) % p, d, p)) % p;
      d = p - d;
    }
    const APCover c{static_cast<std::int64_t>(d), static_cast<std::int64_t>(start), len};
    if (best.length == 0 || cover_less(c, best)) best = c;
  }
  return best;
}

std::optional<APCover> trivial_cover(const GSet& a) {
  const std::uint64_t p = a.group().prime();
  if (a.card() == 1) return APCover{1, static_cast<std::int64_t>(a.elements().front()), 1};
  if (a.card() == p) return APCover{1, 0, p};
  return std::nullopt;
}

}  // namespace

APCover min_ap_cover_modp_naive(const GSet& a) {
  require_prime_group(a, "min_ap_cover_modp");
  if (a.empty()) throw std::invalid_argument("AP cover of an empty set");
  if (auto t = trivial_cover(a)) return *t;
  const std::uint64_t p = a.group().prime();
  const auto elems = a.elements();
  std::vector<std::uint64_t> scratch;
  APCover best{0, 0, 0};
  for (std::uint64_t d = 1; d <= (p - 1) / 2; ++d) {
    const APCover c = covers_for_multiplier(elems, p, mod_inverse(d, p), scratch);
    if (best.length == 0 || cover_less(c, best)) best = c;
  }
  return best;
}

APCover min_ap_cover_modp(const GSet& a) {
  require_prime_group(a, "min_ap_cover_modp");
  if (a.empty()) throw std::invalid_argument("AP cover of an empty set");
  if (auto t = trivial_cover(a)) return *t;
  const std::uint64_t p = a.group().prime();
  const auto elems = a.elements();
  std::vector<std::uint64_t> scratch;

  // Seed with the most popular difference: short covers usually use it.
  const RepProfile prof = rep_profile(a);
  Elem popular = 1;
  for (Elem x = 1; x < p; ++x) {
    if (prof.counts[x] > prof.counts[popular]) popular = x;
  }
  std::uint64_t u0 = mod_inverse(popular, p);
  if (u0 > (p - 1) / 2) u0 = p - u0;
  APCover best = covers_for_multiplier(elems, p, u0, scratch);

  std::vector<std::uint64_t> rel;
  for (Elem e : elems) rel.push_back(e >= elems[0] ? e - elems[0] : e + p - elems[0]);
  // u and p-u give mirrored images with the same gaps.
  for (std::uint64_t u = 1; u <= (p - 1) / 2; ++u) {
    // Any arc of length L holding u*a_0 and u*a_i needs L > dist(u*a_0, u*a_i).
    bool hopeless = false;
    for (std::size_t i = 1; i < rel.size(); ++i) {
      const std::uint64_t v = mul_mod(u, rel[i], p);
      if (std::min(v, p - v) >= best.length) {
        hopeless = true;
        break;
      }
    }
    if (hopeless) continue;
    const APCover c = covers_for_multiplier(elems, p, u, scratch);
    if (cover_less(c, best)) best = c;
  }
  return best;
}

APCover min_ap_cover_int(const IntSet& a) {
  if (a.empty()) throw std::invalid_argument("AP cover of an empty set");
  if (a.size() == 1) return {1, a.front(), 1};
  std::int64_t g = 0;
  for (auto x : a) g = std::gcd(g, x - a.front());
  return {g, a.front(), static_cast<std::uint64_t>((a.back() - a.front()) / g) + 1};
}

bool covers(const APCover& c, const GSet& a) {
  const Group& g = a.group();
  if (!g.is_cyclic()) throw std::invalid_argument("covers: cyclic groups only");
  const std::uint64_t n = g.size();
  std::vector<bool> in(n, false);
  const std::uint64_t d = reduce_mod(c.difference, n);
  std::uint64_t x = reduce_mod(c.start, n);
  for (std::uint64_t i = 0; i < std::min(c.length, n); ++i) {
    in[x] = true;
    x = (x + d) % n;
  }
  bool ok = true;
  a.for_each([&](Elem e) { ok = ok && in[e]; });
  return ok;
}

Verdict freiman_3n4_check(const IntSet& a, Kind kind, const CheckOptions& opt) {
  (void)opt;
  const std::string id = kind == Kind::sum ? "freiman_3n4_sum" : "freiman_3n4_diff";
  if (a.size() <= 2) return not_applicable(id, "|A| <= 2");
  const IntSet x = int_sum_or_diff(a, a, kind);
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t nx = static_cast<std::int64_t>(x.size());
  if (nx > 3 * n - 4) return not_applicable(id, "|A+-A| > 3|A|-4");
  const APCover c = min_ap_cover_int(a);
  return VerdictBuilder(id)
      .exact("cover_length", Rational(Int(c.length)), Relation::le, Rational(Int(nx - n + 1)))
      .param("cover", to_string(c))
      .build();
}

IntSet canonical_lift(const GSet& a, std::int64_t window_start) {
  require_prime_group(a, "canonical_lift");
  const std::uint64_t p = a.group().prime();
  const std::uint64_t base = reduce_mod(window_start, p);
  IntSet out;
  a.for_each([&](Elem x) {
    const std::uint64_t off = x >= base ? x - base : x + p - base;
    if (off > (p - 1) / 2) {
      throw std::invalid_argument("element " + std::to_string(x) + " does not fit the lift window starting at " +
                                  std::to_string(window_start));
    }
    out.push_back(window_start + static_cast<std::int64_t>(off));
  });
  std::sort(out.begin(), out.end());
  return out;
}

Verdict cd_vosper_check(const GSet& a, const GSet& b, const CheckOptions& opt) {
  if (!a.group().is_prime_cyclic()) return not_applicable("cd_vosper", "requires a group of prime order");
  if (a.empty() || b.empty()) return not_applicable("cd_vosper", "empty set");
  const std::uint64_t p = a.group().prime();
  const std::uint64_t s = sumset(a, b, opt.backend).card();
  const std::uint64_t na = a.card(), nb = b.card();
  VerdictBuilder v("cd_vosper");
  v.exact("cauchy_davenport", Rational(Int(s)), Relation::ge, Rational(Int(std::min(na + nb - 1, p))));
  if (na >= 2 && nb >= 2 && s + 2 <= p && s == na + nb - 1) {
    const bool naive = opt.backend == Backend::naive;
    const APCover ca = naive ? min_ap_cover_modp_naive(a) : min_ap_cover_modp(a);
    const APCover cb = naive ? min_ap_cover_modp_naive(b) : min_ap_cover_modp(b);
    const bool aps = ca.length == na && cb.length == nb && ca.difference == cb.difference;
    v.exact("vosper_common_ap", Rational(aps ? 1 : 0), Relation::eq, Rational(1));
    v.param("cover_a", to_string(ca)).param("cover_b", to_string(cb));
    if (!aps) v.witness("cover_a", to_string(ca)).witness("cover_b", to_string(cb));
  }
  return v.build();
}

const TheoremPreset& freiman24() {
  static const TheoremPreset p{"freiman24", Rational(12, 5), 3, Rational(1, 35), 0, Kind::sum};
  return p;
}
const TheoremPreset& diff26() {
  static const TheoremPreset p{"diff26", Rational(13, 5), 3, Rational(9, 2000), 0, Kind::diff};
  return p;
}
const TheoremPreset& sum259() {
  static const TheoremPreset p{"sum259", Rational(259, 100), 3, Rational(9, 2000), 100, Kind::sum};
  return p;
}

const TheoremPreset& preset_by_name(std::string_view name) {
  if (name == "freiman24") return freiman24();
  if (name == "diff26") return diff26();
  if (name == "sum259") return sum259();
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (freiman24, diff26, sum259)");
}

namespace {

// Empty string when the hypothesis holds; otherwise the reason.
std::string hypothesis_failure(const GSet& a, const TheoremPreset& t, std::uint64_t x_card) {
  const Int n = a.card();
  const Int p = a.group().prime();
  if (a.card() <= t.min_size) return "|A| <= " + std::to_string(t.min_size);
  if (!(Rational(n) < t.density_cap * Rational(p))) return "|A| >= " + to_string(t.density_cap) + " p";
  if (!(Rational(Int(x_card)) < t.mult * Rational(n) - Rational(t.off))) {
    return "|A" + std::string(t.kind == Kind::sum ? "+" : "-") + "A| >= " + to_string(t.mult) + "|A| - " +
           to_string(t.off);
  }
  return {};
}

}  // namespace

bool theorem_hypothesis(const GSet& a, const TheoremPreset& preset) {
  if (!a.group().is_prime_cyclic() || a.empty()) return false;
  if (a.card() <= preset.min_size) return false;
  if (!(Rational(Int(a.card())) < preset.density_cap * Rational(Int(a.group().prime())))) return false;
  return hypothesis_failure(a, preset, sum_or_diff(a, a, preset.kind).card()).empty();
}

Verdict theorem_predicate(const GSet& a, const TheoremPreset& preset, const CheckOptions& opt) {
  const std::string id = "theorem_" + preset.name;
  if (!a.group().is_prime_cyclic()) return not_applicable(id, "requires a group of prime order");
  if (a.empty()) return not_applicable(id, "empty set");
  // Cheap filters first: the sumset is the expensive part at large p.
  if (a.card() <= preset.min_size) return not_applicable(id, "|A| <= " + std::to_string(preset.min_size));
  if (!(Rational(Int(a.card())) < preset.density_cap * Rational(Int(a.group().prime())))) {
    return not_applicable(id, "|A| >= " + to_string(preset.density_cap) + " p");
  }
  const std::uint64_t x = sum_or_diff(a, a, preset.kind, opt.backend).card();
  if (auto why = hypothesis_failure(a, preset, x); !why.empty()) return not_applicable(id, why);
  const APCover c = opt.backend == Backend::naive ? min_ap_cover_modp_naive(a) : min_ap_cover_modp(a);
  return VerdictBuilder(id)
      .exact("cover_length", Rational(Int(c.length)), Relation::le, Rational(Int(x) - Int(a.card()) + 1))
      .param("cover", to_string(c))
      .param("kind", std::string(to_string(preset.kind)))
      .build();
}

std::string_view to_string(RectifyStage s) {
  switch (s) {
    case RectifyStage::eta:
      return "eta";
    case RectifyStage::arc:
      return "arc";
    case RectifyStage::lift:
      return "lift";
    case RectifyStage::f3n4:
      return "f3n4";
    case RectifyStage::extend:
      return "extend";
    case RectifyStage::done:
      return "done";
  }
  return "?";
}

namespace {

std::string rectify_precondition_failure(const GSet& a, Kind kind, const Rational& k_cap, std::uint64_t x_card) {
  if (!a.group().is_prime_cyclic()) return "requires a group of prime order";
  if (a.empty()) return "empty set";
  if (k_cap < 2 || k_cap > 3) return "K_cap outside [2, 3]";
  const Int n = a.card();
  if (!(Int(12) * n < Int(a.group().prime()))) return "|A| >= p/12";
  if (!(Rational(Int(x_card)) < k_cap * Rational(n) - 3)) {
    return std::string("|A") + (kind == Kind::sum ? "+" : "-") + "A| >= K_cap|A| - 3";
  }
  return {};
}

RectifyTrace fail_at(RectifyTrace t, RectifyStage s, std::string detail) {
  t.stage = s;
  t.failed = true;
  t.detail = std::move(detail);
  return t;
}

}  // namespace

RectifyTrace rectify_via_bias(const GSet& a, Kind kind, const Rational& k_cap, const RectifyOptions& opt) {
  if (!a.group().is_prime_cyclic()) throw std::invalid_argument("rectify_via_bias needs a group of prime order");
  if (a.empty()) throw std::invalid_argument("rectify_via_bias of an empty set");
  const std::uint64_t p = a.group().prime();
  const std::uint64_t x_card = sum_or_diff(a, a, kind, opt.backend).card();
  if (opt.enforce_hypothesis) {
    if (auto why = rectify_precondition_failure(a, kind, k_cap, x_card); !why.empty()) {
      throw std::invalid_argument("rectify_via_bias precondition: " + why);
    }
  }
  const Rational card(Int(a.card()));
  RectifyTrace t;

  // Stage 1: a heavy character with (1 + eta)/2 >= K/3.
  const Spectrum s = spectrum(a, opt.backend);
  t.eta_val = s.eta;
  t.heavy_char = s.argmax;
  if (3.0 * (1.0 + s.eta) < 2.0 * to_double(k_cap)) {
    return fail_at(t, RectifyStage::eta, "(1+eta)/2 < K/3 with eta=" + format_double(s.eta));
  }

  // Stage 2: dilate by the heavy frequency; the best window of (p+1)/2
  // consecutive residues holds the points of the heavy half-circle.
  t.stage = RectifyStage::arc;
  const std::uint64_t xi = s.argmax;
  const std::uint64_t half = (p - 1) / 2;
  std::vector<std::uint64_t> img;
  a.for_each([&](Elem x) { img.push_back(mul_mod(xi, x, p)); });
  std::sort(img.begin(), img.end());
  const std::size_t m = img.size();
  std::size_t best_count = 0;
  std::uint64_t best_s = 0;
  for (std::size_t i = 0, j = 0; i < m; ++i) {
    // j runs over the doubled list: img[j mod m] + p*(j >= m).
    if (j < i) j = i;
    while (j + 1 < i + m) {
      const std::uint64_t v = (j + 1 < m ? img[j + 1] : img[j + 1 - m] + p) - img[i];
      if (v > half) break;
      ++j;
    }
    const std::size_t count = j - i + 1;
    if (count > best_count) {
      best_count = count;
      best_s = img[i];
    }
  }
  t.shift = static_cast<std::int64_t>(best_s);
  t.big_part_size = best_count;
  if (Rational(Int(3 * best_count)) < k_cap * card) {
    return fail_at(t, RectifyStage::arc, "heavy half holds " + std::to_string(best_count) + " < K|A|/3 points");
  }

  // Stage 3: lift the heavy part to [0, (p-1)/2] and normalise.
  t.stage = RectifyStage::lift;
  std::vector<std::uint64_t> shifted;
  for (auto v : img) shifted.push_back(v >= best_s ? v - best_s : v + p - best_s);
  std::vector<Elem> part;
  for (auto r : shifted) {
    if (r <= half) part.push_back(r);
  }
  IntSet lifted;
  try {
    lifted = canonical_lift(GSet::of(a.group_ptr(), part), 0);
  } catch (const std::invalid_argument& e) {
    return fail_at(t, RectifyStage::lift, e.what());
  }
  const std::int64_t lo = lifted.front();
  std::int64_t g = 0;
  for (auto z : lifted) g = std::gcd(g, z - lo);
  if (g == 0) g = 1;
  IntSet normal;
  for (auto z : lifted) normal.push_back((z - lo) / g);

  // Stage 4: Freiman 3n-4 on the lifted part.
  t.stage = RectifyStage::f3n4;
  const IntSet xs = int_sum_or_diff(normal, normal, kind);
  const std::int64_t n2 = static_cast<std::int64_t>(normal.size());
  const std::int64_t nx2 = static_cast<std::int64_t>(xs.size());
  const std::int64_t l = normal.back();
  t.l_val = l;
  if (nx2 > 3 * n2 - 4) return fail_at(t, RectifyStage::f3n4, "|A''+-A''| > 3|A''|-4");
  if (l > nx2 - n2) return fail_at(t, RectifyStage::f3n4, "max A'' exceeds |A''+-A''| - |A''|");
  if (!(static_cast<std::uint64_t>(6 * l) < p)) return fail_at(t, RectifyStage::f3n4, "l >= p/6");

  // Stage 5: the whole set lies in [-l, 2l] after the same normalisation.
  t.stage = RectifyStage::extend;
  const std::uint64_t ginv = mod_inverse(static_cast<std::uint64_t>(g), p);
  const std::uint64_t offset = (best_s + static_cast<std::uint64_t>(lo)) % p;
  IntSet whole;
  for (auto v : img) {
    const std::uint64_t phi = mul_mod(ginv, (v + p - offset) % p, p);
    const std::int64_t z = phi <= p - 1 - static_cast<std::uint64_t>(l) ? static_cast<std::int64_t>(phi)
                                                                       : static_cast<std::int64_t>(phi) - static_cast<std::int64_t>(p);
    if (z > 2 * l) return fail_at(t, RectifyStage::extend, "normalised image " + std::to_string(z) + " outside [-l, 2l]");
    whole.push_back(z);
  }
  std::sort(whole.begin(), whole.end());

  // Back to Z_p: z -> xi^{-1} (g z + offset).
  const APCover ci = min_ap_cover_int(whole);
  const std::uint64_t xinv = mod_inverse(xi, p);
  const std::uint64_t gz0 = mul_mod(static_cast<std::uint64_t>(g), reduce_mod(ci.start, p), p);
  std::uint64_t start = mul_mod(xinv, (gz0 + offset) % p, p);
  std::uint64_t d = mul_mod(xinv, mul_mod(static_cast<std::uint64_t>(g), reduce_mod(ci.difference, p), p), p);
  if (ci.length == 1) {
    d = 1;
  } else if (d > half) {
    start = (start + mul_mod((ci.length - 1) % p, d, p)) % p;
    d = p - d;
  }
  const APCover cover{static_cast<std::int64_t>(d), static_cast<std::int64_t>(start), ci.length};
  t.final_cover = cover;
  if (!covers(cover, a)) return fail_at(t, RectifyStage::extend, "mapped cover misses an element of A");
  if (cover.length + a.card() > x_card + 1) {
    return fail_at(t, RectifyStage::extend, "final cover longer than |A+-A| - |A| + 1");
  }
  t.stage = RectifyStage::done;
  return t;
}

Verdict rectify_check(const GSet& a, Kind kind, const Rational& k_cap, const CheckOptions& opt) {
  const std::string id = kind == Kind::sum ? "rectify_sum" : "rectify_diff";
  if (!a.group().is_prime_cyclic()) return not_applicable(id, "requires a group of prime order");
  if (a.empty()) return not_applicable(id, "empty set");
  if (!(Int(12) * a.card() < Int(a.group().prime()))) return not_applicable(id, "|A| >= p/12");
  const std::uint64_t x_card = sum_or_diff(a, a, kind, opt.backend).card();
  if (auto why = rectify_precondition_failure(a, kind, k_cap, x_card); !why.empty()) return not_applicable(id, why);

  const RectifyTrace t = rectify_via_bias(a, kind, k_cap, {true, opt.backend});
  VerdictBuilder v(id);
  v.param("K_cap", to_string(k_cap)).param("eta", format_double(t.eta_val)).param("stage", std::string(to_string(t.stage)));
  if (t.failed && t.stage == RectifyStage::eta) {
    Verdict na = not_applicable(id, "heavy character too weak: " + t.detail);
    na.params.emplace_back("eta", format_double(t.eta_val));
    na.params.emplace_back("stage", "eta");
    return na;
  }
  if (t.failed) {
    v.exact("reached_done", Rational(static_cast<int>(t.stage)), Relation::ge,
            Rational(static_cast<int>(RectifyStage::done)));
    v.witness("stage", std::string(to_string(t.stage))).witness("detail", t.detail);
    return v.build();
  }
  const APCover minimal = opt.backend == Backend::naive ? min_ap_cover_modp_naive(a) : min_ap_cover_modp(a);
  const std::uint64_t len = t.final_cover->length;
  v.exact("cover_bound", Rational(Int(len)), Relation::le, Rational(Int(x_card) - Int(a.card()) + 1));
  v.exact("not_below_minimal", Rational(Int(len)), Relation::ge, Rational(Int(minimal.length)));
  v.param("final_cover", to_string(*t.final_cover)).param("minimal_cover", to_string(minimal));
  return v.build();
}

}  // namespace addcomb
