#include "addcomb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "addcomb/energy.hpp"
#include "addcomb/fourier.hpp"
#include "addcomb/structure.hpp"

namespace addcomb {

// ---------------------------------------------------------------- appendix

Verdict appendix_chain_check(const GSet& a, const CheckOptions& opt) {
  const Group& g = a.group();
  if (g.size() < 2) throw std::invalid_argument("appendix_chain_check needs a nontrivial group");
  if (a.empty()) return not_applicable("appendix_chain", "empty set");
  if (a.card() == g.size()) return not_applicable("appendix_chain", "A = G");

  const RepProfile prof = rep_profile(a, opt.backend);
  const RepProfile dprof = rep_profile(prof.support, opt.backend);
  const std::uint64_t s_card = sumset(a, a, opt.backend).card();
  const Spectrum spec = spectrum(a, opt.backend);

  const Rational n(Int(g.size()));
  const Rational card(Int(a.card()));
  const Rational alpha = card / n;
  const Rational k = Rational(Int(prof.support.card())) / card;
  const Rational ks = Rational(Int(s_card)) / card;
  const Rational gamma_d = Rational(Int(prof.support.card())) / n;
  const Rational gamma_s = Rational(Int(s_card)) / n;

  const double eta2 = spec.eta * spec.eta;
  const double ca = static_cast<double>(a.card());
  const double kd = to_double(k);
  const double al = to_double(alpha);
  const double a4 = std::pow(ca, 4);
  const double e32 = energy_real(prof, 1.5);
  const Int e3 = energy_k(prof, 3);
  const Int ead = energy(prof, dprof);
  const double e3d = to_double(Rational(e3));
  const double eadd = to_double(Rational(ead));

  VerdictBuilder v("appendix_chain");
  v.approx("rho_stupid_diff", eta2, Relation::ge, to_double((1 - gamma_d) / (k * (1 - alpha))), opt.tol);
  v.approx("rho_stupid_sum", eta2, Relation::ge, to_double((1 - gamma_s) / (ks * (1 - alpha))), opt.tol);
  v.approx("rho_E_3", e3d, Relation::le, (1 + 2 / kd) * (eta2 - 1 / kd + al) * a4 + a4 / (kd * kd), opt.tol);
  v.approx("holder", e32, Relation::ge, std::pow(ca, 2.5) / std::sqrt(kd), opt.tol);
  v.approx("mixed_energy", ca * ca * e32 * e32, Relation::le, e3d * eadd, opt.tol);
  v.approx("spectral_EAD", eadd, Relation::le,
           (al * kd * kd + eta2 * kd * (1 - al * kd)) * std::pow(ca, 3), opt.tol);
  // Empirical only: the asymptotic bound has an unquantified error term.
  const double golden = (1 + std::sqrt(5.0)) / 2;
  v.param("golden_ratio_ratio", format_double(spec.eta * std::sqrt(kd + 1) / std::sqrt(golden)));
  v.param("eta", format_double(spec.eta)).param("K", to_string(k)).param("alpha", to_string(alpha));
  return v.build();
}

// ---------------------------------------------------------------- registry

namespace {

std::optional<IntSet> integer_view(const Instance& inst) {
  if (inst.ints) return inst.ints;
  if (inst.a && inst.a->group().is_cyclic()) {
    IntSet out;
    inst.a->for_each([&](Elem x) { out.push_back(static_cast<std::int64_t>(x)); });
    return out;
  }
  return std::nullopt;
}

Verdict katz_koester_check(const GSet& a, const CheckOptions& opt) {
  if (a.empty()) return not_applicable("katz_koester", "empty set");
  const GSet d = diffset(a, a, opt.backend);
  const GSet s = sumset(a, a, opt.backend);
  std::uint64_t checked = 0, diff_bad = 0, sum_bad = 0;
  std::optional<Elem> first_bad;
  d.for_each([&](Elem x) {
    const GSet ax = layer(a, x);
    ++checked;
    const bool dok = is_subset(diffset(ax, a, opt.backend), layer(d, x));
    const bool sok = is_subset(sumset(ax, a, opt.backend), layer(s, x));
    diff_bad += dok ? 0 : 1;
    sum_bad += sok ? 0 : 1;
    if ((!dok || !sok) && !first_bad) first_bad = x;
  });
  VerdictBuilder v("katz_koester");
  v.exact("diff_violations", Rational(Int(diff_bad)), Relation::eq, Rational(0));
  v.exact("sum_violations", Rational(Int(sum_bad)), Relation::eq, Rational(0));
  v.param("layers_checked", std::to_string(checked));
  if (first_bad) v.witness("x", format_elem(a.group(), *first_bad));
  return v.build();
}

Verdict rep_profile_check(const GSet& a, const CheckOptions& opt) {
  if (a.empty()) return not_applicable("rep_profile", "empty set");
  const Group& g = a.group();
  const RepProfile prof = rep_profile(a, opt.backend);
  std::uint64_t total = 0, asym = 0, layer_bad = 0;
  for (Elem x = 0; x < g.size(); ++x) {
    total += prof.counts[x];
    asym += prof.counts[x] != prof.counts[g.neg(x)] ? 1 : 0;
    if (opt.backend == Backend::naive || g.size() <= 4096) {
      layer_bad += layer(a, x).card() != prof.counts[x] ? 1 : 0;
    }
  }
  const bool support_ok = prof.support == diffset(a, a, opt.backend);
  const Int c = a.card();
  return VerdictBuilder("rep_profile")
      .exact("count_at_zero", Rational(Int(prof.counts[0])), Relation::eq, Rational(c))
      .exact("total", Rational(Int(total)), Relation::eq, Rational(c * c))
      .exact("asymmetric", Rational(Int(asym)), Relation::eq, Rational(0))
      .exact("layer_mismatch", Rational(Int(layer_bad)), Relation::eq, Rational(0))
      .exact("support_is_difference_set", Rational(support_ok ? 1 : 0), Relation::eq, Rational(1))
      .build();
}

// Exact |A+B| via rotations when |G| <= 64; certain passes skip the verdict.
bool cd_vosper_mask_pass(std::uint64_t n, std::uint64_t am, std::uint64_t bm) {
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::uint64_t acc = 0;
  for (std::uint64_t bits = am; bits; bits &= bits - 1) {
    const unsigned i = static_cast<unsigned>(std::countr_zero(bits));
    acc |= i == 0 ? bm : ((bm << i) | (bm >> (n - i))) & full;
  }
  const std::uint64_t s = static_cast<std::uint64_t>(std::popcount(acc));
  const std::uint64_t na = static_cast<std::uint64_t>(std::popcount(am));
  const std::uint64_t nb = static_cast<std::uint64_t>(std::popcount(bm));
  if (s < std::min(na + nb - 1, n)) return false;
  const bool vosper_case = na >= 2 && nb >= 2 && s + 2 <= n && s == na + nb - 1;
  return !vosper_case;
}

Rational default_kcap(Kind k) { return k == Kind::diff ? Rational(13, 5) : Rational(259, 100); }

using Runner = std::function<Verdict(const GSet&, const RunOptions&)>;

CheckSpec single(std::string id, bool needs_prime, std::string summary, Runner f) {
  CheckSpec c;
  c.id = id;
  c.arity = Arity::single;
  c.needs_prime = needs_prime;
  c.summary = std::move(summary);
  c.run = [id, f = std::move(f)](const Instance& inst, const RunOptions& o) {
    if (!inst.a) return not_applicable(id, "needs a set in a group");
    return f(*inst.a, o);
  };
  return c;
}

CheckSpec integer(std::string id, Kind kind, std::string summary) {
  CheckSpec c;
  c.id = id;
  c.arity = Arity::integer;
  c.summary = std::move(summary);
  c.run = [id, kind](const Instance& inst, const RunOptions& o) {
    const auto ints = integer_view(inst);
    if (!ints) return not_applicable(id, "needs a set of integers or a cyclic group");
    if (ints->empty()) return not_applicable(id, "empty set");
    return freiman_3n4_check(*ints, kind, o.check);
  };
  return c;
}

std::vector<CheckSpec> build_registry() {
  std::vector<CheckSpec> r;
  r.push_back(single("katz_koester", false, "A_x -+ A inside (A -+ A)_x for every x",
                     [](const GSet& a, const RunOptions& o) { return katz_koester_check(a, o.check); }));
  r.push_back(single("rep_profile", false, "representation function invariants",
                     [](const GSet& a, const RunOptions& o) { return rep_profile_check(a, o.check); }));
  {
    CheckSpec c;
    c.id = "cd_vosper";
    c.arity = Arity::pair;
    c.needs_prime = true;
    c.summary = "Cauchy-Davenport and Vosper";
    c.run = [](const Instance& inst, const RunOptions& o) {
      if (!inst.a) return not_applicable("cd_vosper", "needs a set in a group");
      return cd_vosper_check(*inst.a, inst.b ? *inst.b : *inst.a, o.check);
    };
    c.mask_prefilter = cd_vosper_mask_pass;
    r.push_back(std::move(c));
  }
  r.push_back(single("schur_bound", true, "4 * Schur triples <= 3|D|^2 + 1",
                     [](const GSet& a, const RunOptions& o) { return lemma34_check(a, o.check); }));
  r.push_back(single("triple_sums", false, "triple intersections sum to |A|^3 and E_3",
                     [](const GSet& a, const RunOptions& o) { return triple_sums_check(a, o.check); }));
  r.push_back(single("moments", false, "centred moment identities and bounds",
                     [](const GSet& a, const RunOptions& o) { return moments_check(a, o.check); }));
  r.push_back(single("cs_bound", true, "energy lower bound for |A-A| < p/2",
                     [](const GSet& a, const RunOptions& o) { return cs_bound_check(a, o.check); }));
  r.push_back(single("convolution_diff", true, "sum_x |A_x||A-A_x| bounds", [](const GSet& a, const RunOptions& o) {
    return convolution_sum_check(a, Kind::diff, o.check);
  }));
  r.push_back(single("convolution_sum", true, "sum_x |A_x||A+A_x| bounds", [](const GSet& a, const RunOptions& o) {
    return convolution_sum_check(a, Kind::sum, o.check);
  }));
  r.push_back(single("mixed_energy", false, "Hoelder and mixed-energy inequalities",
                     [](const GSet& a, const RunOptions& o) { return mixed_energy_check(a, o.check); }));
  r.push_back(single("parseval", false, "sum |A^|^2 = |A||G|",
                     [](const GSet& a, const RunOptions& o) { return parseval_check(a, o.check); }));
  r.push_back(single("energy_spectrum", false, "spectral energies match exact energies",
                     [](const GSet& a, const RunOptions& o) { return energy_spectrum_check(a, o.check); }));
  r.push_back(single("weak_eta", true, "E(A) <= (alpha + eta^2)|A|^3 and the weak eta bound",
                     [](const GSet& a, const RunOptions& o) { return weak_eta_check(a, o.check); }));
  r.push_back(single("spectral_product_diff", false, "spectral upper bound on E(A, A-A)",
                     [](const GSet& a, const RunOptions& o) { return spectral_product_check(a, Kind::diff, o.check); }));
  r.push_back(single("spectral_product_sum", false, "spectral upper bound on E(A, A+A)",
                     [](const GSet& a, const RunOptions& o) { return spectral_product_check(a, Kind::sum, o.check); }));
  r.push_back(single("semicircle", false, "half-circle concentration of the heavy character",
                     [](const GSet& a, const RunOptions& o) { return semicircle_check(a, o.check); }));
  r.push_back(single("fft_agreement", false, "fast transform equals direct character sums",
                     [](const GSet& a, const RunOptions& o) { return fft_agreement_check(a, o.check); }));
  r.push_back(single("appendix_chain", false, "explicit inequalities of the arbitrary-group chain",
                     [](const GSet& a, const RunOptions& o) { return appendix_chain_check(a, o.check); }));
  r.push_back(integer("freiman_3n4_sum", Kind::sum, "3n-4 theorem for |A+A|"));
  r.push_back(integer("freiman_3n4_diff", Kind::diff, "3n-4 theorem for |A-A|"));
  for (const TheoremPreset* t : {&freiman24(), &diff26(), &sum259()}) {
    r.push_back(single("theorem_" + t->name, true, "AP cover bound under the " + t->name + " hypothesis",
                       [t](const GSet& a, const RunOptions& o) { return theorem_predicate(a, *t, o.check); }));
  }
  for (Kind k : {Kind::diff, Kind::sum}) {
    r.push_back(single(std::string("rectify_") + std::string(to_string(k)), true, "constructive rectification pipeline",
                       [k](const GSet& a, const RunOptions& o) {
                         return rectify_check(a, k, o.kcap ? *o.kcap : default_kcap(k), o.check);
                       }));
  }
  return r;
}

}  // namespace

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> r = build_registry();
  return r;
}

const CheckSpec* find_check(std::string_view id) {
  for (const auto& c : registry()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<std::string> expand_checks(std::string_view list) {
  std::vector<std::string> out;
  if (list == "all" || list == "all-small") {
    for (const auto& c : registry()) out.push_back(c.id);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    std::string id(list.substr(pos, comma - pos));
    id.erase(0, id.find_first_not_of(' '));
    id.erase(id.find_last_not_of(' ') + 1);
    if (!id.empty()) {
      if (!find_check(id)) {
        std::string known;
        for (const auto& c : registry()) known += (known.empty() ? "" : ", ") + c.id;
        throw CampaignError("unknown check '" + id + "'; registered: " + known);
      }
      out.push_back(id);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw CampaignError("no checks selected");
  return out;
}

Verdict run_check(const CheckSpec& spec, const Instance& inst, const RunOptions& opt) {
  auto guarded = [&](const RunOptions& o) {
    try {
      if (spec.needs_prime && inst.a && !inst.a->group().is_prime_cyclic()) {
        return not_applicable(spec.id, "requires a group of prime order");
      }
      return spec.run(inst, o);
    } catch (const std::exception& e) {
      Verdict v;
      v.check_id = spec.id;
      v.pass = Outcome::fail;
      v.margin = -1.0;
      v.witness = nlohmann::json{{"error", e.what()}};
      return v;
    }
  };
  Verdict v = guarded(opt);
  if (v.failed()) {
    RunOptions naive = opt;
    naive.check.backend = Backend::naive;
    const Verdict again = guarded(naive);
    if (!v.witness) v.witness = nlohmann::json::object();
    (*v.witness)["oracle"] = again.failed() ? "confirmed" : "disagrees";
  }
  return v;
}

std::string describe(const Instance& inst) {
  if (inst.a && inst.b) return format_set(*inst.a) + " | " + format_set(*inst.b);
  if (inst.a) return format_set(*inst.a);
  if (inst.ints) return format_set(*inst.ints);
  return "";
}

// ---------------------------------------------------------------- campaigns

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::exhaustive:
      return "exhaustive";
    case Generator::random_subset:
      return "random_subset";
    case Generator::ap_perturbed:
      return "ap_perturbed";
    case Generator::union_of_aps:
      return "union_of_aps";
    case Generator::file_corpus:
      return "file_corpus";
  }
  return "?";
}

Generator parse_generator(std::string_view s) {
  for (Generator g : {Generator::exhaustive, Generator::random_subset, Generator::ap_perturbed, Generator::union_of_aps,
                      Generator::file_corpus}) {
    if (to_string(g) == s) return g;
  }
  throw CampaignError("unknown generator '" + std::string(s) + "'");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(splitmix64(seed) ^ index); }

namespace {

// Uniform in [0, n); the standard distributions are not portable bit-for-bit.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t upper_size(const CampaignSpec& s, std::uint64_t n) {
  return s.max_size == 0 ? n : std::min(s.max_size, n);
}

bool size_ok(const CampaignSpec& s, std::uint64_t card, std::uint64_t n) {
  if (card < s.min_size || card > upper_size(s, n)) return false;
  if (s.parity == Parity::odd && card % 2 == 0) return false;
  if (s.parity == Parity::even && card % 2 == 1) return false;
  return true;
}

GSet random_subset(const GroupPtr& g, const CampaignSpec& s, std::mt19937_64& rng) {
  const std::uint64_t n = g->size();
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t k = std::max<std::uint64_t>(s.min_size, 1); k <= upper_size(s, n); ++k) {
    if (size_ok(s, k, n)) sizes.push_back(k);
  }
  if (sizes.empty()) throw CampaignError("random_subset: no admissible set size");
  const std::uint64_t k = sizes[below(rng, sizes.size())];
  // Floyd's sampling.
  std::vector<std::uint64_t> words(word_count_for(n), 0);
  auto has = [&](std::uint64_t x) { return (words[x >> 6] >> (x & 63)) & 1U; };
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = below(rng, j + 1);
    const std::uint64_t pick = has(t) ? j : t;
    words[pick >> 6] |= std::uint64_t{1} << (pick & 63);
  }
  return GSet(g, std::move(words));
}

Elem nonzero_element(const Group& g, std::mt19937_64& rng) { return 1 + below(rng, g.size() - 1); }

GSet ap_perturbed(const GroupPtr& gp, const CampaignSpec& s, std::mt19937_64& rng) {
  const Group& g = *gp;
  const std::uint64_t n = g.size();
  const TheoremPreset* filter = s.filter_preset ? &preset_by_name(*s.filter_preset) : nullptr;
  const std::uint64_t lo = std::max<std::uint64_t>(s.min_size, 1);
  const std::uint64_t hi = std::max(lo, upper_size(s, n));
  for (std::uint64_t attempt = 0; attempt < kStarvationWindow; ++attempt) {
    const std::uint64_t len = lo + below(rng, hi - lo + 1);
    const Elem d = nonzero_element(g, rng);
    const Elem start = below(rng, n);
    auto term = [&](std::int64_t i) { return g.add(start, g.scale(i, d)); };
    std::vector<std::int64_t> idx(len);
    for (std::uint64_t i = 0; i < len; ++i) idx[i] = static_cast<std::int64_t>(i);
    const std::uint64_t removals = std::min<std::uint64_t>(below(rng, s.noise_remove + 1), len - 1);
    for (std::uint64_t r = 0; r < removals; ++r) idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(below(rng, idx.size())));
    std::vector<Elem> elems;
    for (auto i : idx) elems.push_back(term(i));
    const std::uint64_t additions = below(rng, s.noise_add + 1);
    for (std::uint64_t r = 0; r < additions; ++r) {
      // Mostly near the progression; occasionally anywhere.
      if (below(rng, 8) == 0) {
        elems.push_back(below(rng, n));
      } else {
        const auto span = static_cast<std::int64_t>(len);
        elems.push_back(term(static_cast<std::int64_t>(below(rng, 3 * len)) - span));
      }
    }
    GSet a = GSet::of(gp, elems);
    if (!size_ok(s, a.card(), n)) continue;
    if (filter && !theorem_hypothesis(a, *filter)) continue;
    return a;
  }
  throw CampaignError("ap_perturbed generator starved: " + std::to_string(kStarvationWindow) +
                      " consecutive rejections");
}

GSet union_of_aps(const GroupPtr& gp, const CampaignSpec& s, std::mt19937_64& rng) {
  const Group& g = *gp;
  const std::uint64_t n = g.size();
  const std::uint64_t cap = std::max<std::uint64_t>(1, upper_size(s, n));
  for (std::uint64_t attempt = 0; attempt < kStarvationWindow; ++attempt) {
    const std::uint64_t count = 1 + below(rng, std::max<std::uint64_t>(s.num_aps, 1));
    const bool shared = below(rng, 2) == 0;
    const Elem d0 = nonzero_element(g, rng);
    std::vector<Elem> elems;
    for (std::uint64_t c = 0; c < count; ++c) {
      const Elem d = shared ? d0 : nonzero_element(g, rng);
      const Elem start = below(rng, n);
      const std::uint64_t len = 1 + below(rng, std::max<std::uint64_t>(1, cap / count));
      for (std::uint64_t i = 0; i < len; ++i) elems.push_back(g.add(start, g.scale(static_cast<std::int64_t>(i), d)));
    }
    GSet a = GSet::of(gp, elems);
    if (size_ok(s, a.card(), n)) return a;
  }
  throw CampaignError("union_of_aps generator starved: " + std::to_string(kStarvationWindow) +
                      " consecutive rejections");
}

std::uint64_t binomial_count(std::uint64_t n, const CampaignSpec& s) {
  // Number of subsets of an n-set with an admissible size; saturates at 2^63.
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (!size_ok(s, k, n)) continue;
    long double c = 1;
    for (std::uint64_t i = 0; i < k; ++i) c = c * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    const long double t = static_cast<long double>(total) + std::round(c);
    total = t >= 9.2e18L ? (std::uint64_t{1} << 63) : static_cast<std::uint64_t>(t);
  }
  return total;
}

struct Phase {
  std::uint64_t count = 0;
  std::vector<const CheckSpec*> checks;
  // Returns false for skipped indices (filtered exhaustive masks).
  std::function<bool(std::uint64_t, Instance&)> make;
  // Exhaustive pair masks in a small group: index -> (a_mask, b_mask).
  bool pair_masks = false;
  bool prefilter_ok = false;  // prime cyclic group
  std::uint64_t mask_n = 0;
  std::uint64_t mask_count = 0;
};

struct ChunkResult {
  std::vector<Verdict> out;
  std::vector<CheckTally> tallies;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::uint64_t disagreements = 0;
};

constexpr std::uint64_t kChunk = 256;

void tally(CheckTally& t, Outcome o) {
  switch (o) {
    case Outcome::pass:
      ++t.pass;
      break;
    case Outcome::fail:
      ++t.fail;
      break;
    case Outcome::not_applicable:
      ++t.not_applicable;
      break;
  }
}

ChunkResult process_chunk(const Phase& ph, const CampaignSpec& spec, std::uint64_t begin, std::uint64_t end) {
  ChunkResult r;
  r.tallies.resize(ph.checks.size());
  const bool emit_all = spec.emit == Emit::all;
  Instance inst;
  for (std::uint64_t i = begin; i < end; ++i) {
    inst = Instance{};
    if (ph.pair_masks) {
      const std::uint64_t am = i / ph.mask_count + 1;
      const std::uint64_t bm = i % ph.mask_count + 1;
      if (!size_ok(spec, static_cast<std::uint64_t>(std::popcount(am)), ph.mask_n) ||
          !size_ok(spec, static_cast<std::uint64_t>(std::popcount(bm)), ph.mask_n)) {
        continue;
      }
      ++r.instances;
      bool built = false;
      for (std::size_t c = 0; c < ph.checks.size(); ++c) {
        const CheckSpec& cs = *ph.checks[c];
        if (!emit_all && ph.prefilter_ok && cs.mask_prefilter && cs.mask_prefilter(ph.mask_n, am, bm)) {
          ++r.tallies[c].pass;
          continue;
        }
        if (!built) {
          ph.make(i, inst);
          built = true;
        }
        Verdict v = run_check(cs, inst, spec.run);
        tally(r.tallies[c], v.pass);
        if (v.failed()) {
          ++r.failures;
          if (v.witness && v.witness->value("oracle", "") == "disagrees") ++r.disagreements;
        }
        if (emit_all || v.failed()) {
          v.group = inst.a->group().descriptor();
          v.set_repr = describe(inst);
          r.out.push_back(std::move(v));
        }
      }
      continue;
    }
    if (!ph.make(i, inst)) continue;
    ++r.instances;
    for (std::size_t c = 0; c < ph.checks.size(); ++c) {
      Verdict v = run_check(*ph.checks[c], inst, spec.run);
      tally(r.tallies[c], v.pass);
      if (v.failed()) {
        ++r.failures;
        if (v.witness && v.witness->value("oracle", "") == "disagrees") ++r.disagreements;
      }
      if (emit_all || v.failed()) {
        v.group = inst.a ? inst.a->group().descriptor() : "Z";
        v.set_repr = describe(inst);
        r.out.push_back(std::move(v));
      }
    }
  }
  return r;
}

// Runs chunks on `jobs` workers; results are handed to `sink` in chunk order.
void run_phase(const Phase& ph, const CampaignSpec& spec, const std::function<void(ChunkResult&)>& sink) {
  const std::uint64_t chunks = (ph.count + kChunk - 1) / kChunk;
  auto bounds = [&](std::uint64_t c) { return std::pair{c * kChunk, std::min(ph.count, (c + 1) * kChunk)}; };
  const unsigned jobs = std::max(1u, spec.jobs);
  if (jobs == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      ChunkResult r = process_chunk(ph, spec, b, e);
      sink(r);
    }
    return;
  }
  std::mutex mu;
  std::condition_variable cv;
  std::map<std::uint64_t, ChunkResult> ready;
  std::uint64_t next_take = 0, next_emit = 0;
  const std::uint64_t window = 4ULL * jobs;
  std::exception_ptr error;
  bool stop = false;

  auto worker = [&] {
    for (;;) {
      std::uint64_t c;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return stop || next_take >= chunks || next_take < next_emit + window; });
        if (stop || next_take >= chunks) return;
        c = next_take++;
      }
      try {
        auto [b, e] = bounds(c);
        ChunkResult r = process_chunk(ph, spec, b, e);
        std::lock_guard lock(mu);
        ready.emplace(c, std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  try {
    for (std::uint64_t c = 0; c < chunks; ++c) {
      ChunkResult r;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return error || ready.count(c); });
        if (error) break;
        r = std::move(ready.at(c));
        ready.erase(c);
        ++next_emit;
      }
      cv.notify_all();
      sink(r);
    }
  } catch (...) {
    std::lock_guard lock(mu);
    if (!error) error = std::current_exception();
    stop = true;
  }
  {
    std::lock_guard lock(mu);
    stop = true;
  }
  cv.notify_all();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<const CheckSpec*> resolve(const std::vector<std::string>& ids, bool want_pairs) {
  std::vector<const CheckSpec*> out;
  for (const auto& id : ids) {
    const CheckSpec* c = find_check(id);
    if (!c) expand_checks(id);  // throws with the registry listing
    if ((c->arity == Arity::pair) == want_pairs) out.push_back(c);
  }
  return out;
}

}  // namespace

nlohmann::ordered_json CampaignResult::summary_json(const std::string& name) const {
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [id, t] : tallies) {
    checks[id] = {{"pass", t.pass}, {"fail", t.fail}, {"not_applicable", t.not_applicable}};
  }
  nlohmann::ordered_json s;
  s["campaign"] = name;
  s["instances"] = instances;
  s["failures"] = failures;
  s["oracle_disagreements"] = oracle_disagreements;
  s["checks"] = checks;
  return nlohmann::ordered_json{{"summary", s}};
}

CampaignResult run_campaign(const CampaignSpec& spec, const std::function<void(const Verdict&)>& emit) {
  if (spec.checks.empty()) throw CampaignError("campaign has no checks");
  if (!(spec.run.check.tol > 0)) throw CampaignError("tolerance must be positive");
  const auto singles = resolve(spec.checks, false);
  const auto pairs = resolve(spec.checks, true);

  std::vector<Phase> phases;
  std::optional<GroupPtr> group;
  if (!spec.orders.empty()) group = share(make_group(spec.orders));

  std::vector<CorpusEntry> corpus;
  switch (spec.generator) {
    case Generator::exhaustive: {
      if (!group) {
        if (spec.int_bound < 0) throw CampaignError("exhaustive campaign needs a group or an integer bound");
        if (spec.int_bound > 40) throw CampaignError("integer bound too large for an exhaustive scan");
        const std::uint64_t n = static_cast<std::uint64_t>(spec.int_bound) + 1;
        Phase ph;
        ph.checks = singles;
        ph.count = (std::uint64_t{1} << n) - 1;
        if (binomial_count(n, spec) > spec.instance_cap) throw CampaignError("exhaustive scan exceeds the instance cap");
        ph.make = [&spec, n](std::uint64_t i, Instance& inst) {
          const std::uint64_t mask = i + 1;
          if (!size_ok(spec, static_cast<std::uint64_t>(std::popcount(mask)), n)) return false;
          IntSet s;
          for (std::uint64_t b = 0; b < n; ++b) {
            if ((mask >> b) & 1U) s.push_back(static_cast<std::int64_t>(b));
          }
          inst.ints = std::move(s);
          return true;
        };
        phases.push_back(std::move(ph));
        break;
      }
      const GroupPtr g = *group;
      const std::uint64_t n = g->size();
      if (n > 62) throw CampaignError("group too large for an exhaustive scan");
      const std::uint64_t subsets = binomial_count(n, spec);
      const std::uint64_t masks = (std::uint64_t{1} << n) - 1;
      if (!singles.empty()) {
        if (subsets > spec.instance_cap) throw CampaignError("exhaustive scan exceeds the instance cap");
        Phase ph;
        ph.checks = singles;
        ph.count = masks;
        ph.make = [&spec, g, n](std::uint64_t i, Instance& inst) {
          const std::uint64_t mask = i + 1;
          if (!size_ok(spec, static_cast<std::uint64_t>(std::popcount(mask)), n)) return false;
          inst.a = GSet::from_mask(g, mask);
          return true;
        };
        phases.push_back(std::move(ph));
      }
      if (!pairs.empty()) {
        if (subsets > (std::uint64_t{1} << 31) || subsets * subsets > spec.instance_cap) {
          throw CampaignError("exhaustive pair scan exceeds the instance cap");
        }
        Phase ph;
        ph.checks = pairs;
        ph.count = masks * masks;
        ph.pair_masks = true;
        ph.prefilter_ok = g->is_prime_cyclic();
        ph.mask_n = n;
        ph.mask_count = masks;
        ph.make = [g, masks](std::uint64_t i, Instance& inst) {
          inst.a = GSet::from_mask(g, i / masks + 1);
          inst.b = GSet::from_mask(g, i % masks + 1);
          return true;
        };
        phases.push_back(std::move(ph));
      }
      break;
    }
    case Generator::random_subset:
    case Generator::ap_perturbed:
    case Generator::union_of_aps: {
      if (!group) throw CampaignError("random campaigns need a group");
      if (spec.trials > spec.instance_cap) throw CampaignError("trial count exceeds the instance cap");
      const GroupPtr g = *group;
      if (g->size() < 2) throw CampaignError("random campaigns need |G| >= 2");
      if (spec.filter_preset) {
        preset_by_name(*spec.filter_preset);
        if (!g->is_prime_cyclic()) throw CampaignError("hypothesis filters need a group of prime order");
      }
      Phase ph;
      ph.checks = singles;
      ph.checks.insert(ph.checks.end(), pairs.begin(), pairs.end());
      ph.count = spec.trials;
      const bool need_b = !pairs.empty();
      ph.make = [&spec, g, need_b](std::uint64_t i, Instance& inst) {
        std::mt19937_64 rng(instance_seed(spec.seed, i));
        auto draw = [&] {
          switch (spec.generator) {
            case Generator::ap_perturbed:
              return ap_perturbed(g, spec, rng);
            case Generator::union_of_aps:
              return union_of_aps(g, spec, rng);
            default:
              return random_subset(g, spec, rng);
          }
        };
        inst.a = draw();
        if (need_b) inst.b = draw();
        return true;
      };
      phases.push_back(std::move(ph));
      break;
    }
    case Generator::file_corpus: {
      corpus = ingest_corpus(spec.file);
      if (corpus.size() > spec.instance_cap) throw CampaignError("corpus exceeds the instance cap");
      Phase ph;
      ph.checks = singles;
      ph.checks.insert(ph.checks.end(), pairs.begin(), pairs.end());
      ph.count = corpus.size();
      ph.make = [&corpus](std::uint64_t i, Instance& inst) {
        const CorpusEntry& e = corpus[i];
        inst.line = e.line;
        if (const auto* gs = std::get_if<GSet>(&e.set)) {
          inst.a = *gs;
        } else {
          inst.ints = std::get<IntSet>(e.set);
        }
        return true;
      };
      phases.push_back(std::move(ph));
      break;
    }
  }

  CampaignResult result;
  for (const auto& id : spec.checks) result.tallies[id];
  for (const Phase& ph : phases) {
    run_phase(ph, spec, [&](ChunkResult& r) {
      result.instances += r.instances;
      result.failures += r.failures;
      result.oracle_disagreements += r.disagreements;
      for (std::size_t c = 0; c < ph.checks.size(); ++c) {
        CheckTally& t = result.tallies[ph.checks[c]->id];
        t.pass += r.tallies[c].pass;
        t.fail += r.tallies[c].fail;
        t.not_applicable += r.tallies[c].not_applicable;
      }
      for (const Verdict& v : r.out) emit(v);
    });
  }
  return result;
}

CampaignResult run_campaign_jsonl(const CampaignSpec& spec, std::ostream& out, std::ostream* counterexamples) {
  CampaignResult r = run_campaign(spec, [&](const Verdict& v) {
    const std::string line = to_json(v).dump();
    out << line << '\n';
    if (counterexamples && v.failed()) *counterexamples << line << '\n';
  });
  out << r.summary_json(spec.name).dump() << '\n';
  out.flush();
  return r;
}

// ---------------------------------------------------------------- config

namespace {

Parity parse_parity(const std::string& s) {
  if (s == "any") return Parity::any;
  if (s == "odd") return Parity::odd;
  if (s == "even") return Parity::even;
  throw CampaignError("parity must be any, odd or even");
}

std::string parity_name(Parity p) { return p == Parity::any ? "any" : p == Parity::odd ? "odd" : "even"; }

}  // namespace

CampaignSpec campaign_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CampaignError("campaign configuration must be a JSON object");
  CampaignSpec s;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "name") {
        s.name = val.get<std::string>();
      } else if (key == "generator") {
        s.generator = parse_generator(val.get<std::string>());
      } else if (key == "p") {
        s.orders = {val.get<std::uint64_t>()};
      } else if (key == "group") {
        s.orders = val.get<std::vector<std::uint64_t>>();
      } else if (key == "int_bound") {
        s.int_bound = val.get<std::int64_t>();
      } else if (key == "min_size") {
        s.min_size = val.get<std::uint64_t>();
      } else if (key == "max_size") {
        s.max_size = val.get<std::uint64_t>();
      } else if (key == "trials") {
        s.trials = val.get<std::uint64_t>();
      } else if (key == "seed") {
        s.seed = val.get<std::uint64_t>();
      } else if (key == "checks") {
        if (val.is_string()) {
          s.checks = expand_checks(val.get<std::string>());
        } else {
          for (const auto& c : val) {
            for (auto& id : expand_checks(c.get<std::string>())) s.checks.push_back(id);
          }
        }
      } else if (key == "parity") {
        s.parity = parse_parity(val.get<std::string>());
      } else if (key == "noise_remove") {
        s.noise_remove = val.get<std::uint64_t>();
      } else if (key == "noise_add") {
        s.noise_add = val.get<std::uint64_t>();
      } else if (key == "filter_preset") {
        s.filter_preset = val.get<std::string>();
      } else if (key == "num_aps") {
        s.num_aps = val.get<std::uint64_t>();
      } else if (key == "file") {
        s.file = val.get<std::string>();
      } else if (key == "emit") {
        const auto e = val.get<std::string>();
        if (e != "all" && e != "failures") throw CampaignError("emit must be all or failures");
        s.emit = e == "all" ? Emit::all : Emit::failures;
      } else if (key == "instance_cap") {
        s.instance_cap = val.get<std::uint64_t>();
      } else if (key == "tol") {
        s.run.check.tol = val.get<double>();
      } else if (key == "backend") {
        const auto b = val.get<std::string>();
        if (b != "fast" && b != "naive") throw CampaignError("backend must be fast or naive");
        s.run.check.backend = b == "fast" ? Backend::fast : Backend::naive;
      } else if (key == "kcap") {
        s.run.kcap = parse_rational(val.is_string() ? val.get<std::string>() : val.dump());
      } else if (key == "jobs") {
        s.jobs = val.get<unsigned>();
      } else {
        throw CampaignError("unknown campaign key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw CampaignError(std::string("bad campaign configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CampaignError(std::string("bad campaign configuration: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const CampaignSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["generator"] = std::string(to_string(s.generator));
  if (!s.orders.empty()) j["group"] = s.orders;
  if (s.int_bound >= 0) j["int_bound"] = s.int_bound;
  j["min_size"] = s.min_size;
  j["max_size"] = s.max_size;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["checks"] = s.checks;
  j["parity"] = parity_name(s.parity);
  j["noise_remove"] = s.noise_remove;
  j["noise_add"] = s.noise_add;
  if (s.filter_preset) j["filter_preset"] = *s.filter_preset;
  j["num_aps"] = s.num_aps;
  if (!s.file.empty()) j["file"] = s.file;
  j["emit"] = s.emit == Emit::all ? "all" : "failures";
  j["instance_cap"] = s.instance_cap;
  j["tol"] = s.run.check.tol;
  j["backend"] = s.run.check.backend == Backend::fast ? "fast" : "naive";
  if (s.run.kcap) j["kcap"] = to_string(*s.run.kcap);
  j["jobs"] = s.jobs;
  return j;
}

std::vector<CampaignSpec> default_campaigns() {
  std::vector<CampaignSpec> out;
  auto ids = [](std::initializer_list<const char*> l) { return std::vector<std::string>(l.begin(), l.end()); };
  {
    CampaignSpec s;
    s.name = "exhaustive-p7";
    s.orders = {7};
    s.checks = expand_checks("all");
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "exhaustive-int-0-10";
    s.int_bound = 10;
    s.min_size = 3;
    s.checks = ids({"freiman_3n4_sum", "freiman_3n4_diff"});
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "random-p101";
    s.generator = Generator::random_subset;
    s.orders = {101};
    s.min_size = 2;
    s.max_size = 12;
    s.trials = 200;
    s.seed = 101;
    s.checks = ids({"katz_koester", "rep_profile", "schur_bound", "triple_sums", "moments", "cs_bound",
                    "convolution_diff", "convolution_sum", "mixed_energy", "parseval", "energy_spectrum", "weak_eta",
                    "spectral_product_diff", "spectral_product_sum", "semicircle", "fft_agreement", "appendix_chain"});
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "random-4x4";
    s.generator = Generator::random_subset;
    s.orders = {4, 4};
    s.max_size = 10;
    s.trials = 200;
    s.seed = 44;
    s.checks = ids({"katz_koester", "rep_profile", "triple_sums", "moments", "mixed_energy", "parseval",
                    "energy_spectrum", "spectral_product_diff", "spectral_product_sum", "semicircle", "fft_agreement",
                    "appendix_chain"});
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "freiman24-p1009";
    s.generator = Generator::ap_perturbed;
    s.orders = {1009};
    s.min_size = 5;
    s.max_size = 28;
    s.trials = 200;
    s.seed = 24;
    s.filter_preset = "freiman24";
    s.checks = ids({"theorem_freiman24", "rectify_sum"});
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "diff26-p5003";
    s.generator = Generator::ap_perturbed;
    s.orders = {5003};
    s.min_size = 5;
    s.max_size = 20;
    s.trials = 200;
    s.seed = 26;
    s.filter_preset = "diff26";
    s.checks = ids({"theorem_diff26", "rectify_diff"});
    out.push_back(s);
  }
  {
    CampaignSpec s;
    s.name = "sum259-p23003";
    s.generator = Generator::ap_perturbed;
    s.orders = {23003};
    s.min_size = 101;
    s.max_size = 103;
    s.trials = 20;
    s.seed = 259;
    s.filter_preset = "sum259";
    s.checks = ids({"theorem_sum259", "rectify_sum"});
    out.push_back(s);
  }
  return out;
}

std::vector<CorpusEntry> ingest_corpus(std::istream& in) {
  std::vector<CorpusEntry> out;
  std::string line;
  std::uint64_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back({no, parse_set_literal(line)});
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<CorpusEntry> ingest_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CampaignError("cannot open corpus file '" + path + "'");
  return ingest_corpus(in);
}

}  // namespace addcomb
