#include "addcomb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "addcomb/energy.hpp"
#include "fft.hpp"

namespace addcomb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(-2 pi i k / n) for k in [0, n), using the nearer representative of k.
std::vector<std::complex<double>> root_table(std::uint64_t n) {
  std::vector<std::complex<double>> t(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double kk = k <= n / 2 ? static_cast<double>(k) : -static_cast<double>(n - k);
    t[k] = std::polar(1.0, -kTwoPi * kk / static_cast<double>(n));
  }
  return t;
}

std::vector<std::complex<double>> naive_coeffs(const GSet& a) {
  const Group& g = a.group();
  const auto& orders = g.orders();
  const auto elems = a.elements();
  std::vector<std::complex<double>> out(g.size());
  if (g.is_cyclic()) {
    const std::uint64_t n = g.size();
    const auto roots = root_table(n);
    for (Elem xi = 0; xi < n; ++xi) {
      std::complex<double> s = 0;
      for (Elem x : elems) s += roots[mul_mod(xi, x, n)];
      out[xi] = s;
    }
    return out;
  }
  std::vector<std::vector<std::complex<double>>> roots;
  for (auto n : orders) roots.push_back(root_table(n));
  std::vector<std::vector<std::uint64_t>> ac;
  ac.reserve(elems.size());
  for (Elem x : elems) ac.push_back(g.coords(x));
  for (Elem xi = 0; xi < g.size(); ++xi) {
    const auto c = g.coords(xi);
    std::complex<double> s = 0;
    for (const auto& x : ac) {
      std::complex<double> term = 1;
      for (std::size_t j = 0; j < orders.size(); ++j) term *= roots[j][(c[j] * x[j]) % orders[j]];
      s += term;
    }
    out[xi] = s;
  }
  return out;
}

std::vector<std::complex<double>> fast_coeffs(const GSet& a) {
  const Group& g = a.group();
  std::vector<std::complex<double>> data(g.size(), 0.0);
  a.for_each([&](Elem x) { data[x] = 1.0; });
  fft::forward(data, g.orders());
  return data;
}

}  // namespace

Spectrum spectrum(const GSet& a, Backend backend) {
  if (a.empty()) throw std::invalid_argument("spectrum of an empty set");
  const Group& g = a.group();
  Spectrum s;
  s.group = a.group_ptr();
  s.card = a.card();
  s.coeffs = backend == Backend::naive ? naive_coeffs(a) : fast_coeffs(a);
  s.coeffs[0] = static_cast<double>(a.card());

  const double card = static_cast<double>(a.card());
  double best = 0.0;
  for (Elem xi = 1; xi < g.size(); ++xi) best = std::max(best, std::abs(s.coeffs[xi]));
  if (best > card * (1 + 1e-9)) throw std::logic_error("Fourier coefficient exceeds |A|: transform bug");
  s.argmax = g.size() > 1 ? 1 : 0;
  for (Elem xi = 1; xi < g.size(); ++xi) {
    if (std::abs(s.coeffs[xi]) >= best - kEtaTieTolerance * card) {
      s.argmax = xi;
      break;
    }
  }
  s.eta = std::clamp(best / card, 0.0, 1.0);
  return s;
}

EtaResult eta(const GSet& a, Backend backend) {
  if (a.group().size() < 2) throw std::invalid_argument("eta needs a group with a nonprincipal character");
  const Spectrum s = spectrum(a, backend);
  return {s.eta, s.argmax};
}

double energy_via_spectrum(const Spectrum& a, const Spectrum& b) {
  if (!(*a.group == *b.group)) throw std::invalid_argument("spectra of different groups");
  double total = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) total += std::norm(a.coeffs[i]) * std::norm(b.coeffs[i]);
  return total / static_cast<double>(a.coeffs.size());
}

double energy_via_spectrum(const GSet& a, const GSet& b, Backend backend) {
  return energy_via_spectrum(spectrum(a, backend), spectrum(b, backend));
}

double character_angle(const Group& g, Elem xi, Elem x) {
  const auto c = g.coords(xi);
  const auto y = g.coords(x);
  long double turns = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto n = g.orders()[j];
    turns += static_cast<long double>(mul_mod(c[j], y[j], n)) / n;
  }
  turns -= std::floor(turns);
  // chi(x) = exp(-2 pi i turns)
  const long double t = turns == 0 ? 0 : 1 - turns;
  return static_cast<double>(t * kTwoPi);
}

ArcReport semicircle_concentration(std::vector<double> angles) {
  if (angles.empty()) throw std::invalid_argument("semicircle_concentration of an empty point set");
  const double pi = std::numbers::pi;
  ArcReport r;
  std::complex<double> sum = 0;
  for (double& t : angles) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    sum += std::polar(1.0, t);
  }
  r.points = angles;
  r.eta_z = std::abs(sum) / static_cast<double>(angles.size());

  std::vector<double> sorted = angles;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> doubled = sorted;
  for (double t : sorted) doubled.push_back(t + kTwoPi);

  // The count inside (alpha, alpha + pi) only changes where alpha crosses a
  // point or an antipode; between breakpoints it is constant and at least
  // its value on the breakpoint itself, so interval midpoints suffice.
  std::vector<double> br;
  for (double t : sorted) {
    br.push_back(t);
    br.push_back(t >= pi ? t - pi : t + pi);
  }
  std::sort(br.begin(), br.end());
  std::vector<double> merged;
  for (double b : br) {
    if (merged.empty() || b - merged.back() > kArcResolution) merged.push_back(b);
  }
  if (merged.size() > 1 && merged.front() + kTwoPi - merged.back() <= kArcResolution) merged.pop_back();

  auto count_from = [&](double alpha) {
    const auto lo = std::upper_bound(doubled.begin(), doubled.end(), alpha);
    const auto hi = std::lower_bound(doubled.begin(), doubled.end(), alpha + pi);
    return static_cast<std::uint64_t>(hi > lo ? hi - lo : 0);
  };
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double next = i + 1 < merged.size() ? merged[i + 1] : merged.front() + kTwoPi;
    double alpha = 0.5 * (merged[i] + next);
    if (alpha >= kTwoPi) alpha -= kTwoPi;
    const std::uint64_t c = count_from(alpha);
    if (c > r.best_count) {
      r.best_count = c;
      r.arc_start = alpha;
    }
  }
  return r;
}

Verdict parseval_check(const GSet& a, const CheckOptions& opt) {
  if (a.empty()) return not_applicable("parseval", "empty set");
  const Spectrum s = spectrum(a, opt.backend);
  double total = 0.0;
  for (const auto& c : s.coeffs) total += std::norm(c);
  const double expected = static_cast<double>(a.card()) * static_cast<double>(a.group().size());
  return VerdictBuilder("parseval").approx("parseval", total, Relation::eq, expected, opt.tol).build();
}

Verdict energy_spectrum_check(const GSet& a, const CheckOptions& opt) {
  if (a.empty()) return not_applicable("energy_spectrum", "empty set");
  const RepProfile prof = rep_profile(a, opt.backend);
  const RepProfile dprof = rep_profile(prof.support, opt.backend);
  const Spectrum sa = spectrum(a, opt.backend);
  const Spectrum sd = spectrum(prof.support, opt.backend);
  const double eaa = static_cast<double>(energy(prof, prof));
  const double ead = static_cast<double>(energy(prof, dprof));
  return VerdictBuilder("energy_spectrum")
      .approx("E_AA", energy_via_spectrum(sa, sa), Relation::eq, eaa, opt.tol)
      .approx("E_AD", energy_via_spectrum(sa, sd), Relation::eq, ead, opt.tol)
      .build();
}

Verdict weak_eta_check(const GSet& a, const CheckOptions& opt) {
  const std::string id = "weak_eta";
  if (!a.group().is_prime_cyclic()) return not_applicable(id, "requires a group of prime order");
  if (a.card() <= 2) return not_applicable(id, "|A| <= 2");
  const RepProfile prof = rep_profile(a, opt.backend);
  const std::uint64_t p = a.group().prime();
  const std::uint64_t d = prof.support.card();
  if (2 * d >= p) return not_applicable(id, "|A-A| >= p/2");

  const Spectrum s = spectrum(a, opt.backend);
  const Rational card(Int(a.card()));
  const Rational alpha = card / Rational(Int(p));
  const Rational k = Rational(Int(d)) / card;
  const Rational c = 3 * k * (k + 2);
  const Rational weak_rhs = 1 / k + 1 / c - 1 / (c * card * card) - alpha;
  const double eta2 = s.eta * s.eta;
  const double a3 = std::pow(static_cast<double>(a.card()), 3);
  const double e = static_cast<double>(energy(prof, prof));
  return VerdictBuilder(id)
      .approx("Erho", e, Relation::le, (to_double(alpha) + eta2) * a3, opt.tol)
      .approx("weak", eta2, Relation::ge, to_double(weak_rhs), opt.tol)
      .param("eta", format_double(s.eta))
      .param("K", to_string(k))
      .build();
}

Verdict spectral_product_check(const GSet& a, Kind kind, const CheckOptions& opt) {
  const std::string id = kind == Kind::diff ? "spectral_product_diff" : "spectral_product_sum";
  if (a.empty()) return not_applicable(id, "empty set");
  if (a.group().size() < 2) return not_applicable(id, "trivial group");
  const RepProfile prof = rep_profile(a, opt.backend);
  const GSet x = kind == Kind::diff ? prof.support : sumset(a, a, opt.backend);
  const RepProfile xprof = rep_profile(x, opt.backend);
  const Spectrum s = spectrum(a, opt.backend);
  const double n = static_cast<double>(a.group().size());
  const double ca = static_cast<double>(a.card());
  const double cx = static_cast<double>(x.card());
  const double bound = (ca * ca * cx * cx + s.eta * s.eta * ca * ca * (n - cx) * cx) / n;
  const double exact = static_cast<double>(energy(prof, xprof));
  return VerdictBuilder(id)
      .approx("spectral_product", bound, Relation::ge, exact, opt.tol)
      .param("eta", format_double(s.eta))
      .param("E_AX", std::to_string(energy(prof, xprof)))
      .build();
}

Verdict semicircle_check(const GSet& a, const CheckOptions& opt) {
  if (a.empty()) return not_applicable("semicircle", "empty set");
  const Group& g = a.group();
  if (g.size() < 2) return not_applicable("semicircle", "trivial group");
  const Spectrum s = spectrum(a, opt.backend);
  std::vector<double> angles;
  a.for_each([&](Elem x) { angles.push_back(character_angle(g, s.argmax, x)); });
  const ArcReport r = semicircle_concentration(std::move(angles));
  const double n = static_cast<double>(a.card());
  return VerdictBuilder("semicircle")
      .approx("half_circle", static_cast<double>(r.best_count), Relation::ge, 0.5 * (1 + r.eta_z) * n, opt.tol)
      .param("character", format_elem(g, s.argmax))
      .param("eta_z", format_double(r.eta_z))
      .param("arc_start", format_double(r.arc_start))
      .build();
}

Verdict fft_agreement_check(const GSet& a, const CheckOptions& opt) {
  (void)opt;
  if (a.empty()) return not_applicable("fft_agreement", "empty set");
  if (a.group().size() * a.card() > kNaiveTransformBudget) {
    return not_applicable("fft_agreement", "naive transform over budget");
  }
  const auto fast = fast_coeffs(a);
  const auto naive = naive_coeffs(a);
  double worst = 0.0;
  Elem where = 0;
  for (std::size_t i = 0; i < fast.size(); ++i) {
    const double e = std::abs(fast[i] - naive[i]);
    if (e > worst) {
      worst = e;
      where = i;
    }
  }
  return VerdictBuilder("fft_agreement")
      .approx("max_abs_error", worst, Relation::le, kTransformAgreement * static_cast<double>(a.card()), 0.0)
      .param("worst_character", format_elem(a.group(), where))
      .build();
}

}  // namespace addcomb
