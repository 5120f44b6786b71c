#pragma once

#include <cstdint>
#include <optional>

#include "addcomb/exact.hpp"
#include "addcomb/gset.hpp"
#include "addcomb/setops.hpp"
#include "addcomb/verdict.hpp"

namespace addcomb {

// E(A,B) = sum_x |A_x||B_x|.
std::uint64_t energy(const GSet& a, const GSet& b, Backend backend = Backend::fast);
std::uint64_t energy(const RepProfile& a, const RepProfile& b);

// E_k(A) = sum_{x in A-A} |A_x|^k, exact for integer k >= 1.
Int energy_k(const GSet& a, unsigned k, Backend backend = Backend::fast);
Int energy_k(const RepProfile& prof, unsigned k);
// Real exponent k > 0; summed in element order.
double energy_real(const GSet& a, double k, Backend backend = Backend::fast);
double energy_real(const RepProfile& prof, double k);

struct TripleSums {
  Int first;   // sum_{x,y} |A ∩ (A+x) ∩ (A+y)|
  Int second;  // sum_{x,y} |A ∩ (A+x) ∩ (A+y)|^2
};
// fast: counts (a - b, a - c) incidences, O(|A|^3).  naive: bitset
// intersections over (x, y) in D x D.
TripleSums triple_sums(const GSet& a, Backend backend = Backend::fast);

// |{(x, y) in D^2 : x - y in D}|. Z_p only.
std::uint64_t schur_count(const GSet& d, Backend backend = Backend::fast);

struct EnergyReport {
  std::uint64_t card = 0;       // |A|
  std::uint64_t diff_card = 0;  // |A-A|
  Int e2;
  Int e3;
  double e32 = 0.0;  // E_{3/2}
  std::optional<Int> eab;
  Rational lambda;  // |A|^2 / |D|
  Rational sigma1, sigma2, sigma3;
  Rational k;     // |D| / |A|
  Rational fmax;  // max_x F(x), F(x) = |A_x| - lambda*D(x)
};

EnergyReport centered_moments(const GSet& a, Backend backend = Backend::fast);

Verdict triple_sums_check(const GSet& a, const CheckOptions& opt = {});
// Schur-triple bound 4*count <= 3|D|^2 + 1 for odd |D| <= (2p+1)/3.
Verdict lemma34_check(const GSet& d, const CheckOptions& opt = {});
Verdict moments_check(const GSet& a, const CheckOptions& opt = {});
// E(A) >= (1/K + (1 - |A|^-2)/(3K(K+2))) |A|^3 when |A-A| = K|A| < p/2.
Verdict cs_bound_check(const GSet& a, const CheckOptions& opt = {});
Verdict convolution_sum_check(const GSet& a, Kind kind, const CheckOptions& opt = {});
Verdict mixed_energy_check(const GSet& a, const CheckOptions& opt = {});

}  // namespace addcomb
