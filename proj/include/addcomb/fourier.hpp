#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "addcomb/gset.hpp"
#include "addcomb/setops.hpp"
#include "addcomb/verdict.hpp"

namespace addcomb {

// Characters are indexed like elements: chi_xi(x) = exp(-2 pi i sum_j xi_j x_j / n_j).
struct Spectrum {
  GroupPtr group;
  std::uint64_t card = 0;                    // |A|
  std::vector<std::complex<double>> coeffs;  // coeffs[0] is exactly |A|
  double eta = 0.0;
  Elem argmax = 0;  // nonprincipal; smallest index among (near) ties
};

// fast: FFTW.  naive: direct character sums over A.
Spectrum spectrum(const GSet& a, Backend backend = Backend::fast);

struct EtaResult {
  double eta;
  Elem character;
};
EtaResult eta(const GSet& a, Backend backend = Backend::fast);

// Magnitudes within this fraction of |A| of the maximum count as ties.
inline constexpr double kEtaTieTolerance = 1e-12;

// |G|^-1 sum_chi |A^(chi)|^2 |B^(chi)|^2
double energy_via_spectrum(const Spectrum& a, const Spectrum& b);
double energy_via_spectrum(const GSet& a, const GSet& b, Backend backend = Backend::fast);

// Angle of chi_xi(x) in [0, 2 pi).
double character_angle(const Group& g, Elem xi, Elem x);

struct ArcReport {
  std::vector<double> points;  // angles in [0, 2 pi)
  double eta_z = 0.0;          // |sum z| / |Z|
  std::uint64_t best_count = 0;
  double arc_start = 0.0;  // the open arc is (arc_start, arc_start + pi)
};

// Breakpoints closer than this (radians) are merged before the sweep.
inline constexpr double kArcResolution = 1e-12;

// Maximum number of points strictly inside an open half-circle.
ArcReport semicircle_concentration(std::vector<double> angles);

Verdict parseval_check(const GSet& a, const CheckOptions& opt = {});
// E(A,A) and E(A,A-A) via the spectrum against the exact integers.
Verdict energy_spectrum_check(const GSet& a, const CheckOptions& opt = {});
// E(A) <= (alpha + eta^2)|A|^3 and the lower bound on eta^2 it implies with
// the energy lemma. Z_p, |A-A| < p/2, |A| > 2.
Verdict weak_eta_check(const GSet& a, const CheckOptions& opt = {});
// |G|^-1 (|A|^2|X|^2 + eta^2 |A|^2 (|G|-|X|)|X|) >= E(A, X) with X = A-A or A+A.
Verdict spectral_product_check(const GSet& a, Kind kind, const CheckOptions& opt = {});
// The half-circle lemma on the values of the heaviest nonprincipal character on A.
Verdict semicircle_check(const GSet& a, const CheckOptions& opt = {});
// max_chi |fast - naive| <= 1e-12 |A|.
inline constexpr double kTransformAgreement = 1e-12;
inline constexpr std::uint64_t kNaiveTransformBudget = std::uint64_t{1} << 24;  // |G|*|A|
Verdict fft_agreement_check(const GSet& a, const CheckOptions& opt = {});

}  // namespace addcomb
