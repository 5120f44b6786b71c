#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "addcomb/exact.hpp"
#include "addcomb/gset.hpp"
#include "addcomb/setops.hpp"
#include "addcomb/verdict.hpp"

namespace addcomb {

// {start + i*difference : 0 <= i < length}. In Z_p the difference is
// canonical, in [1, (p-1)/2], and start is a residue in [0, p).
struct APCover {
  std::int64_t difference = 1;
  std::int64_t start = 0;
  std::uint64_t length = 1;

  bool operator==(const APCover&) const = default;
};

std::string to_string(const APCover& c);  // "d=5, start=0, L=3"

// Globally minimal cover over all differences; ties go to the smallest
// length, then the smallest difference, then the smallest start.
APCover min_ap_cover_modp(const GSet& a);
// Reference: tries every d in [1, (p-1)/2] with a full gap scan.
APCover min_ap_cover_modp_naive(const GSet& a);
APCover min_ap_cover_int(const IntSet& a);

// True iff the cover contains every element of A.
bool covers(const APCover& c, const GSet& a);

Verdict freiman_3n4_check(const IntSet& a, Kind kind, const CheckOptions& opt = {});

// Integer representatives of A inside [window_start, window_start + (p-1)/2].
IntSet canonical_lift(const GSet& a, std::int64_t window_start);

// Cauchy-Davenport and, in its equality range, Vosper's characterisation.
Verdict cd_vosper_check(const GSet& a, const GSet& b, const CheckOptions& opt = {});

struct TheoremPreset {
  std::string name;
  Rational mult;         // |A +- A| < mult*|A| - off
  Int off;
  Rational density_cap;  // |A| < density_cap * p
  std::uint64_t min_size = 0;  // |A| > min_size
  Kind kind = Kind::sum;
};

const TheoremPreset& freiman24();  // (12/5, 3, 1/35, 0, sum)
const TheoremPreset& diff26();     // (13/5, 3, 9/2000, 0, diff)
const TheoremPreset& sum259();     // (259/100, 3, 9/2000, 100, sum)
// "freiman24", "diff26", "sum259"
const TheoremPreset& preset_by_name(std::string_view name);

// Only the hypotheses, without computing a cover.
bool theorem_hypothesis(const GSet& a, const TheoremPreset& preset);
Verdict theorem_predicate(const GSet& a, const TheoremPreset& preset, const CheckOptions& opt = {});

enum class RectifyStage { eta, arc, lift, f3n4, extend, done };
std::string_view to_string(RectifyStage s);

struct RectifyOptions {
  // Reject inputs outside |A| < p/12, |A +- A| < K|A| - 3, 2 <= K <= 3.
  bool enforce_hypothesis = true;
  Backend backend = Backend::fast;
};

struct RectifyTrace {
  RectifyStage stage = RectifyStage::eta;  // last stage reached
  bool failed = false;
  std::string detail;
  double eta_val = 0.0;
  Elem heavy_char = 0;
  std::int64_t shift = 0;  // window start s after dilation
  std::uint64_t big_part_size = 0;
  std::int64_t l_val = -1;
  std::optional<APCover> final_cover;
};

// Throws std::invalid_argument on precondition violations.
RectifyTrace rectify_via_bias(const GSet& a, Kind kind, const Rational& k_cap, const RectifyOptions& opt = {});

// not-applicable when the hypothesis fails or the pipeline stops at eta.
Verdict rectify_check(const GSet& a, Kind kind, const Rational& k_cap, const CheckOptions& opt = {});

}  // namespace addcomb
