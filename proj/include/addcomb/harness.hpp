#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "addcomb/exact.hpp"
#include "addcomb/gset.hpp"
#include "addcomb/setops.hpp"
#include "addcomb/verdict.hpp"

namespace addcomb {

// Explicit Appendix chain in an arbitrary finite abelian group: the
// doubling lower bounds on eta (difference and sum forms), the E_3 upper
// bound, Hoelder, the mixed-energy inequality and the E(A, A-A) spectral bound.
Verdict appendix_chain_check(const GSet& a, const CheckOptions& opt = {});

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One unit of work. Pair checks use (a, b), falling back to (a, a); integer
// checks use `ints`, or the residues of `a` when the group is cyclic.
struct Instance {
  std::optional<GSet> a;
  std::optional<GSet> b;
  std::optional<IntSet> ints;
  std::uint64_t line = 0;  // corpus provenance, 1-based; 0 otherwise
};

std::string describe(const Instance& inst);

enum class Arity { single, pair, integer };

struct RunOptions {
  CheckOptions check;
  std::optional<Rational> kcap;  // rectify; defaults 13/5 (diff) and 259/100 (sum)
};

struct CheckSpec {
  std::string id;
  Arity arity = Arity::single;
  bool needs_prime = false;
  std::string summary;
  std::function<Verdict(const Instance&, const RunOptions&)> run;
  // For exhaustive pair scans in groups of order <= 64: returns true when the
  // pair certainly passes, so no verdict has to be built.
  std::function<bool(std::uint64_t n, std::uint64_t a_mask, std::uint64_t b_mask)> mask_prefilter;
};

const std::vector<CheckSpec>& registry();
const CheckSpec* find_check(std::string_view id);
// "all" / "all-small" (every registered check) or a comma separated list.
// Throws CampaignError naming the registry on an unknown id.
std::vector<std::string> expand_checks(std::string_view list);

// Runs one check, re-running failures on the naive backend (double entry);
// the witness then records oracle = confirmed | disagrees.
Verdict run_check(const CheckSpec& spec, const Instance& inst, const RunOptions& opt);

enum class Generator { exhaustive, random_subset, ap_perturbed, union_of_aps, file_corpus };
std::string_view to_string(Generator g);
Generator parse_generator(std::string_view s);

enum class Parity { any, odd, even };
enum class Emit { all, failures };

inline constexpr std::uint64_t kDefaultInstanceCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kStarvationWindow = 1000;

struct CampaignSpec {
  std::string name = "campaign";
  Generator generator = Generator::exhaustive;
  std::vector<std::uint64_t> orders;  // the group; empty for integer-only scans
  std::int64_t int_bound = -1;        // exhaustive integer subsets of [0, int_bound]
  std::uint64_t min_size = 1;
  std::uint64_t max_size = 0;  // 0: no upper bound
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  Parity parity = Parity::any;
  // ap_perturbed: drop up to noise_remove terms, add up to noise_add points
  // near the progression; keep only sets satisfying filter_preset, if given.
  std::uint64_t noise_remove = 1;
  std::uint64_t noise_add = 1;
  std::optional<std::string> filter_preset;
  std::uint64_t num_aps = 2;  // union_of_aps
  std::string file;           // file_corpus
  Emit emit = Emit::all;
  std::uint64_t instance_cap = kDefaultInstanceCap;
  RunOptions run;
  unsigned jobs = 1;
};

CampaignSpec campaign_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CampaignSpec& spec);

struct CheckTally {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t not_applicable = 0;
};

struct CampaignResult {
  std::uint64_t instances = 0;
  std::map<std::string, CheckTally> tallies;
  std::uint64_t failures = 0;
  std::uint64_t oracle_disagreements = 0;

  nlohmann::ordered_json summary_json(const std::string& name) const;
};

// Emission order is canonical regardless of `jobs`: instances in generator
// order, checks in the order listed. `emit` sees every verdict when
// spec.emit == all and only failures otherwise.
CampaignResult run_campaign(const CampaignSpec& spec, const std::function<void(const Verdict&)>& emit);

// JSONL: one verdict per line, then one {"summary": ...} line. Failures are
// also copied to `counterexamples` when given.
CampaignResult run_campaign_jsonl(const CampaignSpec& spec, std::ostream& out, std::ostream* counterexamples = nullptr);

// Small campaigns that together exercise every registered check.
std::vector<CampaignSpec> default_campaigns();

struct CorpusEntry {
  std::uint64_t line;
  SetValue set;
};
// Blank lines and lines starting with '#' are skipped. Parse errors carry the line number.
std::vector<CorpusEntry> ingest_corpus(const std::string& path);
std::vector<CorpusEntry> ingest_corpus(std::istream& in);

// splitmix64 finaliser; the seed of instance i is splitmix64(splitmix64(seed) ^ i).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace addcomb
