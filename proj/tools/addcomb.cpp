// addcomb: compute, check and campaign front end.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "addcomb/energy.hpp"
#include "addcomb/fourier.hpp"
#include "addcomb/harness.hpp"
#include "addcomb/structure.hpp"

using namespace addcomb;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string format = "text";
  double tol = kDefaultTolerance;
  std::string backend = "fast";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "text or jsonl")
      ->check(CLI::IsMember({"text", "jsonl"}))
      ->envname("ADDCOMB_FORMAT");
  cmd->add_option("--tol", c.tol, "relative tolerance for floating-point relations")
      ->check(CLI::PositiveNumber)
      ->envname("ADDCOMB_TOL");
  cmd->add_option("--backend", c.backend, "fast or naive")->check(CLI::IsMember({"fast", "naive"}));
}

CheckOptions check_options(const Common& c) {
  return {c.tol, c.backend == "naive" ? Backend::naive : Backend::fast};
}

std::string outcome_label(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "PASS";
    case Outcome::fail:
      return "FAIL";
    case Outcome::not_applicable:
      return "NOT APPLICABLE";
  }
  return "?";
}

void print_verdict(const Verdict& v, const std::string& format) {
  if (format == "jsonl") {
    std::cout << to_json(v).dump() << '\n';
    return;
  }
  std::cout << v.check_id << ": " << outcome_label(v.pass) << '\n';
  if (!v.group.empty()) std::cout << "  set: " << v.set_repr << '\n';
  if (v.pass != Outcome::not_applicable) {
    std::cout << "  lhs: " << v.lhs.str() << "\n  rhs: " << v.rhs.str() << "\n  margin: " << format_double(v.margin)
              << '\n';
  }
  for (const auto& [k, val] : v.params) std::cout << "  " << k << ": " << val << '\n';
  if (v.witness) std::cout << "  witness: " << v.witness->dump() << '\n';
}

// ------------------------------------------------------------------ compute

int cmd_compute(const std::string& target, const std::string& set_text, const std::optional<std::string>& with,
                double k, const Common& c) {
  const SetValue sv = parse_set_literal(set_text);
  const bool json = c.format == "jsonl";
  const Backend be = check_options(c).backend;
  auto emit = [&](const std::string& key, const nlohmann::ordered_json& value, const std::string& text) {
    if (json) {
      nlohmann::ordered_json j;
      j["target"] = target;
      j["set_repr"] = std::visit([](const auto& s) { return format_set(s); }, sv);
      j[key] = value;
      std::cout << j.dump() << '\n';
    } else {
      std::cout << text << '\n';
    }
  };

  if (const auto* ints = std::get_if<IntSet>(&sv)) {
    const IntSet b = with ? std::get<IntSet>(parse_set_literal(*with)) : *ints;
    if (target == "sumset" || target == "diffset") {
      const IntSet r = target == "sumset" ? int_sumset(*ints, b) : int_diffset(*ints, b);
      emit("result", format_set(r), format_set(r));
    } else if (target == "apcover") {
      const APCover cv = min_ap_cover_int(*ints);
      emit("cover", {{"d", cv.difference}, {"start", cv.start}, {"L", cv.length}}, to_string(cv));
    } else {
      throw std::invalid_argument("target '" + target + "' needs a set in a finite group");
    }
    return 0;
  }

  const GSet& a = std::get<GSet>(sv);
  const GSet b = with ? parse_gset(*with) : a;
  if (target == "sumset" || target == "diffset") {
    const GSet r = target == "sumset" ? sumset(a, b, be) : diffset(a, b, be);
    emit("result", format_set(r), format_set(r));
  } else if (target == "energy") {
    const std::uint64_t e = energy(a, b, be);
    emit("energy", e, std::to_string(e));
  } else if (target == "energy_k") {
    if (!(k > 0)) throw std::invalid_argument("--k must be positive");
    if (k == std::floor(k) && k < 64) {
      const Int e = energy_k(a, static_cast<unsigned>(k), be);
      emit("energy_k", to_string(e), to_string(e));
    } else {
      const double e = energy_real(a, k, be);
      emit("energy_k", e, format_double(e));
    }
  } else if (target == "eta") {
    const EtaResult r = eta(a, be);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.eta);
    if (json) {
      emit("eta", {{"eta", r.eta}, {"character", format_elem(a.group(), r.character)}}, "");
    } else {
      std::cout << buf << '\n';
    }
  } else if (target == "spectrum") {
    const Spectrum s = spectrum(a, be);
    if (json) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& z : s.coeffs) arr.push_back({z.real(), z.imag()});
      emit("spectrum", {{"eta", s.eta}, {"argmax", format_elem(a.group(), s.argmax)}, {"coeffs", arr}}, "");
    } else {
      for (Elem xi = 0; xi < s.coeffs.size(); ++xi) {
        std::printf("%s\t%.12g\t%.12g\t%.12g\n", format_elem(a.group(), xi).c_str(), s.coeffs[xi].real(),
                    s.coeffs[xi].imag(), std::abs(s.coeffs[xi]));
      }
      std::printf("eta=%.6f argmax=%s\n", s.eta, format_elem(a.group(), s.argmax).c_str());
    }
  } else if (target == "apcover") {
    const APCover cv = min_ap_cover_modp(a);
    emit("cover", {{"d", cv.difference}, {"start", cv.start}, {"L", cv.length}}, to_string(cv));
  } else if (target == "schur") {
    const std::uint64_t n = schur_count(a, be);
    emit("schur", n, std::to_string(n));
  } else {
    throw std::invalid_argument("unknown compute target '" + target + "'");
  }
  return 0;
}

// ------------------------------------------------------------------ check

std::string resolve_check_id(const std::string& id, const std::optional<std::string>& kind,
                             const std::optional<std::string>& preset) {
  if (id == "theorem") {
    if (!preset) throw std::invalid_argument("check theorem needs --preset (freiman24, diff26, sum259)");
    return "theorem_" + preset_by_name(*preset).name;
  }
  for (const char* family : {"rectify", "convolution", "spectral_product", "freiman_3n4"}) {
    if (id == family) return id + "_" + std::string(to_string(parse_kind(kind.value_or("diff"))));
  }
  return id;
}

int cmd_check(const std::string& raw_id, const std::string& set_text, const std::optional<std::string>& with,
              const std::optional<std::string>& kind, const std::optional<std::string>& preset,
              const std::optional<std::string>& kcap, const Common& c) {
  const std::string id = resolve_check_id(raw_id, kind, preset);
  const CheckSpec* spec = find_check(id);
  if (!spec) expand_checks(id);  // throws, listing the registry

  Instance inst;
  const SetValue sv = parse_set_literal(set_text);
  if (const auto* gs = std::get_if<GSet>(&sv)) {
    inst.a = *gs;
    if (with) inst.b = parse_gset(*with);
  } else {
    inst.ints = std::get<IntSet>(sv);
  }
  RunOptions ro;
  ro.check = check_options(c);
  if (kcap) ro.kcap = parse_rational(*kcap);

  Verdict v = run_check(*spec, inst, ro);
  v.group = inst.a ? inst.a->group().descriptor() : "Z";
  v.set_repr = describe(inst);

  if (c.format == "text" && id.rfind("rectify_", 0) == 0 && inst.a) {
    const Kind k = id == "rectify_sum" ? Kind::sum : Kind::diff;
    const Rational cap = ro.kcap ? *ro.kcap : (k == Kind::sum ? Rational(259, 100) : Rational(13, 5));
    auto print_trace = [&](const RectifyTrace& t, const char* label) {
      std::string trail;
      for (int s = 0; s <= static_cast<int>(t.stage); ++s) {
        trail += (s ? " -> " : "") + std::string(to_string(static_cast<RectifyStage>(s)));
      }
      std::cout << label << trail << (t.failed ? " (failed: " + t.detail + ")" : "") << '\n';
      std::cout << "  eta=" << format_double(t.eta_val) << " heavy_char=" << t.heavy_char
                << " big_part=" << t.big_part_size << " l=" << t.l_val << '\n';
      if (t.final_cover) std::cout << "  final_cover: " << to_string(*t.final_cover) << '\n';
    };
    try {
      print_trace(rectify_via_bias(*inst.a, k, cap, {true, ro.check.backend}), "trace: ");
    } catch (const std::invalid_argument& e) {
      // Outside the hypothesis the verdict is not-applicable; the pipeline
      // still runs so the stages can be inspected.
      std::cout << "hypothesis not met: " << e.what() << '\n';
      try {
        print_trace(rectify_via_bias(*inst.a, k, cap, {false, ro.check.backend}), "trace (unenforced): ");
      } catch (const std::invalid_argument& e2) {
        std::cout << "trace: not started (" << e2.what() << ")\n";
      }
    }
  }
  print_verdict(v, c.format);
  return v.failed() ? kExitFail : 0;
}

// ------------------------------------------------------------------ campaign

std::vector<std::uint64_t> parse_orders(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t x = std::min(text.find('x', pos), text.size());
    out.push_back(std::stoull(text.substr(pos, x - pos)));
    pos = x + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive combinatorics toolkit: set algebra, energies, Fourier bias, AP covers, verification campaigns"};
  app.require_subcommand(1);
  Common common;

  // compute
  auto* compute = app.add_subcommand("compute", "print one quantity of a set");
  std::string target, set_text;
  std::optional<std::string> with;
  double k = 2;
  compute->add_option("target", target, "sumset, diffset, energy, energy_k, eta, spectrum, apcover, schur")
      ->required()
      ->check(CLI::IsMember({"sumset", "diffset", "energy", "energy_k", "eta", "spectrum", "apcover", "schur"}));
  compute->add_option("--set", set_text, "set literal, e.g. \"p=13: 0,1,3\"")->required();
  compute->add_option("--with", with, "second operand (sumset, diffset, energy)");
  compute->add_option("--k", k, "exponent for energy_k");
  add_common(compute, common);

  // check
  auto* check = app.add_subcommand("check", "run one registered check on a set");
  std::string check_id, check_set;
  std::optional<std::string> check_with, kind, preset, kcap;
  check->add_option("id", check_id, "check id (or theorem, rectify, convolution, spectral_product, freiman_3n4)")
      ->required();
  check->add_option("--set", check_set, "set literal")->required();
  check->add_option("--with", check_with, "second set for pair checks");
  check->add_option("--kind", kind, "sum or diff")->check(CLI::IsMember({"sum", "diff"}));
  check->add_option("--preset", preset, "freiman24, diff26 or sum259");
  check->add_option("--kcap", kcap, "K_cap for rectify, e.g. 2.6 or 13/5");
  add_common(check, common);

  // campaign
  auto* campaign = app.add_subcommand("campaign", "run a verification campaign");
  std::optional<std::string> config, generator, group, file, filter_preset, out_path, cx_path, emit, camp_kcap, parity,
      name;
  std::optional<std::uint64_t> p, trials, min_size, max_size, noise_remove, noise_add, num_aps, instance_cap;
  std::optional<std::int64_t> int_bound;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool exhaustive = false;
  std::string checks = "all-small";
  campaign->add_option("--config", config, "JSON campaign file; flags override its fields");
  campaign->add_flag("--exhaustive", exhaustive, "enumerate every subset (or pair)");
  campaign->add_option("--generator", generator, "exhaustive, random_subset, ap_perturbed, union_of_aps, file_corpus");
  campaign->add_option("--p", p, "prime modulus (shorthand for --group p)");
  campaign->add_option("--group", group, "cyclic orders, e.g. 4x4 or 3x5x7");
  campaign->add_option("--int-bound", int_bound, "exhaustive integer subsets of [0, N]");
  campaign->add_option("--file", file, "corpus of set literals, one per line");
  campaign->add_option("--checks", checks, "all-small, all, or a comma separated list of ids");
  campaign->add_option("--seed", seed, "64-bit seed")->envname("ADDCOMB_SEED");
  campaign->add_option("--trials", trials, "number of random instances");
  campaign->add_option("--min-size", min_size);
  campaign->add_option("--max-size", max_size);
  campaign->add_option("--parity", parity)->check(CLI::IsMember({"any", "odd", "even"}));
  campaign->add_option("--noise-remove", noise_remove);
  campaign->add_option("--noise-add", noise_add);
  campaign->add_option("--filter-preset", filter_preset, "keep only sets satisfying this theorem hypothesis");
  campaign->add_option("--num-aps", num_aps);
  campaign->add_option("--emit", emit, "all or failures")->check(CLI::IsMember({"all", "failures"}));
  campaign->add_option("--instance-cap", instance_cap);
  campaign->add_option("--kcap", camp_kcap);
  campaign->add_option("--name", name);
  campaign->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->envname("ADDCOMB_JOBS");
  campaign->add_option("--out", out_path, "write JSONL here instead of stdout");
  campaign->add_option("--counterexamples", cx_path, "copy failing verdicts here (default: next to --out)");
  add_common(campaign, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*compute) return cmd_compute(target, set_text, with, k, common);
    if (*check) return cmd_check(check_id, check_set, check_with, kind, preset, kcap, common);

    CampaignSpec spec;
    if (config) {
      std::ifstream in(*config);
      if (!in) throw CampaignError("cannot open campaign file '" + *config + "'");
      spec = campaign_from_json(nlohmann::json::parse(in));
    }
    if (name) spec.name = *name;
    if (exhaustive) spec.generator = Generator::exhaustive;
    if (generator) spec.generator = parse_generator(*generator);
    if (p) spec.orders = {*p};
    if (group) spec.orders = parse_orders(*group);
    if (int_bound) spec.int_bound = *int_bound;
    if (file) {
      spec.file = *file;
      if (!generator) spec.generator = Generator::file_corpus;
    }
    if (!config || campaign->count("--checks")) spec.checks = expand_checks(checks);
    if (campaign->count("--seed") || !config) spec.seed = seed;
    if (trials) spec.trials = *trials;
    if (min_size) spec.min_size = *min_size;
    if (max_size) spec.max_size = *max_size;
    if (parity) spec.parity = *parity == "odd" ? Parity::odd : *parity == "even" ? Parity::even : Parity::any;
    if (noise_remove) spec.noise_remove = *noise_remove;
    if (noise_add) spec.noise_add = *noise_add;
    if (filter_preset) spec.filter_preset = *filter_preset;
    if (num_aps) spec.num_aps = *num_aps;
    if (emit) spec.emit = *emit == "all" ? Emit::all : Emit::failures;
    if (instance_cap) spec.instance_cap = *instance_cap;
    if (camp_kcap) spec.run.kcap = parse_rational(*camp_kcap);
    if (campaign->count("--tol") || !config) spec.run.check.tol = common.tol;
    if (campaign->count("--backend")) spec.run.check = check_options(common);
    if (campaign->count("--jobs") || !config) spec.jobs = jobs;

    const bool jsonl = common.format == "jsonl";
    std::unique_ptr<std::ofstream> out_file, cx_file;
    if (out_path) {
      out_file = std::make_unique<std::ofstream>(*out_path);
      if (!*out_file) throw CampaignError("cannot write '" + *out_path + "'");
      std::string cx = cx_path.value_or("");
      if (cx.empty()) {
        const auto slash = out_path->find_last_of('/');
        cx = (slash == std::string::npos ? std::string() : out_path->substr(0, slash + 1)) + "counterexamples.jsonl";
      }
      cx_file = std::make_unique<std::ofstream>(cx);
    } else if (cx_path) {
      cx_file = std::make_unique<std::ofstream>(*cx_path);
    }

    CampaignResult r;
    if (out_file) {
      r = run_campaign_jsonl(spec, *out_file, cx_file.get());
    } else if (jsonl) {
      r = run_campaign_jsonl(spec, std::cout, cx_file.get());
    } else {
      r = run_campaign(spec, [&](const Verdict& v) {
        if (cx_file) *cx_file << to_json(v).dump() << '\n';
        if (v.failed()) std::cout << "FAIL " << v.check_id << "  " << v.set_repr << '\n';
      });
    }
    if (!jsonl || out_file) {
      std::printf("campaign %s: %llu instances, %llu failures\n", spec.name.c_str(),
                  static_cast<unsigned long long>(r.instances), static_cast<unsigned long long>(r.failures));
      std::printf("%-24s %12s %12s %15s\n", "check", "pass", "fail", "not_applicable");
      for (const auto& [id, t] : r.tallies) {
        std::printf("%-24s %12llu %12llu %15llu\n", id.c_str(), static_cast<unsigned long long>(t.pass),
                    static_cast<unsigned long long>(t.fail), static_cast<unsigned long long>(t.not_applicable));
      }
    }
    return r.failures ? kExitFail : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
