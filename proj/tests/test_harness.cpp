#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "addcomb/harness.hpp"

using namespace addcomb;
using namespace testing;

namespace {

std::string run_jsonl(const CampaignSpec& spec) {
  std::ostringstream out;
  run_campaign_jsonl(spec, out);
  return out.str();
}

CampaignSpec small_random(std::uint64_t seed) {
  CampaignSpec s;
  s.generator = Generator::random_subset;
  s.orders = {101};
  s.min_size = 8;
  s.max_size = 8;
  s.trials = 60;
  s.seed = seed;
  s.checks = {"katz_koester", "triple_sums", "moments", "mixed_energy", "semicircle"};
  return s;
}

}  // namespace

TEST_CASE("registry ids are unique and resolvable") {
  std::set<std::string> seen;
  for (const CheckSpec& c : registry()) {
    CHECK(seen.insert(c.id).second);
    CHECK(find_check(c.id) == &c);
    CHECK_FALSE(c.summary.empty());
  }
  CHECK(find_check("nope") == nullptr);
  CHECK(expand_checks("all").size() == registry().size());
  CHECK(expand_checks("all-small") == expand_checks("all"));
  CHECK(expand_checks("parseval, katz_koester") == std::vector<std::string>{"parseval", "katz_koester"});
  CHECK_THROWS_AS(expand_checks("parseval,bogus"), CampaignError);
  try {
    expand_checks("bogus");
  } catch (const CampaignError& e) {
    CHECK(std::string(e.what()).find("rectify_sum") != std::string::npos);
  }
}

TEST_CASE("every registered check is exercised by the default campaigns") {
  std::map<std::string, CheckTally> total;
  for (CampaignSpec spec : default_campaigns()) {
    const CampaignResult r = run_campaign(spec, [](const Verdict&) {});
    CHECK_MESSAGE(r.failures == 0, spec.name);
    CHECK(r.oracle_disagreements == 0);
    for (const auto& [id, t] : r.tallies) {
      total[id].pass += t.pass;
      total[id].fail += t.fail;
      total[id].not_applicable += t.not_applicable;
    }
  }
  for (const CheckSpec& c : registry()) {
    INFO(c.id);
    CHECK(total[c.id].pass > 0);
    CHECK(total[c.id].fail == 0);
  }
}

TEST_CASE("run_check: double entry and exception capture") {
  const CheckSpec* cs = find_check("cs_bound");
  REQUIRE(cs);
  Instance inst;
  inst.a = gs("p=17: 0,1,3");
  const Verdict v = run_check(*cs, inst, {});
  CHECK(passed(v));
  CHECK(v.check_id == "cs_bound");

  // integer checks accept residues of a cyclic group
  const CheckSpec* f = find_check("freiman_3n4_sum");
  Instance z;
  z.a = gs("p=101: 0,1,2,4");
  CHECK(passed(run_check(*f, z, {})));

  // a check that throws yields a failing verdict carrying the error
  CheckSpec broken{"broken", Arity::single, false, "always throws",
                   [](const Instance&, const RunOptions&) -> Verdict { throw std::runtime_error("boom"); }, {}};
  const Verdict b = run_check(broken, inst, {});
  CHECK(b.failed());
  REQUIRE(b.witness);
  CHECK((*b.witness)["error"] == "boom");

  // a fast-path failure is re-run naively; a check that only fails on the fast path disagrees
  CheckSpec flaky{"flaky", Arity::single, false, "fails on the fast path only",
                  [](const Instance&, const RunOptions& o) {
                    VerdictBuilder vb("flaky");
                    vb.exact("x", 0, Relation::ge, o.check.backend == Backend::fast ? 1 : 0);
                    return vb.build();
                  },
                  {}};
  const Verdict fl = run_check(flaky, inst, {});
  CHECK(fl.failed());
  CHECK((*fl.witness)["oracle"] == "disagrees");
}

TEST_CASE("campaign determinism across runs and worker counts") {
  CampaignSpec spec = small_random(42);
  const std::string first = run_jsonl(spec);
  CHECK(first == run_jsonl(spec));
  spec.jobs = 3;
  CHECK(first == run_jsonl(spec));
  CHECK(first != run_jsonl(small_random(43)));

  CampaignSpec ex;
  ex.orders = {5};
  ex.checks = {"cd_vosper", "moments"};
  const std::string a = run_jsonl(ex);
  ex.jobs = 4;
  CHECK(a == run_jsonl(ex));
}

TEST_CASE("jsonl stream shape") {
  CampaignSpec spec;
  spec.orders = {7};
  spec.checks = {"cs_bound"};
  std::ostringstream out, cx;
  const CampaignResult r = run_campaign_jsonl(spec, out, &cx);
  CHECK(r.instances == 127);
  CHECK(r.failures == 0);
  CHECK(cx.str().empty());
  std::istringstream in(out.str());
  std::string line;
  std::uint64_t verdicts = 0;
  nlohmann::json last;
  while (std::getline(in, line)) {
    last = nlohmann::json::parse(line);
    if (!last.contains("summary")) {
      ++verdicts;
      std::vector<std::string> keys;
      for (auto it = last.begin(); it != last.end(); ++it) keys.push_back(it.key());
      CHECK(keys.size() == 9);
      CHECK(last["group"] == "p=7");
    }
  }
  CHECK(verdicts == 127);
  CHECK(last["summary"]["checks"]["cs_bound"]["fail"] == 0);
  const auto& t = last["summary"]["checks"]["cs_bound"];
  CHECK(t["pass"].get<int>() + t["not_applicable"].get<int>() == 127);
}

TEST_CASE("exhaustive lemma34 over odd sizes in Z_5") {
  CampaignSpec spec;
  spec.orders = {5};
  spec.max_size = 3;
  spec.parity = Parity::odd;
  spec.checks = {"schur_bound"};
  const CampaignResult r = run_campaign(spec, [](const Verdict&) {});
  CHECK(r.instances == 5 + 10);
  CHECK(r.tallies.at("schur_bound").pass == 15);
}

TEST_CASE("emit=failures suppresses passing verdicts") {
  CampaignSpec spec;
  spec.orders = {5};
  spec.checks = {"cd_vosper"};
  spec.emit = Emit::failures;
  std::uint64_t emitted = 0;
  const CampaignResult r = run_campaign(spec, [&](const Verdict&) { ++emitted; });
  CHECK(emitted == 0);
  CHECK(r.tallies.at("cd_vosper").pass + r.tallies.at("cd_vosper").not_applicable == 31 * 31);
}

TEST_CASE("instance cap and starvation are reported") {
  CampaignSpec big;
  big.orders = {31};
  big.checks = {"moments"};
  big.instance_cap = 1000;
  CHECK_THROWS_AS(run_campaign(big, [](const Verdict&) {}), CampaignError);

  CampaignSpec starve;
  starve.generator = Generator::ap_perturbed;
  starve.orders = {101};
  starve.min_size = 40;
  starve.max_size = 40;
  starve.filter_preset = "sum259";  // needs |A| > 100
  starve.trials = 5;
  starve.checks = {"theorem_sum259"};
  CHECK_THROWS_AS(run_campaign(starve, [](const Verdict&) {}), CampaignError);

  CampaignSpec bad_group;
  bad_group.generator = Generator::random_subset;
  bad_group.orders = {101};
  bad_group.checks = {"cd_vosper", "freiman_3n4_sum"};
  bad_group.min_size = 3;
  bad_group.max_size = 5;
  bad_group.trials = 3;
  CHECK_NOTHROW(run_campaign(bad_group, [](const Verdict&) {}));
}

TEST_CASE("generators respect their size and parity filters") {
  for (Generator gen : {Generator::random_subset, Generator::ap_perturbed, Generator::union_of_aps}) {
    CampaignSpec spec;
    spec.generator = gen;
    spec.orders = {211};
    spec.min_size = 6;
    spec.max_size = 15;
    spec.parity = Parity::odd;
    spec.trials = 50;
    spec.seed = 9;
    spec.checks = {"rep_profile"};
    spec.emit = Emit::all;
    std::uint64_t n = 0;
    run_campaign(spec, [&](const Verdict& v) {
      const GSet a = parse_gset(v.set_repr);
      CHECK(a.card() >= 6);
      CHECK(a.card() <= 15);
      CHECK(a.card() % 2 == 1);
      ++n;
    });
    CHECK(n == 50);
  }
}

TEST_CASE("ap_perturbed with a preset filter yields hypothesis-satisfying sets") {
  CampaignSpec spec;
  spec.generator = Generator::ap_perturbed;
  spec.orders = {5003};
  spec.min_size = 5;
  spec.max_size = 20;
  spec.trials = 100;
  spec.seed = 3;
  spec.filter_preset = "diff26";
  spec.checks = {"theorem_diff26"};
  const CampaignResult r = run_campaign(spec, [](const Verdict&) {});
  CHECK(r.tallies.at("theorem_diff26").pass == 100);
}

TEST_CASE("corpus ingestion") {
  std::istringstream ok("# comment\n\np=13: 0,1,3\nG=4x4: (0,0),(1,0),(2,0),(3,0)\nZ: 0,1,2,4\n");
  const auto entries = ingest_corpus(ok);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].line == 3);
  CHECK(std::get<GSet>(entries[1].set).card() == 4);
  CHECK(std::holds_alternative<IntSet>(entries[2].set));

  std::istringstream bad("p=13: 0,1\np=13: x\n");
  try {
    ingest_corpus(bad);
    FAIL("no error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }
  CHECK_THROWS(ingest_corpus(std::string("/nonexistent/corpus.txt")));
}

TEST_CASE("campaign json round trip and validation") {
  const CampaignSpec s = default_campaigns()[4];
  const CampaignSpec t = campaign_from_json(to_json(s));
  CHECK(to_json(t) == to_json(s));
  CHECK(t.filter_preset == s.filter_preset);

  CHECK_THROWS_AS(campaign_from_json(nlohmann::json{{"nonsense", 1}}), CampaignError);
  CHECK_THROWS_AS(campaign_from_json(nlohmann::json{{"generator", "magic"}}), CampaignError);
  CHECK_THROWS_AS(campaign_from_json(nlohmann::json{{"checks", {"bogus"}}}), CampaignError);
  const CampaignSpec u = campaign_from_json(nlohmann::json{{"p", 7}, {"checks", "moments,parseval"}, {"tol", 1e-6}});
  CHECK(u.orders == std::vector<std::uint64_t>{7});
  CHECK(u.checks.size() == 2);
  CHECK(u.run.check.tol == 1e-6);
}

TEST_CASE("seed splitting") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(instance_seed(1, 0) != instance_seed(1, 1));
  CHECK(instance_seed(1, 5) == splitmix64(splitmix64(1) ^ 5));
}

TEST_CASE("appendix chain examples") {
  const Verdict sub = appendix_chain_check(gs("G=4x4: (0,0),(1,0),(2,0),(3,0)"));
  CHECK(passed(sub));
  CHECK(param_or(sub, "K") == "1");
  CHECK(param_or(sub, "alpha") == "1/4");
  CHECK_FALSE(appendix_chain_check(gs("p=7: 0")).failed());
  std::mt19937_64 rng(105);
  for (int t = 0; t < 20; ++t) CHECK(passed(appendix_chain_check(random_set(grp({3, 5, 7}), rng, 10))));
  CHECK(na(appendix_chain_check(GSet::full(zp(7)))));
}
