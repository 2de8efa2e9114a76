// One line per acceptance criterion. Thresholds are fixed here; the exit
// status is nonzero if any criterion fails.

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"

#include "am/amr_corpus.hpp"
#include "am/convert.hpp"
#include "am/count_scorer.hpp"
#include "am/decode.hpp"
#include "am/error.hpp"
#include "am/lexicalize.hpp"
#include "am/preprocess.hpp"
#include "am/smatch.hpp"

using namespace am;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kC1MaxSeconds = 1.0;
constexpr std::size_t kC2Triples = 10000;
constexpr std::size_t kC3Trees = 200;
constexpr std::size_t kC4Instances = 500;
constexpr double kC4MaxSeconds = 120.0;
constexpr std::size_t kC5RandomLarge = 200;
constexpr double kC5MaxSeconds = 120.0;
constexpr std::size_t kC6MinSentences = 20;
constexpr double kC7MinSmatch = 0.95;
constexpr std::size_t kC7K = 4;
constexpr std::size_t kC8MaxTriples = 6;
constexpr std::size_t kC8RandomGraphs = 100;
constexpr std::size_t kC9Tokens = 40;
constexpr std::size_t kC9K = 4;
constexpr std::size_t kC9MinTypes = 30;
constexpr double kC9MaxSeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome worked_example() {
  auto t0 = Clock::now();
  auto tree = fixture::writer_tree();
  auto types = check_well_typed(tree);
  bool typed = types && (*types)[tree.root() - 1] == AmType::empty();
  bool iso = false;
  double f = 0.0;
  if (typed) {
    auto g = eval(term_from_deptree(tree));
    auto gold = parse_amr(fixture::kGoldAmr);
    iso = is_isomorphic(g, gold);
    f = smatch(g, gold).f();
  }
  double secs = seconds_since(t0);
  return {typed && iso && f == 1.0 && secs < kC1MaxSeconds,
          fmt("root_type=%s isomorphic=%d smatch=%.3f time=%.3fs", types ? (*types)[2].str().c_str() : "undefined",
              iso, f, secs)};
}

// --- 2 ---------------------------------------------------------------------

Outcome graph_type_coherence() {
  std::mt19937_64 rng(20240601);
  std::vector<AsGraph> pool;
  std::map<AmType, std::vector<std::size_t>> by_type;
  for (int i = 0; i < 600; ++i) {
    pool.push_back(oracle::random_asgraph(rng));
    by_type[type_of(pool.back())].push_back(pool.size() - 1);
  }
  auto any = [&]() -> const AsGraph& { return pool[rng() % pool.size()]; };
  std::size_t defined = 0, undefined = 0, conflicts = 0, violations = 0;
  std::string first;
  for (std::size_t i = 0; i < kC2Triples; ++i) {
    const AsGraph& g1 = any();
    const AmType t1 = type_of(g1);
    const bool app = rng() % 2 == 0;
    AsGraph g2 = any();
    std::string a = "s";
    if (app) {
      // usually an existing source; half the time an argument of the right type
      if (!t1.entries().empty() && rng() % 5 != 0) {
        const auto& e = t1.entries()[rng() % t1.entries().size()];
        a = e.first;
        auto it = by_type.find(e.second);
        if (it != by_type.end() && rng() % 2 == 0) g2 = pool[it->second[rng() % it->second.size()]];
      }
    } else {
      const AmType t2 = type_of(g2);
      if (!t2.entries().empty() && rng() % 5 != 0) a = t2.entries()[rng() % t2.entries().size()].first;
    }
    const AmType t2 = type_of(g2);
    auto expect = app ? apply_type(t1, a, t2) : modify_type(t1, a, t2);
    std::optional<AmType> got;
    bool conflict = false;
    try {
      got = type_of(app ? apply(g1, a, g2) : modify(g1, a, g2));
    } catch (const OperationError& e) {
      conflict = e.kind() == OperationError::Kind::kLabelConflict;
    }
    if (conflict) {
      ++conflicts;
      continue;
    }
    expect ? ++defined : ++undefined;
    if (expect != got) {
      if (violations++ == 0)
        first = (app ? "APP_" : "MOD_") + a + " " + t1.str() + " " + t2.str() + " type=" +
                (expect ? expect->str() : "undef") + " graph=" + (got ? got->str() : "undef");
    }
  }
  return {violations == 0, fmt("triples=%zu defined=%zu undefined=%zu label_conflicts=%zu violations=%zu%s%s",
                               kC2Triples, defined, undefined, conflicts, violations, first.empty() ? "" : " first: ",
                               first.c_str())};
}

// --- 3 ---------------------------------------------------------------------

Outcome order_invariance() {
  std::mt19937_64 rng(777);
  std::size_t trees = 0, differing = 0, dead_ends = 0, violations = 0, attempts = 0;
  auto check_tree = [&](const AmDepTree& tree) {
    auto canonical = eval(term_from_deptree(tree));
    for (int tries = 0; tries < 4; ++tries) {
      std::vector<std::string> picks;
      bool nontrivial = false;
      try {
        auto alt = term_from_deptree(tree, [&](std::size_t, const std::vector<std::size_t>& ok) {
          if (ok.size() > 1) nontrivial = true;
          return ok[rng() % ok.size()];
        });
        auto g = eval(alt);
        ++trees;
        differing += nontrivial;
        if (!is_isomorphic(g, canonical)) ++violations;
        return;
      } catch (const TypeError&) {
        ++dead_ends;  // this random order got stuck; the term it would give is not well-typed
      }
    }
  };
  while (trees < kC3Trees && attempts < 20 * kC3Trees) {
    ++attempts;
    const std::size_t n = 3 + rng() % 5;
    auto table = oracle::random_table(rng, n, 3, 0.2);
    DecodeOptions opts;
    opts.k = 3;
    try {
      auto r = rng() % 2 ? fixed_tree_decode(table, opts) : projective_decode(table, opts);
      check_tree(r.tree);
    } catch (const DecodeError&) {
    }
  }
  auto conv = convert_corpus(read_amr_corpus(fixture::data("minicorpus.amr")), PipelineConfig{});
  for (const auto& e : conv.treebank.sentences) check_tree(relexicalize_tree(e.tree, nullptr));
  return {trees >= kC3Trees && violations == 0,
          fmt("trees=%zu with_choice=%zu stuck_orders=%zu violations=%zu", trees, differing, dead_ends, violations)};
}

// --- 4 ---------------------------------------------------------------------

Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(4242);
  std::size_t projective_cases = 0, proj_violations = 0, fixed_checked = 0, fixed_violations = 0, no_tree = 0;
  for (std::size_t i = 0; i < kC4Instances; ++i) {
    const std::size_t n = 1 + i % 6, k = 1 + (i / 6) % 3;
    auto table = oracle::random_table(rng, n, 3);
    DecodeOptions opts;
    opts.k = k;
    std::optional<DecodeResult> ex;
    try {
      ex = exact_decode(table, opts);
    } catch (const DecodeError&) {
      ++no_tree;
    }
    if (ex && is_projective(ex->tree)) {
      ++projective_cases;
      try {
        auto p = projective_decode(table, opts);
        if (p.score != ex->score || p.open_sources != ex->open_sources) ++proj_violations;
      } catch (const DecodeError&) {
        ++proj_violations;
      }
    }
    auto skel = cle_arborescence(table);
    auto want = oracle::best_on_skeleton(table, skel, k);
    ++fixed_checked;
    try {
      auto f = fixed_tree_decode(table, opts);
      if (!want || f.score != want->score || f.open_sources != want->open) ++fixed_violations;
    } catch (const DecodeError&) {
      if (want) ++fixed_violations;
    }
  }
  double secs = seconds_since(t0);
  return {proj_violations == 0 && fixed_violations == 0 && secs < kC4MaxSeconds,
          fmt("instances=%zu exact_projective=%zu projective_mismatch=%zu fixed_checked=%zu fixed_mismatch=%zu "
              "no_tree=%zu time=%.1fs",
              kC4Instances, projective_cases, proj_violations, fixed_checked, fixed_violations, no_tree, secs)};
}

// --- 5 ---------------------------------------------------------------------

Outcome hamiltonian() {
  auto t0 = Clock::now();
  std::size_t total = 0, yes = 0, wrong = 0;
  auto one = [&](const Digraph& g) {
    bool truth = oracle::hamiltonian_path_to_last(g);
    auto v = decide_hamiltonian(g);
    ++total;
    yes += truth;
    if (v.yes != truth || (truth && v.score != static_cast<double>(g.n - 1))) ++wrong;
  };
  for (std::size_t n = 2; n <= 5; ++n) {
    const std::size_t slots = n * (n - 1);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots); ++bits) {
      Digraph g;
      g.n = n;
      std::size_t b = 0;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
          if (i != j && (bits >> b++ & 1)) g.arcs.emplace_back(i, j);
      one(g);
    }
  }
  std::mt19937_64 rng(6);
  for (std::size_t i = 0; i < kC5RandomLarge; ++i) {
    Digraph g;
    g.n = 6 + i % 2;
    std::bernoulli_distribution arc(0.15 + 0.35 * (i % 7) / 6.0);
    for (std::size_t a = 1; a <= g.n; ++a)
      for (std::size_t b = 1; b <= g.n; ++b)
        if (a != b && arc(rng)) g.arcs.emplace_back(a, b);
    one(g);
  }
  double secs = seconds_since(t0);
  return {wrong == 0 && secs < kC5MaxSeconds,
          fmt("digraphs=%zu yes=%zu disagreements=%zu time=%.1fs", total, yes, wrong, secs)};
}

// --- 6 ---------------------------------------------------------------------

Outcome round_trip() {
  auto entries = read_amr_corpus(fixture::data("minicorpus.amr"));
  auto res = convert_corpus(entries, PipelineConfig{});
  std::vector<AsGraph> pred, gold;
  std::size_t iso = 0, k = 0;
  for (const auto& s : res.sentences) {
    gold.push_back(s.gold);
    if (!s.ok) {
      pred.push_back(AsGraph{});
      continue;
    }
    auto tree = relexicalize_tree(res.treebank.sentences[k++].tree, nullptr);
    auto g = eval(term_from_deptree(tree));
    iso += is_isomorphic(g, s.gold);
    pred.push_back(std::move(g));
  }
  double f = smatch_corpus(pred, gold).f();
  return {entries.size() >= kC6MinSentences && f == 1.0 && res.stats.accepted == entries.size(),
          fmt("sentences=%zu accepted=%zu isomorphic=%zu reentrancies_removed=%zu smatch=%.4f", entries.size(),
              res.stats.accepted, iso, res.stats.reentrancies_removed, f)};
}

// --- 7 ---------------------------------------------------------------------

Outcome mini_pipeline() {
  auto entries = read_amr_corpus(fixture::data("minicorpus.amr"));
  auto conv = convert_corpus(entries, PipelineConfig{});
  auto scorer = CountScorer::train(conv.treebank);
  std::vector<AsGraph> gold;
  for (const auto& e : entries) {
    AsGraph g = *e.amr;
    remove_wiki(g);
    gold.push_back(std::move(g));
  }
  std::map<std::string, double> f;
  for (const char* dec : {"projective", "fixed-tree"}) {
    ParseOptions po;
    po.decoder = dec;
    po.decode.k = kC7K;
    std::vector<AsGraph> pred;
    for (const auto& e : entries) pred.push_back(parse_sentence(scorer, e.tokens, po).amr);
    f[dec] = smatch_corpus(pred, gold).f();
  }
  auto adv = read_score_tables(fixture::data("adversarial_type_unaware.json"));
  std::size_t fallbacks = 0;
  for (const auto& t : adv)
    if (type_unaware_decode(t).status == DecodeStatus::kSubtreeFallback) ++fallbacks;
  return {f["projective"] >= kC7MinSmatch && f["fixed-tree"] >= kC7MinSmatch && fallbacks >= 1,
          fmt("smatch_projective=%.4f smatch_fixed_tree=%.4f type_unaware_subtree_fallbacks=%zu", f["projective"],
              f["fixed-tree"], fallbacks)};
}

// --- 8 ---------------------------------------------------------------------

Outcome smatch_correctness() {
  auto test = read_amr_corpus(fixture::data("smatch_test.amr"));
  auto gold = read_amr_corpus(fixture::data("smatch_gold.amr"));
  std::size_t checked = 0, wrong = 0;
  for (std::size_t i = 0; i < std::min(test.size(), gold.size()); ++i) {
    if (oracle::triple_count(*test[i].amr) > kC8MaxTriples || oracle::triple_count(*gold[i].amr) > kC8MaxTriples)
      continue;
    ++checked;
    auto want = oracle::smatch_exhaustive(*test[i].amr, *gold[i].amr);
    auto got = smatch(*test[i].amr, *gold[i].amr);
    if (got.f() != want.f()) ++wrong;
  }
  std::mt19937_64 rng(8);
  std::size_t self_wrong = 0;
  for (std::size_t i = 0; i < kC8RandomGraphs; ++i) {
    auto g = oracle::random_amr(rng, 9);
    if (smatch(g, g).f() != 1.0) ++self_wrong;
  }
  return {test.size() == gold.size() && checked > 0 && wrong == 0 && self_wrong == 0,
          fmt("pairs=%zu checked=%zu mismatches=%zu self_match_failures=%zu/%zu", test.size(), checked, wrong,
              self_wrong, kC8RandomGraphs)};
}

// --- 9 ---------------------------------------------------------------------

ScoreTable scale_table(std::mt19937_64& rng) {
  static const std::vector<std::string> inventory = {
      "(r<root> / n)",
      "(r<root> / v :ARG0 (x<s>))",
      "(r<root> / v :ARG1 (x<o>))",
      "(r<root> / v :ARG2 (x<o2>))",
      "(r<root> / t :ARG0 (x<s>) :ARG1 (y<o>))",
      "(r<root> / t :ARG0 (x<s>) :ARG2 (y<o2>))",
      "(r<root> / t :ARG1 (x<o>) :ARG2 (y<o2>))",
      "(r<root> / d :ARG0 (x<s>) :ARG1 (y<o>) :ARG2 (z<o2>))",
      "(r<root> / c :ARG0 (x<s>) :ARG1 (y<o(s)>))",
      "(r<root> / c :ARG0 (x<s>) :ARG1 (y<o(s)>) :ARG2 (z<o2>))",
      "(r<root> / a :mod-of (x<m>))",
      "(r<root> / a :ARG0-of (x<s>))",
      "(r<root> / and :op1 (x<op1>) :op2 (y<op2>))",
      "(r<root> / and :op1 (x<op1(s)>) :op2 (y<op2(s)>))",
      "(r<root> / and :op1 (x<op1>) :op2 (y<op2>) :op3 (z<op3>))",
      "(r<root> / q :ARG0 (x<s>) :ARG1 (y<o>) :ARG2 (z<o2>) :ARG3 (w<o3>))",
      "(r<root> / b :ARG1 (x<o>) :ARG3 (y<o3>))",
      "(r<root> / a :manner-of (x<m>) :ARG0 (y<s>))",
  };
  std::vector<Token> tokens(kC9Tokens, Token{"w", "X"});
  ScoreTable t(tokens);
  std::uniform_int_distribution<int> sc(-16, 16);
  for (std::size_t i = 1; i <= kC9Tokens; ++i) {
    for (std::size_t c = 0; c < kC9K; ++c) {
      auto g = parse_asgraph(inventory[rng() % inventory.size()]);
      t.add_candidate(i, SupertagCandidate::of(std::move(g), sc(rng) / 8.0));
    }
    t.add_candidate(i, SupertagCandidate::bottom(sc(rng) / 8.0 - 2.0));
  }
  for (std::size_t h = 0; h <= kC9Tokens; ++h)
    for (std::size_t d = 1; d <= kC9Tokens; ++d)
      if (h != d) t.set_edge(h, d, sc(rng) / 8.0);
  t.label_default = -1.0;
  return t;
}

Outcome scale_smoke() {
  std::mt19937_64 rng(9);
  auto table = scale_table(rng);
  auto t0 = Clock::now();
  DecodeOptions opts;
  opts.k = kC9K;
  auto r = projective_decode(table, opts);
  double secs = seconds_since(t0);
  const double n = static_cast<double>(kC9Tokens);
  const double bound = n * n * n * static_cast<double>(r.stats.distinct_types);
  bool ok = secs < kC9MaxSeconds && r.stats.distinct_types >= kC9MinTypes &&
            static_cast<double>(r.stats.items) <= bound && check_well_typed(r.tree).has_value();
  return {ok, fmt("n=%zu k=%zu types=%zu states=%zu items=%zu bound=%.0f status=%s time=%.1fs", kC9Tokens, kC9K,
                  r.stats.distinct_types, r.stats.distinct_states, r.stats.items, bound, status_name(r.status), secs)};
}

// --- 10 --------------------------------------------------------------------

Outcome stats_fields() {
  auto entries = read_amr_corpus(fixture::data("minicorpus.amr"));
  auto conv = convert_corpus(entries, PipelineConfig{});
  ParseStats ps;
  ps.sentences = 1;
  ps.supertags_correct = 1;
  ps.supertags_total = 1;
  ps.smatch_precision = ps.smatch_recall = ps.smatch_f = 1.0;
  const std::string text = conv.stats.to_text() + ps.to_text();
  std::string missing;
  for (const char* key : {"rejection_pct=", "nonprojective_pct=", "reentrancies_removed=", "supertags_lexicalized=",
                          "supertags_delexicalized=", "supertag_accuracy=", "smatch_precision=", "smatch_recall=",
                          "smatch_f="})
    if (text.find(key) == std::string::npos) missing += std::string(" ") + key;
  return {missing.empty(),
          fmt("fields present%s%s; corpus-scale figures need the LDC release and neural scorers, not computed here",
              missing.empty() ? "" : ", missing:", missing.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked example", worked_example},
      {"graph/type coherence", graph_type_coherence},
      {"evaluation order invariance", order_invariance},
      {"oracle equivalence", oracle_equivalence},
      {"Hamiltonian reduction", hamiltonian},
      {"round-trip conversion", round_trip},
      {"mini-pipeline", mini_pipeline},
      {"Smatch correctness", smatch_correctness},
      {"scale smoke test", scale_smoke},
      {"stats fields", stats_fields},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
