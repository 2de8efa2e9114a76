#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "am/decode.hpp"
#include "am/error.hpp"
#include "am/smatch.hpp"

using namespace am;

namespace {

// Gold supertags plus bottom everywhere; only the gold labels are listed,
// everything else falls to the default.
ScoreTable writer_table(bool gold_skeleton_edges) {
  auto t = fixture::writer_tree();
  ScoreTable table(t.tokens);
  for (std::size_t i = 1; i <= 6; ++i) {
    if (t.supertags[i - 1]) {
      table.add_candidate(i, SupertagCandidate::of(*t.supertags[i - 1], 0.0));
      table.add_candidate(i, SupertagCandidate::bottom(-1.0));
    } else {
      table.add_candidate(i, SupertagCandidate::bottom(0.0));
    }
  }
  table.label_default = -1.0;
  for (std::size_t d = 1; d <= 6; ++d) {
    std::size_t h = t.heads[d - 1];
    if (h != 0) table.set_label(h, d, *t.labels[d - 1], 0.0);
    if (gold_skeleton_edges) table.set_edge(h, d, 1.0);
  }
  return table;
}

void check_result(const ScoreTable& table, const DecodeResult& r) {
  auto types = check_well_typed(r.tree);
  REQUIRE(types);
  CHECK(score_tree(table, r.tree, r.choices) == doctest::Approx(r.score).epsilon(1e-12));
  if (r.status == DecodeStatus::kExactGoal) CHECK((*types)[r.tree.root() - 1] == AmType::empty());
}

double skeleton_score(const ScoreTable& t, const Skeleton& h) {
  double s = 0;
  for (std::size_t d = 1; d <= h.size(); ++d) s += t.edge(h[d - 1], d);
  return s;
}

}  // namespace

TEST_SUITE("decode") {
  TEST_CASE("worked example: projective finds the gold tree") {
    auto table = writer_table(false);
    auto r = projective_decode(table, DecodeOptions{.k = 1});
    check_result(table, r);
    CHECK(r.status == DecodeStatus::kExactGoal);
    CHECK(r.score == 0.0);
    auto gold = fixture::writer_tree();
    CHECK(r.tree.heads == gold.heads);
    CHECK(r.tree.labels == gold.labels);
    CHECK(smatch(eval(term_from_deptree(r.tree)), parse_amr(fixture::kGoldAmr)).f() == 1.0);

    auto e = exact_decode(table, DecodeOptions{.k = 1});
    CHECK(e.score == r.score);
    CHECK(e.tree.heads == r.tree.heads);
    CHECK(e.tree.labels == r.tree.labels);
  }

  TEST_CASE("worked example: fixed-tree on the gold skeleton") {
    auto table = writer_table(true);
    CHECK(cle_arborescence(table) == fixture::writer_tree().heads);
    auto r = fixed_tree_decode(table, DecodeOptions{.k = 1});
    check_result(table, r);
    CHECK(r.tree.labels == fixture::writer_tree().labels);
    CHECK(smatch(eval(term_from_deptree(r.tree)), parse_amr(fixture::kGoldAmr)).f() == 1.0);
    // argmax choices are jointly well-typed here
    auto u = type_unaware_decode(table);
    CHECK(u.status == DecodeStatus::kExactGoal);
    CHECK(u.tree.labels == r.tree.labels);
    CHECK(u.score == r.score);
  }

  TEST_CASE("single token") {
    ScoreTable t(std::vector<Token>{{"writer", "NN"}});
    t.add_candidate(1, SupertagCandidate::of(parse_asgraph(fixture::kWriter), -0.5));
    t.add_candidate(1, SupertagCandidate::bottom(-3.0));
    for (auto& r : {projective_decode(t), fixed_tree_decode(t), exact_decode(t), type_unaware_decode(t)}) {
      CHECK(r.score == -0.5);
      CHECK(r.tree.heads == Skeleton{0});
      CHECK(r.status == DecodeStatus::kExactGoal);
    }
  }

  TEST_CASE("open-source fallback") {
    ScoreTable t(std::vector<Token>{{"sleeps", "VBZ"}});
    t.add_candidate(1, SupertagCandidate::of(parse_asgraph(fixture::kSleep), 0.0));
    t.add_candidate(1, SupertagCandidate::bottom(0.0));
    auto r = projective_decode(t);
    CHECK(r.status == DecodeStatus::kOpenSourceFallback);
    CHECK(r.open_sources == 1);
  }

  TEST_CASE("fixed-tree falls back to IGNORE into a bottom child") {
    // "quickly" has type (s); the writer has no s to fill and MOD_s is
    // forbidden, so the child becomes bottom.
    ScoreTable t(std::vector<Token>{{"writer", "NN"}, {"quickly", "RB"}});
    t.add_candidate(1, SupertagCandidate::of(parse_asgraph(fixture::kWriter), 0.0));
    t.add_candidate(1, SupertagCandidate::bottom(-5.0));
    t.add_candidate(2, SupertagCandidate::of(parse_asgraph("(q<root> / quick :ARG0 (z<s>))"), 0.0));
    t.add_candidate(2, SupertagCandidate::bottom(-2.0));
    t.set_edge(0, 1, 1.0);
    t.set_edge(1, 2, 1.0);
    t.set_label(1, 2, EdgeOp::modify("s"), kNegInf);
    auto r = fixed_tree_decode(t);
    check_result(t, r);
    CHECK(r.tree.heads == Skeleton{0, 1});
    CHECK(r.tree.labels[1] == EdgeOp::ignore());
    CHECK_FALSE(r.tree.supertags[1].has_value());
    CHECK(check_well_typed(r.tree)->at(0) == AmType::empty());
  }

  TEST_CASE("Chu-Liu-Edmonds") {
    std::vector<std::vector<double>> e = {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
    e[2][1] = 0;
    CHECK(cle_arborescence(e) == Skeleton{0, 1});
    CHECK(cle_arborescence(std::vector<std::vector<double>>{{0, 0.3}, {0, 0}}) == Skeleton{0});

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> sc(-16, 16);
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t n = 1 + trial % 5;
      ScoreTable t(std::vector<Token>(n, Token{"w", "X"}));
      for (std::size_t h = 0; h <= n; ++h)
        for (std::size_t d = 1; d <= n; ++d)
          if (h != d) t.set_edge(h, d, sc(rng) / 8.0);
      double best = kNegInf;
      for (const auto& s : oracle::all_skeletons(n)) best = std::max(best, skeleton_score(t, s));
      auto h = cle_arborescence(t);
      CHECK(std::count(h.begin(), h.end(), 0u) == 1);
      CHECK(skeleton_score(t, h) == best);
    }
  }

  TEST_CASE("projective and exact against brute force") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
      const std::size_t n = 1 + trial % 4, k = 1 + trial % 3;
      auto table = oracle::random_table(rng, n, 3);
      auto pbest = oracle::best_over_trees(table, k, true);
      auto ebest = oracle::best_over_trees(table, k, false);
      DecodeOptions opts;
      opts.k = k;
      CAPTURE(trial);
      if (!pbest) {
        CHECK_THROWS_AS(projective_decode(table, opts), DecodeError);
      } else {
        auto p = projective_decode(table, opts);
        check_result(table, p);
        CHECK(is_projective(p.tree));
        CHECK(p.open_sources == pbest->open);
        CHECK(p.score == pbest->score);
      }
      if (!ebest) {
        CHECK_THROWS_AS(exact_decode(table, opts), DecodeError);
      } else {
        auto e = exact_decode(table, opts);
        check_result(table, e);
        CHECK(e.open_sources == ebest->open);
        CHECK(e.score == ebest->score);
      }
    }
  }

  TEST_CASE("fixed-tree against skeleton brute force, and monotone in k") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 150; ++trial) {
      const std::size_t n = 1 + trial % 6;
      auto table = oracle::random_table(rng, n, 3);
      auto skel = cle_arborescence(table);
      double last = kNegInf;
      std::size_t last_open = 100;
      for (std::size_t k = 1; k <= 3; ++k) {
        DecodeOptions opts;
        opts.k = k;
        auto want = oracle::best_on_skeleton(table, skel, k);
        if (!want) {
          CHECK_THROWS_AS(fixed_tree_decode(table, opts), DecodeError);
          continue;
        }
        auto r = fixed_tree_decode(table, opts);
        check_result(table, r);
        CHECK(r.tree.heads == skel);
        CHECK(r.score == want->score);
        CHECK(r.open_sources == want->open);
      }
      for (std::size_t k = 1; k <= 3 && n <= 5; ++k) {
        DecodeOptions opts;
        opts.k = k;
        try {
          auto r = projective_decode(table, opts);
          // a larger beam can only find better goals
          CHECK((r.open_sources < last_open || (r.open_sources == last_open && r.score >= last)));
          last = r.score;
          last_open = r.open_sources;
        } catch (const DecodeError&) {
          CHECK(last_open == 100);
        }
      }
    }
  }

  TEST_CASE("type-unaware falls back to a subtree on the adversarial table") {
    auto tables = read_score_tables(fixture::data("adversarial_type_unaware.json"));
    REQUIRE(tables.size() == 1);
    auto r = type_unaware_decode(tables[0]);
    CHECK(r.status == DecodeStatus::kSubtreeFallback);
    CHECK(check_well_typed(r.tree));
    auto p = projective_decode(tables[0]);
    CHECK(p.status == DecodeStatus::kExactGoal);
  }

  TEST_CASE("Hamiltonian reduction examples") {
    Digraph tri{3, {{1, 2}, {2, 3}, {3, 1}}};
    auto v = decide_hamiltonian(tri);
    CHECK(v.yes);
    CHECK(v.score == 2.0);
    Digraph line{3, {{1, 2}, {2, 3}}};
    CHECK(decide_hamiltonian(line).score == 2.0);
    Digraph back{2, {{2, 1}}};
    auto nv = decide_hamiltonian(back);
    CHECK_FALSE(nv.yes);
    CHECK(nv.score < 1.0);
    CHECK_THROWS_AS(build_hamiltonian_instance(Digraph{1, {}}), DecodeError);
    for (const auto& g : {tri, line, back}) CHECK(has_hamiltonian_path_to_last(g) == oracle::hamiltonian_path_to_last(g));
  }

  TEST_CASE("digraph file format") {
    auto g = read_digraph("# triangle\n1 2\n2 3\n3 1\n");
    CHECK(g.n == 3);
    CHECK(g.arcs.size() == 3);
    CHECK(read_digraph("n 4\n1 2\n").n == 4);
    CHECK_THROWS_AS(read_digraph("1 x\n"), FormatError);
    CHECK_THROWS_AS(read_digraph("0 1\n"), FormatError);
    CHECK_THROWS_AS(read_digraph("1 2 3\n"), FormatError);
  }

  TEST_CASE("guards, budgets and retry") {
    std::mt19937_64 rng(5);
    auto big = oracle::random_table(rng, 30, 2);
    CHECK_THROWS_AS(exact_decode(big), DecodeError);

    auto table = oracle::random_table(rng, 6, 3, 0.0);
    DecodeOptions tight;
    tight.k = 3;
    tight.max_items = 5;
    CHECK_THROWS_AS(projective_decode(table, tight), DecodeTimeout);
    CHECK_THROWS_AS(decode_with_retry(projective_decode, table, tight), DecodeTimeout);

    // enough room for k=1 but not for k=3
    DecodeOptions k1;
    k1.k = 1;
    auto small = projective_decode(table, k1);
    tight.max_items = small.stats.items;
    if (projective_decode(table, DecodeOptions{.k = 3}).stats.items > tight.max_items) {
      auto r = decode_with_retry(projective_decode, table, tight);
      CHECK(r.score == small.score);
    }
  }

  TEST_CASE("score table JSON") {
    auto table = writer_table(true);
    table.set_edge(0, 1, kNegInf);
    auto text = write_score_table(table);
    auto back = read_score_table(text);
    CHECK(back.size() == 6);
    CHECK(back.edge(0, 1) == kNegInf);
    CHECK(back.edge(3, 2) == 1.0);
    CHECK(back.label(5, 6, EdgeOp::modify("m")) == 0.0);
    CHECK(back.label(5, 6, EdgeOp::apply("s")) == -1.0);
    CHECK(write_score_table(back) == text);
    CHECK(read_score_tables(text + "\n" + text).size() == 2);
    CHECK(read_score_tables("[" + text + "," + text + "]").size() == 2);
    CHECK_THROWS_AS(read_score_table("{\"tokens\": 3}"), ParseError);
    // a forbidden root edge is respected
    auto r = projective_decode(back, DecodeOptions{.k = 1});
    CHECK(r.tree.root() != 1);
  }
}
