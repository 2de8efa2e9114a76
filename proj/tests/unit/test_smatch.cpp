#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "am/amr_corpus.hpp"
#include "am/smatch.hpp"

using namespace am;

TEST_SUITE("smatch") {
  TEST_CASE("identical and hand pair") {
    auto g = parse_amr(fixture::kGoldAmr);
    auto c = smatch(g, g);
    CHECK(c.matched == c.test_total);
    CHECK(c.f() == 1.0);
    // 2 instances + 1 relation each; the relations differ
    auto a = parse_amr("(w / want :ARG0 (b / boy))");
    auto b = parse_amr("(w / want :ARG1 (b / boy))");
    auto h = smatch(a, b);
    CHECK(h.matched == 2);
    CHECK(h.test_total == 3);
    CHECK(h.gold_total == 3);
    CHECK(h.precision() == doctest::Approx(2.0 / 3.0));
    CHECK(h.recall() == doctest::Approx(2.0 / 3.0));
    CHECK(h.f() == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("constants are attributes, not variables") {
    auto a = parse_amr("(s / sleep-01 :polarity -)");
    auto b = parse_amr("(s / sleep-01 :polarity (x / -))");
    CHECK(smatch(a, a).test_total == 2);
    CHECK(smatch(a, b).f() == 1.0);
    CHECK(smatch(parse_amr("(c / cat :quant 3)"), parse_amr("(c / cat :quant 4)")).matched == 1);
  }

  TEST_CASE("shipped pairs agree with exhaustive mapping") {
    auto test = read_amr_corpus(fixture::data("smatch_test.amr"));
    auto gold = read_amr_corpus(fixture::data("smatch_gold.amr"));
    REQUIRE(test.size() == gold.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      CAPTURE(test[i].id);
      auto want = oracle::smatch_exhaustive(*test[i].amr, *gold[i].amr);
      auto got = smatch(*test[i].amr, *gold[i].amr);
      CHECK(got.test_total == want.test);
      CHECK(got.gold_total == want.gold);
      CHECK(got.matched == want.matched);
    }
  }

  TEST_CASE("random graphs: self match, bounds, determinism") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
      auto g = oracle::random_amr(rng, 7);
      auto h = oracle::random_amr(rng, 5);
      CHECK(smatch(g, g).f() == 1.0);
      auto c = smatch(g, h, {.restarts = 2, .seed = 9});
      CHECK(c.f() >= 0.0);
      CHECK(c.f() <= 1.0);
      auto d = smatch(g, h, {.restarts = 2, .seed = 9});
      CHECK(c.matched == d.matched);
      if (oracle::triple_count(g) <= 6 && oracle::triple_count(h) <= 6)
        CHECK(c.matched == oracle::smatch_exhaustive(g, h).matched);
    }
  }

  TEST_CASE("corpus average") {
    auto a = parse_amr("(w / want :ARG0 (b / boy))");
    auto b = parse_amr("(w / want :ARG1 (b / boy))");
    auto c = smatch_corpus({a, a}, {a, b});
    CHECK(c.matched == 5);
    CHECK(c.test_total == 6);
    CHECK_THROWS_AS(smatch_corpus({a}, {}), std::invalid_argument);
    CHECK(SmatchCounts{}.f() == 1.0);
  }
}
