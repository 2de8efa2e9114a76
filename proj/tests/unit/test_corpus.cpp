#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"

#include "am/aligner.hpp"
#include "am/amr_corpus.hpp"
#include "am/convert.hpp"
#include "am/count_scorer.hpp"
#include "am/decompose.hpp"
#include "am/error.hpp"
#include "am/lexicalize.hpp"
#include "am/preprocess.hpp"
#include "am/smatch.hpp"

using namespace am;

namespace {

std::vector<Token> toks(const std::string& s) {
  std::vector<Token> out;
  for (const auto& w : split_ws(s)) out.push_back({w, "X"});
  return out;
}

AsGraph::NodeId node_labeled(const AsGraph& g, const std::string& label) {
  for (AsGraph::NodeId u = 0; u < g.node_count(); ++u)
    if (g.label(u) == std::optional<std::string>(label)) return u;
  FAIL("no node labeled " << label);
  return 0;
}

const std::vector<AmrEntry>& mini() {
  static const auto entries = read_amr_corpus(fixture::data("minicorpus.amr"));
  return entries;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("preprocess: names, numbers, identity") {
    auto g = parse_amr(
        "(w / write-01 :ARG0 (p / person :wiki \"Agatha_Christie\" :name (n / name :op1 \"Agatha\" :op2 \"Christie\")) "
        ":ARG1 (b / book))");
    auto pre = preprocess(toks("Agatha Christie writes books"), &g);
    REQUIRE(pre.tokens.size() == 3);
    CHECK(pre.tokens[0].form == "NAME");
    CHECK(pre.wiki_removed == 1);
    REQUIRE(pre.amr);
    CHECK(is_isomorphic(*pre.amr, parse_amr("(w / write-01 :ARG0 (p / person :name (n / NAME)) :ARG1 (b / book))")));
    REQUIRE(pre.records.size() == 1);
    CHECK(pre.records[0].kind == PreRecord::Kind::kName);
    CHECK(pre.records[0].words == std::vector<std::string>{"Agatha", "Christie"});
    // and back
    auto marked = *pre.amr;
    marked.set_label(node_labeled(marked, "NAME"), marker_label(pre.records[0]));
    auto expanded = postprocess(marked, pre.records);
    CHECK(is_isomorphic(expanded, parse_amr("(w / write-01 :ARG0 (p / person :name (n / name :op1 \"Agatha\" "
                                            ":op2 \"Christie\")) :ARG1 (b / book))")));

    auto num = preprocess(toks("I have 42"), nullptr);
    CHECK(num.tokens[2].form == "NUMBER");
    REQUIRE(num.records.size() == 1);
    CHECK(num.records[0].attributes == std::vector<std::pair<std::string, std::string>>{{"value", "42"}});

    auto date = preprocess(toks("on 2019-03-05"), nullptr);
    CHECK(date.tokens[1].form == "DATE");

    auto plain = preprocess(toks("the boy sleeps"), nullptr);
    CHECK(plain.tokens == toks("the boy sleeps"));
    CHECK(plain.records.empty());

    NameGazetteer gz;
    gz.add({"Marie", "Curie"});
    auto named = preprocess(toks("Marie Curie sleeps"), nullptr, &gz);
    CHECK(named.tokens.size() == 2);
    CHECK(named.tokens[0].form == "NAME");
  }

  TEST_CASE("align: worked example") {
    auto g = parse_amr(fixture::kGoldAmr);
    auto a = align(g, toks("the writer wants to sleep soundly"), PipelineConfig{});
    CHECK(a.node_token[node_labeled(g, "want")] == 3);
    CHECK(a.node_token[node_labeled(g, "person")] == 2);
    CHECK(a.node_token[node_labeled(g, "write")] == 2);
    CHECK(a.node_token[node_labeled(g, "sleep")] == 5);
    CHECK(a.node_token[node_labeled(g, "sound")] == 6);
    CHECK(a.unaligned.empty());
    CHECK_FALSE(a.lexical[0]);
    CHECK(a.lexical[2] == node_labeled(g, "want"));

    auto boy = parse_amr("(b / boy)");
    auto b = align(boy, toks("boy"), PipelineConfig{});
    CHECK(b.node_token == std::vector<std::size_t>{1});
  }

  TEST_CASE("align: a node without a lexical match is still placed") {
    auto g = parse_amr("(s / sleep-01 :ARG0 (b / boy) :time (t / xyzzy))");
    auto a = align(g, toks("boy sleeps"), PipelineConfig{});
    CHECK(a.node_token[node_labeled(g, "sleep-01")] == 2);
    CHECK(a.node_token[node_labeled(g, "xyzzy")] != 0);
  }

  TEST_CASE("decompose: worked example gives the fragments and the gold tree") {
    auto g = parse_amr(fixture::kGoldAmr);
    auto tokens = toks("the writer wants to sleep soundly");
    auto a = align(g, tokens, PipelineConfig{});
    auto d = decompose(g, a, tokens, BlobPolicy::defaults());
    REQUIRE_MESSAGE(d.ok, d.reason << ": " << d.detail);
    auto gold = fixture::writer_tree();
    CHECK(d.tree.heads == gold.heads);
    CHECK(d.tree.labels == gold.labels);
    for (std::size_t i = 0; i < 6; ++i) {
      CAPTURE(i);
      REQUIRE(d.tree.supertags[i].has_value() == gold.supertags[i].has_value());
      if (gold.supertags[i]) CHECK(is_isomorphic(*d.tree.supertags[i], *gold.supertags[i]));
    }
    CHECK(type_of(*d.tree.supertags[2]) == parse_type("(o(s), s)"));
    CHECK(d.reentrancies_removed == 0);
    CHECK(is_isomorphic(eval(term_from_deptree(d.tree)), g));
  }

  TEST_CASE("decompose: unaccusative subject is s") {
    auto g = parse_amr("(s / sleep :ARG1 (b / boy))");
    auto tokens = toks("boy sleeps");
    auto d = decompose(g, align(g, tokens, PipelineConfig{}), tokens, BlobPolicy::defaults());
    REQUIRE(d.ok);
    CHECK(type_of(*d.tree.supertags[1]) == parse_type("(s)"));
    CHECK(d.tree.labels[0] == EdgeOp::apply("s"));
  }

  TEST_CASE("decompose: cross-clause reentrancy is removed and counted") {
    const AmrEntry* e = nullptr;
    for (const auto& x : mini())
      if (x.id == "mini.15") e = &x;
    REQUIRE(e);
    auto res = convert_corpus({*e}, PipelineConfig{});
    REQUIRE(res.sentences.size() == 1);
    REQUIRE(res.sentences[0].ok);
    CHECK(res.stats.reentrancies_removed >= 1);
    auto pre = preprocess(e->tokens, &*e->amr);
    CHECK(res.sentences[0].gold.edges().size() + res.stats.reentrancies_removed == pre.amr->edges().size());
  }

  TEST_CASE("lexicalize") {
    auto want = parse_asgraph(fixture::kWant);
    auto dl = delexicalize(want, want.root());
    CHECK(dl.lexlabel == "want");
    CHECK(dl.graph.label(dl.graph.root()) == std::optional<std::string>(kLexLabel));
    CHECK(is_isomorphic(relexicalize(dl.graph, dl.lexlabel), want));
    auto by_form = delexicalize(want, "wants");
    CHECK(by_form.lexlabel == "want");

    Lexicon lex;
    auto leaf = delexicalize(parse_asgraph("(z<root> / zorble)"), 0);
    CHECK(lex.resolve("zorble", leaf.graph, std::nullopt) == "zorble");
    CHECK(lex.resolve("zorble", leaf.graph, std::string("blip")) == "blip");
    lex.add("wants", "want-01", 3);
    lex.add("wants", "want", 1);
    CHECK(lex.most_frequent("wants") == std::optional<std::string>("want-01"));
    CHECK(lex.resolve("wants", dl.graph, std::nullopt) == "want-01");
    CHECK_THROWS_AS(delexicalize(want, 1), GraphError);  // unlabeled source node
  }

  TEST_CASE("corpus reader") {
    std::vector<CorpusIssue> issues;
    auto entries = read_amr_corpus(
        "# ::id a\n# ::snt boy\n(b / boy)\n\n# ::id bad\n# ::snt x\n(b / boy :ARG0 q)\n\n# ::id c\n# ::snt girl\n(g / girl)\n",
        &issues);
    CHECK(entries.size() == 2);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].id == "bad");
    CHECK_THROWS_AS(read_amr_corpus("# ::id a\n(b / boy)\n"), FormatError);
    CHECK(read_amr_corpus("").empty());
    CHECK(mini().size() >= 20);
  }

  TEST_CASE("pipeline config") {
    auto cfg = read_pipeline_config(fixture::data("policy.json"));
    CHECK(write_pipeline_config(cfg) == write_pipeline_config(PipelineConfig{}));
    CHECK(cfg.policy.owner("ARG0") == Owner::kSource);
    CHECK(cfg.policy.owner("manner") == Owner::kTarget);
    CHECK_THROWS_AS(read_pipeline_config("{"), ParseError);
    auto partial = read_pipeline_config("{\"aligner\": {\"exact\": 3}}");
    CHECK(partial.aligner.exact == 3.0);
    CHECK(partial.aligner.stem == AlignerWeights::defaults().stem);
  }

  TEST_CASE("conversion of the mini-corpus") {
    auto one = convert_corpus({mini()[0]}, PipelineConfig{});
    CHECK(one.treebank.sentences.size() == 1);
    CHECK(one.stats.rejection_pct() == 0.0);

    auto res = convert_corpus(mini(), PipelineConfig{});
    CHECK(res.stats.sentences == mini().size());
    CHECK(res.stats.accepted == res.treebank.sentences.size());
    std::size_t ok = 0;
    for (const auto& s : res.sentences) ok += s.ok;
    CHECK(ok == res.stats.accepted);
    for (const auto& e : res.treebank.sentences) {
      auto types = check_well_typed(e.tree);
      REQUIRE(types);
      CHECK((*types)[e.tree.root() - 1] == AmType::empty());
    }
    auto text = res.stats.to_text();
    for (const char* key : {"sentences=", "rejection_pct=", "nonprojective_pct=", "reentrancies_removed=",
                            "supertags_lexicalized=", "supertags_delexicalized="})
      CHECK(text.find(key) != std::string::npos);

    auto parallel = convert_corpus(mini(), PipelineConfig{}, 3);
    CHECK(write_treebank(parallel.treebank) == write_treebank(res.treebank));

    auto empty = convert_corpus({}, PipelineConfig{});
    CHECK(empty.treebank.sentences.empty());
    CHECK(empty.stats.rejection_pct() == 0.0);
  }

  TEST_CASE("count scorer") {
    auto res = convert_corpus(mini(), PipelineConfig{});
    auto scorer = CountScorer::train(res.treebank);
    auto table = scorer.score_sentence(toks("the writer sleeps"), 4);
    const auto& cands = table.candidates(2);
    std::size_t best = 0;
    for (std::size_t c = 1; c < cands.size(); ++c)
      if (cands[c].score > cands[best].score) best = c;
    REQUIRE(cands[best].graph);
    auto relex = relexicalize(*cands[best].graph, cands[best].lexlabel.value_or("?"));
    CHECK(is_isomorphic(relex, parse_asgraph("(p<root> / person :ARG0-of (w / write-01))")));

    auto unseen = scorer.score_sentence(toks("zorble"), 4);
    bool has_bottom = false, has_graph = false;
    for (const auto& c : unseen.candidates(1)) {
      CHECK(std::isfinite(c.score));
      has_bottom |= !c.graph;
      has_graph |= c.graph.has_value();
    }
    CHECK(has_bottom);
    CHECK(has_graph);
    CHECK(std::isfinite(unseen.label_default));
    CHECK(std::isfinite(unseen.edge(0, 1)));

    auto again = CountScorer::from_json(scorer.to_json());
    CHECK(write_score_table(again.score_sentence(toks("the writer sleeps"), 4)) == write_score_table(table));
    CHECK_THROWS_AS(CountScorer::from_json("[]"), ParseError);
  }

  TEST_CASE("parse_sentence substitutes the dummy graph on failure") {
    ScoreTable t(std::vector<Token>{{"x", "X"}});
    t.add_candidate(1, SupertagCandidate::bottom(0.0));
    auto p = parse_table(t, ParseOptions{});
    CHECK_FALSE(p.ok);
    CHECK(p.status == "error");
    CHECK(is_isomorphic(p.amr, dummy_graph()));
  }
}
