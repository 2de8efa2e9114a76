#include "am/convert.hpp"

#include <atomic>
#include <mutex>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "am/aligner.hpp"
#include "am/decompose.hpp"
#include "am/error.hpp"
#include "am/lexicalize.hpp"
#include "am/preprocess.hpp"

namespace am {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

struct Work {
  ConvertedSentence sentence;
  std::optional<TreebankEntry> entry;
  std::size_t reentrancies_removed = 0, unaligned = 0, wiki = 0;
  bool projective = true;
  std::vector<std::string> lexicalized, delexicalized;
};

Work convert_one(const AmrEntry& e, const PipelineConfig& config) {
  Work w;
  w.sentence.id = e.id;
  if (!e.amr) {
    w.sentence.reason = "no-amr";
    return w;
  }
  Preprocessed pre = preprocess(e.tokens, &*e.amr);
  w.wiki = pre.wiki_removed;
  Alignment al = align(*pre.amr, pre.tokens, config);
  w.unaligned = al.unaligned.size();
  Decomposition d = decompose(*pre.amr, al, pre.tokens, config.policy);
  w.reentrancies_removed = d.reentrancies_removed;
  if (!d.ok) {
    w.sentence.reason = d.reason;
    w.sentence.detail = d.detail;
    return w;
  }
  TreebankEntry entry;
  if (!e.id.empty()) entry.comments.push_back("::id " + e.id);
  std::vector<std::string> words;
  for (const auto& t : e.tokens) words.push_back(t.form);
  entry.comments.push_back("::snt " + join_words(words));
  for (const auto& r : pre.records)
    entry.comments.push_back("::pre " + std::string(kind_token(r.kind)) + " " + std::to_string(r.token) + " " +
                             join_words(r.words));
  entry.comments.push_back("::amr " + render_amr(d.amr));
  entry.tree = d.tree;
  for (std::size_t i = 0; i < entry.tree.size(); ++i) {
    auto& st = entry.tree.supertags[i];
    if (!st) continue;
    w.lexicalized.push_back(render_asgraph(*st));
    Delexicalized dl = delexicalize(*st, *d.lexical[i]);
    st = dl.graph;
    entry.tree.lexlabels[i] = dl.lexlabel;
    w.delexicalized.push_back(render_asgraph(dl.graph));
  }
  w.projective = is_projective(entry.tree);
  w.entry = std::move(entry);
  w.sentence.ok = true;
  w.sentence.gold = d.amr;
  return w;
}

}  // namespace

double ConvertStats::rejection_pct() const { return pct(rejected, sentences); }
double ConvertStats::nonprojective_pct() const { return pct(nonprojective, accepted); }

std::string ConvertStats::to_text() const {
  std::ostringstream os;
  os << "sentences=" << sentences << "\n"
     << "accepted=" << accepted << "\n"
     << "rejected=" << rejected << "\n"
     << "rejection_pct=" << fmt(rejection_pct()) << "\n"
     << "nonprojective=" << nonprojective << "\n"
     << "nonprojective_pct=" << fmt(nonprojective_pct()) << "\n"
     << "reentrancies_removed=" << reentrancies_removed << "\n"
     << "unaligned_nodes=" << unaligned_nodes << "\n"
     << "wiki_edges_removed=" << wiki_edges_removed << "\n"
     << "supertags_lexicalized=" << supertags_lexicalized << "\n"
     << "supertags_delexicalized=" << supertags_delexicalized << "\n";
  for (const auto& [reason, n] : reasons) os << "rejected." << reason << "=" << n << "\n";
  return os.str();
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < std::min(jobs, n); ++t)
    threads.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);
}

ConvertResult convert_corpus(const std::vector<AmrEntry>& entries, const PipelineConfig& config,
                             std::size_t jobs) {
  std::vector<Work> work(entries.size());
  parallel_for(entries.size(), jobs, [&](std::size_t i) { work[i] = convert_one(entries[i], config); });

  ConvertResult out;
  std::set<std::string> lex, delex;
  ConvertStats& s = out.stats;
  for (auto& w : work) {
    ++s.sentences;
    s.reentrancies_removed += w.reentrancies_removed;
    s.unaligned_nodes += w.unaligned;
    s.wiki_edges_removed += w.wiki;
    if (w.entry) {
      ++s.accepted;
      s.nonprojective += !w.projective;
      lex.insert(w.lexicalized.begin(), w.lexicalized.end());
      delex.insert(w.delexicalized.begin(), w.delexicalized.end());
      out.treebank.sentences.push_back(std::move(*w.entry));
    } else {
      ++s.rejected;
      ++s.reasons[w.sentence.reason];
    }
    out.sentences.push_back(std::move(w.sentence));
  }
  s.supertags_lexicalized = lex.size();
  s.supertags_delexicalized = delex.size();
  return out;
}

Decoder decoder_named(const std::string& name) {
  if (name == "projective") return [](const ScoreTable& t, const DecodeOptions& o) { return projective_decode(t, o); };
  if (name == "fixed-tree") return [](const ScoreTable& t, const DecodeOptions& o) { return fixed_tree_decode(t, o); };
  if (name == "exact") return [](const ScoreTable& t, const DecodeOptions& o) { return exact_decode(t, o); };
  if (name == "type-unaware")
    return [](const ScoreTable& t, const DecodeOptions& o) { return type_unaware_decode(t, o); };
  throw std::invalid_argument("unknown decoder '" + name + "'");
}

AsGraph dummy_graph() {
  AsGraph g;
  g.set_root(g.add_node(std::string(kDummyLabel)));
  return g;
}

AsGraph tree_to_amr(const AmDepTree& relexicalized, const std::vector<PreRecord>& records) {
  AsGraph g = eval(term_from_deptree(relexicalized));
  std::vector<std::string> names;
  for (const auto& [name, src] : g.sources()) names.push_back(name);
  for (const auto& name : names) g.remove_source(name);
  if (!g.label(g.root())) g.set_label(g.root(), std::string(kDummyLabel));
  std::vector<AsGraph::Edge> drop;
  for (const auto& e : g.edges())
    if (!g.label(e.from) || !g.label(e.to)) drop.push_back(e);
  for (const auto& e : drop) g.remove_edge(e);
  g.prune_disconnected();
  return postprocess(g, records);
}

namespace {

ParsedSentence run_decoder(const ScoreTable& table, const ParseOptions& options, const Lexicon* lexicon,
                           const std::vector<PreRecord>& records) {
  ParsedSentence p;
  try {
    Decoder dec = decoder_named(options.decoder);
    DecodeResult r = options.retry_decrement ? decode_with_retry(dec, table, options.decode)
                                             : dec(table, options.decode);
    p.amr = tree_to_amr(relexicalize_tree(r.tree, lexicon, &records), records);
    p.status = status_name(r.status);
    p.ok = true;
    p.result = std::move(r);
  } catch (const DecodeError& e) {
    p.amr = dummy_graph();
    p.status = "error";
    p.error = e.what();
  }
  return p;
}

}  // namespace

ParsedSentence parse_sentence(const CountScorer& scorer, const std::vector<Token>& tokens,
                              const ParseOptions& options) {
  Preprocessed pre = preprocess(tokens, nullptr, &scorer.gazetteer());
  if (pre.tokens.empty()) {
    ParsedSentence p;
    p.amr = dummy_graph();
    p.status = "error";
    p.error = "empty sentence";
    return p;
  }
  ScoreTable table = scorer.score_sentence(pre.tokens, options.decode.k);
  return run_decoder(table, options, &scorer.lexicon(), pre.records);
}

ParsedSentence parse_table(const ScoreTable& table, const ParseOptions& options) {
  return run_decoder(table, options, nullptr, {});
}

std::optional<double> ParseStats::supertag_accuracy() const {
  if (!supertags_total || *supertags_total == 0) return std::nullopt;
  return static_cast<double>(*supertags_correct) / static_cast<double>(*supertags_total);
}

std::string ParseStats::to_text() const {
  std::ostringstream os;
  os << "sentences=" << sentences << "\n";
  for (const auto& [st, n] : status) os << "status." << st << "=" << n << "\n";
  auto acc = supertag_accuracy();
  os << "supertag_accuracy=" << (acc ? fmt(*acc) : "n/a") << "\n";
  os << "smatch_precision=" << (smatch_precision ? fmt(*smatch_precision) : "n/a") << "\n";
  os << "smatch_recall=" << (smatch_recall ? fmt(*smatch_recall) : "n/a") << "\n";
  os << "smatch_f=" << (smatch_f ? fmt(*smatch_f) : "n/a") << "\n";
  return os.str();
}

std::pair<std::size_t, std::size_t> supertag_agreement(const AmDepTree& predicted, const AmDepTree& gold) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("supertag_agreement: length mismatch");
  std::size_t same = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& a = predicted.supertags[i];
    const auto& b = gold.supertags[i];
    if (a.has_value() != b.has_value()) continue;
    same += !a || render_asgraph(*a) == render_asgraph(*b);
  }
  return {same, gold.size()};
}

}  // namespace am
