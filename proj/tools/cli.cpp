#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "am/amr_corpus.hpp"
#include "am/convert.hpp"
#include "am/count_scorer.hpp"
#include "am/decode.hpp"
#include "am/error.hpp"
#include "am/preprocess.hpp"
#include "am/smatch.hpp"
#include "am/treebank.hpp"
#include "instances.hpp"

namespace amparse {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path);
}

// Sends text to a file, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
}

std::string fmt(double x, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string fmt_score(double x) {
  if (x == am::kNegInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

am::PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::string text = read_file(path);
  try {
    return am::read_pipeline_config(text);
  } catch (const am::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::vector<am::AmrEntry> load_corpus(const std::string& path, std::ostream& err) {
  std::vector<am::CorpusIssue> issues;
  auto entries = am::read_amr_corpus(read_file(path), &issues);
  for (const auto& i : issues)
    err << path << ":" << i.line << ": skipped" << (i.id.empty() ? "" : " " + i.id) << ": " << i.message << "\n";
  return entries;
}

// Gold graphs are compared without wiki edges, which the parser never
// predicts.
am::AsGraph eval_gold(const am::AsGraph& g) {
  am::AsGraph out = g;
  am::remove_wiki(out);
  return out;
}

// --- convert -------------------------------------------------------------

struct ConvertArgs {
  std::string corpus, output, stats, gold, policy;
  std::size_t jobs = 1;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  am::PipelineConfig config = load_config(a.policy);
  auto entries = load_corpus(a.corpus, err);
  am::ConvertResult r = am::convert_corpus(entries, config, a.jobs);
  for (const auto& s : r.sentences)
    if (!s.ok)
      err << "rejected " << (s.id.empty() ? "?" : s.id) << ": " << s.reason
          << (s.detail.empty() ? "" : " (" + s.detail + ")") << "\n";
  write_file(a.output, am::write_treebank(r.treebank));
  if (!a.gold.empty()) {
    std::vector<am::AmrEntry> gold;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!r.sentences[i].ok) continue;
      am::AmrEntry e = entries[i];
      e.amr = r.sentences[i].gold;
      gold.push_back(std::move(e));
    }
    write_file(a.gold, am::write_amr_corpus(gold));
  }
  emit(a.stats, r.stats.to_text(), out);
  return kOk;
}

// --- train ---------------------------------------------------------------

struct TrainArgs {
  std::string treebank, output;
  double lambda = 0.1, alpha = 1.0;
};

am::CountScorer train_from(const std::string& path, double lambda, double alpha) {
  am::ScorerOptions o;
  o.lambda = lambda;
  o.alpha = alpha;
  return am::CountScorer::train(am::read_treebank(read_file(path)), o);
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  if (a.lambda <= 0) throw UsageError("--lambda must be positive");
  write_file(a.output, train_from(a.treebank, a.lambda, a.alpha).to_json());
  out << "model=" << a.output << "\n";
  return kOk;
}

// --- parse ---------------------------------------------------------------

struct ParseArgs {
  std::string input, model, treebank, tables, output, derivations, status, stats, gold, gold_treebank;
  std::string decoder = "projective";
  std::size_t k = 4, guard_n = 10, jobs = 1, restarts = 4, max_items = 0;
  std::uint64_t seed = 0;
  double time_limit = 0.0;
  bool retry = false;
};

int cmd_parse(const ParseArgs& a, std::ostream& out, std::ostream& err) {
  if (a.k == 0) throw UsageError("--k must be at least 1");
  try {
    am::decoder_named(a.decoder);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  int sources = !a.model.empty() + !a.treebank.empty() + !a.tables.empty();
  if (sources != 1) throw UsageError("give exactly one of --model, --treebank, --tables");

  am::ParseOptions po;
  po.decoder = a.decoder;
  po.decode.k = a.k;
  po.decode.guard_n = a.guard_n;
  po.decode.max_items = a.max_items;
  po.decode.time_limit = a.time_limit;
  po.retry_decrement = a.retry;

  std::vector<am::AmrEntry> entries;
  std::vector<am::ScoreTable> tables;
  std::optional<am::CountScorer> scorer;
  if (!a.tables.empty()) {
    tables = am::read_score_tables(read_file(a.tables));
    for (const auto& t : tables) {
      am::AmrEntry e;
      e.tokens = t.tokens();
      entries.push_back(std::move(e));
    }
  } else {
    if (a.input.empty()) throw UsageError("parse needs an input corpus");
    entries = load_corpus(a.input, err);
    if (!a.model.empty()) {
      std::string text = read_file(a.model);
      try {
        scorer = am::CountScorer::from_json(text);
      } catch (const am::ParseError& e) {
        throw UsageError(a.model + ": " + e.what());
      }
    } else {
      scorer = train_from(a.treebank, 0.1, 1.0);
    }
  }

  std::vector<am::ParsedSentence> parsed(entries.size());
  am::parallel_for(entries.size(), a.jobs, [&](std::size_t i) {
    parsed[i] = scorer ? am::parse_sentence(*scorer, entries[i].tokens, po) : am::parse_table(tables[i], po);
  });

  std::ostringstream amrs, status;
  am::Treebank derivs;
  am::ParseStats stats;
  stats.sentences = entries.size();
  status << "index\tid\tstatus\tscore\topen_sources\terror\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& p = parsed[i];
    const auto& e = entries[i];
    ++stats.status[p.status];
    if (!e.id.empty()) amrs << "# ::id " << e.id << "\n";
    amrs << "# ::snt";
    for (const auto& t : e.tokens) amrs << " " << t.form;
    amrs << "\n# ::status " << p.status << "\n" << am::render_amr(p.amr) << "\n\n";
    status << i + 1 << "\t" << (e.id.empty() ? "-" : e.id) << "\t" << p.status << "\t"
           << (p.result ? fmt_score(p.result->score) : "-") << "\t"
           << (p.result ? std::to_string(p.result->open_sources) : "-") << "\t"
           << (p.error.empty() ? "-" : p.error) << "\n";
    if (!p.ok) err << "sentence " << i + 1 << ": " << p.error << "; dummy graph used\n";
    if (p.result) {
      am::TreebankEntry te;
      if (!e.id.empty()) te.comments.push_back("::id " + e.id);
      te.comments.push_back("::status " + p.status);
      te.tree = p.result->tree;
      derivs.sentences.push_back(std::move(te));
    }
  }

  // Gold AMRs: --gold, else whatever the input corpus carries.
  std::vector<am::AmrEntry> gold_entries;
  if (!a.gold.empty()) gold_entries = load_corpus(a.gold, err);
  else if (std::all_of(entries.begin(), entries.end(), [](const am::AmrEntry& e) { return e.amr.has_value(); }) &&
           !entries.empty())
    gold_entries = entries;
  if (!gold_entries.empty()) {
    if (gold_entries.size() != entries.size())
      throw IoError("gold has " + std::to_string(gold_entries.size()) + " graphs for " +
                    std::to_string(entries.size()) + " sentences");
    std::vector<am::AsGraph> pred, gold;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!gold_entries[i].amr) throw IoError("gold entry " + std::to_string(i + 1) + " has no graph");
      pred.push_back(parsed[i].amr);
      gold.push_back(eval_gold(*gold_entries[i].amr));
    }
    am::SmatchOptions so;
    so.seed = a.seed;
    so.restarts = a.restarts;
    auto c = am::smatch_corpus(pred, gold, so);
    stats.smatch_precision = c.precision();
    stats.smatch_recall = c.recall();
    stats.smatch_f = c.f();
  }
  if (!a.gold_treebank.empty()) {
    am::Treebank gtb = am::read_treebank(read_file(a.gold_treebank));
    if (gtb.sentences.size() != entries.size()) throw IoError("gold treebank size differs from input");
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& g = gtb.sentences[i].tree;
      if (!parsed[i].result || parsed[i].result->tree.size() != g.size()) {
        total += g.size();
        continue;
      }
      auto [c, t] = am::supertag_agreement(parsed[i].result->tree, g);
      correct += c;
      total += t;
    }
    stats.supertags_correct = correct;
    stats.supertags_total = total;
  }

  emit(a.output, amrs.str(), out);
  if (!a.derivations.empty()) write_file(a.derivations, am::write_treebank(derivs));
  if (!a.status.empty()) emit(a.status, status.str(), out);
  if (!a.stats.empty()) emit(a.stats, stats.to_text(), out);
  return kOk;
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string pred, gold;
  std::uint64_t seed = 0;
  std::size_t restarts = 4;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  auto pred = load_corpus(a.pred, err);
  auto gold = load_corpus(a.gold, err);
  if (pred.size() != gold.size())
    throw IoError("prediction has " + std::to_string(pred.size()) + " graphs, gold has " +
                  std::to_string(gold.size()));
  am::SmatchOptions so;
  so.seed = a.seed;
  so.restarts = a.restarts;
  am::SmatchCounts total;
  out << "index\tid\tprecision\trecall\tf\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred[i].amr || !gold[i].amr) throw IoError("entry " + std::to_string(i + 1) + " has no graph");
    auto c = am::smatch(*pred[i].amr, *gold[i].amr, so);
    total += c;
    out << i + 1 << "\t" << (gold[i].id.empty() ? "-" : gold[i].id) << "\t" << fmt(c.precision()) << "\t"
        << fmt(c.recall()) << "\t" << fmt(c.f()) << "\n";
  }
  out << "precision=" << fmt(total.precision()) << "\n"
      << "recall=" << fmt(total.recall()) << "\n"
      << "f=" << fmt(total.f()) << "\n";
  return kOk;
}

// --- npc -----------------------------------------------------------------

struct NpcArgs {
  std::string digraph;
  std::size_t sweep = 0;
};

am::Digraph digraph_from_bits(std::size_t n, std::uint64_t bits) {
  am::Digraph g;
  g.n = n;
  std::size_t b = 0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t k = 1; k <= n; ++k) {
      if (i == k) continue;
      if (bits >> b & 1) g.arcs.emplace_back(i, k);
      ++b;
    }
  return g;
}

int cmd_npc(const NpcArgs& a, std::ostream& out) {
  if (a.sweep > 0) {
    if (a.sweep < 2 || a.sweep > 6) throw UsageError("--sweep takes n in 2..6");
    std::size_t total = 0, agree = 0, yes = 0;
    for (std::size_t n = 2; n <= a.sweep; ++n) {
      const std::uint64_t count = std::uint64_t{1} << (n * (n - 1));
      std::size_t t = 0, ag = 0;
      for (std::uint64_t bits = 0; bits < count; ++bits) {
        am::Digraph g = digraph_from_bits(n, bits);
        auto v = am::decide_hamiltonian(g);
        bool truth = am::has_hamiltonian_path_to_last(g);
        ++t;
        ag += v.yes == truth && (!truth || v.score == static_cast<double>(n - 1));
        yes += truth;
      }
      out << "n=" << n << " digraphs=" << t << " agree=" << ag << "\n";
      total += t;
      agree += ag;
    }
    out << "digraphs=" << total << "\nyes_instances=" << yes << "\nagreement=" << fmt(100.0 * agree / total, 2)
        << "%\n";
    return agree == total ? kOk : kInternal;
  }
  if (a.digraph.empty()) throw UsageError("npc needs a digraph file or --sweep");
  am::Digraph g;
  try {
    g = am::read_digraph(read_file(a.digraph));
  } catch (const am::FormatError& e) {
    throw IoError(a.digraph + ": " + e.what());
  }
  if (g.n < 2) throw UsageError("the reduction needs at least two nodes");
  am::ScoreTable t = am::build_hamiltonian_instance(g);
  out << "instance=" << am::write_score_table(t);
  if (am::write_score_table(t).back() != '\n') out << "\n";
  auto v = am::decide_hamiltonian(g);
  out << "nodes=" << g.n << "\narcs=" << g.arcs.size() << "\nscore=" << fmt_score(v.score)
      << "\ntarget=" << g.n - 1 << "\nverdict=" << (v.yes ? "YES" : "NO") << "\n";
  return kOk;
}

// --- oracle-compare ------------------------------------------------------

struct OracleArgs {
  std::string tables, output;
  std::size_t random = 0, n = 5, k = 3, guard_n = 10;
  std::uint64_t seed = 0;
};

int cmd_oracle_compare(const OracleArgs& a, std::ostream& out) {
  std::vector<am::ScoreTable> tables;
  if (!a.tables.empty()) {
    tables = am::read_score_tables(read_file(a.tables));
  } else if (a.random > 0) {
    if (a.n == 0 || a.n > a.guard_n) throw UsageError("--n must be in 1..guard");
    std::mt19937_64 rng(a.seed);
    InstanceShape shape;
    shape.n = a.n;
    shape.candidates = a.k;
    for (std::size_t i = 0; i < a.random; ++i) tables.push_back(random_instance(rng, shape));
  } else {
    throw UsageError("oracle-compare needs --tables or --random");
  }
  am::DecodeOptions opts;
  opts.k = a.k;
  opts.guard_n = a.guard_n;

  const char* names[] = {"exact", "projective", "fixed-tree", "type-unaware"};
  std::ostringstream csv;
  csv << "instance,n,exact,projective,fixed_tree,type_unaware,exact_is_projective,projective_eq_exact,"
         "items_exact,items_projective,items_fixed_tree\n";
  std::size_t above = 0, proj_cases = 0, proj_eq = 0;
  double items[3] = {0, 0, 0};
  std::size_t item_runs[3] = {0, 0, 0};
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::optional<am::DecodeResult> r[4];
    for (int d = 0; d < 4; ++d) {
      try {
        r[d] = am::decoder_named(names[d])(tables[i], opts);
      } catch (const am::DecodeError&) {
      }
    }
    auto cell = [&](int d) { return r[d] ? fmt_score(r[d]->score) : std::string("fail"); };
    bool exact_proj = r[0] && am::is_projective(r[0]->tree);
    bool eq = r[0] && r[1] && r[0]->score == r[1]->score;
    for (int d = 1; d < 3; ++d)
      if (r[0] && r[d] && r[d]->status == am::DecodeStatus::kExactGoal &&
          r[0]->status == am::DecodeStatus::kExactGoal && r[d]->score > r[0]->score)
        ++above;
    if (exact_proj && r[0]->status == am::DecodeStatus::kExactGoal) {
      ++proj_cases;
      proj_eq += eq;
    }
    for (int d = 0; d < 3; ++d)
      if (r[d]) {
        items[d] += static_cast<double>(r[d]->stats.items);
        ++item_runs[d];
      }
    csv << i + 1 << "," << tables[i].size() << "," << cell(0) << "," << cell(1) << "," << cell(2) << "," << cell(3)
        << "," << (exact_proj ? 1 : 0) << "," << (eq ? 1 : 0) << "," << (r[0] ? r[0]->stats.items : 0) << ","
        << (r[1] ? r[1]->stats.items : 0) << "," << (r[2] ? r[2]->stats.items : 0) << "\n";
  }
  emit(a.output, csv.str(), out);
  auto mean = [&](int d) { return item_runs[d] ? items[d] / item_runs[d] : 0.0; };
  out << "instances=" << tables.size() << "\n"
      << "approx_above_exact=" << above << "\n"
      << "projective_optimum_cases=" << proj_cases << "\n"
      << "projective_equal=" << proj_eq << "\n"
      << "mean_items_exact=" << fmt(mean(0), 1) << "\n"
      << "mean_items_projective=" << fmt(mean(1), 1) << "\n"
      << "mean_items_fixed_tree=" << fmt(mean(2), 1) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"amparse: AM dependency parsing toolkit"};
  app.require_subcommand(1);

  ConvertArgs ca;
  auto* convert = app.add_subcommand("convert", "AMR corpus to AM treebank");
  convert->add_option("corpus", ca.corpus, "AMR corpus")->required();
  convert->add_option("-o,--output", ca.output, "treebank file")->required();
  convert->add_option("--stats", ca.stats, "stats file (default: stdout)");
  convert->add_option("--gold", ca.gold, "write the gold AMRs the accepted trees evaluate to");
  convert->add_option("--policy", ca.policy, "pipeline config JSON");
  convert->add_option("--jobs", ca.jobs, "worker threads")->check(CLI::PositiveNumber);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "train the count scorer on a treebank");
  train->add_option("treebank", ta.treebank)->required();
  train->add_option("-o,--output", ta.output, "model JSON")->required();
  train->add_option("--lambda", ta.lambda, "add-lambda smoothing");
  train->add_option("--alpha", ta.alpha, "backoff weight");

  ParseArgs pa;
  auto* parse = app.add_subcommand("parse", "parse sentences into AMRs");
  parse->add_option("input", pa.input, "sentences in corpus format (graphs optional)");
  parse->add_option("--model", pa.model, "trained scorer JSON");
  parse->add_option("--treebank", pa.treebank, "train a scorer on this treebank first");
  parse->add_option("--tables", pa.tables, "score tables instead of a scorer");
  parse->add_option("-o,--output", pa.output, "AMR output (default: stdout)");
  parse->add_option("--derivations", pa.derivations, "treebank of decoded trees");
  parse->add_option("--status", pa.status, "per-sentence status table");
  parse->add_option("--stats", pa.stats, "key=value summary");
  parse->add_option("--gold", pa.gold, "gold AMR corpus for Smatch");
  parse->add_option("--gold-treebank", pa.gold_treebank, "gold treebank for supertag accuracy");
  parse->add_option("--decoder", pa.decoder, "projective|fixed-tree|exact|type-unaware");
  parse->add_option("--k", pa.k, "supertags per token");
  parse->add_flag("--retry-decrement", pa.retry, "on timeout retry with k-1");
  parse->add_option("--time-limit", pa.time_limit, "seconds per decode (0: none)");
  parse->add_option("--max-items", pa.max_items, "chart items per decode (0: none)");
  parse->add_option("--guard-n", pa.guard_n, "longest sentence the exact decoder accepts");
  parse->add_option("--jobs", pa.jobs)->check(CLI::PositiveNumber);
  parse->add_option("--seed", pa.seed, "Smatch seed");
  parse->add_option("--restarts", pa.restarts, "Smatch random restarts");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Smatch between two AMR files");
  eval->add_option("pred", ea.pred)->required();
  eval->add_option("gold", ea.gold)->required();
  eval->add_option("--seed", ea.seed);
  eval->add_option("--restarts", ea.restarts);

  NpcArgs na;
  auto* npc = app.add_subcommand("npc", "Hamiltonian path via the decoding reduction");
  npc->add_option("digraph", na.digraph, "lines \"i k\"");
  npc->add_option("--sweep", na.sweep, "check every digraph with 2..N nodes");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle-compare", "decoder scores against the exact decoder");
  oracle->add_option("--tables", oa.tables, "score tables (JSON)");
  oracle->add_option("--random", oa.random, "number of random instances");
  oracle->add_option("--n", oa.n, "tokens per random instance");
  oracle->add_option("--k", oa.k, "candidates per token");
  oracle->add_option("--guard-n", oa.guard_n);
  oracle->add_option("--seed", oa.seed);
  oracle->add_option("-o,--output", oa.output, "CSV (default: stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*convert) return cmd_convert(ca, out, err);
    if (*train) return cmd_train(ta, out);
    if (*parse) return cmd_parse(pa, out, err);
    if (*eval) return cmd_eval(ea, out, err);
    if (*npc) return cmd_npc(na, out);
    if (*oracle) return cmd_oracle_compare(oa, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const am::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const am::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace amparse
