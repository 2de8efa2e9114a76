#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace amparse;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l))
    if (l == line) return true;
  return false;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage and exit codes") {
    CHECK(run({}).code == kUsage);
    CHECK(run({"frobnicate"}).code == kUsage);
    CHECK(run({"--help"}).code == kOk);
    CHECK(run({"eval", "/nonexistent/a.amr", "/nonexistent/b.amr"}).code == kIo);
    CHECK(run({"parse", "--decoder", "magic", "--tables", fixture::data_path("adversarial_type_unaware.json")}).code ==
          kUsage);
    CHECK(run({"npc", "--sweep", "9"}).code == kUsage);
  }

  TEST_CASE("convert: empty corpus and malformed PENMAN") {
    auto dir = fixture::scratch("cli-convert");
    fixture::spit(dir / "empty.amr", "");
    auto r = run({"convert", (dir / "empty.amr").string(), "-o", (dir / "empty.tb").string()});
    CHECK(r.code == kOk);
    CHECK(fixture::slurp((dir / "empty.tb").string()).empty());
    CHECK(has_line(r.out, "sentences=0"));

    fixture::spit(dir / "bad.amr",
                  "# ::id good\n# ::snt boy\n(b / boy)\n\n# ::id broken\n# ::snt girl\n(g / girl :ARG0 zz)\n");
    auto b = run({"convert", (dir / "bad.amr").string(), "-o", (dir / "bad.tb").string()});
    CHECK(b.code == kOk);
    CHECK(b.err.find("broken") != std::string::npos);
    CHECK(has_line(b.out, "sentences=1"));
    CHECK(has_line(b.out, "accepted=1"));
  }

  TEST_CASE("convert, train, parse on the mini-corpus") {
    auto dir = fixture::scratch("cli-pipeline");
    const auto tb = (dir / "mini.tb").string(), model = (dir / "model.json").string(),
               out = (dir / "pred.amr").string();
    auto c = run({"convert", fixture::data_path("minicorpus.amr"), "-o", tb});
    REQUIRE(c.code == kOk);
    CHECK(has_line(c.out, "rejected=0"));
    REQUIRE(run({"train", tb, "-o", model}).code == kOk);
    // the input carries gold graphs, so --stats reports Smatch against them
    auto p = run({"parse", fixture::data_path("minicorpus.amr"), "--model", model, "-o", out, "--stats", "-"});
    REQUIRE(p.code == kOk);
    auto f = p.out.substr(p.out.find("smatch_f=") + 9);
    CHECK(std::stod(f) >= 0.95);
    auto self = run({"eval", out, out});
    CHECK(has_line(self.out, "f=1.0000"));
    // determinism, also under threads
    auto again = (dir / "pred2.amr").string();
    run({"parse", fixture::data_path("minicorpus.amr"), "--model", model, "-o", again, "--jobs", "3"});
    CHECK(fixture::slurp(again) == fixture::slurp(out));
  }

  TEST_CASE("parse: exact decoder on a long sentence hits the guard") {
    auto dir = fixture::scratch("cli-guard");
    std::string snt = "# ::id long\n# ::snt";
    for (int i = 0; i < 30; ++i) snt += " boy";
    fixture::spit(dir / "long.txt", snt + "\n");
    auto tb = (dir / "mini.tb").string();
    REQUIRE(run({"convert", fixture::data_path("minicorpus.amr"), "-o", tb}).code == kOk);
    auto r = run({"parse", (dir / "long.txt").string(), "--treebank", tb, "--decoder", "exact", "--status", "-"});
    CHECK(r.code == kOk);
    CHECK(r.out.find("amr-empty") != std::string::npos);
    CHECK(r.out.find("\terror\t") != std::string::npos);
    CHECK(r.out.find("guard") != std::string::npos);
  }

  TEST_CASE("parse: type-unaware shows subtree fallback") {
    auto r = run({"parse", "--tables", fixture::data_path("adversarial_type_unaware.json"), "--decoder",
                  "type-unaware", "--status", "-"});
    CHECK(r.code == kOk);
    CHECK(r.out.find("subtree-fallback") != std::string::npos);
  }

  TEST_CASE("eval: identical, disjoint, hand pair") {
    auto dir = fixture::scratch("cli-eval");
    fixture::spit(dir / "a.amr", "# ::snt x\n(w / want :ARG0 (b / boy))\n");
    fixture::spit(dir / "b.amr", "# ::snt x\n(w / want :ARG1 (b / boy))\n");
    fixture::spit(dir / "c.amr", "# ::snt x\n(d / dog)\n");
    auto a = (dir / "a.amr").string(), b = (dir / "b.amr").string(), c = (dir / "c.amr").string();
    CHECK(has_line(run({"eval", a, a}).out, "f=1.0000"));
    CHECK(has_line(run({"eval", a, c}).out, "f=0.0000"));
    auto h = run({"eval", a, b}).out;
    double f = std::stod(h.substr(h.find("\nf=") + 3));
    CHECK(f == doctest::Approx(0.667).epsilon(0.0015));
    CHECK(run({"eval", a, fixture::data_path("minicorpus.amr")}).code == kIo);
  }

  TEST_CASE("npc") {
    auto dir = fixture::scratch("cli-npc");
    fixture::spit(dir / "tri.txt", "1 2\n2 3\n3 1\n");
    fixture::spit(dir / "rev.txt", "2 1\n");
    fixture::spit(dir / "one.txt", "n 1\n");
    fixture::spit(dir / "bad.txt", "1 two\n");
    auto t = run({"npc", (dir / "tri.txt").string()});
    CHECK(t.code == kOk);
    CHECK(has_line(t.out, "verdict=YES"));
    CHECK(has_line(t.out, "score=2"));
    auto r = run({"npc", (dir / "rev.txt").string()});
    CHECK(has_line(r.out, "verdict=NO"));
    CHECK(run({"npc", (dir / "one.txt").string()}).code == kUsage);
    CHECK(run({"npc", (dir / "bad.txt").string()}).code == kIo);
    auto s = run({"npc", "--sweep", "4"});
    CHECK(s.code == kOk);
    CHECK(has_line(s.out, "agreement=100.00%"));
  }

  TEST_CASE("oracle-compare") {
    auto r = run({"oracle-compare", "--random", "20", "--n", "4", "--k", "2", "--seed", "1"});
    CHECK(r.code == kOk);
    CHECK(has_line(r.out, "approx_above_exact=0"));
  }
}
