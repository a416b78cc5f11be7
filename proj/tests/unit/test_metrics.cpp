#include <doctest.h>

#include <sstream>

#include "ctxspell/errors.hpp"
#include "ctxspell/metrics.hpp"
#include "oracles.hpp"

using namespace ctxspell;

namespace {

Words W(std::string_view s) {
  Words out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

UserVocabulary vocab_of(std::initializer_list<const char*> phrases) {
  std::vector<Phrase> ps;
  for (const char* p : phrases) ps.push_back(Phrase::normalize(p));
  return UserVocabulary(ps);
}

}  // namespace

TEST_CASE("wer: examples and empty reference") {
  CHECK(wer(W("a b"), W("a c")) == 0.5);
  CHECK(wer(W("a"), W("b c")) == 2.0);
  CHECK(wer(W("a b c"), W("a b c")) == 0.0);
  CHECK(wer(W("a b c d"), W("")) == 1.0);
  CHECK_THROWS_AS(wer(W(""), W("a")), InvalidInput);
}

TEST_CASE("align_words agrees with the recursive edit-distance oracle") {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    Words ref;
    Words hyp;
    for (int i = 0, n = rng.between(0, 7); i < n; ++i) ref.push_back(std::string(1, "abcd"[rng.below(4)]));
    for (int i = 0, n = rng.between(0, 7); i < n; ++i) hyp.push_back(std::string(1, "abcd"[rng.below(4)]));
    const auto a = align_words(ref, hyp);
    CHECK(a.errors() == oracle::word_edits(ref, hyp));
    int ref_used = 0;
    int hyp_used = 0;
    for (auto op : a.ops) {
      ref_used += op != WordAlignment::Op::kInsert;
      hyp_used += op != WordAlignment::Op::kDelete;
    }
    CHECK(ref_used == static_cast<int>(ref.size()));
    CHECK(hyp_used == static_cast<int>(hyp.size()));
  }
}

TEST_CASE("phrase matcher: longest non-overlapping occurrences") {
  const auto vocab = vocab_of({"tyne", "tyne wear", "wear derby"});
  const PhraseMatcher m(vocab);
  const auto occ = m.find_all(W("the tyne wear derby"));
  REQUIRE(occ.size() == 1);
  CHECK(occ[0].begin == 1);
  CHECK(occ[0].end == 3);
  CHECK(occ[0].id == 1);
  CHECK(m.any_intersecting(W("the tyne wear derby"), 3, 4));
  CHECK_FALSE(m.any_intersecting(W("the tyne wear derby"), 0, 1));
}

TEST_CASE("ideal_wer: only vocabulary errors are patched") {
  const auto vocab = vocab_of({"john koehn"});
  const auto ref = W("yesterday john koehn said the meeting went well for us");
  const auto base = W("yesterday jon cone said the meeting want well for us");
  CHECK(wer(ref, base) == doctest::Approx(0.3));
  CHECK(ideal_wer(ref, base, vocab) == doctest::Approx(0.1));
  CHECK(ideal_wer(ref, ref, vocab) == 0.0);
  CHECK(ideal_wer(W("a b"), W("a c"), vocab) == 0.5);
}

TEST_CASE("diff_keyword_counts: one of each outcome") {
  const auto vocab = vocab_of({"lucas", "schlaitdorf", "tyne wear", "koehn"});
  const PhraseMatcher m(vocab);
  const auto ref = W("lucas went to schlaitdorf near tyne wear with koehn");
  const auto base = W("lucas went to schleiddorf near tine where with koehn");
  const auto corr = W("lucas went to schlaitdorf near tine where with cone");
  CHECK(diff_keyword_counts(ref, base, corr, m) == EvalCounts{1, 1, 1, 1});
  const EvalCounts c{2, 1, 0, 3};
  CHECK(*recall(c) == doctest::Approx(2.0 / 3.0));
  CHECK(*precision(c) == 1.0);
  CHECK_FALSE(recall(EvalCounts{}).has_value());
  CHECK_FALSE(precision(EvalCounts{}).has_value());
}

TEST_CASE("diff_keyword_counts: unsupported corrections") {
  const auto vocab = vocab_of({"lucas"});
  const PhraseMatcher m(vocab);
  CHECK(diff_keyword_counts(W("we went home"), W("we went hole"), W("we went lucas"), m) == EvalCounts{0, 0, 1, 0});
  // Already in the baseline: not the corrector's doing.
  CHECK(diff_keyword_counts(W("we saw luke"), W("we saw lucas"), W("we saw lucas"), m) == EvalCounts{});
}

TEST_CASE("misrecognized and topk_recall") {
  const auto vocab = vocab_of({"john koehn", "lucas"});
  const PhraseMatcher m(vocab);
  const auto mis = misrecognized(W("hi john koehn and lucas"), W("hi jon cone and lucas"), m);
  REQUIRE(mis.size() == 1);
  CHECK(mis[0].phrase_id == 0);
  CHECK(mis[0].ref_begin == 1);
  CHECK(mis[0].ref_end == 3);
  CHECK(mis[0].hyp_begin == 1);
  CHECK(mis[0].hyp_end == 3);

  CandidateHit hit;
  hit.phrase_id = 0;
  std::vector<RetrievalEvent> events(4);
  for (std::size_t i = 0; i < events.size(); ++i) events[i].phrase_id = static_cast<PhraseId>(i % 2);
  events[0].candidates.candidates.push_back(hit);
  events[2].candidates.candidates.push_back(hit);
  events[1].candidates.candidates.push_back(hit);
  CHECK(*topk_recall(events) == 0.5);
  CHECK_FALSE(topk_recall({}).has_value());
}

TEST_CASE("evaluate and write_report") {
  const auto vocab = vocab_of({"lucas"});
  const std::vector<UtteranceTriple> triples = {
      {"u1", W("we met lucas"), W("we met lukas"), W("we met lucas")},
      {"u2", W("all fine"), W("all fine"), W("all fine")},
  };
  const auto report = evaluate(triples, vocab);
  CHECK(report.utterances == 2);
  CHECK(report.reference_words == 5);
  CHECK(report.baseline_wer == doctest::Approx(0.2));
  CHECK(report.corrected_wer == 0.0);
  CHECK(report.counts == EvalCounts{1, 0, 0, 0});
  std::ostringstream out;
  write_report(out, report);
  CHECK(out.str() ==
        "utterances\treference_words\tbaseline_wer_pct\tspellcheck_wer_pct\tideal_wer_pct\trecall_pct\t"
        "precision_pct\ttop10_recall_pct\tbetter\tmissed\tfp\tunchanged_correct\n"
        "2\t5\t20.00\t0.00\t0.00\t100.00\t100.00\tNA\t1\t0\t0\t0\n");
}
