// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "ctxspell/alignment.hpp"
#include "ctxspell/corpus.hpp"
#include "ctxspell/corruptor.hpp"
#include "ctxspell/dataset.hpp"
#include "ctxspell/io.hpp"
#include "ctxspell/matcher.hpp"
#include "ctxspell/metrics.hpp"
#include "ctxspell/ngram_mappings.hpp"
#include "ctxspell/pipeline.hpp"
#include "ctxspell/retrieval.hpp"
#include "ctxspell/synth.hpp"
#include "ctxspell/vocab_index.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace ctxspell;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int number, std::string_view name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) {
    o.pass = false;
    o.detail += " (over time limit " + io::format_fixed(limit_s, 0) + "s)";
  }
  failures += !o.pass;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << number << "  " << std::left << std::setw(34)
            << name << std::right << std::setw(8) << io::format_fixed(secs, 2) << "s  " << o.detail << std::endl;
}

std::string fmt(double v) { return io::format_fixed(v, 4); }

std::map<std::string, double> load_baselines(const fs::path& path) {
  std::map<std::string, double> out;
  for (const auto& line : io::read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = io::split(line, '\t');
    if (f.size() == 2) out[std::string(f[0])] = io::parse_double(f[1], 0);
  }
  return out;
}

// 1 ---------------------------------------------------------------------------

Outcome alignment_oracle() {
  Rng rng(1);
  const std::string alphabet = "abcdef";
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    EditCostTable costs = EditCostTable::unit();
    if (trial % 2) {
      for (char a : alphabet) {
        costs.set_del(a, rng.between(1, 4));
        costs.set_ins(a, rng.between(1, 4));
        for (char b : alphabet) {
          if (a != b) costs.set_sub(a, b, rng.between(1, 4));
        }
      }
    }
    const auto src = oracle::random_string(rng, 1, 12, alphabet);
    const auto dst = oracle::random_string(rng, 0, 12, alphabet);
    const auto got = align_pair(Phrase::from_normalized(src), Phrase::from_normalized(dst), costs);
    const auto want = oracle::align(src, dst, costs);
    const std::vector<EditOp> forward(want.backward.rbegin(), want.backward.rend());
    mismatches += got.cost != want.cost || got.path != forward;
  }
  return {mismatches == 0, "1000 pairs, mismatches=" + std::to_string(mismatches)};
}

// 2 ---------------------------------------------------------------------------

Outcome mapping_exactness() {
  std::vector<ParallelPair> corpus;
  auto add = [&](const char* a, const char* b, int n) {
    for (int i = 0; i < n; ++i) corpus.push_back({Phrase::from_normalized(a), Phrase::from_normalized(b)});
  };
  add("ab", "ab", 60);
  add("ab", "ax", 1);
  add("cd", "cd", 49);
  add("cd", "ce", 1);
  const auto ms = extract_mappings(align_corpus(corpus, EditCostTable::unit()));
  // Hand-counted windows. b->x (1/61) and "a b"->"a x" (1/61) fall under the
  // threshold; d->e and "c d"->"c e" (1/50 = 0.02) survive it.
  const std::set<std::tuple<std::string, std::string, std::int64_t, std::int64_t>> want = {
      {"a", "a", 61, 61},     {"b", "b", 60, 61},     {"a b", "a b", 60, 61}, {"c", "c", 50, 50},
      {"d", "d", 49, 50},     {"d", "e", 1, 50},      {"c d", "c d", 49, 50}, {"c d", "c e", 1, 50},
  };
  std::set<std::tuple<std::string, std::string, std::int64_t, std::int64_t>> got;
  bool ratios = true;
  for (const auto& m : ms) {
    got.insert({m.src, m.dst, m.joint_count, m.src_count});
    ratios &= std::abs(m.cond_prob() - static_cast<double>(m.joint_count) / static_cast<double>(m.src_count)) <= 1e-12;
  }
  const auto all = extract_mappings(align_corpus(corpus, EditCostTable::unit()), kDefaultMaxNgram, 0.0);
  std::set<std::pair<std::string, std::string>> pruned;
  for (const auto& m : all) {
    if (!got.count({m.src, m.dst, m.joint_count, m.src_count})) pruned.insert({m.src, m.dst});
  }
  const std::set<std::pair<std::string, std::string>> want_pruned = {{"b", "x"}, {"a b", "a x"}};
  const bool ok = got == want && ratios && pruned == want_pruned;
  return {ok, std::to_string(got.size()) + " rows kept, " + std::to_string(pruned.size()) + " pruned"};
}

// 3 ---------------------------------------------------------------------------

Outcome retrieval_oracle() {
  Rng rng(3);
  std::vector<Phrase> phrases;
  std::vector<std::string> texts;
  std::set<std::string> seen;
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  while (phrases.size() < 100) {
    std::string s = oracle::random_string(rng, 4, 9, letters);
    if (rng.chance(0.3)) s += "_" + oracle::random_string(rng, 3, 7, letters);
    if (!seen.insert(s).second) continue;
    phrases.push_back(Phrase::from_normalized(s));
    texts.push_back(s);
  }
  const std::vector<NgramMapping> mappings = {
      {"c", "k", 30, 100}, {"p h", "f", 20, 50}, {"e i", "a i", 10, 40}, {"t", "d", 15, 100},
      {"s", "z", 12, 100}, {"o u", "u", 8, 30},  {"a", "e", 9, 100},     {"n g", "n", 5, 60}};
  const UserVocabulary vocab(phrases);
  const auto index = build_index(vocab, mappings);
  const CorruptionModel channel(mappings, 1.0, 3);
  const RetrievalConfig cfg;
  int mismatches = 0;
  int nonempty = 0;
  for (int f = 0; f < 200; ++f) {
    std::string text = oracle::random_string(rng, 3, 8, letters) + "_" +
                       channel.corrupt(phrases[rng.below(phrases.size())], rng).str() + "_" +
                       oracle::random_string(rng, 3, 8, letters);
    const auto frag = Phrase::from_normalized(text);
    const auto got = retrieve(Fragment::of(frag), index, cfg);
    const auto want = oracle::retrieve(frag.str(), texts, mappings, 2, 5, 4, kDefaultMinProb, cfg);
    nonempty += !want.empty();
    bool same = got.candidates.size() == want.size();
    for (std::size_t r = 0; same && r < want.size(); ++r) {
      const auto& c = got.candidates[r];
      same = c.phrase_id == want[r].id && c.hit_count == want[r].hits && c.coverage == want[r].coverage &&
             c.window_begin == want[r].begin && c.window_end == want[r].end;
    }
    mismatches += !same;
  }
  return {mismatches == 0,
          "200 fragments, mismatches=" + std::to_string(mismatches) + ", non-empty=" + std::to_string(nonempty)};
}

// 4, 5, 6 ---------------------------------------------------------------------

struct BenchmarkRun {
  synth::Benchmark bench;
  double ngram_recall = 0.0;
  double levenshtein_recall = 0.0;
  std::size_t events = 0;
  EvalReport report;
  bool ideal_below_baseline_everywhere = true;
};

BenchmarkRun& benchmark_run() {
  static BenchmarkRun run = [] {
    BenchmarkRun r{synth::make_benchmark(), 0.0, 0.0, 0, {}, true};
    const auto& b = r.bench;
    const PhraseMatcher matcher(b.vocab);
    const PipelineConfig pc;
    std::vector<RetrievalEvent> ngram;
    std::vector<RetrievalEvent> lev;
    for (const auto& u : b.utterances) {
      auto e1 = retrieval_events(u.reference, u.baseline, matcher, pc,
                                 [&](const Fragment& f) { return retrieve(f, b.index, pc.retrieval); });
      auto e2 = retrieval_events(u.reference, u.baseline, matcher, pc, [&](const Fragment& f) {
        return levenshtein_retrieve(f, b.vocab, pc.retrieval.top_k);
      });
      ngram.insert(ngram.end(), e1.begin(), e1.end());
      lev.insert(lev.end(), e2.begin(), e2.end());
    }
    r.events = ngram.size();
    r.ngram_recall = topk_recall(ngram).value_or(0.0);
    r.levenshtein_recall = topk_recall(lev).value_or(0.0);

    const Corrector corrector(b.index, b.costs.relative_to_identity(), pc);
    std::vector<UtteranceTriple> triples;
    for (const auto& u : b.utterances) {
      triples.push_back({u.id, u.reference, u.baseline, corrector.correct(u.id, u.baseline).words});
      if (ideal_wer(u.reference, u.baseline, b.vocab) > wer(u.reference, u.baseline)) {
        r.ideal_below_baseline_everywhere = false;
      }
    }
    r.report = evaluate(triples, b.vocab, r.ngram_recall);
    return r;
  }();
  return run;
}

Outcome retrieval_benchmark(double floor) {
  const auto& r = benchmark_run();
  const bool a = r.ngram_recall >= r.levenshtein_recall;
  const bool b = r.ngram_recall >= floor;
  return {a && b, "events=" + std::to_string(r.events) + " ngram_top10=" + fmt(r.ngram_recall) +
                      " levenshtein_top10=" + fmt(r.levenshtein_recall) + " (a:" + (a ? "ok" : "fail") +
                      ") floor=" + fmt(floor) + " (b:" + (b ? "ok" : "fail") + ")"};
}

Outcome end_to_end() {
  const auto& r = benchmark_run();
  const auto& rep = r.report;
  const bool ok = rep.corrected_wer < rep.baseline_wer && rep.corrected_wer >= rep.ideal_wer &&
                  r.ideal_below_baseline_everywhere;
  return {ok, "baseline_wer=" + fmt(rep.baseline_wer) + " corrected_wer=" + fmt(rep.corrected_wer) +
                  " ideal_wer=" + fmt(rep.ideal_wer) +
                  " ideal<=baseline per utterance=" + (r.ideal_below_baseline_everywhere ? "yes" : "no")};
}

Outcome recall_gap() {
  const auto& r = benchmark_run();
  const double rec = r.report.recall.value_or(0.0);
  return {r.report.recall.has_value() && rec <= r.ngram_recall,
          "diff_keyword_recall=" + fmt(rec) + " top10_recall=" + fmt(r.ngram_recall) +
              " precision=" + fmt(r.report.precision.value_or(0.0))};
}

// 7 ---------------------------------------------------------------------------

Outcome wer_oracle() {
  Rng rng(7);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Words ref;
    Words hyp;
    for (int i = 0, n = rng.between(1, 10); i < n; ++i) ref.push_back(std::string(1, "abcde"[rng.below(5)]));
    for (int i = 0, n = rng.between(0, 10); i < n; ++i) hyp.push_back(std::string(1, "abcde"[rng.below(5)]));
    const double want = static_cast<double>(oracle::word_edits(ref, hyp)) / static_cast<double>(ref.size());
    mismatches += wer(ref, hyp) != want;
  }
  return {mismatches == 0, "1000 pairs, mismatches=" + std::to_string(mismatches)};
}

// 8 ---------------------------------------------------------------------------

Words words_of(std::string_view s) { return Phrase::normalize(s).words(); }

Outcome metric_fixture() {
  const UserVocabulary vocab({Phrase::normalize("lucas"), Phrase::normalize("schlaitdorf"),
                              Phrase::normalize("tyne wear"), Phrase::normalize("koehn")});
  const PhraseMatcher matcher(vocab);
  const std::vector<std::array<const char*, 3>> fixture = {
      // reference, baseline, corrected
      {"lucas went home early", "lucas went home early", "lucas went home early"},     // unchanged_correct
      {"we drove to schlaitdorf", "we drove to schleiddorf", "we drove to schlaitdorf"},  // better
      {"the tyne wear derby", "the tine where derby", "the tine where derby"},           // missed
      {"ask koehn about it", "ask koehn about it", "ask cone about it"},                 // fp
      {"nothing to see here", "nothing to sea here", "nothing to sea here"},             // no vocabulary
  };
  EvalCounts total;
  for (const auto& [ref, base, corr] : fixture) {
    total += diff_keyword_counts(words_of(ref), words_of(base), words_of(corr), matcher);
  }
  const auto rec = recall(total);
  const auto prec = precision(total);
  const bool ok = total == EvalCounts{1, 1, 1, 1} && rec && prec && *rec == 0.5 && *prec == 0.5;
  return {ok, "(better,missed,fp,unchanged)=(" + std::to_string(total.better) + "," + std::to_string(total.missed) +
                  "," + std::to_string(total.fp) + "," + std::to_string(total.unchanged_correct) +
                  ") recall=" + fmt(rec.value_or(-1)) + " precision=" + fmt(prec.value_or(-1))};
}

// 9, 10 -----------------------------------------------------------------------

std::vector<ContextSentence> benchmark_contexts(const synth::Benchmark& b) {
  std::vector<ContextSentence> out;
  for (const auto& u : b.utterances) {
    const auto target = b.vocab[u.phrase_id].words();
    const auto it = std::search(u.reference.begin(), u.reference.end(), target.begin(), target.end());
    if (it == u.reference.end()) continue;
    ContextSentence c;
    int start = -1;
    for (auto w = u.reference.begin(); w != u.reference.end(); ++w) {
      if (!c.sentence.empty()) c.sentence += ' ';
      if (w == it) start = static_cast<int>(c.sentence.size());
      c.sentence += *w;
      if (w == it + static_cast<std::ptrdiff_t>(target.size()) - 1) c.char_end = static_cast<int>(c.sentence.size());
    }
    c.char_start = start;
    c.phrase = b.vocab[u.phrase_id];
    out.push_back(std::move(c));
  }
  return out;
}

Outcome dataset_contract() {
  const auto& b = benchmark_run().bench;
  const auto contexts = benchmark_contexts(b);
  const CorruptionModel channel(b.mappings, 1.0, 9);
  const auto examples = build_dataset(contexts, b.vocab, channel, b.index, 10000, {}, 9, 4);
  long long clean = 0;
  long long invalid = 0;
  std::array<long long, kCandidateSlots> slots{};
  for (const auto& ex : examples) {
    try {
      ex.validate();
    } catch (const std::exception&) {
      ++invalid;
    }
    if (ex.correct_slot == 0) {
      ++clean;
    } else {
      ++slots[static_cast<std::size_t>(ex.correct_slot - 1)];
    }
  }
  const double expected = static_cast<double>(examples.size() - static_cast<std::size_t>(clean)) / kCandidateSlots;
  double chi2 = 0.0;
  for (long long s : slots) chi2 += (static_cast<double>(s) - expected) * (static_cast<double>(s) - expected) / expected;
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(kCandidateSlots - 1), chi2));
  const bool ok = examples.size() == 10000 && clean == 5000 && invalid == 0 && p > 0.01;
  return {ok, "examples=" + std::to_string(examples.size()) + " clean=" + std::to_string(clean) +
                  " invalid=" + std::to_string(invalid) + " slot chi2=" + fmt(chi2) + " p=" + fmt(p)};
}

double label_accuracy(const std::vector<TrainingExample>& examples, const EditCostTable& costs) {
  const NoisyChannelMatcher matcher(costs);
  long long exact = 0;
  for (const auto& ex : examples) {
    const auto tagged = matcher.tag(Fragment::of(ex.hyp), ex.candidates);
    exact += tagged.labels == ex.labels;
  }
  return static_cast<double>(exact) / static_cast<double>(examples.size());
}

Outcome matcher_reproduction(double recorded) {
  const auto& b = benchmark_run().bench;
  const auto contexts = benchmark_contexts(b);
  const auto costs = b.costs.relative_to_identity();
  const CorruptionModel identity(std::vector<NgramMapping>{}, 1.0, 10);
  const CorruptionModel channel(b.mappings, 1.0, 10);
  const auto clean_ds = build_dataset(contexts, b.vocab, identity, b.index, 2000, {}, 10, 4);
  const auto noisy_ds = build_dataset(contexts, b.vocab, channel, b.index, 2000, {}, 10, 4);
  const double identity_acc = label_accuracy(clean_ds, costs);
  const double channel_acc = label_accuracy(noisy_ds, costs);
  const bool ok = identity_acc == 1.0 && channel_acc >= recorded - 0.005;
  return {ok, "identity_label_accuracy=" + fmt(identity_acc) + " channel_label_accuracy=" + fmt(channel_acc) +
                  " recorded_baseline=" + fmt(recorded)};
}

// 11 --------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CTXSPELL_EXE + "\" " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const auto& b = benchmark_run().bench;
  const fs::path dir = fs::temp_directory_path() / ("ctxspell_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto in = [&](const std::string& name) { return (dir / name).string(); };
  {
    std::ofstream corpus(in("corpus.tsv"));
    write_corpus(corpus, b.training);
    std::ofstream vocab(in("vocab.txt"));
    for (const auto& p : b.vocab.phrases()) vocab << p.display() << '\n';
    std::vector<Utterance> ref;
    std::vector<Utterance> base;
    for (std::size_t i = 0; i < 200; ++i) {
      ref.push_back({b.utterances[i].id, b.utterances[i].reference});
      base.push_back({b.utterances[i].id, b.utterances[i].baseline});
    }
    std::ofstream r(in("ref.txt"));
    write_utterances(r, ref);
    std::ofstream h(in("hyp.txt"));
    write_utterances(h, base);
    std::ofstream ctx(in("contexts.tsv"));
    for (const auto& c : benchmark_contexts(b)) {
      ctx << c.sentence << '\t' << c.char_start << '\t' << c.char_end << '\t' << c.phrase.display() << '\n';
    }
  }
  struct Step {
    std::string name;
    std::string args;  // {R} is replaced by the run number
    std::vector<std::string> outputs;
  };
  const std::vector<Step> steps = {
      {"mappings-extract", "mappings-extract --corpus " + in("corpus.tsv") + " --out " + in("maps{R}.tsv"),
       {"maps{R}.tsv", "maps{R}.tsv.costs"}},
      {"index-build", "index-build --vocab " + in("vocab.txt") + " --mappings " + in("maps{R}.tsv") + " --out " +
                          in("index{R}.tsv"),
       {"index{R}.tsv"}},
      {"retrieve ngram", "retrieve --index " + in("index{R}.tsv") + " --input " + in("hyp.txt") + " --out " +
                             in("cands{R}.tsv"),
       {"cands{R}.tsv"}},
      {"retrieve levenshtein", "retrieve --method levenshtein --index " + in("index{R}.tsv") + " --input " +
                                   in("hyp.txt") + " --out " + in("lev{R}.tsv"),
       {"lev{R}.tsv"}},
      {"correct", "correct --index " + in("index{R}.tsv") + " --mappings " + in("maps{R}.tsv") + " --input " +
                      in("hyp.txt") + " --out " + in("corr{R}.txt") + " --trace " + in("trace{R}.tsv"),
       {"corr{R}.txt", "trace{R}.tsv"}},
      {"corrupt", "corrupt --phrases " + in("vocab.txt") + " --mappings " + in("maps{R}.tsv") +
                      " --seed 11 --jobs {R} --out " + in("corrupt{R}.tsv"),
       {"corrupt{R}.tsv"}},
      {"dataset-build", "dataset-build --contexts " + in("contexts.tsv") + " --vocab-pool " + in("vocab.txt") +
                            " --mappings " + in("maps{R}.tsv") + " --n 2000 --seed 12 --jobs {R} --out " +
                            in("ds{R}.tsv"),
       {"ds{R}.tsv"}},
      {"eval", "eval --ref " + in("ref.txt") + " --baseline " + in("hyp.txt") + " --corrected " + in("corr{R}.txt") +
                   " --vocab " + in("vocab.txt") + " --index " + in("index{R}.tsv") + " --report " +
                   in("report{R}.tsv"),
       {"report{R}.tsv"}},
  };
  auto subst = [](std::string s, int run) {
    for (std::size_t pos; (pos = s.find("{R}")) != std::string::npos;) s.replace(pos, 3, std::to_string(run));
    return s;
  };
  std::vector<std::string> bad;
  for (int run = 1; run <= 2; ++run) {
    for (const auto& step : steps) {
      if (run_cli(subst(step.args, run)) != 0) bad.push_back(step.name + " (exit)");
    }
  }
  for (const auto& step : steps) {
    for (const auto& out : step.outputs) {
      const auto a = slurp(dir / subst(out, 1));
      const auto c = slurp(dir / subst(out, 2));
      if (a.empty() || a != c) bad.push_back(step.name + " (" + subst(out, 1) + ")");
    }
  }
  fs::remove_all(dir);
  std::string detail = std::to_string(steps.size()) + " subcommands x 2 runs";
  if (!bad.empty()) {
    detail += "; differing or failed:";
    for (const auto& s : bad) detail += " " + s;
  }
  return {bad.empty(), detail};
}

}  // namespace

int main() {
  const auto baselines = load_baselines(CTXSPELL_ACCEPTANCE_BASELINES);
  const double floor = baselines.at("retrieval_top10_floor");
  const double channel_baseline = baselines.at("matcher_channel_label_accuracy");

  report(1, "alignment oracle equivalence", 10, alignment_oracle);
  report(2, "mapping extraction exactness", 1, mapping_exactness);
  report(3, "retrieval oracle equivalence", 30, retrieval_oracle);
  const auto t0 = std::chrono::steady_clock::now();
  benchmark_run();
  const double bench_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "      synthetic benchmark build and runs: " << io::format_fixed(bench_s, 2) << "s" << std::endl;
  report(4, "synthetic retrieval benchmark", 120 - bench_s, [&] { return retrieval_benchmark(floor); });
  report(5, "end-to-end WER ordering", 120 - bench_s, end_to_end);
  report(6, "recall gap ordering", 120 - bench_s, recall_gap);
  report(7, "WER exactness", 5, wer_oracle);
  report(8, "diff-keyword metric fixture", 1, metric_fixture);
  report(9, "dataset contract", 30, dataset_contract);
  report(10, "matcher gold-label reproduction", 60, [&] { return matcher_reproduction(channel_baseline); });
  report(11, "CLI determinism", 180, cli_determinism);
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
