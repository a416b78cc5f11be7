// ctxspell: command-line front end for the correction toolkit.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctxspell/alignment.hpp"
#include "ctxspell/corpus.hpp"
#include "ctxspell/corruptor.hpp"
#include "ctxspell/dataset.hpp"
#include "ctxspell/errors.hpp"
#include "ctxspell/io.hpp"
#include "ctxspell/metrics.hpp"
#include "ctxspell/ngram_mappings.hpp"
#include "ctxspell/parallel.hpp"
#include "ctxspell/pipeline.hpp"
#include "ctxspell/retrieval.hpp"
#include "ctxspell/run_config.hpp"
#include "ctxspell/vocab_index.hpp"

namespace fs = std::filesystem;
using namespace ctxspell;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kConfig = 3 };

int fail(Exit code, std::string_view kind, std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  std::cerr << "ctxspell: error: kind=" << kind << " exit=" << static_cast<int>(code) << " message=" << message
            << '\n';
  return code;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    io::write_file_atomic(path, content);
  }
}

std::vector<Phrase> load_phrase_lines(const fs::path& path) {
  std::vector<Phrase> out;
  std::size_t line_no = 0;
  for (const auto& line : io::read_lines(path)) {
    ++line_no;
    try {
      Phrase p = Phrase::normalize(line);
      if (!p.empty()) out.push_back(std::move(p));
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

void require_file(const std::string& path) {
  if (!fs::exists(path) || fs::is_directory(path)) throw InvalidInput("cannot open " + path);
}

std::string config_help() {
  const RunConfig defaults;
  std::ostringstream out;
  out << "Config keys (--config FILE with key=value lines, or --set key=value):\n";
  for (const auto& k : RunConfig::keys()) {
    out << "  " << k.key << " = " << defaults.get(k.key) << "\n      " << k.help << '\n';
  }
  out << "Exit codes: 0 ok, 1 usage, 2 input parse, 3 config.\n";
  return out.str();
}

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
  int jobs = 1;
};

RunConfig make_config(const Common& common) {
  RunConfig cfg;
  if (!common.config_file.empty()) {
    if (!fs::is_regular_file(common.config_file)) throw ConfigError("cannot open config file " + common.config_file);
    cfg.load(common.config_file);
  }
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

template <typename T>
void override_with(std::optional<T> flag, T& target) {
  if (flag) target = *flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual spelling correction for ASR transcripts"};
  app.footer(config_help());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_file, "key=value configuration file");
    sub->add_option("--set", common.overrides, "Override one config key (key=value); repeatable");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  };

  // mappings-extract
  std::string mx_corpus, mx_out, mx_costs_out;
  std::optional<int> mx_rounds, mx_max_len;
  std::optional<double> mx_min_prob;
  auto* mx = app.add_subcommand("mappings-extract", "Learn edit costs and n-gram mappings from a parallel corpus");
  mx->add_option("--corpus", mx_corpus, "Parallel corpus TSV (correct<TAB>corrupted)")->required();
  mx->add_option("--out", mx_out, "Mapping TSV to write")->required();
  mx->add_option("--costs-out", mx_costs_out, "Cost table to write (default: <out>.costs)");
  mx->add_option("--rounds", mx_rounds, "Re-estimation rounds (mappings.rounds)");
  mx->add_option("--max-len", mx_max_len, "Longest source n-gram (mappings.max_len)");
  mx->add_option("--min-prob", mx_min_prob, "Probability threshold (mappings.min_prob)");
  add_common(mx);

  // index-build
  std::string ib_vocab, ib_mappings, ib_out;
  auto* ib = app.add_subcommand("index-build", "Build the n-gram index of a user vocabulary");
  ib->add_option("--vocab", ib_vocab, "One phrase per line")->required();
  ib->add_option("--mappings", ib_mappings, "Mapping TSV")->required();
  ib->add_option("--out", ib_out, "Index file to write")->required();
  add_common(ib);

  // retrieve
  std::string rt_index, rt_input, rt_out, rt_method = "ngram";
  std::optional<int> rt_top_k;
  auto* rt = app.add_subcommand("retrieve", "Top-k candidate phrases per transcript fragment");
  rt->add_option("--index", rt_index, "Index file")->required();
  rt->add_option("--input", rt_input, "Transcript (id<TAB>text per line)")->required();
  rt->add_option("--out", rt_out, "Candidate TSV (default: stdout)");
  rt->add_option("--top-k", rt_top_k, "Candidates per fragment (retrieval.top_k)");
  rt->add_option("--method", rt_method, "ngram or levenshtein")->check(CLI::IsMember({"ngram", "levenshtein"}));
  add_common(rt);

  // correct
  std::string cr_index, cr_mappings, cr_costs, cr_input, cr_out, cr_trace;
  auto* cr = app.add_subcommand("correct", "Correct user-vocabulary phrases in a transcript");
  cr->add_option("--index", cr_index, "Index file")->required();
  cr->add_option("--mappings", cr_mappings, "Mapping TSV; its cost table is read from <mappings>.costs")
      ->required();
  cr->add_option("--costs", cr_costs, "Cost table (overrides the one next to --mappings)");
  cr->add_option("--input", cr_input, "Transcript (id<TAB>text per line)")->required();
  cr->add_option("--out", cr_out, "Corrected transcript (default: stdout)");
  cr->add_option("--trace", cr_trace, "Replacement trace TSV");
  add_common(cr);

  // corrupt
  std::string co_phrases, co_mappings, co_out;
  std::optional<std::uint64_t> co_seed;
  std::optional<double> co_intensity;
  auto* co = app.add_subcommand("corrupt", "Simulate recognition errors on a phrase list");
  co->add_option("--phrases", co_phrases, "One phrase per line")->required();
  co->add_option("--mappings", co_mappings, "Mapping TSV driving the channel")->required();
  co->add_option("--seed", co_seed, "Random seed (seed)");
  co->add_option("--intensity", co_intensity, "Non-identity mass scale (corrupt.intensity)");
  co->add_option("--out", co_out, "Parallel corpus TSV (default: stdout)");
  add_common(co);

  // dataset-build
  std::string ds_contexts, ds_pool, ds_mappings, ds_out;
  long long ds_n = 0;
  std::optional<double> ds_clean, ds_intensity;
  std::optional<std::uint64_t> ds_seed;
  auto* ds = app.add_subcommand("dataset-build", "Synthesize tagger training examples");
  ds->add_option("--contexts", ds_contexts, "sentence<TAB>start<TAB>end<TAB>phrase per line")->required();
  ds->add_option("--vocab-pool", ds_pool, "Candidate pool, one phrase per line")->required();
  ds->add_option("--mappings", ds_mappings, "Mapping TSV for corruption and the pool index")->required();
  ds->add_option("--n", ds_n, "Number of examples")->required();
  ds->add_option("--clean-fraction", ds_clean, "Fraction of clean examples (dataset.clean_fraction)");
  ds->add_option("--seed", ds_seed, "Random seed (seed)");
  ds->add_option("--intensity", ds_intensity, "Corruption intensity (corrupt.intensity)");
  ds->add_option("--out", ds_out, "Dataset TSV (default: stdout)");
  add_common(ds);

  // eval
  std::string ev_ref, ev_baseline, ev_corrected, ev_vocab, ev_index, ev_report;
  auto* ev = app.add_subcommand("eval", "WER, ideal WER, recall and precision of a correction run");
  ev->add_option("--ref", ev_ref, "Reference transcript")->required();
  ev->add_option("--baseline", ev_baseline, "Uncorrected ASR transcript")->required();
  ev->add_option("--corrected", ev_corrected, "Corrected transcript")->required();
  ev->add_option("--vocab", ev_vocab, "User vocabulary")->required();
  ev->add_option("--index", ev_index, "Index file; enables top-k retrieval recall");
  ev->add_option("--report", ev_report, "Report TSV (default: stdout)");
  add_common(ev);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    RunConfig cfg = make_config(common);
    if (mx->parsed()) {
      override_with(mx_rounds, cfg.mapping_rounds);
      override_with(mx_max_len, cfg.mapping_max_len);
      override_with(mx_min_prob, cfg.mapping_min_prob);
    } else if (rt->parsed()) {
      override_with(rt_top_k, cfg.pipeline.retrieval.top_k);
    } else if (co->parsed()) {
      override_with(co_seed, cfg.seed);
      override_with(co_intensity, cfg.corrupt_intensity);
    } else if (ds->parsed()) {
      override_with(ds_clean, cfg.dataset.clean_fraction);
      override_with(ds_seed, cfg.seed);
      override_with(ds_intensity, cfg.corrupt_intensity);
    }
    cfg.validate();

    if (mx->parsed()) {
      require_file(mx_corpus);
      const auto corpus = load_corpus(mx_corpus);
      if (corpus.empty()) throw InvalidInput("corpus " + mx_corpus + " has no pairs");
      const auto costs = estimate_costs(corpus, cfg.mapping_rounds);
      const auto mappings =
          extract_mappings(align_corpus(corpus, costs), cfg.mapping_max_len, cfg.mapping_min_prob);
      std::ostringstream m;
      write_mappings(m, mappings);
      std::ostringstream c;
      costs.write(c);
      emit(mx_out, m.str());
      emit(mx_costs_out.empty() ? mx_out + ".costs" : mx_costs_out, c.str());
    } else if (ib->parsed()) {
      require_file(ib_vocab);
      require_file(ib_mappings);
      const auto vocab = UserVocabulary::load(ib_vocab);
      const auto mappings = load_mappings(ib_mappings);
      std::ostringstream out;
      build_index(vocab, mappings, cfg.index).write(out);
      emit(ib_out, out.str());
    } else if (rt->parsed()) {
      require_file(rt_index);
      require_file(rt_input);
      const auto index = PhraseNgramIndex::load(rt_index);
      const auto utterances = load_utterances(rt_input);
      const auto& p = cfg.pipeline;
      std::vector<std::string> chunks(utterances.size());
      parallel_for(utterances.size(), common.jobs, [&](std::size_t i) {
        std::ostringstream out;
        const auto& u = utterances[i];
        for (const auto& f : split_transcript(u.words, u.id, p.min_words, p.max_words, p.overlap)) {
          const auto set = rt_method == "levenshtein"
                               ? levenshtein_retrieve(f, index.vocabulary(), p.retrieval.top_k)
                               : retrieve(f, index, p.retrieval);
          write_candidates(out, u.id + ":" + std::to_string(f.word_start) + "-" + std::to_string(f.word_end), set);
        }
        chunks[i] = out.str();
      });
      std::string all = "fragment_id\trank\tphrase\thit_count\tcoverage\twindow\n";
      for (const auto& c : chunks) all += c;
      emit(rt_out, all);
    } else if (cr->parsed()) {
      const std::string costs_path = cr_costs.empty() ? cr_mappings + ".costs" : cr_costs;
      require_file(cr_index);
      require_file(cr_mappings);
      require_file(costs_path);
      require_file(cr_input);
      const auto index = PhraseNgramIndex::load(cr_index);
      const auto costs = EditCostTable::load(costs_path);
      if (!costs.identity_is_cheapest()) {
        throw ConfigError("cost table " + costs_path + " has a substitution cheaper than identity");
      }
      const Corrector corrector(index, costs.relative_to_identity(), cfg.pipeline);
      const auto utterances = load_utterances(cr_input);
      std::vector<Utterance> corrected(utterances.size());
      std::vector<std::string> traces(utterances.size());
      parallel_for(utterances.size(), common.jobs, [&](std::size_t i) {
        auto result = corrector.correct(utterances[i].id, utterances[i].words);
        corrected[i] = {utterances[i].id, std::move(result.words)};
        traces[i] = format_trace(result.trace);
      });
      std::ostringstream out;
      write_utterances(out, corrected);
      emit(cr_out, out.str());
      if (!cr_trace.empty()) {
        std::string all = "utterance_id\tword_begin\tword_end\toriginal\treplacement\tslot\tnormalized_cost\tstatus\n";
        for (const auto& t : traces) all += t;
        emit(cr_trace, all);
      }
    } else if (co->parsed()) {
      require_file(co_phrases);
      require_file(co_mappings);
      const auto phrases = load_phrase_lines(co_phrases);
      const auto mappings = load_mappings(co_mappings);
      const CorruptionModel model(mappings, cfg.corrupt_intensity, cfg.seed);
      std::ostringstream out;
      write_corpus(out, corrupt_corpus(phrases, model, common.jobs));
      emit(co_out, out.str());
    } else if (ds->parsed()) {
      require_file(ds_contexts);
      require_file(ds_pool);
      require_file(ds_mappings);
      if (ds_n <= 0) throw ConfigError("--n must be positive");
      const auto contexts = load_contexts(ds_contexts);
      const auto pool = UserVocabulary::load(ds_pool);
      const auto mappings = load_mappings(ds_mappings);
      const auto index = build_index(pool, mappings, cfg.index);
      const CorruptionModel model(mappings, cfg.corrupt_intensity, cfg.seed);
      const auto examples = build_dataset(contexts, pool, model, index, ds_n, cfg.dataset, cfg.seed, common.jobs);
      std::ostringstream out;
      write_dataset(out, examples);
      emit(ds_out, out.str());
    } else if (ev->parsed()) {
      for (const auto* path : {&ev_ref, &ev_baseline, &ev_corrected, &ev_vocab}) require_file(*path);
      const auto ref = load_utterances(ev_ref);
      const auto baseline = load_utterances(ev_baseline);
      const auto corrected = load_utterances(ev_corrected);
      const auto vocab = UserVocabulary::load(ev_vocab);
      auto by_id = [](const std::vector<Utterance>& us) {
        std::unordered_map<std::string, const Utterance*> m;
        for (const auto& u : us) m.emplace(u.id, &u);
        return m;
      };
      const auto baseline_by_id = by_id(baseline);
      const auto corrected_by_id = by_id(corrected);
      std::vector<UtteranceTriple> triples;
      for (const auto& r : ref) {
        const auto b = baseline_by_id.find(r.id);
        const auto c = corrected_by_id.find(r.id);
        if (b == baseline_by_id.end()) throw ParseError("utterance '" + r.id + "' missing from " + ev_baseline, 0);
        if (c == corrected_by_id.end()) throw ParseError("utterance '" + r.id + "' missing from " + ev_corrected, 0);
        triples.push_back({r.id, r.words, b->second->words, c->second->words});
      }
      std::optional<double> top10;
      if (!ev_index.empty()) {
        require_file(ev_index);
        const auto index = PhraseNgramIndex::load(ev_index);
        const PhraseMatcher matcher(vocab);
        std::vector<RetrievalEvent> events;
        for (const auto& t : triples) {
          auto e = retrieval_events(t.reference, t.baseline, matcher, cfg.pipeline,
                                    [&](const Fragment& f) { return retrieve(f, index, cfg.pipeline.retrieval); });
          events.insert(events.end(), e.begin(), e.end());
        }
        top10 = topk_recall(events);
      }
      std::ostringstream out;
      write_report(out, evaluate(triples, vocab, top10));
      emit(ev_report, out.str());
    }
  } catch (const ConfigError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const ParseError& e) {
    return fail(kInput, "parse", e.what());
  } catch (const InvalidInput& e) {
    return fail(kInput, "input", e.what());
  } catch (const std::exception& e) {
    return fail(kInput, "io", e.what());
  }
  return kOk;
}
