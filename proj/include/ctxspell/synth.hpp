#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctxspell/corpus.hpp"
#include "ctxspell/edit_costs.hpp"
#include "ctxspell/ngram_mappings.hpp"
#include "ctxspell/rng.hpp"
#include "ctxspell/vocab_index.hpp"

namespace ctxspell::synth {

/// A hand-written phonetic confusion channel (c->k, ph->f, ei->ai, ...),
/// expressed as mappings so it can drive a CorruptionModel.
std::vector<NgramMapping> seed_channel();

/// Pronounceable pseudo-word, 4 to 10 letters.
std::string pseudo_word(Rng& rng);
/// One to three pseudo-words.
Phrase pseudo_phrase(Rng& rng);
/// `n` distinct pseudo-phrases.
std::vector<Phrase> pseudo_phrases(std::size_t n, Rng& rng);

struct BenchmarkConfig {
  std::uint64_t seed = 42;
  int training_pairs = 5000;
  int vocab_size = 500;
  int utterances = 1000;
  int carrier_min_words = 8;
  int carrier_max_words = 12;
  int carrier_pool = 2000;       ///< carrier words come from the most frequent words
  double carrier_noise = 0.05;   ///< per-word chance of an unrelated ASR error
  double intensity = 1.0;
};

struct PlantedUtterance {
  std::string id;
  std::vector<std::string> reference;
  std::vector<std::string> baseline;  ///< simulated ASR output
  PhraseId phrase_id = 0;
  int word_begin = 0;  ///< planted phrase position in `baseline`
  int word_end = 0;
  Phrase corrupted;    ///< what the phrase turned into
};

/// Everything the retrieval and end-to-end benchmarks need: a training
/// corpus corrupted by the seed channel, costs and mappings learned from it,
/// a pseudo-word vocabulary with its index, and utterances carrying one
/// corrupted vocabulary phrase each, corrupted by the learned model.
struct Benchmark {
  BenchmarkConfig config;
  std::vector<ParallelPair> training;
  EditCostTable costs;
  std::vector<NgramMapping> mappings;
  UserVocabulary vocab;
  PhraseNgramIndex index;
  std::vector<PlantedUtterance> utterances;
};

Benchmark make_benchmark(const BenchmarkConfig& config = {});

}  // namespace ctxspell::synth
